/**
 * Minimal deterministic SVG scene builder: fixed fonts, fixed precision,
 * no timestamps or generated ids, so identical input always yields an
 * identical byte stream.
 */

export type Scale = "linear" | "log";

export interface PanelSpec {
    title: string;
    xLabel: string;
    yLabel: string;
    xScale?: Scale;
    yScale?: Scale;
    xRange?: [number, number];
    yRange?: [number, number];
    refLineY?: number;          // horizontal reference (e.g. g2 = 1)
    lines: LineSpec[];
}

export interface LineSpec {
    x: number[];
    y: number[];
    color: string;
    dashed?: boolean;
    width?: number;
}

const PANEL_W = 300;
const PANEL_H = 220;
const MARGIN = { left: 62, right: 14, top: 30, bottom: 44 };
const FONT = "10px sans-serif";

function finite(values: number[], scale: Scale): number[] {
    return values.filter(v => Number.isFinite(v) && (scale !== "log" || v > 0));
}

function dataRange(lines: LineSpec[], axis: "x" | "y", scale: Scale): [number, number] {
    let lo = Infinity;
    let hi = -Infinity;
    for (const line of lines) {
        for (const v of finite(line[axis], scale)) {
            if (v < lo) lo = v;
            if (v > hi) hi = v;
        }
    }
    if (!(lo < hi)) {
        const pad = Math.abs(lo) > 0 ? Math.abs(lo) * 0.5 : 1;
        return [lo - pad, hi + pad];
    }
    if (scale === "log") return [lo / 1.3, hi * 1.3];
    const pad = (hi - lo) * 0.05;
    return [lo - pad, hi + pad];
}

function makeMapper(range: [number, number], scale: Scale, pixLo: number, pixHi: number) {
    const [lo, hi] = scale === "log" ? [Math.log10(range[0]), Math.log10(range[1])] : range;
    return (v: number) => {
        const t = scale === "log" ? Math.log10(v) : v;
        return pixLo + ((t - lo) / (hi - lo)) * (pixHi - pixLo);
    };
}

function ticks(range: [number, number], scale: Scale, count = 5): number[] {
    if (scale === "log") {
        const lo = Math.ceil(Math.log10(range[0]));
        const hi = Math.floor(Math.log10(range[1]));
        const out: number[] = [];
        for (let e = lo; e <= hi; e++) out.push(10 ** e);
        if (out.length >= 2) return out;
        return [range[0], range[1]];
    }
    const span = range[1] - range[0];
    const step = 10 ** Math.floor(Math.log10(span / count));
    const mult = [5, 2, 1].find(m => span / (m * step) >= count - 1) ?? 1;
    const inc = mult * step;
    const first = Math.ceil(range[0] / inc) * inc;
    const out: number[] = [];
    for (let v = first; v <= range[1] + inc * 1e-9; v += inc) out.push(v);
    return out;
}

function fmtTick(v: number): string {
    if (v === 0) return "0";
    const a = Math.abs(v);
    if (a >= 1e4 || a < 1e-3) return v.toExponential(0).replace("+", "");
    return String(Number(v.toPrecision(6)));
}

const fmt = (v: number) => v.toFixed(2);

function esc(text: string): string {
    return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function renderPanel(panel: PanelSpec, x0: number, y0: number): string {
    const xScale = panel.xScale ?? "linear";
    const yScale = panel.yScale ?? "linear";
    const xRange = panel.xRange ?? dataRange(panel.lines, "x", xScale);
    const yRange = panel.yRange ?? dataRange(panel.lines, "y", yScale);
    const plotX0 = x0 + MARGIN.left;
    const plotX1 = x0 + PANEL_W - MARGIN.right;
    const plotY0 = y0 + MARGIN.top;
    const plotY1 = y0 + PANEL_H - MARGIN.bottom;
    const mapX = makeMapper(xRange, xScale, plotX0, plotX1);
    const mapY = makeMapper(yRange, yScale, plotY1, plotY0);

    const parts: string[] = [];
    parts.push(`<rect x="${fmt(plotX0)}" y="${fmt(plotY0)}" width="${fmt(plotX1 - plotX0)}" height="${fmt(plotY1 - plotY0)}" fill="none" stroke="black" stroke-width="1"/>`);
    parts.push(`<text x="${fmt((plotX0 + plotX1) / 2)}" y="${fmt(y0 + 16)}" font="${FONT}" font-size="11" text-anchor="middle">${esc(panel.title)}</text>`);
    for (const t of ticks(xRange, xScale)) {
        const px = mapX(t);
        if (px < plotX0 - 0.5 || px > plotX1 + 0.5) continue;
        parts.push(`<line x1="${fmt(px)}" y1="${fmt(plotY1)}" x2="${fmt(px)}" y2="${fmt(plotY1 + 4)}" stroke="black" stroke-width="1"/>`);
        parts.push(`<text x="${fmt(px)}" y="${fmt(plotY1 + 15)}" font="${FONT}" font-size="9" text-anchor="middle">${esc(fmtTick(t))}</text>`);
    }
    for (const t of ticks(yRange, yScale)) {
        const py = mapY(t);
        if (py < plotY0 - 0.5 || py > plotY1 + 0.5) continue;
        parts.push(`<line x1="${fmt(plotX0 - 4)}" y1="${fmt(py)}" x2="${fmt(plotX0)}" y2="${fmt(py)}" stroke="black" stroke-width="1"/>`);
        parts.push(`<text x="${fmt(plotX0 - 6)}" y="${fmt(py + 3)}" font="${FONT}" font-size="9" text-anchor="end">${esc(fmtTick(t))}</text>`);
    }
    parts.push(`<text x="${fmt((plotX0 + plotX1) / 2)}" y="${fmt(plotY1 + 32)}" font="${FONT}" font-size="10" text-anchor="middle">${esc(panel.xLabel)}</text>`);
    parts.push(`<text x="${fmt(x0 + 14)}" y="${fmt((plotY0 + plotY1) / 2)}" font="${FONT}" font-size="10" text-anchor="middle" transform="rotate(-90 ${fmt(x0 + 14)} ${fmt((plotY0 + plotY1) / 2)})">${esc(panel.yLabel)}</text>`);

    if (panel.refLineY !== undefined) {
        const inRange = yScale === "log"
            ? panel.refLineY > 0 && panel.refLineY >= yRange[0] && panel.refLineY <= yRange[1]
            : panel.refLineY >= yRange[0] && panel.refLineY <= yRange[1];
        if (inRange) {
            const py = mapY(panel.refLineY);
            parts.push(`<line class="ref-line" x1="${fmt(plotX0)}" y1="${fmt(py)}" x2="${fmt(plotX1)}" y2="${fmt(py)}" stroke="green" stroke-width="1"/>`);
        }
    }

    for (const line of panel.lines) {
        const dash = line.dashed ? ` stroke-dasharray="5,3"` : "";
        const width = line.width ?? 1.5;
        let segment: string[] = [];
        const flush = () => {
            if (segment.length >= 2) {
                parts.push(`<polyline points="${segment.join(" ")}" fill="none" stroke="${line.color}" stroke-width="${width}"${dash}/>`);
            }
            segment = [];
        };
        for (let i = 0; i < line.x.length; i++) {
            const xv = line.x[i];
            const yv = line.y[i];
            const usable = Number.isFinite(xv) && Number.isFinite(yv)
                && (xScale !== "log" || xv > 0) && (yScale !== "log" || yv > 0);
            if (!usable) {
                flush();
                continue;
            }
            segment.push(`${fmt(mapX(xv))},${fmt(mapY(yv))}`);
        }
        flush();
    }
    return parts.join("\n");
}

/** Arrange panels in a fixed grid (row-major) and emit the full document. */
export function renderSvg(panels: PanelSpec[], columns: number): string {
    const rows = Math.ceil(panels.length / columns);
    const width = columns * PANEL_W;
    const height = rows * PANEL_H;
    const body = panels.map((panel, i) => {
        const x0 = (i % columns) * PANEL_W;
        const y0 = Math.floor(i / columns) * PANEL_H;
        return renderPanel(panel, x0, y0);
    }).join("\n");
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">\n` +
        `<rect width="${width}" height="${height}" fill="white"/>\n${body}\n</svg>\n`;
}
