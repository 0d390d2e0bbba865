import { createHash } from "node:crypto";
import { mkdirSync, writeFileSync } from "node:fs";
import { dirname } from "node:path";

import { Table, levelColumns, numericColumn, readTable } from "./csv.js";
import { LineSpec, PanelSpec, renderSvg } from "./svg.js";

export type FigureId = "fig2" | "fig3" | "fig4" | "fig5" | "fig6a" | "fig6b";

export interface FigureRecipe {
    figureId: FigureId;
    /** CSV paths; meaning per figure, see INPUT_COUNTS and the README. */
    inputs: string[];
    /** Output SVG path. */
    output: string;
    xRange?: [number, number];
    yRange?: [number, number];
}

/** One logical plotted array pair; checksums are taken over these. */
export interface Series {
    label: string;
    x: number[];
    y: number[];
}

export interface FigureScene {
    panels: PanelSpec[];
    columns: number;
    series: Series[];
}

export interface RenderResult {
    svg: string;
    series: Series[];
}

export const INPUT_COUNTS: Record<FigureId, string> = {
    fig2: "exactly 2 (one-photon scan, two-photon scan)",
    fig3: "an even count >= 2, pairs of (two-photon, one-photon) per drive intensity",
    fig4: "exactly 2 (one-photon scan, two-photon scan)",
    fig5: "exactly 2 (one-photon scan, two-photon scan)",
    fig6a: "exactly 2 (bare scan, inter-spin scan)",
    fig6b: "exactly 2 (bare scan, quartic scan)",
};

const TWO_PHOTON_COLOR = "#d62728";      // solid red
const ONE_PHOTON_COLOR = "#1f77b4";      // dashed blue
const OVERLAY_COLOR = "#e6a817";         // dashed yellow-orange
const LIGHT = { red: "#ef9a9a", yellow: "#f2d389" };
const DARK = { red: "#8c1515", yellow: "#a8720a" };

export function seriesChecksum(series: Pick<Series, "x" | "y">): string {
    return createHash("sha256")
        .update(JSON.stringify([series.x, series.y]))
        .digest("hex");
}

export function columnChecksum(x: number[], y: number[]): string {
    return seriesChecksum({ x, y });
}

/** Split a level line into constant-parity runs, lighter for parity >= 0. */
function parityRuns(x: number[], y: number[], parity: number[],
                    palette: { light: string; dark: string },
                    dashed: boolean): LineSpec[] {
    const runs: LineSpec[] = [];
    let start = 0;
    const signOf = (p: number) => (p >= 0 ? 1 : -1);
    for (let i = 1; i <= x.length; i++) {
        if (i === x.length || signOf(parity[i]) !== signOf(parity[start])) {
            const end = Math.min(i + 1, x.length);  // share the boundary point
            runs.push({
                x: x.slice(start, end),
                y: y.slice(start, end),
                color: signOf(parity[start]) > 0 ? palette.light : palette.dark,
                dashed,
            });
            start = i;
        }
    }
    return runs;
}

function spectrumPanel(table: Table, title: string, dashed: boolean,
                       palette: { light: string; dark: string },
                       series: Series[], into?: PanelSpec): PanelSpec {
    const xName = table.columns[0];
    const x = numericColumn(table, xName);
    const { levels, parities } = levelColumns(table);
    const panel: PanelSpec = into ?? {
        title,
        xLabel: `coupling ${xName} (units of omega_c)`,
        yLabel: "energy (units of omega_c)",
        lines: [],
    };
    levels.forEach((name, i) => {
        const y = numericColumn(table, name);
        const parity = numericColumn(table, parities[i]);
        panel.lines.push(...parityRuns(x, y, parity, palette, dashed));
        series.push({ label: `${table.path}:${name}`, x, y });
    });
    return panel;
}

function transmissionLines(table: Table, column: string, color: string,
                           dashed: boolean, series: Series[]): LineSpec {
    const x = numericColumn(table, "omega_d");
    const y = numericColumn(table, column);
    series.push({ label: `${table.path}:${column}`, x, y });
    return { x, y, color, dashed };
}

function intensityLines(table: Table, column: string, color: string,
                        dashed: boolean, series: Series[]): LineSpec {
    const x = numericColumn(table, "D");
    const y = numericColumn(table, column);
    series.push({ label: `${table.path}:${column}`, x, y });
    return { x, y, color, dashed };
}

export function buildFigure(recipe: FigureRecipe, tables: Table[]): FigureScene {
    const series: Series[] = [];
    const panels: PanelSpec[] = [];
    let columns = 2;

    switch (recipe.figureId) {
        case "fig2": {
            const [onePhoton, twoPhoton] = tables;
            panels.push(spectrumPanel(onePhoton, "one-photon model", false,
                                      { light: LIGHT.red, dark: DARK.red }, series));
            panels.push(spectrumPanel(twoPhoton, "two-photon model", false,
                                      { light: LIGHT.red, dark: DARK.red }, series));
            break;
        }
        case "fig3": {
            for (let row = 0; row < tables.length / 2; row++) {
                const twoPhoton = tables[2 * row];
                const onePhoton = tables[2 * row + 1];
                panels.push({
                    title: `transmission (pair ${row + 1})`,
                    xLabel: "drive frequency omega_d (units of omega_c)",
                    yLabel: "T",
                    lines: [
                        transmissionLines(twoPhoton, "T", TWO_PHOTON_COLOR, false, series),
                        transmissionLines(onePhoton, "T", ONE_PHOTON_COLOR, true, series),
                    ],
                });
                panels.push({
                    title: `photon correlations (pair ${row + 1})`,
                    xLabel: "drive frequency omega_d (units of omega_c)",
                    yLabel: "g2(0)",
                    yScale: "log",
                    refLineY: 1,
                    lines: [
                        transmissionLines(twoPhoton, "g2", TWO_PHOTON_COLOR, false, series),
                        transmissionLines(onePhoton, "g2", ONE_PHOTON_COLOR, true, series),
                    ],
                });
            }
            break;
        }
        case "fig4": {
            const [onePhoton, twoPhoton] = tables;
            panels.push({
                title: "one-photon model", xLabel: "omega_d", yLabel: "T",
                lines: [transmissionLines(onePhoton, "T", ONE_PHOTON_COLOR, false, series)],
            });
            panels.push({
                title: "two-photon model", xLabel: "omega_d", yLabel: "T",
                lines: [transmissionLines(twoPhoton, "T", TWO_PHOTON_COLOR, false, series)],
            });
            panels.push({
                title: "one-photon model", xLabel: "omega_d", yLabel: "g2(0)",
                yScale: "log", refLineY: 1,
                lines: [transmissionLines(onePhoton, "g2", ONE_PHOTON_COLOR, false, series)],
            });
            panels.push({
                title: "two-photon model", xLabel: "omega_d", yLabel: "g2(0)",
                yScale: "log", refLineY: 1,
                lines: [transmissionLines(twoPhoton, "g2", TWO_PHOTON_COLOR, false, series)],
            });
            break;
        }
        case "fig5": {
            const [onePhoton, twoPhoton] = tables;
            for (const [table, title] of [[onePhoton, "one-photon model"],
                                          [twoPhoton, "two-photon model"]] as const) {
                panels.push({
                    title,
                    xLabel: "drive intensity D",
                    yLabel: "correlation",
                    xScale: "log",
                    yScale: "log",
                    refLineY: 1,
                    lines: [
                        intensityLines(table, "g2", TWO_PHOTON_COLOR, false, series),
                        intensityLines(table, "g3", ONE_PHOTON_COLOR, true, series),
                    ],
                });
            }
            break;
        }
        case "fig6a":
        case "fig6b": {
            const [bare, modified] = tables;
            const overlayTitle = recipe.figureId === "fig6a"
                ? "bare (solid) vs inter-spin coupling (dashed)"
                : "bare (solid) vs quartic term (dashed)";
            const panel = spectrumPanel(bare, overlayTitle, false,
                                        { light: LIGHT.red, dark: DARK.red }, series);
            spectrumPanel(modified, overlayTitle, true,
                          { light: LIGHT.yellow, dark: DARK.yellow }, series, panel);
            panels.push(panel);
            columns = 1;
            break;
        }
    }

    if (recipe.xRange) panels.forEach(p => { p.xRange = recipe.xRange; });
    if (recipe.yRange) panels.forEach(p => { p.yRange = recipe.yRange; });
    return { panels, columns, series };
}

function expectedInputs(figureId: FigureId, count: number): void {
    const even = count >= 2 && count % 2 === 0;
    const ok = figureId === "fig3" ? even : count === 2;
    if (!ok) {
        throw new Error(`${figureId} needs ${INPUT_COUNTS[figureId]}, got ${count}`);
    }
}

/** Read the recipe's CSVs, build the scene, write the SVG atomically-late. */
export function render(recipe: FigureRecipe): RenderResult {
    expectedInputs(recipe.figureId, recipe.inputs.length);
    const tables = recipe.inputs.map(readTable);   // throws before writing anything
    const scene = buildFigure(recipe, tables);
    const svg = renderSvg(scene.panels, scene.columns);
    mkdirSync(dirname(recipe.output), { recursive: true });
    writeFileSync(recipe.output, svg);
    return { svg, series: scene.series };
}
