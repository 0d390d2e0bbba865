#!/usr/bin/env node
import { readFileSync, realpathSync } from "node:fs";
import { createHash } from "node:crypto";
import { pathToFileURL } from "node:url";

import { FigureId, FigureRecipe, INPUT_COUNTS, render, seriesChecksum } from "./figures.js";

const FIGURE_IDS: FigureId[] = ["fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b"];

export function parseRecipe(text: string, path = "<recipe>"): FigureRecipe {
    let raw: unknown;
    try {
        raw = JSON.parse(text);
    } catch (err) {
        throw new Error(`${path}: not valid JSON (${(err as Error).message})`);
    }
    if (typeof raw !== "object" || raw === null || Array.isArray(raw)) {
        throw new Error(`${path}: recipe must be a JSON object`);
    }
    const obj = raw as Record<string, unknown>;
    const known = new Set(["figure_id", "inputs", "output", "x_range", "y_range"]);
    for (const key of Object.keys(obj)) {
        if (!known.has(key)) throw new Error(`${path}: unknown key '${key}'`);
    }
    const figureId = obj.figure_id;
    if (typeof figureId !== "string" || !FIGURE_IDS.includes(figureId as FigureId)) {
        throw new Error(`${path}: figure_id must be one of ${FIGURE_IDS.join(", ")}`);
    }
    const inputs = obj.inputs;
    if (!Array.isArray(inputs) || inputs.length === 0 || !inputs.every(v => typeof v === "string")) {
        throw new Error(`${path}: inputs must be a non-empty array of CSV paths `
            + `(${figureId} needs ${INPUT_COUNTS[figureId as FigureId]})`);
    }
    if (typeof obj.output !== "string" || obj.output.length === 0) {
        throw new Error(`${path}: output must be the target SVG path`);
    }
    const range = (value: unknown, name: string): [number, number] | undefined => {
        if (value === undefined) return undefined;
        if (!Array.isArray(value) || value.length !== 2
            || !value.every(v => typeof v === "number" && Number.isFinite(v))
            || value[0] >= value[1]) {
            throw new Error(`${path}: ${name} must be [low, high] with low < high`);
        }
        return [value[0], value[1]];
    };
    return {
        figureId: figureId as FigureId,
        inputs: inputs as string[],
        output: obj.output,
        xRange: range(obj.x_range, "x_range"),
        yRange: range(obj.y_range, "y_range"),
    };
}

export function main(argv: string[]): number {
    if (argv.length !== 2 || argv[0] !== "--recipe") {
        process.stderr.write("usage: render-figure --recipe <recipe.json>\n");
        return 2;
    }
    let recipe: FigureRecipe;
    try {
        recipe = parseRecipe(readFileSync(argv[1], "utf8"), argv[1]);
    } catch (err) {
        process.stderr.write(`${(err as Error).message}\n`);
        return 2;
    }
    try {
        const result = render(recipe);
        const summary = {
            output: recipe.output,
            svg_sha256: createHash("sha256").update(result.svg).digest("hex"),
            series: result.series.map(s => ({ label: s.label, sha256: seriesChecksum(s) })),
        };
        process.stdout.write(JSON.stringify(summary, null, 1) + "\n");
        return 0;
    } catch (err) {
        process.stderr.write(`${(err as Error).message}\n`);
        return 1;
    }
}

function invokedDirectly(): boolean {
    const script = process.argv[1];
    if (!script) return false;
    try {
        return import.meta.url === pathToFileURL(realpathSync(script)).href;
    } catch {
        return false;
    }
}

if (invokedDirectly()) {
    process.exit(main(process.argv.slice(2)));
}
