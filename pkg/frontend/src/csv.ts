import { readFileSync } from "node:fs";

export interface Table {
    path: string;
    columns: string[];
    rows: string[][];
}

/** Parse a tprabi scan CSV: fixed header row, unquoted comma-separated fields. */
export function parseCsv(text: string, path = "<string>"): Table {
    const lines = text.split(/\r?\n/).filter(line => line.length > 0);
    if (lines.length === 0) {
        throw new Error(`${path}: empty CSV (no header row)`);
    }
    const columns = lines[0].split(",");
    const rows = lines.slice(1).map((line, i) => {
        const fields = line.split(",");
        if (fields.length !== columns.length) {
            throw new Error(`${path}: row ${i + 1} has ${fields.length} fields, header has ${columns.length}`);
        }
        return fields;
    });
    if (rows.length === 0) {
        throw new Error(`${path}: CSV has a header but no data rows`);
    }
    return { path, columns, rows };
}

export function readTable(path: string): Table {
    return parseCsv(readFileSync(path, "utf8"), path);
}

/** Numeric column by name; empty fields (undefined correlations) become NaN. */
export function numericColumn(table: Table, name: string): number[] {
    const idx = table.columns.indexOf(name);
    if (idx < 0) {
        throw new Error(`${table.path}: missing column '${name}' (have: ${table.columns.join(", ")})`);
    }
    return table.rows.map(row => {
        const field = row[idx];
        if (field === "") return NaN;
        const value = Number(field);
        if (Number.isNaN(value) && field !== "nan") {
            throw new Error(`${table.path}: column '${name}' has non-numeric field '${field}'`);
        }
        return value;
    });
}

/** Names of the level_i / parity_i column pairs present in a spectrum scan. */
export function levelColumns(table: Table): { levels: string[]; parities: string[] } {
    const levels = table.columns.filter(c => /^level_\d+$/.test(c));
    const parities = table.columns.filter(c => /^parity_\d+$/.test(c));
    if (levels.length === 0) {
        throw new Error(`${table.path}: no level_i columns found`);
    }
    if (levels.length !== parities.length) {
        throw new Error(`${table.path}: ${levels.length} level columns but ${parities.length} parity columns`);
    }
    return { levels, parities };
}
