import { writeFileSync } from 'node:fs';

import { ExportJobError } from './errors.js';

/** 17 significant digits: enough to reproduce any float64 exactly. */
export function formatFloat(value: number): string {
  if (!Number.isFinite(value)) {
    throw new ExportJobError(`cannot write non-finite value ${value}`);
  }
  return value.toExponential(16);
}

/**
 * Write the embedding table format: a `#dim <D>` header, an optional
 * comment line, then one `<id>\t<f1> <f2> ...` row per entry. The file is
 * assembled in memory and written once.
 */
export function writeEmbeddingFile(
  path: string,
  dim: number,
  rows: Array<[string, number[]]>,
  comment?: string,
): void {
  if (!Number.isInteger(dim) || dim < 1) {
    throw new ExportJobError(`dim must be a positive integer, got ${dim}`);
  }
  const lines: string[] = [`#dim ${dim}`];
  if (comment !== undefined) {
    lines.push(`# ${comment}`);
  }
  for (const [id, values] of rows) {
    if (values.length !== dim) {
      throw new ExportJobError(
        `row '${id}' has ${values.length} values, expected ${dim}`,
      );
    }
    lines.push(`${id}\t${values.map(formatFloat).join(' ')}`);
  }
  writeFileSync(path, lines.join('\n') + '\n', 'utf-8');
}
