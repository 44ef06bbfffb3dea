import { readFileSync } from 'node:fs';

import { DataFormatError } from './errors.js';
import type { QueryRecord } from './types.js';

const KNOWN_KINDS = new Set(['query', 'outcome']);

/**
 * Extract the query records from a dataset JSON Lines file, in file order.
 *
 * Outcome rows are skipped; any other record kind is treated as corruption.
 * Blank lines are allowed. Duplicate query ids are rejected because the
 * output table keys rows by id.
 */
export function readQueryRecords(path: string): QueryRecord[] {
  let raw: string;
  try {
    raw = readFileSync(path, 'utf-8');
  } catch {
    throw new DataFormatError(`${path}: cannot read file`);
  }
  const records: QueryRecord[] = [];
  const seen = new Set<string>();
  const lines = raw.split('\n');
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (line === '') {
      continue;
    }
    const where = `${path}: line ${i + 1}`;
    let parsed: unknown;
    try {
      parsed = JSON.parse(line);
    } catch {
      throw new DataFormatError(`${where}: invalid JSON`);
    }
    if (typeof parsed !== 'object' || parsed === null || Array.isArray(parsed)) {
      throw new DataFormatError(`${where}: expected a JSON object`);
    }
    const record = parsed as Record<string, unknown>;
    const kind = record['kind'];
    if (typeof kind !== 'string' || !KNOWN_KINDS.has(kind)) {
      throw new DataFormatError(`${where}: unknown record kind ${JSON.stringify(kind)}`);
    }
    if (kind !== 'query') {
      continue;
    }
    const id = record['id'];
    const text = record['text'];
    if (typeof id !== 'string' || id === '') {
      throw new DataFormatError(`${where}: query record needs a non-empty string 'id'`);
    }
    if (typeof text !== 'string') {
      throw new DataFormatError(`${where}: query record needs a string 'text'`);
    }
    if (seen.has(id)) {
      throw new DataFormatError(`${where}: duplicate query id '${id}'`);
    }
    seen.add(id);
    records.push({ id, text });
  }
  return records;
}
