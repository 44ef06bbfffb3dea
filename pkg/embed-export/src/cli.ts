#!/usr/bin/env node
import { parseArgs } from 'node:util';
import { pathToFileURL } from 'node:url';

import { DataFormatError, ExportJobError } from './errors.js';
import { runExport } from './export.js';
import {
  DEFAULT_BATCH_SIZE,
  DEFAULT_MODEL,
  DEFAULT_POOLING,
  makeJob,
} from './types.js';

const USAGE = `usage: embed-export --input <dataset.jsonl> --out <embeddings.txt>
                    [--model ${DEFAULT_MODEL}] [--pooling ${DEFAULT_POOLING}]
                    [--batch-size ${DEFAULT_BATCH_SIZE}]

Reads the query records of a dataset JSON Lines file and writes one
embedding row per query: '#dim <D>' header, then '<id>\\t<floats>'.
Models: token-hash-<dim> (deterministic, offline). Pooling: cls | mean.

exit codes: 0 ok, 2 bad job or arguments, 3 malformed input data`;

export function main(argv: string[]): number {
  let values: {
    input?: string;
    out?: string;
    model: string;
    pooling: string;
    'batch-size': string;
    help: boolean;
  };
  try {
    ({ values } = parseArgs({
      args: argv,
      options: {
        input: { type: 'string' },
        out: { type: 'string' },
        model: { type: 'string', default: DEFAULT_MODEL },
        pooling: { type: 'string', default: DEFAULT_POOLING },
        'batch-size': { type: 'string', default: String(DEFAULT_BATCH_SIZE) },
        help: { type: 'boolean', default: false },
      },
      allowPositionals: false,
    }));
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    console.error(USAGE);
    return 2;
  }
  if (values.help) {
    console.log(USAGE);
    return 0;
  }
  if (values.input === undefined || values.out === undefined) {
    console.error('--input and --out are required');
    console.error(USAGE);
    return 2;
  }
  const batchSize = Number(values['batch-size']);
  try {
    const job = makeJob({
      inputPath: values.input,
      outputPath: values.out,
      modelName: values.model,
      pooling: values.pooling,
      batchSize,
    });
    const result = runExport(job);
    console.log(
      `${result.outputPath}: ${result.queries} embeddings, dim ${result.dim}`,
    );
    return 0;
  } catch (err) {
    if (err instanceof ExportJobError) {
      console.error(`job error: ${err.message}`);
      return 2;
    }
    if (err instanceof DataFormatError) {
      console.error(`format error: ${err.message}`);
      return 3;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
