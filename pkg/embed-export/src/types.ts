import { ExportJobError } from './errors.js';

export type Pooling = 'cls' | 'mean';

export const DEFAULT_MODEL = 'token-hash-64';
export const DEFAULT_POOLING: Pooling = 'mean';
export const DEFAULT_BATCH_SIZE = 32;

/** One batch-encoding run: which file, which encoder, how to pool, where to write. */
export interface ExportJob {
  inputPath: string;
  outputPath: string;
  modelName: string;
  pooling: Pooling;
  batchSize: number;
}

/** The slice of a dataset record this tool cares about. */
export interface QueryRecord {
  id: string;
  text: string;
}

export function makeJob(spec: {
  inputPath: string;
  outputPath: string;
  modelName?: string;
  pooling?: string;
  batchSize?: number;
}): ExportJob {
  const pooling = spec.pooling ?? DEFAULT_POOLING;
  if (pooling !== 'cls' && pooling !== 'mean') {
    throw new ExportJobError(`pooling must be 'cls' or 'mean', got '${pooling}'`);
  }
  const batchSize = spec.batchSize ?? DEFAULT_BATCH_SIZE;
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    throw new ExportJobError(`batch size must be a positive integer, got ${batchSize}`);
  }
  if (!spec.inputPath) {
    throw new ExportJobError('input path must not be empty');
  }
  if (!spec.outputPath) {
    throw new ExportJobError('output path must not be empty');
  }
  return {
    inputPath: spec.inputPath,
    outputPath: spec.outputPath,
    modelName: spec.modelName ?? DEFAULT_MODEL,
    pooling,
    batchSize,
  };
}
