export { DataFormatError, ExportJobError } from './errors.js';
export {
  DEFAULT_BATCH_SIZE,
  DEFAULT_MODEL,
  DEFAULT_POOLING,
  makeJob,
} from './types.js';
export type { ExportJob, Pooling, QueryRecord } from './types.js';
export { readQueryRecords } from './dataset.js';
export {
  TokenHashEncoder,
  encodeBatch,
  expandSeed,
  fnv1a64,
  loadEncoder,
  tokenize,
} from './encoder.js';
export { formatFloat, writeEmbeddingFile } from './writer.js';
export { runExport } from './export.js';
export type { ExportResult } from './export.js';
