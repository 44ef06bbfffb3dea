import { readQueryRecords } from './dataset.js';
import { encodeBatch, loadEncoder } from './encoder.js';
import type { ExportJob } from './types.js';
import { writeEmbeddingFile } from './writer.js';

export interface ExportResult {
  queries: number;
  dim: number;
  outputPath: string;
}

/**
 * Run one export job: read the dataset's query records, encode them in
 * order-preserving batches, and write the embedding table with the model
 * and pooling recorded in the header comment.
 */
export function runExport(job: ExportJob): ExportResult {
  // resolve the model first so a bad name fails before any file I/O
  const encoder = loadEncoder(job.modelName);
  const records = readQueryRecords(job.inputPath);
  const rows: Array<[string, number[]]> = [];
  for (let start = 0; start < records.length; start += job.batchSize) {
    const batch = records.slice(start, start + job.batchSize);
    const vectors = encodeBatch(
      encoder,
      batch.map((record) => record.text),
      job.pooling,
    );
    batch.forEach((record, i) => rows.push([record.id, vectors[i]]));
  }
  writeEmbeddingFile(
    job.outputPath,
    encoder.dim,
    rows,
    `model ${job.modelName} pooling ${job.pooling}`,
  );
  return { queries: rows.length, dim: encoder.dim, outputPath: job.outputPath };
}
