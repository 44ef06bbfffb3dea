import { execFileSync } from 'node:child_process';
import { mkdtempSync, writeFileSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';

import { describe, expect, test } from 'vitest';

import { main } from '../src/cli.js';

// End-to-end contract with the consumer package: a simulated dataset is
// exported here, then loaded and trained on by the router over there.

const SIMULATE_CONFIG = {
  seed: 11,
  environment: {
    synthetic: {
      classes: [
        {
          name: 'ca',
          weight: 0.5,
          arms: [
            { p_correct: 0.9, steps: 0 },
            { p_correct: 0.2, steps: 1 },
            { p_correct: 0.7, steps: [2, 5] },
          ],
        },
        {
          name: 'cb',
          weight: 0.5,
          arms: [
            { p_correct: 0.1, steps: 0 },
            { p_correct: 0.9, steps: 1 },
            { p_correct: 0.7, steps: [2, 5] },
          ],
        },
      ],
      overlap: 0.1,
    },
    n: 100,
  },
};

const CHECK_SCRIPT = `
import sys

import numpy as np

from banditroute import TrainConfig, load_dataset, preset, train
from banditroute.featurize import QueryFeaturizer, load_embeddings

emb_path, data_path = sys.argv[1], sys.argv[2]
table = load_embeddings(emb_path)
assert table.dim == 64, table.dim
assert len(table.entries) == 100, len(table.entries)
dataset = load_dataset(data_path)
assert sorted(table.entries) == sorted(q.id for q in dataset.queries)
featurizer = QueryFeaturizer(table=table, allow_fallback=False)
vec = featurizer.vector(dataset.queries[0])
assert np.array_equal(vec, table.vector(dataset.queries[0].id))
policy, history = train(
    dataset, featurizer, preset("single-hop"), TrainConfig(episodes=300, seed=5)
)
assert len(history) == 300
assert np.isfinite(policy.weights).all()
assert np.isfinite(policy.biases).all()
print(
    "ROUNDTRIP OK"
    f" dim={table.dim} entries={len(table.entries)} episodes={len(history)}"
)
`;

describe('dataset to embeddings to trained router', () => {
  test(
    'a 100-query export loads and trains downstream',
    () => {
      const dir = mkdtempSync(join(tmpdir(), 'embed-roundtrip-'));
      const configPath = join(dir, 'config.json');
      writeFileSync(configPath, JSON.stringify(SIMULATE_CONFIG), 'utf-8');

      const simOut = execFileSync(
        'python3',
        ['-m', 'banditroute', 'simulate', '--config', configPath, '--out', dir],
        { cwd: dir, encoding: 'utf-8' },
      );
      expect(simOut).toContain('dataset.jsonl: 100 queries');

      const datasetPath = join(dir, 'dataset.jsonl');
      const embPath = join(dir, 'embeddings.txt');
      const rc = main([
        '--input', datasetPath,
        '--out', embPath,
        '--model', 'token-hash-64',
        '--pooling', 'mean',
      ]);
      expect(rc).toBe(0);

      const checkOut = execFileSync(
        'python3',
        ['-c', CHECK_SCRIPT, embPath, datasetPath],
        { cwd: dir, encoding: 'utf-8' },
      );
      expect(checkOut).toContain('ROUNDTRIP OK dim=64 entries=100 episodes=300');
    },
    120_000,
  );
});
