import * as fs from "node:fs";
import * as path from "node:path";

import { contextWindow } from "./window.js";
import type {
  Encoder,
  EmbeddingRecord,
  ExtractorConfig,
  Manifest,
  PreparedInstance,
} from "./types.js";

export class TokenAlignmentFailure extends Error {
  constructor(public readonly sentenceId: string) {
    super(`no subword aligned with the target token in sentence ${sentenceId}`);
  }
}

export interface ExtractStats {
  instances: number;
  records: number;
  alignmentFailures: string[];
}

export function readManifest(preparedDir: string): Manifest {
  const manifestPath = path.join(preparedDir, "manifest.json");
  return JSON.parse(fs.readFileSync(manifestPath, "utf-8")) as Manifest;
}

export function readWordFile(preparedDir: string, relative: string): PreparedInstance[] {
  const text = fs.readFileSync(path.join(preparedDir, relative), "utf-8");
  return text
    .split("\n")
    .filter((line) => line.trim().length > 0)
    .map((line) => JSON.parse(line) as PreparedInstance);
}

/** Mean of the subword vectors whose word id matches the target index. */
export function poolTarget(
  vectors: number[][],
  wordIds: number[],
  targetIndex: number,
  sentenceId: string,
): number[] {
  const rows = vectors.filter((_, i) => wordIds[i] === targetIndex);
  if (rows.length === 0) {
    throw new TokenAlignmentFailure(sentenceId);
  }
  const dim = rows[0].length;
  const mean = new Array<number>(dim).fill(0);
  for (const row of rows) {
    for (let d = 0; d < dim; d++) {
      mean[d] += row[d];
    }
  }
  return mean.map((v) => v / rows.length);
}

/** Encode every prepared instance and write the embeddings JSONL file
 * (header line {"dim": d}, then one record per instance). Instances whose
 * target aligns with no subword are logged and skipped, never fatal. */
export async function extractEmbeddings(
  preparedDir: string,
  encoder: Encoder,
  config: ExtractorConfig,
  outPath: string,
): Promise<ExtractStats> {
  const manifest = readManifest(preparedDir);
  const radius = config.radius ?? manifest.radius ?? 10;
  const instances: PreparedInstance[] = [];
  for (const word of manifest.words) {
    instances.push(...readWordFile(preparedDir, word.file));
  }

  const stats: ExtractStats = { instances: instances.length, records: 0, alignmentFailures: [] };
  const records: EmbeddingRecord[] = [];
  let dim: number | undefined;

  for (let start = 0; start < instances.length; start += config.batchSize) {
    const batch = instances.slice(start, start + config.batchSize);
    const windows = batch.map((inst) => contextWindow(inst.tokens, inst.target_index, radius));
    const encoded = await encoder.encodeBatch(windows.map((w) => w.window));
    batch.forEach((inst, i) => {
      let vector: number[];
      try {
        vector = poolTarget(encoded[i].vectors, encoded[i].wordIds, windows[i].targetIndex, inst.sentence_id);
      } catch (err) {
        if (err instanceof TokenAlignmentFailure) {
          console.warn(`skip: ${err.message}`);
          stats.alignmentFailures.push(inst.sentence_id);
          return;
        }
        throw err;
      }
      if (dim === undefined) {
        dim = vector.length;
      } else if (vector.length !== dim) {
        throw new Error(
          `encoder dimension changed from ${dim} to ${vector.length} at sentence ${inst.sentence_id}`,
        );
      }
      records.push({
        sentence_id: inst.sentence_id,
        lemma: inst.lemma,
        pos: inst.pos,
        sense_key: inst.sense_key,
        group_id: inst.group_id,
        vector,
      });
    });
  }

  if (dim === undefined) {
    throw new Error("no instance produced an embedding; cannot determine dimension");
  }
  const lines = [JSON.stringify({ dim })];
  for (const record of records) {
    lines.push(JSON.stringify(record));
  }
  fs.writeFileSync(outPath, lines.join("\n") + "\n", "utf-8");
  stats.records = records.length;
  return stats;
}
