export type LayerSelection = "last" | "sum-last-4";

export interface ExtractorConfig {
  /** Encoder identifier: "mock:dim=16,seed=1" or an http(s) endpoint. */
  model: string;
  layer: LayerSelection;
  device: string;
  batchSize: number;
  /** Context words kept on either side of the target; falls back to the
   * manifest's radius, then 10. */
  radius?: number;
}

export interface PreparedInstance {
  sentence_id: string;
  tokens: string[];
  target_index: number;
  lemma: string;
  pos: string;
  sense_key: string;
  sense_number: number;
  group_id: number;
}

export interface ManifestWord {
  lemma: string;
  pos: string;
  n_instances: number;
  attested_groups: number[];
  file: string;
}

export interface Manifest {
  n_words: number;
  radius?: number;
  words: ManifestWord[];
}

export interface EmbeddingRecord {
  sentence_id: string;
  lemma: string;
  pos: string;
  sense_key: string;
  group_id: number;
  vector: number[];
}

/** Subword vectors for one sentence; wordIds[i] is the index of the input
 * token that produced subword i. */
export interface EncodedSentence {
  vectors: number[][];
  wordIds: number[];
}

export interface Encoder {
  encodeBatch(sentences: string[][]): Promise<EncodedSentence[]>;
}
