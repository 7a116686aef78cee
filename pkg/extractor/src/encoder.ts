import type { EncodedSentence, Encoder, LayerSelection } from "./types.js";

export class ModelLoadFailure extends Error {}

/** Last hidden layer is 12; sum-last-4 pools layers 9..12. */
const LAYERS: Record<LayerSelection, number[]> = {
  last: [12],
  "sum-last-4": [9, 10, 11, 12],
};

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

function mulberry32(seed: number): () => number {
  let state = seed >>> 0;
  return () => {
    state = (state + 0x6d2b79f5) >>> 0;
    let t = state;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

/** Splits a token into fixed-length character chunks, standing in for a
 * subword tokenizer: long words yield several subwords. */
export function chunkToken(token: string, chunk: number): string[] {
  const parts: string[] = [];
  for (let i = 0; i < token.length; i += chunk) {
    parts.push(token.slice(i, i + chunk));
  }
  return parts.length ? parts : [token];
}

export interface MockParams {
  dim: number;
  seed: number;
  chunk: number;
}

export function parseMockParams(spec: string): MockParams {
  const params: MockParams = { dim: 16, seed: 0, chunk: 4 };
  const body = spec.slice("mock:".length);
  if (body) {
    for (const part of body.split(",")) {
      const [key, value] = part.split("=");
      const parsed = Number(value);
      if (!Number.isFinite(parsed)) {
        throw new ModelLoadFailure(`bad mock parameter ${part}`);
      }
      if (key === "dim") params.dim = parsed;
      else if (key === "seed") params.seed = parsed;
      else if (key === "chunk") params.chunk = parsed;
      else throw new ModelLoadFailure(`unknown mock parameter ${key}`);
    }
  }
  if (params.dim < 1 || params.chunk < 1) {
    throw new ModelLoadFailure(`mock dim and chunk must be positive`);
  }
  return params;
}

/** Deterministic stand-in encoder: every subword vector is a seeded hash of
 * the whole sentence, the token position, the subword text, and the layer,
 * so outputs are contextual, reproducible, and need no model download. */
export class MockEncoder implements Encoder {
  constructor(
    private readonly params: MockParams,
    private readonly layers: number[],
  ) {}

  private subwordVector(context: string, wordIdx: number, sub: string): number[] {
    const vector = new Array<number>(this.params.dim).fill(0);
    for (const layer of this.layers) {
      const key = `${this.params.seed}|${context}|${wordIdx}|${sub}|L${layer}`;
      const rand = mulberry32(fnv1a(key));
      for (let d = 0; d < this.params.dim; d++) {
        vector[d] += 2 * rand() - 1;
      }
    }
    return vector;
  }

  async encodeBatch(sentences: string[][]): Promise<EncodedSentence[]> {
    return sentences.map((tokens) => {
      const context = tokens.join(" ");
      const vectors: number[][] = [];
      const wordIds: number[] = [];
      tokens.forEach((token, wordIdx) => {
        for (const sub of chunkToken(token, this.params.chunk)) {
          vectors.push(this.subwordVector(context, wordIdx, sub));
          wordIds.push(wordIdx);
        }
      });
      return { vectors, wordIds };
    });
  }
}

interface HttpResponse {
  results: { vectors: number[][]; word_ids: number[] }[];
}

/** Black-box adapter for an embedding service. Protocol: POST JSON
 * {sentences, layer, device} and receive {results: [{vectors, word_ids}]}
 * with one result per sentence, subword vectors in sentence order. */
export class HttpEncoder implements Encoder {
  constructor(
    private readonly url: string,
    private readonly layer: LayerSelection,
    private readonly device: string,
  ) {}

  async encodeBatch(sentences: string[][]): Promise<EncodedSentence[]> {
    const response = await fetch(this.url, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ sentences, layer: this.layer, device: this.device }),
    });
    if (!response.ok) {
      throw new ModelLoadFailure(`encoder service ${this.url} answered ${response.status}`);
    }
    const payload = (await response.json()) as HttpResponse;
    if (!Array.isArray(payload.results) || payload.results.length !== sentences.length) {
      throw new ModelLoadFailure(`encoder service returned ${payload.results?.length} results for ${sentences.length} sentences`);
    }
    return payload.results.map((r) => ({ vectors: r.vectors, wordIds: r.word_ids }));
  }
}

export function createEncoder(model: string, layer: LayerSelection, device: string): Encoder {
  if (model.startsWith("mock:") || model === "mock") {
    return new MockEncoder(parseMockParams(model === "mock" ? "mock:" : model), LAYERS[layer]);
  }
  if (model.startsWith("http://") || model.startsWith("https://")) {
    return new HttpEncoder(model, layer, device);
  }
  throw new ModelLoadFailure(
    `cannot load model '${model}': available backends are mock:... and http(s)://...`,
  );
}
