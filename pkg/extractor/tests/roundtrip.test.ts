/** Interop acceptance: extractor output must flow back through the
 * workbench's own readers with no errors. Talks to the primary component
 * only through its CLI and file formats. */

import { spawnSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { fileURLToPath } from "node:url";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { createEncoder } from "../src/encoder.js";
import { extractEmbeddings, readManifest, readWordFile } from "../src/extract.js";
import { exportSenseIndex } from "../src/senseIndex.js";

const HERE = path.dirname(fileURLToPath(import.meta.url));
const REPO = path.resolve(HERE, "..", "..");
const FIXTURES = path.join(REPO, "fixtures");

function python(code: string): { status: number | null; stdout: string; stderr: string } {
  return spawnSync("python3", ["-c", code], { encoding: "utf-8" });
}

const pythonAvailable = python("import homoclust").status === 0;

let workDir: string;
let prepared: string;

beforeAll(() => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "roundtrip-test-"));
  prepared = path.join(workDir, "prepared");
  if (!pythonAvailable) return;
  const prep = spawnSync(
    "python3",
    [
      "-m",
      "homoclust.cli",
      "prepare",
      "--corpus", path.join(FIXTURES, "corpus.jsonl"),
      "--index", path.join(FIXTURES, "sense_index.tsv"),
      "--inventory", path.join(FIXTURES, "inventory.tsv"),
      "--out", prepared,
    ],
    { encoding: "utf-8" },
  );
  if (prep.status !== 0) {
    throw new Error(`prepare failed: ${prep.stderr}`);
  }
});

afterAll(() => {
  fs.rmSync(workDir, { recursive: true, force: true });
});

describe.skipIf(!pythonAvailable)("embeddings round-trip through the workbench reader", () => {
  it("produces records the workbench reads with zero dimension errors", async () => {
    const out = path.join(workDir, "embeddings.jsonl");
    const encoder = createEncoder("mock:dim=24,seed=11", "sum-last-4", "cpu");
    const stats = await extractEmbeddings(
      prepared,
      encoder,
      { model: "mock:dim=24,seed=11", layer: "sum-last-4", device: "cpu", batchSize: 8 },
      out,
    );

    const manifest = readManifest(prepared);
    const totalInstances = manifest.words.reduce((acc, w) => acc + w.n_instances, 0);
    expect(stats.instances).toBe(totalInstances);
    expect(stats.records).toBe(totalInstances - stats.alignmentFailures.length);
    expect(stats.alignmentFailures).toEqual([]);

    const check = python(
      `
from homoclust.embed import read_embeddings
records = read_embeddings(${JSON.stringify(out)})
assert len(records) == ${stats.records}, len(records)
assert all(len(r.vector) == 24 for r in records)
print("OK", len(records))
`,
    );
    expect(check.stderr).toBe("");
    expect(check.status).toBe(0);
    expect(check.stdout.trim()).toBe(`OK ${stats.records}`);
  });

  it("feeds a full workbench run without skips", async () => {
    const out = path.join(workDir, "embeddings_run.jsonl");
    const encoder = createEncoder("mock:dim=16,seed=2", "last", "cpu");
    await extractEmbeddings(prepared, encoder, { model: "mock:dim=16,seed=2", layer: "last", device: "cpu", batchSize: 8 }, out);

    const results = path.join(workDir, "results");
    const run = spawnSync(
      "python3",
      [
        "-m", "homoclust.cli",
        "run",
        "--prepared", prepared,
        "--embeddings", out,
        "--seed", "1",
        "--out", results,
      ],
      { encoding: "utf-8" },
    );
    expect(run.status, run.stderr).toBe(0);
    const report = JSON.parse(fs.readFileSync(path.join(results, "report.json"), "utf-8"));
    expect(report.skipped).toEqual([]);
    expect(report.words.length).toBeGreaterThan(0);
  });

  it("honors the manifest's window radius against the workbench contract", () => {
    const manifest = readManifest(prepared);
    const instances = manifest.words.flatMap((w) => readWordFile(prepared, w.file));
    // pick a sentence the 10-word window actually clips
    const long = instances
      .filter((inst) => inst.target_index > 10 || inst.tokens.length - inst.target_index - 1 > 10)
      .sort((a, b) => b.tokens.length - a.tokens.length)[0];
    expect(long).toBeDefined();
    const probe = python(
      `
from homoclust.embed import context_window
tokens = ${JSON.stringify(long!.tokens)}
window, idx = context_window(tokens, ${long!.target_index}, radius=10)
print(len(window), idx)
`,
    );
    expect(probe.status).toBe(0);
    const [count, idx] = probe.stdout.trim().split(" ").map(Number);
    // same numbers the TS implementation produces
    expect(count).toBe(Math.min(long!.tokens.length, long!.target_index + 11) - Math.max(0, long!.target_index - 10));
    expect(idx).toBe(long!.target_index - Math.max(0, long!.target_index - 10));
  });
});

describe.skipIf(!pythonAvailable)("sense index round-trip through the workbench parser", () => {
  it("parses cleanly and covers the inventory lemmas", () => {
    const listing = path.join(workDir, "index.sense");
    fs.writeFileSync(
      listing,
      [
        "light%1:07:00:: 04953954 1 20",
        "light%1:19:00:: 05772306 2 3",
        "mass%1:07:00:: 05027837 1 8",
        "mass%1:14:00:: 08436476 2 2",
        "gravel%1:27:00:: 14848785 1 1",
        "unrelated%1:03:00:: 00007347 1 0",
      ].join("\n") + "\n",
    );
    const out = path.join(workDir, "sense_index.tsv");
    const result = exportSenseIndex(listing, path.join(FIXTURES, "inventory.tsv"), out);
    expect(result.rows).toBe(5);

    const check = python(
      `
from homoclust.corpus import parse_sense_index
index = parse_sense_index(${JSON.stringify(out)})
assert len(index.entries) == 5, len(index.entries)
assert index.lookup("light%1:07:00::") == ("light", "n", 1)
print("OK")
`,
    );
    expect(check.stderr).toBe("");
    expect(check.status).toBe(0);
  });
});
