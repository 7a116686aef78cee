import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { exportSenseIndex, lemmaPosOfSenseKey, parseSenseListing } from "../src/senseIndex.js";

let workDir: string;

// ten noun senses of bank plus entries the export must ignore
const SENSE_LISTING = `bank%1:17:01:: 09213565 1 25
bank%1:14:00:: 08420278 2 20
bank%1:17:00:: 09213434 3 2
bank%1:14:01:: 08420563 4 1
bank%1:21:00:: 13356402 5 1
bank%1:14:02:: 08419984 6 1
bank%1:17:02:: 09213828 7 0
bank%1:06:00:: 02787772 8 0
bank%1:06:01:: 02788021 9 0
bank%1:04:00:: 00169305 10 0
bank%2:40:00:: 02343374 1 2
light%1:07:00:: 04953954 1 20
light%3:00:01:: 00977153 1 5
spar%1:06:00:: 04285965 1 0
`;

beforeAll(() => {
  workDir = fs.mkdtempSync(path.join(os.tmpdir(), "sense-index-test-"));
  fs.writeFileSync(path.join(workDir, "index.sense"), SENSE_LISTING);
});

afterAll(() => {
  fs.rmSync(workDir, { recursive: true, force: true });
});

describe("lemmaPosOfSenseKey", () => {
  it("derives lemma and pos", () => {
    expect(lemmaPosOfSenseKey("bank%1:14:00::")).toEqual({ lemma: "bank", pos: "n" });
    expect(lemmaPosOfSenseKey("run%2:38:00::")).toEqual({ lemma: "run", pos: "v" });
    expect(lemmaPosOfSenseKey("light%3:00:01::")).toEqual({ lemma: "light", pos: "a" });
    expect(lemmaPosOfSenseKey("fast%4:02:01::")).toEqual({ lemma: "fast", pos: "r" });
    // adjective satellites fold into plain adjectives
    expect(lemmaPosOfSenseKey("skinny%5:00:00:thin:01")).toEqual({ lemma: "skinny", pos: "a" });
  });

  it("rejects malformed keys", () => {
    expect(lemmaPosOfSenseKey("no-percent-here")).toBeNull();
    expect(lemmaPosOfSenseKey("word%9:00:00::")).toBeNull();
  });
});

describe("parseSenseListing", () => {
  it("parses every line", () => {
    const entries = parseSenseListing(path.join(workDir, "index.sense"));
    expect(entries).toHaveLength(14);
    expect(entries[1]).toEqual({ senseKey: "bank%1:14:00::", lemma: "bank", pos: "n", senseNumber: 2 });
  });
});

describe("exportSenseIndex", () => {
  it("keeps only inventory lemmas and logs missing ones", () => {
    const inventory = path.join(workDir, "inventory.tsv");
    const rows = Array.from({ length: 10 }, (_, i) => `bank\tn\t${i + 1}\t${i % 2 ? 200 : 100}`);
    rows.push("zymurgy\tn\t1\t100");
    fs.writeFileSync(inventory, rows.join("\n") + "\n");

    const out = path.join(workDir, "sense_index.tsv");
    const result = exportSenseIndex(path.join(workDir, "index.sense"), inventory, out);
    expect(result.rows).toBe(10); // bank's ten noun senses, nothing else
    expect(result.missing).toEqual(["zymurgy/n"]);

    const lines = fs.readFileSync(out, "utf-8").trim().split("\n");
    expect(lines).toHaveLength(10);
    for (const line of lines) {
      const cols = line.split("\t");
      expect(cols).toHaveLength(4);
      expect(cols[1]).toBe("bank");
      expect(cols[2]).toBe("n");
    }
    // verb senses of bank must not leak into the noun rows
    expect(lines.some((l) => l.startsWith("bank%2:"))).toBe(false);
  });
});
