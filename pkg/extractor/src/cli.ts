#!/usr/bin/env node
/** CLI for producing the workbench's input files.
 *
 * extract      --prepared DIR --model M --out FILE [--layer last|sum-last-4]
 *              [--device D] [--batch-size N] [--radius N]
 * export-index --index-sense FILE --inventory FILE --out FILE
 */

import { parseArgs } from "node:util";

import { createEncoder, ModelLoadFailure } from "./encoder.js";
import { extractEmbeddings, TokenAlignmentFailure } from "./extract.js";
import { exportSenseIndex } from "./senseIndex.js";
import type { ExtractorConfig, LayerSelection } from "./types.js";

function usage(message?: string): never {
  if (message) console.error(`error: ${message}`);
  console.error(
    "usage: extract --prepared DIR --model M --out FILE [--layer last|sum-last-4] [--device D] [--batch-size N] [--radius N]\n" +
      "       export-index --index-sense FILE --inventory FILE --out FILE",
  );
  process.exit(1);
}

async function runExtract(argv: string[]): Promise<number> {
  const { values } = parseArgs({
    args: argv,
    options: {
      prepared: { type: "string" },
      model: { type: "string" },
      out: { type: "string" },
      layer: { type: "string", default: "last" },
      device: { type: "string", default: "cpu" },
      "batch-size": { type: "string", default: "16" },
      radius: { type: "string" },
    },
  });
  if (!values.prepared || !values.model || !values.out) {
    usage("extract needs --prepared, --model, and --out");
  }
  if (values.layer !== "last" && values.layer !== "sum-last-4") {
    usage(`unknown layer selection ${values.layer}`);
  }
  const batchSize = Number(values["batch-size"]);
  if (!Number.isInteger(batchSize) || batchSize < 1) {
    usage(`batch size must be a positive integer, got ${values["batch-size"]}`);
  }
  const config: ExtractorConfig = {
    model: values.model,
    layer: values.layer as LayerSelection,
    device: values.device ?? "cpu",
    batchSize,
    ...(values.radius !== undefined ? { radius: Number(values.radius) } : {}),
  };
  const encoder = createEncoder(config.model, config.layer, config.device);
  const stats = await extractEmbeddings(values.prepared, encoder, config, values.out);
  console.log(
    `wrote ${stats.records} records from ${stats.instances} instances` +
      (stats.alignmentFailures.length ? ` (${stats.alignmentFailures.length} alignment failures)` : "") +
      ` -> ${values.out}`,
  );
  return 0;
}

function runExportIndex(argv: string[]): number {
  const { values } = parseArgs({
    args: argv,
    options: {
      "index-sense": { type: "string" },
      inventory: { type: "string" },
      out: { type: "string" },
    },
  });
  if (!values["index-sense"] || !values.inventory || !values.out) {
    usage("export-index needs --index-sense, --inventory, and --out");
  }
  const result = exportSenseIndex(values["index-sense"], values.inventory, values.out);
  console.log(`wrote ${result.rows} sense rows -> ${values.out}`);
  return 0;
}

async function main(): Promise<number> {
  const [command, ...rest] = process.argv.slice(2);
  try {
    if (command === "extract") return await runExtract(rest);
    if (command === "export-index") return runExportIndex(rest);
    usage(command ? `unknown command ${command}` : undefined);
  } catch (err) {
    if (err instanceof ModelLoadFailure || err instanceof TokenAlignmentFailure) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    if (err instanceof Error && "code" in err) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

main().then(
  (code) => process.exit(code),
  (err) => {
    console.error(err);
    process.exit(2);
  },
);
