#!/usr/bin/env node
/**
 * Export CIFAR-100 images (grayscale luminance) and WideResNet stage
 * activations as NPY tensors plus a manifest.json, in the exact
 * interchange subset the spectral-stats package reads.
 *
 * There is no dataset download here (the sandbox has no general network):
 * point --data (or $CIFAR100_BIN) at a local CIFAR-100 binary such as
 * test.bin. Random-init models are fully seeded and reproducible.
 */

import * as fs from "fs";
import * as path from "path";
import * as tf from "@tensorflow/tfjs";
import yargs from "yargs";

import { IMAGE_SIDE, readCifar100, toLuminance, toRgbTensorData } from "./cifar";
import { loadCheckpoint } from "./iohandler";
import { ManifestItem, writeManifest } from "./manifest";
import { encodeNpy } from "./npy";
import {
  buildWideResNet,
  parseModelName,
  stageActivations,
  toChannelMean,
  toChw,
  WrnModel,
} from "./wrn";

export interface ExportOptions {
  dataset: string;
  model: string;
  checkpoint?: string;
  randomInit: boolean;
  seed: number;
  taps: number[];
  count: number;
  out: string;
  data?: string;
  channelMean: boolean;
  imagesOnly: boolean;
  batchSize: number;
}

function writeNpyFile(dir: string, name: string, shape: number[], data: Float32Array) {
  const target = path.join(dir, name);
  const tmp = target + ".tmp";
  fs.writeFileSync(tmp, encodeNpy({ shape, dtype: "<f4", data }));
  fs.renameSync(tmp, target);
}

async function resolveModel(opts: ExportOptions): Promise<WrnModel> {
  const { depth, widen } = parseModelName(opts.model);
  if (opts.checkpoint) {
    const model = await loadCheckpoint(opts.checkpoint);
    const inner = model.inputs[0].shape;
    if (inner[1] !== IMAGE_SIDE || inner[2] !== IMAGE_SIDE) {
      throw new Error(
        `checkpoint expects input ${inner.slice(1)}, need ${IMAGE_SIDE}x${IMAGE_SIDE}x3`,
      );
    }
    if (model.outputs.length !== 4) {
      throw new Error(
        `checkpoint has ${model.outputs.length} outputs; expected 3 taps + logits`,
      );
    }
    return { model, spec: { depth, widen, numClasses: 100, seed: opts.seed } };
  }
  return buildWideResNet({ depth, widen, numClasses: 100, seed: opts.seed });
}

export async function runExport(opts: ExportOptions): Promise<number> {
  if (opts.dataset !== "cifar100") {
    throw new Error(`unknown dataset ${opts.dataset} (only cifar100 is supported)`);
  }
  const dataFile = opts.data ?? process.env.CIFAR100_BIN;
  if (!dataFile || !fs.existsSync(dataFile)) {
    process.stderr.write(
      "error: CIFAR-100 binary not available. This environment cannot download " +
        "datasets; pass --data PATH (or set $CIFAR100_BIN) pointing at e.g. test.bin\n",
    );
    return 1;
  }
  const records = readCifar100(dataFile, opts.count);
  if (records.length < opts.count) {
    process.stderr.write(
      `error: requested ${opts.count} samples but ${dataFile} holds ${records.length}\n`,
    );
    return 1;
  }

  fs.mkdirSync(opts.out, { recursive: true });
  const pad = Math.max(4, String(records.length - 1).length);
  const items: ManifestItem[] = [];

  for (let i = 0; i < records.length; i++) {
    const name = `img${String(i).padStart(pad, "0")}.npy`;
    writeNpyFile(opts.out, name, [IMAGE_SIDE, IMAGE_SIDE], toLuminance(records[i]));
    items.push({ path: name, kind: "image", shape: [IMAGE_SIDE, IMAGE_SIDE] });
  }

  if (!opts.imagesOnly && opts.taps.length > 0) {
    for (const tap of opts.taps) {
      if (tap < 1 || tap > 3) throw new Error(`tap ${tap} out of range 1..3`);
    }
    const wrn = await resolveModel(opts);
    for (let start = 0; start < records.length; start += opts.batchSize) {
      const slice = records.slice(start, start + opts.batchSize);
      const batchData = new Float32Array(slice.length * IMAGE_SIDE * IMAGE_SIDE * 3);
      slice.forEach((rec, j) =>
        batchData.set(toRgbTensorData(rec), j * IMAGE_SIDE * IMAGE_SIDE * 3),
      );
      const batch = tf.tensor4d(batchData, [slice.length, IMAGE_SIDE, IMAGE_SIDE, 3]);
      const acts = stageActivations(wrn, batch);
      for (const tap of opts.taps) {
        const act = acts[tap - 1];
        const { shape, maps } = opts.channelMean ? toChannelMean(act) : toChw(act);
        maps.forEach((map, j) => {
          const index = start + j;
          const name = `act${String(index).padStart(pad, "0")}_tap${tap}.npy`;
          writeNpyFile(opts.out, name, shape, map);
          items.push({ path: name, kind: "activation", shape, layer: tap });
        });
      }
      batch.dispose();
      acts.forEach((t) => t.dispose());
    }
  }

  writeManifest(opts.out, items);
  process.stdout.write(
    `wrote ${items.length} tensors + manifest.json to ${opts.out}\n`,
  );
  return 0;
}

export function parseArgs(argv: string[]): ExportOptions {
  const parsed = yargs(argv)
    .command("export", "export images and activations", (y) =>
      y
        .option("dataset", { type: "string", demandOption: true })
        .option("model", { type: "string", default: "wrn28x4" })
        .option("checkpoint", { type: "string" })
        .option("random-init", { type: "boolean", default: false })
        .option("seed", { type: "number", default: 0 })
        .option("taps", { type: "string", default: "1,2,3" })
        .option("count", { type: "number", demandOption: true })
        .option("out", { type: "string", demandOption: true })
        .option("data", { type: "string" })
        .option("channel-mean", { type: "boolean", default: false })
        .option("images-only", { type: "boolean", default: false })
        .option("batch-size", { type: "number", default: 16 }),
    )
    .demandCommand(1)
    .strict()
    .exitProcess(false)
    .parseSync();

  if (parsed.checkpoint && parsed["random-init"]) {
    throw new Error("conflicting flags: --checkpoint and --random-init");
  }
  return {
    dataset: parsed.dataset as string,
    model: parsed.model as string,
    checkpoint: parsed.checkpoint as string | undefined,
    randomInit: Boolean(parsed["random-init"]),
    seed: Number(parsed.seed),
    taps: String(parsed.taps)
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s.length > 0)
      .map((s) => parseInt(s, 10)),
    count: Number(parsed.count),
    out: String(parsed.out),
    data: parsed.data as string | undefined,
    channelMean: Boolean(parsed["channel-mean"]),
    imagesOnly: Boolean(parsed["images-only"]),
    batchSize: Number(parsed["batch-size"]),
  };
}

async function main(): Promise<number> {
  let opts: ExportOptions;
  try {
    opts = parseArgs(process.argv.slice(2));
  } catch (err) {
    process.stderr.write(`usage error: ${(err as Error).message}\n`);
    return 2;
  }
  try {
    return await runExport(opts);
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  main().then((code) => process.exit(code));
}
