#!/usr/bin/env node
/**
 * Training script for a WideResNet checkpoint usable by the exporter.
 *
 * SGD with momentum 0.9, L2 1e-4, lr 0.1 stepped x0.1 at epochs 100/150,
 * 200 epochs total. On the pure-JS CPU backend this is far too slow to
 * run to convergence at full scale; it exists so a checkpoint can be
 * produced where compute is available, and so short smoke runs
 * (--epochs 1 --limit 64) exercise the full pipeline.
 */

import * as tf from "@tensorflow/tfjs";
import yargs from "yargs";

import { IMAGE_SIDE, readCifar100, toRgbTensorData } from "./cifar";
import { saveCheckpoint } from "./iohandler";
import { buildWideResNet, parseModelName } from "./wrn";

export interface TrainOptions {
  model: string;
  data: string;
  out: string;
  seed: number;
  epochs: number;
  batchSize: number;
  lr: number;
  limit?: number;
}

export async function trainCheckpoint(opts: TrainOptions): Promise<void> {
  const { depth, widen } = parseModelName(opts.model);
  const wrn = buildWideResNet({ depth, widen, numClasses: 100, seed: opts.seed });
  const records = readCifar100(opts.data, opts.limit);

  const n = records.length;
  const xs = new Float32Array(n * IMAGE_SIDE * IMAGE_SIDE * 3);
  const ys = new Int32Array(n);
  records.forEach((rec, i) => {
    xs.set(toRgbTensorData(rec), i * IMAGE_SIDE * IMAGE_SIDE * 3);
    ys[i] = rec.fineLabel;
  });
  const x = tf.tensor4d(xs, [n, IMAGE_SIDE, IMAGE_SIDE, 3]);
  const y = tf.oneHot(tf.tensor1d(ys, "int32"), 100);

  // train against the logits head; taps stay exposed for the exporter
  const trainModel = tf.model({
    inputs: wrn.model.inputs,
    outputs: wrn.model.outputs[3],
  });
  let lr = opts.lr;
  for (let epoch = 0; epoch < opts.epochs; epoch++) {
    if (epoch === 100 || epoch === 150) lr *= 0.1;
    trainModel.compile({
      optimizer: tf.train.momentum(lr, 0.9),
      loss: (target, logits) =>
        tf.losses.softmaxCrossEntropy(target, logits).add(l2Penalty(trainModel)),
      metrics: ["accuracy"],
    });
    const history = await trainModel.fit(x, y, {
      epochs: 1,
      batchSize: opts.batchSize,
      shuffle: true,
      verbose: 0,
    });
    const loss = history.history.loss?.[0];
    process.stdout.write(`epoch ${epoch + 1}/${opts.epochs} lr=${lr} loss=${loss}\n`);
  }

  await saveCheckpoint(wrn.model, opts.out);
  process.stdout.write(`checkpoint saved to ${opts.out}\n`);
  x.dispose();
  y.dispose();
}

function l2Penalty(model: tf.LayersModel): tf.Scalar {
  const terms = model.trainableWeights
    .filter((w) => w.name.includes("kernel"))
    .map((w) => tf.sum(tf.square(w.read())));
  if (terms.length === 0) return tf.scalar(0);
  return tf.addN(terms).mul(1e-4) as tf.Scalar;
}

async function main(): Promise<number> {
  const parsed = yargs(process.argv.slice(2))
    .option("model", { type: "string", default: "wrn28x4" })
    .option("data", { type: "string", demandOption: true })
    .option("out", { type: "string", demandOption: true })
    .option("seed", { type: "number", default: 0 })
    .option("epochs", { type: "number", default: 200 })
    .option("batch-size", { type: "number", default: 128 })
    .option("lr", { type: "number", default: 0.1 })
    .option("limit", { type: "number" })
    .strict()
    .parseSync();
  try {
    await trainCheckpoint({
      model: parsed.model,
      data: parsed.data,
      out: parsed.out,
      seed: parsed.seed,
      epochs: parsed.epochs,
      batchSize: parsed["batch-size"],
      lr: parsed.lr,
      limit: parsed.limit,
    });
    return 0;
  } catch (err) {
    process.stderr.write(`error: ${(err as Error).message}\n`);
    return 1;
  }
}

if (require.main === module) {
  main().then((code) => process.exit(code));
}
