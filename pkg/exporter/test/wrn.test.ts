import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import * as tf from "@tensorflow/tfjs";
import { afterAll, describe, expect, it } from "vitest";

import { loadCheckpoint, saveCheckpoint } from "../src/iohandler";
import { buildWideResNet, parseModelName, stageActivations, toChw } from "../src/wrn";

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "wrn-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

describe("model name parsing", () => {
  it("accepts wrn<depth>x<widen>", () => {
    expect(parseModelName("wrn28x4")).toEqual({ depth: 28, widen: 4 });
    expect(parseModelName("wrn16x2")).toEqual({ depth: 16, widen: 2 });
  });

  it("rejects malformed names and bad depths", () => {
    expect(() => parseModelName("resnet50")).toThrow(/unknown model/);
    expect(() => parseModelName("wrn27x4")).toThrow(/6n\+4/);
  });
});

describe("wideresnet taps", () => {
  it("wrn28x4 stage shapes match the widths 64/128/256", () => {
    const { model } = buildWideResNet({ depth: 28, widen: 4, numClasses: 100, seed: 0 });
    const shapes = model.outputs.map((o) => o.shape);
    expect(shapes[0]).toEqual([null, 32, 32, 64]);
    expect(shapes[1]).toEqual([null, 16, 16, 128]);
    expect(shapes[2]).toEqual([null, 8, 8, 256]);
    expect(shapes[3]).toEqual([null, 100]);
  });

  it("same seed gives identical weights, different seed does not", () => {
    const a = buildWideResNet({ depth: 16, widen: 1, numClasses: 10, seed: 5 });
    const b = buildWideResNet({ depth: 16, widen: 1, numClasses: 10, seed: 5 });
    const c = buildWideResNet({ depth: 16, widen: 1, numClasses: 10, seed: 6 });
    const wa = a.model.getWeights()[0].dataSync();
    const wb = b.model.getWeights()[0].dataSync();
    const wc = c.model.getWeights()[0].dataSync();
    expect(Array.from(wa)).toEqual(Array.from(wb));
    expect(Array.from(wa)).not.toEqual(Array.from(wc));
  });

  it("forward produces finite activations and CHW conversion is faithful", () => {
    const wrn = buildWideResNet({ depth: 16, widen: 1, numClasses: 10, seed: 1 });
    const batch = tf.randomUniform([1, 32, 32, 3], 0, 1, "float32", 99) as tf.Tensor4D;
    const acts = stageActivations(wrn, batch);
    expect(acts.length).toBe(3);
    expect(acts[2].shape).toEqual([1, 8, 8, 64]);
    const { shape, maps } = toChw(acts[0]);
    expect(shape).toEqual([16, 32, 32]);
    expect(maps.length).toBe(1);
    for (const v of maps[0]) expect(Number.isFinite(v)).toBe(true);
    // CHW[c][y][x] must equal NHWC[0][y][x][c]
    const nhwc = acts[0].dataSync() as Float32Array;
    expect(maps[0][5 * 32 * 32 + 3 * 32 + 2]).toBe(nhwc[(3 * 32 + 2) * 16 + 5]);
  });

  it("checkpoint save/load round-trips the forward pass", async () => {
    const wrn = buildWideResNet({ depth: 16, widen: 1, numClasses: 10, seed: 2 });
    const dir = path.join(tmp, "ckpt");
    await saveCheckpoint(wrn.model, dir);
    const loaded = await loadCheckpoint(dir);
    const batch = tf.randomUniform([1, 32, 32, 3], 0, 1, "float32", 7) as tf.Tensor4D;
    const a = (wrn.model.predict(batch) as tf.Tensor[])[2].dataSync();
    const b = (loaded.predict(batch) as tf.Tensor[])[2].dataSync();
    expect(Array.from(b)).toEqual(Array.from(a));
  });
});
