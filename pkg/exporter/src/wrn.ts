/**
 * Pre-activation WideResNet (depth = 6n+4, widen factor k) for 32x32 inputs,
 * exposing the output of each of the three residual stages as a tap.
 *
 * All weight initializers carry explicit seeds derived from one base seed,
 * so a random-init model is reproducible run to run.
 */

import * as tf from "@tensorflow/tfjs";

export interface WrnSpec {
  depth: number;
  widen: number;
  numClasses: number;
  seed: number;
}

export interface WrnModel {
  model: tf.LayersModel; // outputs: [tap1, tap2, tap3, logits]
  spec: WrnSpec;
}

export function parseModelName(name: string): { depth: number; widen: number } {
  const m = /^wrn(\d+)x(\d+)$/.exec(name);
  if (!m) throw new Error(`unknown model ${name} (expected e.g. wrn28x4)`);
  const depth = parseInt(m[1], 10);
  const widen = parseInt(m[2], 10);
  if ((depth - 4) % 6 !== 0) throw new Error(`depth ${depth} is not 6n+4`);
  return { depth, widen };
}

export function buildWideResNet(spec: WrnSpec): WrnModel {
  const { depth, widen, numClasses, seed } = spec;
  const blocksPerGroup = (depth - 4) / 6;
  const widths = [16, 16 * widen, 32 * widen, 64 * widen];
  let nextSeed = seed;
  const conv = (filters: number, kernel: number, stride: number) =>
    tf.layers.conv2d({
      filters,
      kernelSize: kernel,
      strides: stride,
      padding: "same",
      useBias: false,
      kernelInitializer: tf.initializers.heNormal({ seed: nextSeed++ }),
    });

  const input = tf.input({ shape: [32, 32, 3] });
  let x = conv(widths[0], 3, 1).apply(input) as tf.SymbolicTensor;

  const taps: tf.SymbolicTensor[] = [];
  for (let group = 0; group < 3; group++) {
    const width = widths[group + 1];
    for (let block = 0; block < blocksPerGroup; block++) {
      const stride = block === 0 && group > 0 ? 2 : 1;
      const needsProjection =
        block === 0 && ((x.shape[3] as number) !== width || stride !== 1);
      const pre = tf.layers
        .reLU()
        .apply(
          tf.layers.batchNormalization().apply(x),
        ) as tf.SymbolicTensor;
      let y = conv(width, 3, stride).apply(pre) as tf.SymbolicTensor;
      y = tf.layers
        .reLU()
        .apply(tf.layers.batchNormalization().apply(y)) as tf.SymbolicTensor;
      y = conv(width, 3, 1).apply(y) as tf.SymbolicTensor;
      const shortcut = needsProjection
        ? (conv(width, 1, stride).apply(pre) as tf.SymbolicTensor)
        : x;
      x = tf.layers.add().apply([y, shortcut]) as tf.SymbolicTensor;
    }
    taps.push(x); // the tensor flowing between residual stages
  }

  let head = tf.layers
    .reLU()
    .apply(tf.layers.batchNormalization().apply(x)) as tf.SymbolicTensor;
  head = tf.layers.globalAveragePooling2d({}).apply(head) as tf.SymbolicTensor;
  const logits = tf.layers
    .dense({
      units: numClasses,
      kernelInitializer: tf.initializers.glorotUniform({ seed: nextSeed++ }),
    })
    .apply(head) as tf.SymbolicTensor;

  const model = tf.model({ inputs: input, outputs: [...taps, logits] });
  return { model, spec };
}

/** Stage activations for a batch, NHWC float32, one tensor per tap. */
export function stageActivations(
  wrn: WrnModel,
  batch: tf.Tensor4D,
): tf.Tensor4D[] {
  const outputs = wrn.model.predict(batch) as tf.Tensor[];
  return outputs.slice(0, 3) as tf.Tensor4D[];
}

/** NHWC tensor -> per-sample CHW Float32Arrays. */
export function toChw(t: tf.Tensor4D): { shape: number[]; maps: Float32Array[] } {
  const [n, h, w, c] = t.shape;
  const data = t.dataSync() as Float32Array;
  const maps: Float32Array[] = [];
  for (let i = 0; i < n; i++) {
    const out = new Float32Array(c * h * w);
    for (let ch = 0; ch < c; ch++) {
      for (let y = 0; y < h; y++) {
        for (let x = 0; x < w; x++) {
          out[ch * h * w + y * w + x] = data[((i * h + y) * w + x) * c + ch];
        }
      }
    }
    maps.push(out);
  }
  return { shape: [c, h, w], maps };
}

/** NHWC tensor -> per-sample channel-mean HxW Float32Arrays. */
export function toChannelMean(
  t: tf.Tensor4D,
): { shape: number[]; maps: Float32Array[] } {
  const [n, h, w, c] = t.shape;
  const data = t.dataSync() as Float32Array;
  const maps: Float32Array[] = [];
  for (let i = 0; i < n; i++) {
    const out = new Float32Array(h * w);
    for (let y = 0; y < h; y++) {
      for (let x = 0; x < w; x++) {
        let acc = 0;
        for (let ch = 0; ch < c; ch++) {
          acc += data[((i * h + y) * w + x) * c + ch];
        }
        out[y * w + x] = acc / c;
      }
    }
    maps.push(out);
  }
  return { shape: [h, w], maps };
}
