/**
 * CIFAR-100 binary reader (the canonical *.bin layout: one coarse label
 * byte, one fine label byte, then 3072 pixel bytes as R/G/B planes of a
 * row-major 32x32 image).
 */

import * as fs from "fs";

export const IMAGE_SIDE = 32;
export const RECORD_BYTES = 2 + 3 * IMAGE_SIDE * IMAGE_SIDE;

export interface CifarRecord {
  coarseLabel: number;
  fineLabel: number;
  /** RGB planes, 3072 bytes */
  pixels: Uint8Array;
}

export function readCifar100(file: string, count?: number): CifarRecord[] {
  const buf = fs.readFileSync(file);
  if (buf.length === 0 || buf.length % RECORD_BYTES !== 0) {
    throw new Error(
      `${file}: size ${buf.length} is not a multiple of the ${RECORD_BYTES}-byte record`,
    );
  }
  const total = buf.length / RECORD_BYTES;
  const take = count === undefined ? total : Math.min(count, total);
  const records: CifarRecord[] = [];
  for (let i = 0; i < take; i++) {
    const off = i * RECORD_BYTES;
    records.push({
      coarseLabel: buf[off],
      fineLabel: buf[off + 1],
      pixels: new Uint8Array(buf.subarray(off + 2, off + RECORD_BYTES)),
    });
  }
  return records;
}

/** BT.601 luminance, scaled to [0, 1], as a row-major 32x32 plane. */
export function toLuminance(record: CifarRecord): Float32Array {
  const n = IMAGE_SIDE * IMAGE_SIDE;
  const out = new Float32Array(n);
  for (let i = 0; i < n; i++) {
    const r = record.pixels[i];
    const g = record.pixels[n + i];
    const b = record.pixels[2 * n + i];
    out[i] = (0.299 * r + 0.587 * g + 0.114 * b) / 255;
  }
  return out;
}

/** RGB in [0,1], NHWC-ordered, for feeding the network. */
export function toRgbTensorData(record: CifarRecord): Float32Array {
  const n = IMAGE_SIDE * IMAGE_SIDE;
  const out = new Float32Array(n * 3);
  for (let i = 0; i < n; i++) {
    out[3 * i] = record.pixels[i] / 255;
    out[3 * i + 1] = record.pixels[n + i] / 255;
    out[3 * i + 2] = record.pixels[2 * n + i] / 255;
  }
  return out;
}
