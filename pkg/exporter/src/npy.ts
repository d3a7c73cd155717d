/**
 * Minimal NPY v1.0 writer/reader for the interchange subset the analysis
 * package accepts: little-endian float32/float64, C order, rank 2-4.
 */

const MAGIC = Buffer.from("\x93NUMPY", "latin1");

export type NpyDtype = "<f4" | "<f8";

export interface NpyArray {
  shape: number[];
  dtype: NpyDtype;
  data: Float32Array | Float64Array;
}

function headerFor(dtype: NpyDtype, shape: number[]): Buffer {
  const shapeRepr = `(${shape.join(", ")})`;
  let body = `{'descr': '${dtype}', 'fortran_order': False, 'shape': ${shapeRepr}, }`;
  // magic(6) + version(2) + length(2) + body, space-padded to a 64-byte multiple
  const unpadded = 10 + body.length + 1;
  const pad = (64 - (unpadded % 64)) % 64;
  body = body + " ".repeat(pad) + "\n";
  const out = Buffer.alloc(10 + body.length);
  MAGIC.copy(out, 0);
  out[6] = 1;
  out[7] = 0;
  out.writeUInt16LE(body.length, 8);
  out.write(body, 10, "latin1");
  return out;
}

export function encodeNpy(arr: NpyArray): Buffer {
  const count = arr.shape.reduce((a, b) => a * b, 1);
  if (count !== arr.data.length) {
    throw new Error(`shape [${arr.shape}] implies ${count} values, got ${arr.data.length}`);
  }
  if (arr.shape.length < 2 || arr.shape.length > 4) {
    throw new Error(`rank ${arr.shape.length} outside supported range 2..4`);
  }
  for (const v of arr.data) {
    if (!Number.isFinite(v)) throw new Error("refusing to write NaN/Inf values");
  }
  const header = headerFor(arr.dtype, arr.shape);
  const payload = Buffer.from(arr.data.buffer, arr.data.byteOffset, arr.data.byteLength);
  return Buffer.concat([header, payload]);
}

export function decodeNpy(buf: Buffer): NpyArray {
  if (buf.length < 10 || !buf.subarray(0, 6).equals(MAGIC)) {
    throw new Error("missing NPY magic string");
  }
  if (buf[6] !== 1 || buf[7] !== 0) {
    throw new Error(`unsupported NPY version ${buf[6]}.${buf[7]}`);
  }
  const headerLen = buf.readUInt16LE(8);
  const headerText = buf.subarray(10, 10 + headerLen).toString("latin1");
  const descr = /'descr':\s*'([^']+)'/.exec(headerText)?.[1];
  const fortran = /'fortran_order':\s*(True|False)/.exec(headerText)?.[1];
  const shapeText = /'shape':\s*\(([^)]*)\)/.exec(headerText)?.[1];
  if (!descr || !fortran || shapeText === undefined) {
    throw new Error(`unparseable header: ${headerText.trim()}`);
  }
  if (fortran !== "False") throw new Error("fortran-order data not supported");
  if (descr !== "<f4" && descr !== "<f8") throw new Error(`dtype ${descr} not supported`);
  const shape = shapeText
    .split(",")
    .map((s) => s.trim())
    .filter((s) => s.length > 0)
    .map((s) => parseInt(s, 10));
  const count = shape.reduce((a, b) => a * b, 1);
  const payload = buf.subarray(10 + headerLen);
  const itemsize = descr === "<f4" ? 4 : 8;
  if (payload.length !== count * itemsize) {
    throw new Error(`payload is ${payload.length} bytes, header implies ${count * itemsize}`);
  }
  // fresh ArrayBuffer: node's pooled Buffers give no alignment guarantee
  const ab = new ArrayBuffer(payload.length);
  new Uint8Array(ab).set(payload);
  const data = descr === "<f4" ? new Float32Array(ab) : new Float64Array(ab);
  return { shape, dtype: descr, data };
}
