import { describe, expect, it } from "vitest";

import { decodeNpy, encodeNpy } from "../src/npy";

describe("npy writer", () => {
  it("produces the exact bytes for a 4x4 float32 checkerboard", () => {
    const data = new Float32Array(16);
    for (let y = 0; y < 4; y++)
      for (let x = 0; x < 4; x++) data[y * 4 + x] = (x + y) % 2;
    const buf = encodeNpy({ shape: [4, 4], dtype: "<f4", data });

    expect(buf.subarray(0, 6).toString("latin1")).toBe("\x93NUMPY");
    expect(buf[6]).toBe(1);
    expect(buf[7]).toBe(0);
    const headerLen = buf.readUInt16LE(8);
    expect((10 + headerLen) % 64).toBe(0);
    const header = buf.subarray(10, 10 + headerLen).toString("latin1");
    expect(header).toContain("'descr': '<f4'");
    expect(header).toContain("'fortran_order': False");
    expect(header).toContain("'shape': (4, 4)");
    expect(header.endsWith("\n")).toBe(true);

    const payload = buf.subarray(10 + headerLen);
    expect(payload.length).toBe(64);
    // row 0 starts 0,1,0,1 little-endian float32
    expect(payload.readFloatLE(0)).toBe(0);
    expect(payload.readFloatLE(4)).toBe(1);
    expect(payload.readFloatLE(8)).toBe(0);
  });

  it("round-trips float32 and float64", () => {
    const f4 = new Float32Array([1.5, -2.25, 3, 4, 5, 6]);
    const a = decodeNpy(encodeNpy({ shape: [2, 3], dtype: "<f4", data: f4 }));
    expect(a.shape).toEqual([2, 3]);
    expect(Array.from(a.data)).toEqual(Array.from(f4));

    const f8 = new Float64Array([Math.PI, Math.E, 0, -1]);
    const b = decodeNpy(encodeNpy({ shape: [2, 2], dtype: "<f8", data: f8 }));
    expect(b.dtype).toBe("<f8");
    expect(Array.from(b.data)).toEqual(Array.from(f8));
  });

  it("rejects NaN payloads", () => {
    const data = new Float32Array([0, NaN, 0, 0]);
    expect(() => encodeNpy({ shape: [2, 2], dtype: "<f4", data })).toThrow(/NaN/);
  });

  it("rejects rank outside 2..4", () => {
    expect(() =>
      encodeNpy({ shape: [4], dtype: "<f4", data: new Float32Array(4) }),
    ).toThrow(/rank/);
  });

  it("rejects shape/data mismatches", () => {
    expect(() =>
      encodeNpy({ shape: [2, 3], dtype: "<f4", data: new Float32Array(4) }),
    ).toThrow(/implies/);
  });
});
