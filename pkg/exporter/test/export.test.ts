import { spawnSync } from "child_process";
import * as fs from "fs";
import * as os from "os";
import * as path from "path";

import { afterAll, describe, expect, it } from "vitest";

import { RECORD_BYTES } from "../src/cifar";
import { decodeNpy } from "../src/npy";
import { parseArgs, runExport } from "../src/export";

const tmp = fs.mkdtempSync(path.join(os.tmpdir(), "export-"));
afterAll(() => fs.rmSync(tmp, { recursive: true, force: true }));

function fixtureBin(records: number, seed = 12345): string {
  let s = seed;
  const rand = () => (s = (s * 1103515245 + 12345) & 0x7fffffff) % 256;
  const buf = Buffer.alloc(records * RECORD_BYTES);
  for (let i = 0; i < buf.length; i++) buf[i] = rand();
  const file = path.join(tmp, `fixture${records}_${seed}.bin`);
  fs.writeFileSync(file, buf);
  return file;
}

function opts(overrides: Record<string, unknown> = {}) {
  return {
    dataset: "cifar100",
    model: "wrn16x2",
    randomInit: true,
    seed: 1,
    taps: [1, 2, 3],
    count: 2,
    out: path.join(tmp, "out"),
    data: fixtureBin(4),
    channelMean: false,
    imagesOnly: false,
    batchSize: 8,
    ...overrides,
  };
}

describe("argument parsing", () => {
  it("parses the documented grammar", () => {
    const parsed = parseArgs([
      "export", "--dataset", "cifar100", "--model", "wrn28x4",
      "--random-init", "--seed", "3", "--taps", "1,2,3",
      "--count", "5", "--out", "/tmp/x",
    ]);
    expect(parsed.model).toBe("wrn28x4");
    expect(parsed.taps).toEqual([1, 2, 3]);
    expect(parsed.seed).toBe(3);
  });

  it("rejects checkpoint combined with random-init, naming both", () => {
    expect(() =>
      parseArgs([
        "export", "--dataset", "cifar100", "--checkpoint", "c", "--random-init",
        "--count", "1", "--out", "/tmp/x",
      ]),
    ).toThrow(/--checkpoint and --random-init/);
  });
});

describe("export pipeline", () => {
  it("writes images, per-tap activations, and a manifest", async () => {
    const out = path.join(tmp, "full");
    const code = await runExport(opts({ out }) as never);
    expect(code).toBe(0);

    const manifest = JSON.parse(
      fs.readFileSync(path.join(out, "manifest.json"), "utf-8"),
    );
    expect(manifest.version).toBe(1);
    const images = manifest.items.filter((i: { kind: string }) => i.kind === "image");
    const acts = manifest.items.filter((i: { kind: string }) => i.kind === "activation");
    expect(images.length).toBe(2);
    expect(acts.length).toBe(6);
    expect(images[0].layer).toBeUndefined();
    expect(new Set(acts.map((a: { layer: number }) => a.layer))).toEqual(
      new Set([1, 2, 3]),
    );

    // stage widths for wrn16x2: 32/64/128 channels at 32/16/8 pixels
    const byLayer = Object.fromEntries(
      acts.map((a: { layer: number; shape: number[] }) => [a.layer, a.shape]),
    );
    expect(byLayer[1]).toEqual([32, 32, 32]);
    expect(byLayer[2]).toEqual([64, 16, 16]);
    expect(byLayer[3]).toEqual([128, 8, 8]);

    for (const item of manifest.items) {
      const arr = decodeNpy(fs.readFileSync(path.join(out, item.path)));
      expect(arr.shape).toEqual(item.shape);
      for (const v of arr.data) expect(Number.isFinite(v)).toBe(true);
    }
  });

  it("is byte-deterministic for a fixed seed", async () => {
    const a = path.join(tmp, "det-a");
    const b = path.join(tmp, "det-b");
    expect(await runExport(opts({ out: a }) as never)).toBe(0);
    expect(await runExport(opts({ out: b }) as never)).toBe(0);
    for (const name of fs.readdirSync(a).sort()) {
      expect(fs.readFileSync(path.join(a, name)).equals(
        fs.readFileSync(path.join(b, name)),
      )).toBe(true);
    }
  });

  it("channel-mean mode emits 2D activation maps", async () => {
    const out = path.join(tmp, "mean");
    expect(
      await runExport(opts({ out, channelMean: true, taps: [3], count: 1 }) as never),
    ).toBe(0);
    const manifest = JSON.parse(
      fs.readFileSync(path.join(out, "manifest.json"), "utf-8"),
    );
    const act = manifest.items.find((i: { kind: string }) => i.kind === "activation");
    expect(act.shape).toEqual([8, 8]);
  });

  it("images-only mode skips the model entirely", async () => {
    const out = path.join(tmp, "imgs");
    expect(await runExport(opts({ out, imagesOnly: true }) as never)).toBe(0);
    const manifest = JSON.parse(
      fs.readFileSync(path.join(out, "manifest.json"), "utf-8"),
    );
    expect(manifest.items.every((i: { kind: string }) => i.kind === "image")).toBe(true);
  });

  it("fails with a message when the dataset file is missing", async () => {
    const code = await runExport(
      opts({ data: path.join(tmp, "nowhere.bin") }) as never,
    );
    expect(code).toBe(1);
  });

  it("fails when more samples are requested than the file holds", async () => {
    const code = await runExport(opts({ count: 99 }) as never);
    expect(code).toBe(1);
  });
});

describe("interchange with the analysis CLI", () => {
  const probe = spawnSync("spectral-stats", ["--version"], { encoding: "utf-8" });
  const cliAvailable = probe.status === 0;

  it.skipIf(!cliAvailable)(
    "exported manifest feeds spectral-stats spectrum/fit",
    async () => {
      const out = path.join(tmp, "interop");
      expect(await runExport(opts({ out, count: 3, data: fixtureBin(3, 999) }) as never)).toBe(0);

      const csv = path.join(out, "images.csv");
      const run = spawnSync(
        "spectral-stats",
        ["spectrum", "--input", path.join(out, "manifest.json"),
         "--kind", "image", "--output", csv],
        { encoding: "utf-8" },
      );
      expect(run.status).toBe(0);
      const lines = fs.readFileSync(csv, "utf-8").trim().split("\n");
      expect(lines[0]).toBe("k,power,count");
      expect(lines.length - 1).toBe(16); // floor(32/2) bins

      const tapCsv = path.join(out, "tap3.csv");
      const tapRun = spawnSync(
        "spectral-stats",
        ["spectrum", "--input", path.join(out, "manifest.json"),
         "--kind", "activation", "--layer", "3", "--output", tapCsv],
        { encoding: "utf-8" },
      );
      expect(tapRun.status).toBe(0);
      expect(fs.readFileSync(tapCsv, "utf-8").trim().split("\n").length - 1).toBe(4);
    },
  );
});
