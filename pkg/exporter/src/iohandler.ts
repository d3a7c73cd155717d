/**
 * File-based save/load for tfjs models (the browser-oriented core build
 * ships no filesystem handlers): topology + weight specs as JSON next to
 * a raw weights binary.
 */

import * as fs from "fs";
import * as path from "path";
import * as tf from "@tensorflow/tfjs";

export function fileSaveHandler(dir: string): tf.io.IOHandler {
  return {
    async save(artifacts: tf.io.ModelArtifacts): Promise<tf.io.SaveResult> {
      fs.mkdirSync(dir, { recursive: true });
      const weightData = artifacts.weightData as ArrayBuffer;
      fs.writeFileSync(path.join(dir, "weights.bin"), Buffer.from(weightData));
      const meta = {
        modelTopology: artifacts.modelTopology,
        weightSpecs: artifacts.weightSpecs,
        format: artifacts.format,
        generatedBy: artifacts.generatedBy,
        convertedBy: artifacts.convertedBy ?? null,
      };
      fs.writeFileSync(
        path.join(dir, "model.json"),
        JSON.stringify(meta, null, 2) + "\n",
      );
      return {
        modelArtifactsInfo: {
          dateSaved: new Date(0), // fixed date keeps checkpoints byte-stable
          modelTopologyType: "JSON",
        },
      };
    },
  };
}

export function fileLoadHandler(dir: string): tf.io.IOHandler {
  return {
    async load(): Promise<tf.io.ModelArtifacts> {
      const meta = JSON.parse(
        fs.readFileSync(path.join(dir, "model.json"), "utf-8"),
      );
      const weights = fs.readFileSync(path.join(dir, "weights.bin"));
      const ab = new ArrayBuffer(weights.length);
      new Uint8Array(ab).set(weights);
      return {
        modelTopology: meta.modelTopology,
        weightSpecs: meta.weightSpecs,
        weightData: ab,
        format: meta.format,
        generatedBy: meta.generatedBy,
      };
    },
  };
}

export async function saveCheckpoint(model: tf.LayersModel, dir: string) {
  await model.save(fileSaveHandler(dir));
}

export async function loadCheckpoint(dir: string): Promise<tf.LayersModel> {
  return tf.loadLayersModel(fileLoadHandler(dir));
}
