/** Dataset manifest in the exact schema the analysis package loads. */

import * as fs from "fs";
import * as path from "path";

export interface ManifestItem {
  path: string;
  kind: "image" | "activation";
  shape: number[];
  layer?: number;
}

export function writeManifest(dir: string, items: ManifestItem[]): string {
  const doc = {
    version: 1,
    items: items.map((item) => {
      const entry: Record<string, unknown> = {
        path: item.path,
        kind: item.kind,
        shape: item.shape,
      };
      if (item.kind === "activation") entry.layer = item.layer;
      return entry;
    }),
  };
  const target = path.join(dir, "manifest.json");
  const tmp = target + ".tmp";
  fs.writeFileSync(tmp, JSON.stringify(doc, null, 2) + "\n");
  fs.renameSync(tmp, target);
  return target;
}
