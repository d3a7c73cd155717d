import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["test/**/*.test.ts"],
    testTimeout: 180_000, // pure-JS model forwards are slow
    hookTimeout: 180_000,
  },
});
