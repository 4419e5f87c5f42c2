import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    include: ["tests/**/*.test.ts"],
    // the e2e suite trains a small fixture pipeline on first run
    testTimeout: 120_000,
    hookTimeout: 180_000,
    fileParallelism: false,
  },
});
