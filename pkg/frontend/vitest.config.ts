import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "happy-dom",
    include: ["tests/**/*.test.ts"],
    // the end-to-end test drives a real review session over HTTP
    testTimeout: 60_000,
    hookTimeout: 60_000,
  },
});
