import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    environment: "jsdom",
    globals: true,
    setupFiles: ["tests/setup.ts"],
    include: ["tests/**/*.test.ts"],
    // the e2e test boots the Python annotation service
    testTimeout: 30000,
    hookTimeout: 30000,
  },
});
