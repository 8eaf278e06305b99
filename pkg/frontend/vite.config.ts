/// <reference types="vitest" />
import { defineConfig } from "vite";

export default defineConfig({
  base: "./",
  server: {
    // Local development against `minicube serve` on its default port.
    proxy: { "/api": "http://127.0.0.1:4680" },
  },
  test: {
    environment: "jsdom",
  },
});
