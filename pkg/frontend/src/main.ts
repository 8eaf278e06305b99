import { createApp } from "./app";
import { configureApi } from "./api";
import "./style.css";

// Same-origin by default; override for a dev server on another port with
// e.g. VITE_API_BASE=http://127.0.0.1:4680 npm run dev
configureApi(import.meta.env.VITE_API_BASE ?? "");

const root = document.getElementById("app");
if (!root) {
  throw new Error("missing #app mount point");
}
createApp(root);
