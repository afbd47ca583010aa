import { createApp } from "./app.js";
import { ApiClient } from "./client.js";

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const app = createApp(root, new ApiClient(""));
void app.start();
