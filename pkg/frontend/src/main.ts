import { Api } from "./api.js";
import { mountConsole } from "./console.js";

const params = new URLSearchParams(window.location.search);
const base = params.get("api") ?? "http://localhost:8080";
const root = document.getElementById("app");
if (root) {
  mountConsole(root, new Api(base)).refreshScenarios();
}
