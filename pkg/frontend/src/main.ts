/** Entry point: fetch the served bundle, validate it, build the app.
 *
 * Any failure surfaces as a visible error panel, never a blank page.
 */

import { buildApp } from "./app.js";
import { parseBundle } from "./bundle.js";

function errorPanel(root: HTMLElement, message: string): void {
  root.textContent = "";
  const panel = root.ownerDocument.createElement("div");
  panel.id = "error-panel";
  panel.textContent = message;
  root.appendChild(panel);
}

export async function load(root: HTMLElement): Promise<void> {
  let text: string;
  try {
    const response = await fetch("/api/bundle");
    if (!response.ok) {
      errorPanel(root, `bundle request failed: HTTP ${response.status} `
        + response.statusText);
      return;
    }
    text = await response.text();
  } catch (error) {
    errorPanel(root, `bundle request failed: ${String(error)}`);
    return;
  }
  try {
    buildApp(parseBundle(text), root);
  } catch (error) {
    errorPanel(root, String(error));
  }
}

const mount = typeof document !== "undefined"
  ? document.getElementById("app") : null;
if (mount) {
  void load(mount);
}
