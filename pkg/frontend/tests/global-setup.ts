// Spawns a live statguide service for the integration tests.

import { type ChildProcess, spawn } from "node:child_process";

export const BASE_URL = "http://127.0.0.1:8809";

let server: ChildProcess | null = null;

async function waitForReady(url: string, tries = 60): Promise<void> {
  for (let i = 0; i < tries; i++) {
    try {
      const resp = await fetch(url + "/workflows");
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 500));
  }
  throw new Error(`service at ${url} did not come up`);
}

export async function setup(): Promise<void> {
  server = spawn("statguide", ["serve", "--listen", "127.0.0.1:8809"], {
    stdio: "ignore",
  });
  server.on("error", (err) => {
    throw new Error(`failed to start statguide serve: ${err}`);
  });
  await waitForReady(BASE_URL);
}

export async function teardown(): Promise<void> {
  if (server && !server.killed) {
    server.kill("SIGTERM");
  }
}
