/**
 * Shared test fixtures: small sweeps produced by the solver CLI.
 *
 * The sweeps are generated once into test/fixtures/ and reused across runs;
 * delete that directory to regenerate.
 */

import { execFileSync } from "node:child_process";
import { existsSync, mkdirSync } from "node:fs";
import { join, dirname } from "node:path";
import { fileURLToPath } from "node:url";

const HERE = dirname(fileURLToPath(import.meta.url));
export const FIXTURE_ROOT = join(HERE, "fixtures");

export function sweepDir(mop: number): string {
  return join(FIXTURE_ROOT, `mop${mop}`);
}

export function ensureSweeps(): void {
  mkdirSync(FIXTURE_ROOT, { recursive: true });
  for (const mop of [1, 2, 3]) {
    const dir = sweepDir(mop);
    if (existsSync(join(dir, "front.csv"))) continue;
    execFileSync(
      "tbhiv-control",
      [
        "sweep",
        "--mop", String(mop),
        "--T", "10",
        "--n-intervals", "20",
        "--front-points", "10",
        "--budget", "2000",
        "--slice", "3",
        "--out", dir,
      ],
      { stdio: "pipe", timeout: 600_000 },
    );
  }
}
