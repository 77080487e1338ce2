/**
 * Command line entry point.
 *
 * Usage:
 *   node dist/cli.js --kind front --input mop1_dir --input mop2_dir --out front.svg
 *   node dist/cli.js --kind surface --input sweep_dir --quantity u1+u2 --out surf.svg
 *
 * --input may repeat; the front kind draws one curve per input directory.
 */

import { render, FigureSpec, FigureKind } from "./figures.js";

const KINDS: FigureKind[] = ["front", "dynamics", "slice", "surface"];

export function parseArgs(argv: string[]): FigureSpec {
  let kind: FigureKind | undefined;
  const inputs: string[] = [];
  let quantity: string | undefined;
  let output: string | undefined;
  let format = "svg";

  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    const next = (): string => {
      i++;
      if (i >= argv.length) throw new Error(`${arg} needs a value`);
      return argv[i];
    };
    switch (arg) {
      case "--kind": {
        const v = next();
        if (!KINDS.includes(v as FigureKind)) {
          throw new Error(`unknown kind "${v}" (have: ${KINDS.join(", ")})`);
        }
        kind = v as FigureKind;
        break;
      }
      case "--input":
        inputs.push(next());
        break;
      case "--quantity":
        quantity = next();
        break;
      case "--out":
        output = next();
        break;
      case "--format":
        format = next();
        break;
      default:
        throw new Error(`unknown argument "${arg}"`);
    }
  }
  if (!kind) throw new Error("--kind is required");
  if (inputs.length === 0) throw new Error("--input is required");
  if (!output) throw new Error("--out is required");
  return { kind, inputs, quantity, output, format };
}

export function main(argv: string[]): number {
  let spec: FigureSpec;
  try {
    spec = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const out = render(spec);
    console.log(out);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
  return 0;
}

if (process.argv[1] && process.argv[1].endsWith("cli.js")) {
  process.exit(main(process.argv.slice(2)));
}
