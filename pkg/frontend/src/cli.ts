#!/usr/bin/env node
import { loadPanelSpec, renderPanel } from "./panels.js";
import { SchemaError } from "./csv.js";

function usage(): void {
  console.error("usage: decolab-figures render <panelspec.json> [--dpi N]");
}

export function main(argv: string[]): number {
  if (argv.length < 2 || argv[0] !== "render") {
    usage();
    return 2;
  }
  const specPath = argv[1];
  let dpi = 1;
  for (let i = 2; i < argv.length; i++) {
    if (argv[i] === "--dpi" && i + 1 < argv.length) {
      dpi = Number(argv[i + 1]);
      if (!Number.isFinite(dpi) || dpi < 1) {
        console.error(`bad --dpi value: ${argv[i + 1]}`);
        return 2;
      }
      i++;
    } else {
      console.error(`unknown argument: ${argv[i]}`);
      usage();
      return 2;
    }
  }
  try {
    const out = renderPanel(loadPanelSpec(specPath), dpi);
    console.log(out);
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(`SchemaError: ${err.message}`);
    } else {
      console.error(`${(err as Error).name}: ${(err as Error).message}`);
    }
    return 1;
  }
}

const entry = process.argv[1] ?? "";
if (entry.endsWith("cli.js") || entry.endsWith("cli.ts")) {
  process.exit(main(process.argv.slice(2)));
}
