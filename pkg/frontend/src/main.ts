/**
 * CLI: render hybridcond CSV output into SVG figure panels.
 *
 *   node dist/main.js --input <dir> --figure fig1 [--out <dir>] [--format svg]
 *
 * Exit codes: 0 success, 2 bad arguments or unknown figure, 3 input error.
 */

import { EmptyInput, MissingColumn } from "./csv";
import { MissingInput, UnknownFigure, renderFigure, writePanels } from "./render";

interface Args {
  input: string;
  figure: string;
  out: string;
  format: string;
}

function parseArgs(argv: string[]): Args {
  const args: Record<string, string> = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (!key.startsWith("--") || value === undefined) {
      throw new Error(`bad argument pair: ${key} ${value ?? ""}`);
    }
    args[key.slice(2)] = value;
  }
  if (!args.input || !args.figure) {
    throw new Error("usage: --input <dir> --figure <figN> [--out <dir>] [--format svg]");
  }
  return {
    input: args.input,
    figure: args.figure,
    out: args.out ?? "figures",
    format: (args.format ?? "svg").toLowerCase(),
  };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(String(err instanceof Error ? err.message : err));
    return 2;
  }
  if (args.format !== "svg") {
    console.error(
      `format "${args.format}" is not supported in this build; use --format svg`,
    );
    return 2;
  }
  try {
    const panels = renderFigure(args.figure, args.input);
    for (const written of writePanels(panels, args.out)) {
      console.log(written);
    }
    return 0;
  } catch (err) {
    if (err instanceof UnknownFigure) {
      console.error(String(err.message));
      return 2;
    }
    if (err instanceof MissingInput || err instanceof EmptyInput || err instanceof MissingColumn) {
      console.error(String(err.message));
      return 3;
    }
    throw err;
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)));
}
