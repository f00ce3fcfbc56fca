#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { renderFig1 } from "./fig1.js";
import { renderFig2 } from "./fig2.js";

export async function run(argv: string[]): Promise<number> {
  const args = await yargs(argv)
    .usage("render --fig1 <dir> [--single <csv>] --out <path>\nrender --fig2 <dir> --sweep <file> --out <path>")
    .option("fig1", { type: "string", describe: "fig1 output directory" })
    .option("fig2", { type: "string", describe: "fig2 output directory" })
    .option("sweep", { type: "string", describe: "beta-sweep CSV (fig2 mode)" })
    .option("single", { type: "string", describe: "render one fig1 run as a single panel" })
    .option("out", { type: "string", demandOption: true, describe: "output SVG path" })
    .conflicts("fig1", "fig2")
    .strict()
    .parse();

  try {
    if (args.fig1 !== undefined) {
      renderFig1(args.fig1, args.out, args.single);
    } else if (args.fig2 !== undefined) {
      if (args.sweep === undefined) {
        throw new Error("--fig2 requires --sweep <file>");
      }
      renderFig2(args.fig2, args.sweep, args.out);
    } else {
      throw new Error("one of --fig1 or --fig2 is required");
    }
  } catch (err) {
    console.error(`render: ${err instanceof Error ? err.message : err}`);
    return 1;
  }
  console.log(`wrote ${args.out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  run(hideBin(process.argv)).then((code) => {
    process.exitCode = code;
  });
}
