#!/usr/bin/env node
/** CLI: hetnet-amp-plot plot --kind roc|rrmse --in <csv> --out <svg> [--group keys] */

import * as fs from "node:fs";
import yargs from "yargs";
import { hideBin } from "yargs/helpers";

import { renderRoc, renderRrmse } from "./figure";
import { parseRocCsv, parseRrmseCsv, SchemaError } from "./schema";

export function runPlot(argv: {
  kind: string;
  in: string;
  out: string;
  group?: string;
}): void {
  const text = fs.readFileSync(argv.in, "utf-8");
  const groupKeys = argv.group ? argv.group.split(",").map((s) => s.trim()) : undefined;
  let svg: string;
  if (argv.kind === "roc") {
    svg = renderRoc(parseRocCsv(text), groupKeys ? { groupKeys } : {});
  } else if (argv.kind === "rrmse") {
    svg = renderRrmse(parseRrmseCsv(text), groupKeys ? { groupKeys } : {});
  } else {
    throw new Error(`unknown figure kind: ${argv.kind}`);
  }
  fs.writeFileSync(argv.out, svg);
}

export function main(args: string[]): number {
  try {
    yargs(args)
      .command(
        "plot",
        "render a harness CSV as an SVG figure",
        (y) =>
          y
            .option("kind", { choices: ["roc", "rrmse"] as const, demandOption: true })
            .option("in", { type: "string", demandOption: true })
            .option("out", { type: "string", demandOption: true })
            .option("group", { type: "string", describe: "comma-separated grouping keys" }),
        (argv) => runPlot(argv as never),
      )
      .demandCommand(1)
      .strict()
      .exitProcess(false)
      .parseSync();
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      process.stderr.write(`schema error: ${err.message}\n`);
    } else {
      process.stderr.write(`${(err as Error).message}\n`);
    }
    return 1;
  }
}

if (require.main === module) {
  process.exit(main(hideBin(process.argv)));
}
