#!/usr/bin/env node
import yargs from "yargs";
import { hideBin } from "yargs/helpers";
import { loadFigureSpec } from "./figspec.js";
import { render } from "./render.js";

yargs(hideBin(process.argv))
  .scriptName("swarmhydro-figures")
  .command(
    "render",
    "render one static figure from a JSON spec file",
    (y) =>
      y.option("spec", {
        type: "string",
        demandOption: true,
        describe: "path to the figure spec JSON",
      }),
    (argv) => {
      try {
        const out = render(loadFigureSpec(argv.spec));
        console.log(out);
      } catch (err) {
        console.error(`error: ${(err as Error).message}`);
        process.exitCode = 1;
      }
    })
  .demandCommand(1)
  .strict()
  .help()
  .parse();
