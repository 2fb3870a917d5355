import { execFileSync } from "node:child_process";

/** Run a batch CLI subcommand and parse its JSON stdout. */
export function runCli(args: string[]): any {
  const stdout = execFileSync("python3", ["-m", "marathonkit.cli", ...args], {
    encoding: "utf8",
  });
  return JSON.parse(stdout);
}
