/**
 * Entry point.
 *
 * Usage:
 *   node dist/main.js --backend replay:samples.jsonl
 *   node dist/main.js --backend full --transport 127.0.0.1:9041 --log out.log
 *
 * --transport is "stdio" (default) or HOST:PORT.  --backend is "full"
 * or "replay:PATH".  --log appends every response line to PATH.  Any
 * startup failure (unreadable replay file, bad arguments, port in use)
 * exits nonzero with a message on stderr.
 */

import { parseArgs } from "node:util";
import { createWriteStream, WriteStream } from "node:fs";
import { makeBackend } from "./backends.js";
import { handleLine } from "./server.js";
import { runStdio, runTcp } from "./transports.js";

async function main(): Promise<void> {
  const { values } = parseArgs({
    options: {
      transport: { type: "string", default: "stdio" },
      backend: { type: "string" },
      log: { type: "string" },
    },
  });
  if (!values.backend) {
    throw new Error("--backend full|replay:PATH is required");
  }
  const backend = makeBackend(values.backend);
  const handle = (line: string) => handleLine(line, backend);

  let log: WriteStream | undefined;
  if (values.log) {
    log = createWriteStream(values.log, { flags: "w" });
  }

  if (values.transport === "stdio") {
    await runStdio(handle, log);
    return;
  }
  const sep = values.transport.lastIndexOf(":");
  const host = values.transport.slice(0, sep);
  const port = Number(values.transport.slice(sep + 1));
  if (sep < 0 || !host || !Number.isInteger(port) || port < 0) {
    throw new Error(`--transport expects stdio or HOST:PORT, got ${values.transport}`);
  }
  await runTcp(host, port, handle, log);
}

main().catch((exc) => {
  process.stderr.write(`${exc instanceof Error ? exc.message : exc}\n`);
  process.exit(1);
});
