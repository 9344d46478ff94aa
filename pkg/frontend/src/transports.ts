/**
 * Transports: newline-delimited JSON over stdio or a TCP socket.
 *
 * The client keeps at most one request in flight, so responses are
 * written in arrival order with no interleaving concerns.
 */

import { createInterface } from "node:readline";
import { createServer, Socket } from "node:net";
import { WriteStream } from "node:fs";

export type LineHandler = (line: string) => string;

export async function runStdio(
  handle: LineHandler,
  log?: WriteStream
): Promise<void> {
  const rl = createInterface({ input: process.stdin });
  for await (const line of rl) {
    if (!line.trim()) continue;
    const response = handle(line);
    process.stdout.write(response + "\n");
    log?.write(response + "\n");
  }
}

export function runTcp(
  host: string,
  port: number,
  handle: LineHandler,
  log?: WriteStream
): Promise<void> {
  return new Promise((resolve, reject) => {
    const server = createServer((socket: Socket) => {
      let buffer = "";
      socket.on("data", (chunk) => {
        buffer += chunk.toString("utf-8");
        let nl;
        while ((nl = buffer.indexOf("\n")) >= 0) {
          const line = buffer.slice(0, nl);
          buffer = buffer.slice(nl + 1);
          if (!line.trim()) continue;
          const response = handle(line);
          socket.write(response + "\n");
          log?.write(response + "\n");
        }
      });
      socket.on("error", () => socket.destroy());
    });
    server.on("error", reject);
    server.listen(port, host, () => {
      process.stderr.write(`listening on ${host}:${port}\n`);
    });
  });
}
