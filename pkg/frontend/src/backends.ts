/**
 * Prediction backends.
 *
 * A backend turns a validated request into expansion pairs.  The replay
 * backend answers from a recorded sample file and flags states it has
 * never seen; the full backend proposes every (variable, leading term)
 * product and never misses.
 */

import { readFileSync } from "node:fs";
import { ExpansionPair, OracleRequest, stateKey } from "./protocol.js";

export interface Prediction {
  pairs: ExpansionPair[];
  error?: string;
}

export interface Backend {
  predict(request: OracleRequest): Prediction;
}

interface ReplaySample {
  universe_corners: number[][];
  generators: [number, number[]][][];
  labels: ExpansionPair[];
}

export class ReplayBackend implements Backend {
  private index = new Map<string, ExpansionPair[]>();

  constructor(samples: ReplaySample[]) {
    for (const s of samples) {
      this.index.set(stateKey(s.universe_corners, s.generators), s.labels);
    }
  }

  static fromFile(path: string): ReplayBackend {
    const samples: ReplaySample[] = [];
    const text = readFileSync(path, "utf-8");
    for (const [i, raw] of text.split("\n").entries()) {
      const line = raw.trim();
      if (!line) continue;
      let sample: unknown;
      try {
        sample = JSON.parse(line);
      } catch (exc) {
        throw new Error(`bad sample on line ${i + 1}: ${exc}`);
      }
      const s = sample as ReplaySample;
      if (!Array.isArray(s.universe_corners) || !Array.isArray(s.generators) ||
          !Array.isArray(s.labels)) {
        throw new Error(`bad sample on line ${i + 1}: missing fields`);
      }
      samples.push(s);
    }
    return new ReplayBackend(samples);
  }

  get size(): number {
    return this.index.size;
  }

  predict(request: OracleRequest): Prediction {
    const pairs = this.index.get(
      stateKey(request.universe_corners, request.generators)
    );
    if (pairs === undefined) {
      return { pairs: [], error: "unknown state" };
    }
    return { pairs };
  }
}

export class FullBackend implements Backend {
  predict(request: OracleRequest): Prediction {
    const pairs: ExpansionPair[] = [];
    for (const poly of request.generators) {
      if (poly.length === 0) continue;
      const leading = poly[0][1];
      for (let v = 1; v <= request.n; v++) {
        pairs.push([v, leading]);
      }
    }
    return { pairs };
  }
}

/** Parse a backend argument: "full" or "replay:PATH". */
export function makeBackend(arg: string): Backend {
  if (arg === "full") return new FullBackend();
  if (arg.startsWith("replay:")) {
    return ReplayBackend.fromFile(arg.slice("replay:".length));
  }
  throw new Error(`unknown backend ${JSON.stringify(arg)}`);
}
