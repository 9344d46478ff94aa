/**
 * Wire protocol shapes for the expansion oracle.
 *
 * Every message is one line of JSON.  A request carries a numeric id,
 * the field characteristic, the variable count, the truncation width,
 * the corner terms of the current universe, and the truncated reducer
 * polynomials.  A response echoes the id and proposes expansion pairs
 * (variable index, target leading term).  Unknown request fields are
 * ignored.
 */

export type ExpansionPair = [number, number[]];

export interface OracleRequest {
  id: number;
  p: number;
  n: number;
  l: number;
  universe_corners: number[][];
  generators: [number, number[]][][];
}

export interface OracleResponse {
  id: number | null;
  pairs: ExpansionPair[];
  error?: string;
}

function isExponentVector(value: unknown): value is number[] {
  return (
    Array.isArray(value) &&
    value.every((e) => typeof e === "number" && Number.isInteger(e) && e >= 0)
  );
}

function isSerializedPolynomial(value: unknown): boolean {
  return (
    Array.isArray(value) &&
    value.every(
      (m) =>
        Array.isArray(m) &&
        m.length === 2 &&
        typeof m[0] === "number" &&
        isExponentVector(m[1])
    )
  );
}

/** Extract the id of a parsed message, or null when it is unusable. */
export function requestId(msg: unknown): number | null {
  if (typeof msg !== "object" || msg === null) return null;
  const id = (msg as { id?: unknown }).id;
  return typeof id === "number" && Number.isInteger(id) && id >= 0 ? id : null;
}

/** Check the fields the backends rely on; sizes are not cross-validated. */
export function validateRequest(msg: unknown): msg is OracleRequest {
  if (requestId(msg) === null) return false;
  const req = msg as Record<string, unknown>;
  return (
    typeof req.p === "number" &&
    typeof req.n === "number" &&
    typeof req.l === "number" &&
    Array.isArray(req.universe_corners) &&
    req.universe_corners.every(isExponentVector) &&
    Array.isArray(req.generators) &&
    req.generators.every(isSerializedPolynomial)
  );
}

/**
 * Canonical replay-lookup key for an oracle-visible state.  The byte
 * layout matches compact JSON of [universe_corners, generators] so keys
 * computed here line up with keys computed by the engine.
 */
export function stateKey(
  universeCorners: number[][],
  generators: [number, number[]][][]
): string {
  return JSON.stringify([universeCorners, generators]);
}

export function encodeResponse(response: OracleResponse): string {
  return JSON.stringify(response);
}
