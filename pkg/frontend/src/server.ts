/**
 * Request handling, independent of transport.
 *
 * Every input line yields exactly one response line.  A line that is
 * not valid JSON, or that lacks a usable id or the state fields, gets
 * an error response with empty pairs; the id is echoed when it could
 * be recovered and is null otherwise.
 */

import { Backend } from "./backends.js";
import {
  OracleResponse,
  encodeResponse,
  requestId,
  validateRequest,
} from "./protocol.js";

export function handleLine(line: string, backend: Backend): string {
  let msg: unknown;
  try {
    msg = JSON.parse(line);
  } catch {
    return encodeResponse({ id: null, pairs: [], error: "invalid JSON" });
  }
  if (!validateRequest(msg)) {
    return encodeResponse({
      id: requestId(msg),
      pairs: [],
      error: "malformed request",
    });
  }
  const { pairs, error } = backend.predict(msg);
  const response: OracleResponse = { id: msg.id, pairs };
  if (error !== undefined) response.error = error;
  return encodeResponse(response);
}
