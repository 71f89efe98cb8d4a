// Wire protocol v1: newline-delimited JSON over a websocket text stream.
// One frame message out, exactly one prediction or error message back.

export const LANDMARK_COUNT = 21;

export const ERROR_CODES = [
  "MALFORMED",
  "BAD_LANDMARK_COUNT",
  "DEGENERATE_HAND",
  "NON_FINITE",
] as const;

export type ErrorCode = (typeof ERROR_CODES)[number];

export interface FrameMessage {
  type: "frame";
  id: number;
  landmarks: [number, number][];
}

export interface PredictionMessage {
  type: "prediction";
  id: number | null;
  label: string;
  confidence: number;
  probs: number[];
}

export interface ErrorMessage {
  type: "error";
  id: number | null;
  code: ErrorCode;
  message: string;
}

export type ServerMessage = PredictionMessage | ErrorMessage;

// ---- Guards

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

function isFiniteNumber(value: unknown): value is number {
  return typeof value === "number" && Number.isFinite(value);
}

function isIdField(value: unknown): value is number | null {
  return value === null || (typeof value === "number" && Number.isInteger(value));
}

function isCoordinatePair(value: unknown): value is [number, number] {
  return (
    Array.isArray(value) &&
    value.length === 2 &&
    isFiniteNumber(value[0]) &&
    isFiniteNumber(value[1])
  );
}

export function isFrameMessage(value: unknown): value is FrameMessage {
  if (!isRecord(value)) return false;
  if (value.type !== "frame") return false;
  if (typeof value.id !== "number" || !Number.isInteger(value.id)) return false;
  const landmarks = value.landmarks;
  if (!Array.isArray(landmarks) || landmarks.length !== LANDMARK_COUNT) return false;
  return landmarks.every(isCoordinatePair);
}

function isPredictionMessage(value: Record<string, unknown>): value is PredictionMessage & Record<string, unknown> {
  return (
    isIdField(value.id) &&
    typeof value.label === "string" &&
    value.label.length === 1 &&
    isFiniteNumber(value.confidence) &&
    Array.isArray(value.probs) &&
    value.probs.every(isFiniteNumber)
  );
}

function isErrorMessage(value: Record<string, unknown>): value is ErrorMessage & Record<string, unknown> {
  return (
    isIdField(value.id) &&
    typeof value.code === "string" &&
    (ERROR_CODES as readonly string[]).includes(value.code) &&
    typeof value.message === "string"
  );
}

// ---- Building and parsing

export function buildFrameMessage(id: number, landmarks: [number, number][]): FrameMessage {
  const message: FrameMessage = { type: "frame", id, landmarks };
  if (!isFrameMessage(message)) {
    throw new Error(`refusing to build an invalid frame message (id ${id})`);
  }
  return message;
}

export function encodeFrameMessage(message: FrameMessage): string {
  return JSON.stringify(message) + "\n";
}

// Returns null for anything that does not validate; callers log and drop.
export function parseServerMessage(text: string): ServerMessage | null {
  let value: unknown;
  try {
    value = JSON.parse(text);
  } catch {
    return null;
  }
  if (!isRecord(value)) return null;
  if (value.type === "prediction" && isPredictionMessage(value)) {
    return {
      type: "prediction",
      id: value.id,
      label: value.label,
      confidence: value.confidence,
      probs: value.probs,
    };
  }
  if (value.type === "error" && isErrorMessage(value)) {
    return {
      type: "error",
      id: value.id,
      code: value.code,
      message: value.message,
    };
  }
  return null;
}
