// Websocket client for the recognition stream. Owns reconnect policy and
// the bounded outbound queue; parsing and validation live in protocol.ts.

import {
  FrameMessage,
  ServerMessage,
  encodeFrameMessage,
  isFrameMessage,
  parseServerMessage,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed" | "error";

// Minimal surface shared by the browser WebSocket and the ws package, so
// tests and the browser inject the same client with different constructors.
export interface WebSocketLike {
  readyState: number;
  send(data: string): void;
  close(): void;
  onopen: (() => void) | null;
  onmessage: ((event: { data: unknown }) => void) | null;
  onclose: (() => void) | null;
  onerror: (() => void) | null;
}

export type WebSocketFactory = (url: string) => WebSocketLike;

const WS_OPEN = 1;

// ---- Outbound queue

// Bounded FIFO that discards the oldest entry on overflow. Frames are only
// useful fresh, so when the link stalls we keep the newest ones.
export class DropOldestQueue<T> {
  private items: T[] = [];
  private droppedCount = 0;

  constructor(readonly capacity: number) {
    if (!Number.isInteger(capacity) || capacity < 1) {
      throw new Error(`queue capacity must be a positive integer, got ${capacity}`);
    }
  }

  push(item: T): void {
    if (this.items.length >= this.capacity) {
      this.items.shift();
      this.droppedCount += 1;
    }
    this.items.push(item);
  }

  drain(): T[] {
    const out = this.items;
    this.items = [];
    return out;
  }

  get length(): number {
    return this.items.length;
  }

  get dropped(): number {
    return this.droppedCount;
  }
}

// ---- Reconnect policy

export const RECONNECT_BASE_DELAY_MS = 500;
export const RECONNECT_MAX_DELAY_MS = 10_000;

// Exponential backoff with +/-25% jitter so a room of clients does not
// reconnect in lockstep.
export function reconnectDelay(
  attempt: number,
  baseMs: number = RECONNECT_BASE_DELAY_MS,
  maxMs: number = RECONNECT_MAX_DELAY_MS,
  random: () => number = Math.random,
): number {
  const capped = Math.min(baseMs * Math.pow(2, attempt), maxMs);
  const jitter = capped * 0.25 * (random() * 2 - 1);
  return Math.max(0, Math.round(capped + jitter));
}

// ---- Client

export interface StreamClientOptions {
  url: string;
  makeSocket: WebSocketFactory;
  onMessage: (message: ServerMessage) => void;
  onStatus?: (status: ConnectionStatus) => void;
  onDrop?: (text: string) => void;
  queueCapacity?: number;
  baseDelayMs?: number;
  maxDelayMs?: number;
}

export class StreamClient {
  private socket: WebSocketLike | null = null;
  private queue: DropOldestQueue<FrameMessage>;
  private attempt = 0;
  private reconnectTimer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;
  private currentStatus: ConnectionStatus = "closed";

  constructor(private readonly options: StreamClientOptions) {
    this.queue = new DropOldestQueue(options.queueCapacity ?? 30);
  }

  get status(): ConnectionStatus {
    return this.currentStatus;
  }

  get queuedFrames(): number {
    return this.queue.length;
  }

  get droppedFrames(): number {
    return this.queue.dropped;
  }

  connect(): void {
    this.stopped = false;
    this.open();
  }

  close(): void {
    this.stopped = true;
    if (this.reconnectTimer !== null) {
      clearTimeout(this.reconnectTimer);
      this.reconnectTimer = null;
    }
    const socket = this.socket;
    this.socket = null;
    if (socket !== null) {
      socket.onopen = null;
      socket.onmessage = null;
      socket.onclose = null;
      socket.onerror = null;
      socket.close();
    }
    this.setStatus("closed");
  }

  // Validates before sending; an invalid frame is a bug upstream and is
  // rejected rather than put on the wire.
  sendFrame(message: FrameMessage): void {
    if (!isFrameMessage(message)) {
      throw new Error("refusing to send an invalid frame message");
    }
    if (this.socket !== null && this.socket.readyState === WS_OPEN) {
      this.socket.send(encodeFrameMessage(message));
    } else {
      this.queue.push(message);
    }
  }

  private open(): void {
    this.setStatus("connecting");
    let socket: WebSocketLike;
    try {
      socket = this.options.makeSocket(this.options.url);
    } catch {
      this.setStatus("error");
      this.scheduleReconnect();
      return;
    }
    this.socket = socket;

    socket.onopen = () => {
      this.attempt = 0;
      this.setStatus("open");
      for (const frame of this.queue.drain()) {
        socket.send(encodeFrameMessage(frame));
      }
    };

    socket.onmessage = (event) => {
      const text = typeof event.data === "string" ? event.data : String(event.data);
      const message = parseServerMessage(text);
      if (message === null) {
        this.options.onDrop?.(text);
        return;
      }
      this.options.onMessage(message);
    };

    socket.onerror = () => {
      this.setStatus("error");
    };

    socket.onclose = () => {
      this.socket = null;
      if (this.stopped) return;
      this.setStatus("closed");
      this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    if (this.stopped || this.reconnectTimer !== null) return;
    const delay = reconnectDelay(
      this.attempt,
      this.options.baseDelayMs ?? RECONNECT_BASE_DELAY_MS,
      this.options.maxDelayMs ?? RECONNECT_MAX_DELAY_MS,
    );
    this.attempt += 1;
    this.reconnectTimer = setTimeout(() => {
      this.reconnectTimer = null;
      if (!this.stopped) this.open();
    }, delay);
  }

  private setStatus(status: ConnectionStatus): void {
    if (status === this.currentStatus) return;
    this.currentStatus = status;
    this.options.onStatus?.(status);
  }
}
