// End-to-end: spawn the recognition server on a free port, replay the
// recorded tracker session through the real capture -> websocket -> smoothing
// -> commit pipeline, and check throughput plus the letters that come back.

import { ChildProcess, spawn } from "node:child_process";
import { once } from "node:events";
import { readFileSync } from "node:fs";
import net from "node:net";
import { fileURLToPath } from "node:url";
import WebSocket from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { CaptureLoop } from "../src/capture.js";
import { CommitTracker } from "../src/commit.js";
import { PredictionMessage, ServerMessage } from "../src/protocol.js";
import { DEFAULT_WINDOW_SIZE, LabelWindow, smoothMajority } from "../src/smoothing.js";
import { FixtureRecording, FixtureTracker } from "../src/tracker.js";
import { StreamClient, WebSocketLike } from "../src/wsclient.js";

const MODEL_PATH = fileURLToPath(new URL("../fixtures/model.json", import.meta.url));
const RECORDING_PATH = fileURLToPath(new URL("../fixtures/landmarks.json", import.meta.url));

const PYTHON_SHIM = "import sys; from fingerspell.cli import main; sys.exit(main(sys.argv[1:]))";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const probe = net.createServer();
    probe.once("error", reject);
    probe.listen(0, "127.0.0.1", () => {
      const address = probe.address() as net.AddressInfo;
      probe.close(() => resolve(address.port));
    });
  });
}

function waitForPort(port: number, timeoutMs: number): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  return new Promise((resolve, reject) => {
    const attempt = () => {
      const socket = net.connect(port, "127.0.0.1");
      socket.once("connect", () => {
        socket.end();
        resolve();
      });
      socket.once("error", () => {
        socket.destroy();
        if (Date.now() > deadline) {
          reject(new Error(`server did not open port ${port} within ${timeoutMs}ms`));
        } else {
          setTimeout(attempt, 100);
        }
      });
    };
    attempt();
  });
}

describe("live server round trip", () => {
  let server: ChildProcess;
  let serverStderr = "";
  let port: number;

  beforeAll(async () => {
    port = await freePort();
    server = spawn(
      "python3",
      ["-c", PYTHON_SHIM, "serve", "--model", MODEL_PATH, "--port", String(port)],
      { stdio: ["ignore", "ignore", "pipe"] },
    );
    server.stderr!.on("data", (chunk) => {
      serverStderr += String(chunk);
    });
    try {
      await waitForPort(port, 15_000);
    } catch (err) {
      throw new Error(`${err}\nserver stderr:\n${serverStderr}`);
    }
  }, 20_000);

  afterAll(async () => {
    if (server.exitCode === null) {
      server.kill("SIGINT");
      const [code] = (await once(server, "exit")) as [number | null];
      // SIGINT is the normal shutdown path and must exit cleanly.
      expect(code).toBe(0);
    }
  });

  it("streams the recording and gets ordered predictions back fast enough", { timeout: 30_000 }, async () => {
    const recording = JSON.parse(readFileSync(RECORDING_PATH, "utf8")) as FixtureRecording;

    const capture = new CaptureLoop();
    const recent = new LabelWindow(DEFAULT_WINDOW_SIZE);
    const commits = new CommitTracker();
    const committed: string[] = [];
    const predictions: PredictionMessage[] = [];
    const droppedTexts: string[] = [];
    const statuses: string[] = [];

    const handleMessage = (message: ServerMessage) => {
      if (message.type === "error") {
        commits.update(null, Date.now());
        return;
      }
      predictions.push(message);
      recent.push(message.label);
      const stable = smoothMajority(recent.labels(), recent.size);
      const update = commits.update(stable, Date.now());
      if (update.committed !== null) committed.push(update.committed);
    };

    const client = new StreamClient({
      url: `ws://127.0.0.1:${port}`,
      makeSocket: (url) => new WebSocket(url) as unknown as WebSocketLike,
      onMessage: handleMessage,
      onDrop: (text) => droppedTexts.push(text),
      onStatus: (s) => statuses.push(s),
      queueCapacity: 64,
    });
    client.connect();

    let firstSentAt = 0;
    let lastPredictionAt = 0;
    const replayDone = new Promise<void>((resolve) => {
      const tracker = new FixtureTracker(recording, {
        onFrame: (frame) => {
          const message = capture.handleTrackerFrame(frame);
          if (message === null) {
            commits.update(null, Date.now());
            return;
          }
          if (firstSentAt === 0) firstSentAt = Date.now();
          client.sendFrame(message);
        },
        onStatus: (text) => {
          if (text === "recording finished") resolve();
        },
      });
      void tracker.start();
    });

    await replayDone;
    const replayEndedAt = Date.now();
    // Allow in-flight responses to land.
    const emitted = capture.snapshot().emitted;
    const repliesSettled = Date.now() + 3000;
    while (predictions.length < emitted && Date.now() < repliesSettled) {
      await new Promise((resolve) => setTimeout(resolve, 50));
    }
    lastPredictionAt = Date.now();
    client.close();

    // Every non-skipped frame got exactly one reply, in order, no junk.
    expect(droppedTexts).toEqual([]);
    expect(statuses).toContain("open");
    expect(emitted).toBe(90);
    expect(predictions.length).toBe(emitted);
    expect(predictions.map((p) => p.id)).toEqual(Array.from({ length: emitted }, (_, i) => i));

    // Throughput: frames went out at 15+/s and the whole exchange,
    // including every reply, sustained 15+ predictions/s.
    const emitSeconds = (replayEndedAt - firstSentAt) / 1000;
    expect(emitted / emitSeconds).toBeGreaterThanOrEqual(15);
    expect(capture.rate.value).toBeGreaterThanOrEqual(15);
    const elapsedSeconds = (lastPredictionAt - firstSentAt) / 1000;
    const rate = predictions.length / elapsedSeconds;
    expect(rate).toBeGreaterThanOrEqual(15);

    // The recording shows A then B; the classifier should agree nearly
    // everywhere (ids 0-44 are A frames, 45-89 are B frames).
    const aLabels = predictions.filter((p) => p.id !== null && p.id < 45).map((p) => p.label);
    const bLabels = predictions.filter((p) => p.id !== null && p.id >= 45).map((p) => p.label);
    const aShare = aLabels.filter((l) => l === "A").length / aLabels.length;
    const bShare = bLabels.filter((l) => l === "B").length / bLabels.length;
    expect(aShare).toBeGreaterThanOrEqual(0.9);
    expect(bShare).toBeGreaterThanOrEqual(0.9);

    // Confidences and probability vectors are well formed.
    for (const p of predictions) {
      expect(p.probs.length).toBe(26);
      const sum = p.probs.reduce((acc, v) => acc + v, 0);
      expect(Math.abs(sum - 1)).toBeLessThan(1e-6);
      expect(p.confidence).toBeCloseTo(Math.max(...p.probs), 12);
    }

    // The smoothing + commit pipeline typed the two letters.
    expect(committed).toEqual(["A", "B"]);
  });
});
