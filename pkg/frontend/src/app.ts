// Entry point for the browser page. Wires the tracker, capture loop,
// websocket client, smoothing window and commit tracker together, and keeps
// the DOM in sync. Everything testable lives in the imported modules.

import { CaptureLoop } from "./capture.js";
import { CommitTracker } from "./commit.js";
import { ServerMessage } from "./protocol.js";
import { DEFAULT_WINDOW_SIZE, LabelWindow, smoothMajority } from "./smoothing.js";
import {
  CameraTracker,
  FixtureRecording,
  FixtureTracker,
  HandTracker,
  TrackerFrame,
} from "./tracker.js";
import { View } from "./view.js";
import { ConnectionStatus, StreamClient, WebSocketLike } from "./wsclient.js";

interface SessionState {
  recent: LabelWindow;
  committedText: string;
  connectionStatus: ConnectionStatus;
  fpsEstimate: number;
}

function $(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el;
}

function serverUrl(params: URLSearchParams): string {
  const host = params.get("host") ?? (location.hostname || "127.0.0.1");
  const port = params.get("port") ?? "8765";
  return `ws://${host}:${port}`;
}

async function main(): Promise<void> {
  const params = new URLSearchParams(location.search);

  const view = new View({
    statusBanner: $("status-banner"),
    letterOverlay: $("letter-overlay"),
    pendingLetter: $("pending-letter"),
    committedText: $("committed-text"),
    rateLabel: $("rate-label"),
    overlayCanvas: $("overlay-canvas") as HTMLCanvasElement,
  });

  const state: SessionState = {
    recent: new LabelWindow(DEFAULT_WINDOW_SIZE),
    committedText: "",
    connectionStatus: "closed",
    fpsEstimate: 0,
  };

  const capture = new CaptureLoop();
  const commits = new CommitTracker();

  const appendCommitted = (letter: string) => {
    // Committed text holds letters and spaces only, whatever the server says.
    if (!/^[A-Z]$/.test(letter)) return;
    state.committedText += letter;
    view.setCommittedText(state.committedText);
  };

  const handleServerMessage = (message: ServerMessage) => {
    if (message.type === "error") {
      // Degenerate or rejected frames contribute no label; let the commit
      // tracker see the instability.
      const update = commits.update(null, performance.now());
      view.setPrediction(null, null);
      view.setPending(update.pending);
      if (message.code !== "DEGENERATE_HAND") {
        console.warn(`server rejected frame ${message.id}: ${message.code} ${message.message}`);
      }
      return;
    }
    state.recent.push(message.label);
    const stable = smoothMajority(state.recent.labels(), state.recent.size);
    const update = commits.update(stable, performance.now());
    view.setPrediction(message.label, message.confidence);
    view.setPending(update.pending);
    if (update.committed !== null) appendCommitted(update.committed);
  };

  const client = new StreamClient({
    url: serverUrl(params),
    makeSocket: (url) => new WebSocket(url) as unknown as WebSocketLike,
    onMessage: handleServerMessage,
    onStatus: (status) => {
      state.connectionStatus = status;
      view.setConnection(status);
    },
    onDrop: (text) => console.warn(`dropped unparseable server message: ${text.slice(0, 200)}`),
  });

  const handleTrackerFrame = (frame: TrackerFrame) => {
    const message = capture.handleTrackerFrame(frame);
    if (message === null) {
      // No usable hand in view: the stable label lapses and the overlay
      // clears, which is what starts the gap for double letters.
      const update = commits.update(null, performance.now());
      view.setPrediction(null, null);
      view.setPending(update.pending);
      view.drawLandmarks(null);
      return;
    }
    view.drawLandmarks(message.landmarks);
    client.sendFrame(message);
    state.fpsEstimate = capture.rate.value;
  };

  const trackerCallbacks = {
    onFrame: handleTrackerFrame,
    onStatus: (text: string) => view.setTrackerStatus(text),
  };

  // ?fixture=1 replays the recorded landmark file instead of the camera,
  // which makes the page demoable on machines without a webcam.
  let tracker: HandTracker;
  if (params.get("fixture") !== null) {
    const response = await fetch("./fixtures/landmarks.json");
    const recording = (await response.json()) as FixtureRecording;
    tracker = new FixtureTracker(recording, trackerCallbacks, true);
  } else {
    const video = $("camera") as HTMLVideoElement;
    tracker = new CameraTracker(video, trackerCallbacks);
  }

  $("clear-button").addEventListener("click", () => {
    state.committedText = "";
    state.recent.clear();
    view.setCommittedText("");
  });
  $("backspace-button").addEventListener("click", () => {
    state.committedText = state.committedText.slice(0, -1);
    view.setCommittedText(state.committedText);
  });
  $("space-button").addEventListener("click", () => {
    state.committedText += " ";
    view.setCommittedText(state.committedText);
  });

  setInterval(() => view.setRate(state.fpsEstimate), 500);

  client.connect();
  try {
    await tracker.start();
  } catch (err) {
    view.setTrackerStatus(`tracker failed to start: ${err}`);
  }
}

main().catch((err) => {
  console.error("startup failed", err);
  const banner = document.getElementById("status-banner");
  if (banner !== null) banner.textContent = `startup failed: ${err}`;
});
