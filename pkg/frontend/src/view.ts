// Presentation layer. Owns the DOM nodes and the landmark overlay canvas;
// all recognition logic stays in the pure modules.

import { ConnectionStatus } from "./wsclient.js";

export interface ViewElements {
  statusBanner: HTMLElement;
  letterOverlay: HTMLElement;
  pendingLetter: HTMLElement;
  committedText: HTMLElement;
  rateLabel: HTMLElement;
  overlayCanvas: HTMLCanvasElement;
}

const STATUS_TEXT: Record<ConnectionStatus, string> = {
  connecting: "connecting to recognizer...",
  open: "connected",
  closed: "disconnected, retrying...",
  error: "connection error, retrying...",
};

// Edges of the hand skeleton, as landmark index pairs: thumb, four fingers,
// and the palm arc.
const HAND_EDGES: [number, number][] = [
  [0, 1], [1, 2], [2, 3], [3, 4],
  [0, 5], [5, 6], [6, 7], [7, 8],
  [5, 9], [9, 10], [10, 11], [11, 12],
  [9, 13], [13, 14], [14, 15], [15, 16],
  [13, 17], [17, 18], [18, 19], [19, 20],
  [0, 17],
];

export class View {
  constructor(private readonly el: ViewElements) {}

  setConnection(status: ConnectionStatus): void {
    this.el.statusBanner.textContent = STATUS_TEXT[status];
    this.el.statusBanner.dataset.status = status;
  }

  setTrackerStatus(text: string): void {
    this.el.statusBanner.textContent = text;
  }

  // Latest per-frame prediction, e.g. "A 0.97". Cleared when the hand drops.
  setPrediction(label: string | null, confidence: number | null): void {
    if (label === null) {
      this.el.letterOverlay.textContent = "";
    } else {
      const score = confidence === null ? "" : ` ${confidence.toFixed(2)}`;
      this.el.letterOverlay.textContent = `${label}${score}`;
    }
  }

  setPending(label: string | null): void {
    this.el.pendingLetter.textContent = label ?? "";
  }

  setCommittedText(text: string): void {
    this.el.committedText.textContent = text;
  }

  setRate(perSecond: number): void {
    this.el.rateLabel.textContent = `${perSecond.toFixed(1)} fps`;
  }

  drawLandmarks(landmarks: [number, number][] | null): void {
    const canvas = this.el.overlayCanvas;
    const ctx = canvas.getContext("2d");
    if (ctx === null) return;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    if (landmarks === null) return;
    ctx.strokeStyle = "#4caf50";
    ctx.fillStyle = "#a5d6a7";
    ctx.lineWidth = 2;
    for (const [a, b] of HAND_EDGES) {
      ctx.beginPath();
      ctx.moveTo(landmarks[a][0] * canvas.width, landmarks[a][1] * canvas.height);
      ctx.lineTo(landmarks[b][0] * canvas.width, landmarks[b][1] * canvas.height);
      ctx.stroke();
    }
    for (const [x, y] of landmarks) {
      ctx.beginPath();
      ctx.arc(x * canvas.width, y * canvas.height, 3, 0, 2 * Math.PI);
      ctx.fill();
    }
  }
}
