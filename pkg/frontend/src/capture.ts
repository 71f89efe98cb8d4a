// Capture loop: filters tracker output down to the frames worth sending.
// Exactly one detected hand qualifies; zero hands means nothing to classify
// and two or more is ambiguous, so both are skipped. Depth coordinates are
// dropped because the classifier works on 2D landmarks.

import { FrameMessage, LANDMARK_COUNT, buildFrameMessage } from "./protocol.js";
import { TrackerFrame } from "./tracker.js";

// Exponentially weighted rate estimate over emitted frames.
export class RateEstimator {
  private lastMs: number | null = null;
  private perSecond = 0;

  constructor(private readonly alpha: number = 0.2) {}

  tick(nowMs: number): void {
    if (this.lastMs !== null) {
      const dt = nowMs - this.lastMs;
      if (dt > 0) {
        const instant = 1000 / dt;
        this.perSecond =
          this.perSecond === 0 ? instant : this.alpha * instant + (1 - this.alpha) * this.perSecond;
      }
    }
    this.lastMs = nowMs;
  }

  get value(): number {
    return this.perSecond;
  }

  reset(): void {
    this.lastMs = null;
    this.perSecond = 0;
  }
}

export interface CaptureStats {
  emitted: number;
  skippedNoHand: number;
  skippedMultiHand: number;
  skippedBadShape: number;
}

export class CaptureLoop {
  private nextId = 0;
  private stats: CaptureStats = {
    emitted: 0,
    skippedNoHand: 0,
    skippedMultiHand: 0,
    skippedBadShape: 0,
  };
  readonly rate = new RateEstimator();

  // Converts one tracker frame into a wire message, or null when the frame
  // is skipped. Ids increase by exactly 1 per emitted frame.
  handleTrackerFrame(frame: TrackerFrame): FrameMessage | null {
    if (frame.hands.length === 0) {
      this.stats.skippedNoHand += 1;
      return null;
    }
    if (frame.hands.length > 1) {
      this.stats.skippedMultiHand += 1;
      return null;
    }
    const rows = frame.hands[0].landmarks;
    if (rows.length !== LANDMARK_COUNT) {
      this.stats.skippedBadShape += 1;
      return null;
    }
    const pairs: [number, number][] = [];
    for (const row of rows) {
      if (row.length < 2 || !Number.isFinite(row[0]) || !Number.isFinite(row[1])) {
        this.stats.skippedBadShape += 1;
        return null;
      }
      pairs.push([row[0], row[1]]);
    }
    const message = buildFrameMessage(this.nextId, pairs);
    this.nextId += 1;
    this.stats.emitted += 1;
    this.rate.tick(frame.timestampMs);
    return message;
  }

  snapshot(): CaptureStats {
    return { ...this.stats };
  }
}
