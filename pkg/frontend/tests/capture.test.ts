import { describe, expect, it } from "vitest";

import { CaptureLoop, RateEstimator } from "../src/capture.js";
import { FixtureRecording, FixtureTracker, TrackerFrame } from "../src/tracker.js";
import { mulberry32 } from "./helpers.js";

function hand(rand: () => number, coords = 3): number[][] {
  const out: number[][] = [];
  for (let i = 0; i < 21; i++) {
    const row = [rand(), rand(), rand() * 0.1];
    out.push(row.slice(0, coords));
  }
  return out;
}

function frameAt(hands: number[][][], timestampMs: number): TrackerFrame {
  return { hands: hands.map((landmarks) => ({ landmarks })), timestampMs };
}

describe("CaptureLoop", () => {
  it("emits exactly one message per single-hand frame, ids increasing by 1", () => {
    const rand = mulberry32(4);
    const capture = new CaptureLoop();
    const ids: number[] = [];
    for (let i = 0; i < 50; i++) {
      const message = capture.handleTrackerFrame(frameAt([hand(rand)], i * 33));
      expect(message).not.toBeNull();
      ids.push(message!.id);
    }
    expect(ids).toEqual(Array.from({ length: 50 }, (_, i) => i));
  });

  it("skips empty and multi-hand frames without consuming ids", () => {
    const rand = mulberry32(5);
    const capture = new CaptureLoop();
    expect(capture.handleTrackerFrame(frameAt([], 0))).toBeNull();
    expect(capture.handleTrackerFrame(frameAt([hand(rand), hand(rand)], 33))).toBeNull();
    const first = capture.handleTrackerFrame(frameAt([hand(rand)], 66));
    expect(first!.id).toBe(0);
    expect(capture.handleTrackerFrame(frameAt([], 99))).toBeNull();
    const second = capture.handleTrackerFrame(frameAt([hand(rand)], 132));
    expect(second!.id).toBe(1);
    const stats = capture.snapshot();
    expect(stats.emitted).toBe(2);
    expect(stats.skippedNoHand).toBe(2);
    expect(stats.skippedMultiHand).toBe(1);
  });

  it("drops depth coordinates", () => {
    const rand = mulberry32(6);
    const withDepth = hand(rand, 3);
    const capture = new CaptureLoop();
    const message = capture.handleTrackerFrame(frameAt([withDepth], 0));
    expect(message).not.toBeNull();
    for (let i = 0; i < 21; i++) {
      expect(message!.landmarks[i]).toHaveLength(2);
      expect(message!.landmarks[i][0]).toBe(withDepth[i][0]);
      expect(message!.landmarks[i][1]).toBe(withDepth[i][1]);
    }
  });

  it("accepts plain 2D rows too", () => {
    const rand = mulberry32(7);
    const capture = new CaptureLoop();
    const message = capture.handleTrackerFrame(frameAt([hand(rand, 2)], 0));
    expect(message).not.toBeNull();
  });

  it("skips malformed hands", () => {
    const rand = mulberry32(8);
    const capture = new CaptureLoop();
    const short = hand(rand).slice(0, 20);
    expect(capture.handleTrackerFrame(frameAt([short], 0))).toBeNull();
    const nanHand = hand(rand);
    nanHand[3][1] = NaN;
    expect(capture.handleTrackerFrame(frameAt([nanHand], 33))).toBeNull();
    const emptyRow = hand(rand);
    emptyRow[10] = [];
    expect(capture.handleTrackerFrame(frameAt([emptyRow], 66))).toBeNull();
    expect(capture.snapshot().skippedBadShape).toBe(3);
    // The id counter never moved.
    const good = capture.handleTrackerFrame(frameAt([hand(rand)], 99));
    expect(good!.id).toBe(0);
  });
});

describe("RateEstimator", () => {
  it("converges to the true frame rate", () => {
    const rate = new RateEstimator();
    for (let i = 0; i < 100; i++) rate.tick(i * 33.33);
    expect(rate.value).toBeGreaterThan(28);
    expect(rate.value).toBeLessThan(32);
  });

  it("starts at zero and resets", () => {
    const rate = new RateEstimator();
    expect(rate.value).toBe(0);
    rate.tick(0);
    expect(rate.value).toBe(0); // one tick is not a rate yet
    rate.tick(50);
    expect(rate.value).toBeGreaterThan(0);
    rate.reset();
    expect(rate.value).toBe(0);
  });
});

describe("FixtureTracker", () => {
  it("replays every frame at roughly the recorded rate", async () => {
    const rand = mulberry32(9);
    const recording: FixtureRecording = {
      fps: 200, // fast replay keeps the test quick
      frames: [
        { hands: [hand(rand)] },
        { hands: [] },
        { hands: [hand(rand), hand(rand)] },
        { hands: [hand(rand)] },
      ],
    };
    const seen: TrackerFrame[] = [];
    const statuses: string[] = [];
    const tracker = new FixtureTracker(recording, {
      onFrame: (f) => seen.push(f),
      onStatus: (s) => statuses.push(s),
    });
    await tracker.start();
    await new Promise((resolve) => setTimeout(resolve, 120));
    tracker.stop();
    expect(seen.length).toBe(4);
    expect(seen.map((f) => f.hands.length)).toEqual([1, 0, 2, 1]);
    expect(statuses).toContain("recording finished");
  });
});
