// Hand tracking sources. The capture loop only sees the HandTracker
// interface; the live implementation wraps the MediaPipe Hands CDN globals
// and the fixture implementation replays recorded frames for tests.

export interface TrackedHand {
  // Landmark rows as [x, y] or [x, y, z]; downstream keeps x and y only.
  landmarks: number[][];
}

export interface TrackerFrame {
  hands: TrackedHand[];
  timestampMs: number;
}

export interface TrackerCallbacks {
  onFrame: (frame: TrackerFrame) => void;
  onStatus?: (text: string) => void;
}

export interface HandTracker {
  start(): Promise<void>;
  stop(): void;
}

// ---- Live camera tracker

// Loaded from the MediaPipe CDN script tags in index.html.
declare const Hands: any;
declare const Camera: any;

interface MediaPipeLandmark {
  x: number;
  y: number;
  z?: number;
}

export class CameraTracker implements HandTracker {
  private camera: any = null;
  private hands: any = null;

  constructor(
    private readonly video: HTMLVideoElement,
    private readonly callbacks: TrackerCallbacks,
  ) {}

  async start(): Promise<void> {
    if (typeof Hands === "undefined" || typeof Camera === "undefined") {
      this.callbacks.onStatus?.("hand tracking libraries failed to load");
      throw new Error("MediaPipe globals missing; check the CDN script tags");
    }
    this.hands = new Hands({
      locateFile: (file: string) => `https://cdn.jsdelivr.net/npm/@mediapipe/hands/${file}`,
    });
    // Detect up to two hands so multi-hand frames can be recognized and
    // skipped instead of silently picking one.
    this.hands.setOptions({
      maxNumHands: 2,
      modelComplexity: 1,
      minDetectionConfidence: 0.6,
      minTrackingConfidence: 0.6,
    });
    this.hands.onResults((results: any) => {
      const raw: MediaPipeLandmark[][] = results.multiHandLandmarks ?? [];
      const hands = raw.map((hand) => ({
        landmarks: hand.map((point) => [point.x, point.y, point.z ?? 0]),
      }));
      this.callbacks.onFrame({ hands, timestampMs: performance.now() });
    });
    this.camera = new Camera(this.video, {
      onFrame: async () => {
        await this.hands.send({ image: this.video });
      },
      width: 640,
      height: 480,
    });
    await this.camera.start();
    this.callbacks.onStatus?.("camera running");
  }

  stop(): void {
    if (this.camera !== null) {
      this.camera.stop();
      this.camera = null;
    }
    if (this.hands !== null) {
      this.hands.close();
      this.hands = null;
    }
  }
}

// ---- Fixture replay tracker

export interface FixtureFrame {
  hands: number[][][];
}

export interface FixtureRecording {
  fps: number;
  frames: FixtureFrame[];
}

// Replays a recorded landmark sequence at its stated frame rate. Used by
// tests and by the demo page when no camera is available.
export class FixtureTracker implements HandTracker {
  private timer: ReturnType<typeof setInterval> | null = null;
  private index = 0;

  constructor(
    private readonly recording: FixtureRecording,
    private readonly callbacks: TrackerCallbacks,
    private readonly loop: boolean = false,
  ) {}

  async start(): Promise<void> {
    if (this.timer !== null) return;
    const periodMs = 1000 / this.recording.fps;
    this.callbacks.onStatus?.("replaying recorded frames");
    this.timer = setInterval(() => {
      if (this.index >= this.recording.frames.length) {
        if (this.loop) {
          this.index = 0;
        } else {
          this.stop();
          this.callbacks.onStatus?.("recording finished");
          return;
        }
      }
      const frame = this.recording.frames[this.index];
      this.index += 1;
      this.callbacks.onFrame({
        hands: frame.hands.map((landmarks) => ({ landmarks })),
        timestampMs: Date.now(),
      });
    }, periodMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
