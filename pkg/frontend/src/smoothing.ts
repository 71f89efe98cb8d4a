// Majority smoothing over a short window of per-frame predictions.
// A letter is "stable" only while it holds a supermajority of the window,
// which suppresses single-frame flicker from the classifier.

export const DEFAULT_WINDOW_SIZE = 7;
export const MAJORITY_FRACTION = 0.6;

// Ring buffer of the most recent predicted labels.
export class LabelWindow {
  private slots: string[] = [];
  private next = 0;

  constructor(readonly size: number) {
    if (!Number.isInteger(size) || size < 1) {
      throw new Error(`window size must be a positive integer, got ${size}`);
    }
  }

  push(label: string): void {
    if (this.slots.length < this.size) {
      this.slots.push(label);
    } else {
      this.slots[this.next] = label;
    }
    this.next = (this.next + 1) % this.size;
  }

  labels(): string[] {
    return this.slots.slice();
  }

  clear(): void {
    this.slots = [];
    this.next = 0;
  }
}

// Returns the label holding at least ceil(0.6 * windowSize) of the recent
// slots, or null when no label is that dominant. The threshold is computed
// from the configured window size, not the fill level, so a freshly cleared
// window stays unstable until enough frames arrive.
export function smoothMajority(recent: string[], windowSize: number): string | null {
  if (!Number.isInteger(windowSize) || windowSize < 1) {
    throw new Error(`window size must be a positive integer, got ${windowSize}`);
  }
  const threshold = Math.ceil(MAJORITY_FRACTION * windowSize);
  const counts = new Map<string, number>();
  for (const label of recent) {
    counts.set(label, (counts.get(label) ?? 0) + 1);
  }
  for (const [label, count] of counts) {
    if (count >= threshold) return label;
  }
  return null;
}
