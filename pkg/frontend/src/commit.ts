// Commit logic: turns the stream of stable labels (the smoothing output,
// null when no label dominates) into discrete typed letters.
//
// A letter commits once its stable run has lasted COMMIT_DWELL_MS. Repeating
// the same letter requires the hand to drop out of a stable pose for at
// least DOUBLE_LETTER_GAP_MS first, so classifier flicker around a held pose
// cannot type doubles, while a deliberate release-and-repeat does.

export const COMMIT_DWELL_MS = 500;
export const DOUBLE_LETTER_GAP_MS = 700;

export interface CommitUpdate {
  // Letter committed by this update, or null.
  committed: string | null;
  // Letter currently dwelling toward a commit, or null. Shown to the user
  // so they can hold the pose until it lands.
  pending: string | null;
}

export class CommitTracker {
  private runLabel: string | null = null;
  private runStart = 0;
  private runEligible = false;
  private committedThisRun = false;
  private lastCommitted: string | null = null;
  private noneSince: number | null = null;

  // Feed one smoothing result per frame. nowMs must be monotonic.
  update(label: string | null, nowMs: number): CommitUpdate {
    if (label === null) {
      // noneSince marks the start of the current unstable stretch, so only
      // the first null after a run records a timestamp.
      if (this.noneSince === null) {
        this.noneSince = nowMs;
      }
      this.runLabel = null;
      return { committed: null, pending: null };
    }

    if (label !== this.runLabel) {
      // A new stable run begins. Repeating the last committed letter is
      // allowed only after a long enough unstable gap; a short flicker
      // through null or another letter must not retype it.
      const gap = this.noneSince === null ? 0 : nowMs - this.noneSince;
      this.runEligible = label !== this.lastCommitted || gap >= DOUBLE_LETTER_GAP_MS;
      this.runLabel = label;
      this.runStart = nowMs;
      this.committedThisRun = false;
      this.noneSince = null;
    }

    if (this.runEligible && !this.committedThisRun && nowMs - this.runStart >= COMMIT_DWELL_MS) {
      this.committedThisRun = true;
      this.lastCommitted = label;
      return { committed: label, pending: null };
    }

    const pending = this.runEligible && !this.committedThisRun ? label : null;
    return { committed: null, pending };
  }

  reset(): void {
    this.runLabel = null;
    this.runStart = 0;
    this.runEligible = false;
    this.committedThisRun = false;
    this.lastCommitted = null;
    this.noneSince = null;
  }
}
