/**
 * Editing-session state for the keyframe box editor.
 *
 * Pending keyframes live only in memory until saved; everything else the
 * session needs to resume round-trips through the service, so a hard refresh
 * loses at most the unsaved pending keyframes.
 */

import type { Keyframe, TrackBody } from "./api.js";

export interface SessionSnapshot {
  videoId: string | null;
  frameIndex: number;
  selectedIdentity: string | null;
  deltaT: number;
  pendingKeyframes: Keyframe[];
}

const IDENTITY_PATTERN = /^(?:[1-9]\d*|L[1-9]\d?R[1-9]\d*)$/;

function boxProblem(box: [number, number, number, number]): string | null {
  const [xMin, yMin, xMax, yMax] = box;
  if (box.some((c) => !Number.isFinite(c))) return "box has a non-finite coordinate";
  if (xMin < 0 || yMin < 0) return "box has a negative coordinate";
  if (xMin >= xMax || yMin >= yMax) return "box has zero or negative extent";
  return null;
}

export class UiSession {
  videoId: string | null = null;
  frameIndex = 0;
  selectedIdentity: string | null = null;
  deltaT = 60;
  private pending: Keyframe[] = [];

  get pendingKeyframes(): readonly Keyframe[] {
    return this.pending;
  }

  /** Insert or replace the keyframe at a frame index. */
  setKeyframe(frameIndex: number, box: [number, number, number, number]): void {
    this.pending = this.pending.filter((kf) => kf.frame_index !== frameIndex);
    this.pending.push({ frame_index: frameIndex, box });
    this.pending.sort((a, b) => a.frame_index - b.frame_index);
  }

  removeKeyframe(frameIndex: number): void {
    this.pending = this.pending.filter((kf) => kf.frame_index !== frameIndex);
  }

  loadKeyframes(keyframes: Keyframe[]): void {
    this.pending = keyframes
      .map((kf) => ({ frame_index: kf.frame_index, box: [...kf.box] as Keyframe["box"] }))
      .sort((a, b) => a.frame_index - b.frame_index);
  }

  clearPending(): void {
    this.pending = [];
  }

  /**
   * Why save is currently disabled, or null when the pending keyframes form
   * a valid track. Mirrors the track invariants the service enforces, so the
   * save button is only enabled for bodies the service will accept.
   */
  saveProblem(): string | null {
    if (!this.selectedIdentity) return "select or enter a runner identity first";
    if (!IDENTITY_PATTERN.test(this.selectedIdentity)) {
      return `"${this.selectedIdentity}" is not a bib number or LiRj id`;
    }
    if (this.pending.length === 0) return "a track needs at least one keyframe";
    for (let i = 1; i < this.pending.length; i++) {
      if (this.pending[i].frame_index <= this.pending[i - 1].frame_index) {
        return `keyframes out of frame order at index ${this.pending[i].frame_index}`;
      }
    }
    for (const kf of this.pending) {
      if (kf.frame_index < 0 || !Number.isInteger(kf.frame_index)) {
        return `frame index ${kf.frame_index} is not a non-negative integer`;
      }
      const problem = boxProblem(kf.box);
      if (problem) return `frame ${kf.frame_index}: ${problem}`;
    }
    return null;
  }

  get canSave(): boolean {
    return this.saveProblem() === null;
  }

  /** Body for PUT /videos/{id}/tracks/{identity}; only valid when canSave. */
  trackBody(): TrackBody {
    const problem = this.saveProblem();
    if (problem !== null) throw new Error(problem);
    return {
      identity: this.selectedIdentity as string,
      keyframes: this.pending.map((kf) => ({
        frame_index: kf.frame_index,
        box: [...kf.box] as Keyframe["box"],
      })),
    };
  }

  snapshot(): SessionSnapshot {
    return {
      videoId: this.videoId,
      frameIndex: this.frameIndex,
      selectedIdentity: this.selectedIdentity,
      deltaT: this.deltaT,
      pendingKeyframes: this.pending.map((kf) => ({
        frame_index: kf.frame_index,
        box: [...kf.box] as Keyframe["box"],
      })),
    };
  }
}
