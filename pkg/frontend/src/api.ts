/**
 * Typed client for the annotation service HTTP API.
 *
 * Every number the dashboard displays comes from these calls; the UI never
 * computes metrics, interpolations, or timelines locally. Revision tokens
 * travel as the ETag response header and the If-Match request header.
 */

export interface BoxCoords extends Array<number> {
  0: number; // x_min
  1: number; // y_min
  2: number; // x_max
  3: number; // y_max
}

export interface Keyframe {
  frame_index: number;
  box: [number, number, number, number];
}

export interface TrackBody {
  identity: string;
  keyframes: Keyframe[];
}

export interface VideoInfo {
  video_id: string;
  FileName: string;
  Duration: number;
  VideoFrameRate: number;
  ImageSize: string;
  LocationNumber: number;
}

export interface DenseBox {
  frame_index: number;
  box: [number, number, number, number];
}

export interface RunnerRow {
  bib: number;
  name: string;
  gender: string;
  countryCode: string;
  race: string;
  finish_time_s: number;
}

export interface TimelineEntry {
  location_number: number;
  distance_km: number;
  estimated_passing_s: number;
}

export interface AlignmentResult {
  location: number;
  t: number;
  dt: number;
  bibs: number[];
}

export interface ReidMatch {
  image_id: string;
  distance: number;
}

export interface EvaluationResult {
  tp: number;
  fp: number;
  fn: number;
  precision: number;
  recall: number;
  f1: number;
  workload: {
    n_removals: number;
    n_additions: number;
    n_adjustments: number;
    n_labels: number;
    total_s: number;
  };
}

/** Raised when a conditional PUT loses against a newer revision (HTTP 409). */
export class RevisionConflictError extends Error {
  constructor(detail: string) {
    super(detail);
    this.name = "RevisionConflictError";
  }
}

/** Raised for every other non-2xx response. */
export class ApiError extends Error {
  readonly status: number;
  constructor(status: number, detail: string) {
    super(`HTTP ${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
  }
}

/**
 * Serialize with sorted keys and no whitespace, matching the service's
 * stable on-disk form so a PUT body reads back byte-identical.
 */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(canonicalJson).join(",")}]`;
  }
  const entries = Object.entries(value as Record<string, unknown>)
    .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
    .map(([k, v]) => `${JSON.stringify(k)}:${canonicalJson(v)}`);
  return `{${entries.join(",")}}`;
}

async function raiseFor(response: Response): Promise<never> {
  let detail = response.statusText;
  try {
    const body = await response.json();
    detail = body.detail ?? JSON.stringify(body);
  } catch {
    /* non-JSON error body; keep the status text */
  }
  if (response.status === 409) {
    throw new RevisionConflictError(detail);
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(private readonly baseUrl: string) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(this.baseUrl + path);
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  private async postJson<T>(path: string, body: unknown): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: canonicalJson(body),
    });
    if (!response.ok) await raiseFor(response);
    return (await response.json()) as T;
  }

  // --- videos and frames -----------------------------------------------

  listVideos(): Promise<VideoInfo[]> {
    return this.getJson("/videos");
  }

  /** URL for an <img> tag; the service streams the frame image bytes. */
  frameUrl(videoId: string, frameIndex: number): string {
    return `${this.baseUrl}/videos/${encodeURIComponent(videoId)}/frames/${frameIndex}`;
  }

  async listFrameIndices(videoId: string, fps: number): Promise<number[]> {
    const data = await this.getJson<{ frame_indices: number[] }>(
      `/videos/${encodeURIComponent(videoId)}/frames?fps=${fps}`,
    );
    return data.frame_indices;
  }

  // --- tracks ------------------------------------------------------------

  /** Returns the raw stored bytes plus the revision token. */
  async getTrack(
    videoId: string,
    identity: string,
  ): Promise<{ body: string; track: TrackBody; revision: string }> {
    const response = await fetch(
      `${this.baseUrl}/videos/${encodeURIComponent(videoId)}/tracks/${encodeURIComponent(identity)}`,
    );
    if (!response.ok) await raiseFor(response);
    const body = await response.text();
    return {
      body,
      track: JSON.parse(body) as TrackBody,
      revision: response.headers.get("ETag") ?? "",
    };
  }

  /** Conditional save; pass the revision from the last GET to detect races. */
  async putTrack(
    videoId: string,
    track: TrackBody,
    revision?: string,
  ): Promise<string> {
    const headers: Record<string, string> = {
      "Content-Type": "application/json",
    };
    if (revision) headers["If-Match"] = revision;
    const response = await fetch(
      `${this.baseUrl}/videos/${encodeURIComponent(videoId)}/tracks/${encodeURIComponent(track.identity)}`,
      { method: "PUT", headers, body: canonicalJson(track) },
    );
    if (!response.ok) await raiseFor(response);
    return response.headers.get("ETag") ?? "";
  }

  async deleteTrack(videoId: string, identity: string): Promise<void> {
    const response = await fetch(
      `${this.baseUrl}/videos/${encodeURIComponent(videoId)}/tracks/${encodeURIComponent(identity)}`,
      { method: "DELETE" },
    );
    if (!response.ok) await raiseFor(response);
  }

  // --- pure computation --------------------------------------------------

  async interpolate(keyframes: Keyframe[]): Promise<DenseBox[]> {
    const data = await this.postJson<{ boxes: DenseBox[] }>("/interpolate", {
      keyframes,
    });
    return data.boxes;
  }

  evaluate(body: unknown): Promise<EvaluationResult> {
    return this.postJson("/evaluate", body);
  }

  // --- runners and alignment ----------------------------------------------

  searchRunners(fragment: string): Promise<RunnerRow[]> {
    const query = fragment ? `?name=${encodeURIComponent(fragment)}` : "";
    return this.getJson(`/runners${query}`);
  }

  async runnerTimeline(bib: number): Promise<TimelineEntry[]> {
    const data = await this.getJson<{ entries: TimelineEntry[] }>(
      `/runners/${bib}/timeline`,
    );
    return data.entries;
  }

  alignmentQuery(
    location: number,
    t: number,
    dt?: number,
  ): Promise<AlignmentResult> {
    const extra = dt === undefined ? "" : `&dt=${dt}`;
    return this.getJson(`/alignment?location=${location}&t=${t}${extra}`);
  }

  async assignUniqueId(location: number): Promise<string> {
    const data = await this.postJson<{ unique_id: string }>("/unique-id", {
      location,
    });
    return data.unique_id;
  }

  /**
   * Rank the gallery against cropped probe pixels (rows x cols x RGB).
   * The service embeds the pixels itself, so the UI carries no feature code.
   */
  async reidQueryPixels(
    pixels: number[][][],
    k?: number,
  ): Promise<ReidMatch[]> {
    const body: Record<string, unknown> = { probe_pixels: pixels };
    if (k !== undefined) body.k = k;
    const data = await this.postJson<{ matches: ReidMatch[] }>(
      "/reid/query",
      body,
    );
    return data.matches;
  }
}
