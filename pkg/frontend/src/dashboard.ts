/**
 * DOM-free helpers for the alignment dashboard: race tabs, column sorting,
 * clock formatting, and timeline chart geometry. All runner data and every
 * estimated time come from the service; these helpers only arrange them.
 */

import type { RunnerRow, TimelineEntry } from "./api.js";

export type RaceTab = "FullMarathon" | "HalfMarathon";
export type SortKey = keyof Pick<
  RunnerRow,
  "bib" | "name" | "gender" | "countryCode" | "finish_time_s"
>;

export function filterByRace(rows: RunnerRow[], tab: RaceTab): RunnerRow[] {
  return rows.filter((r) => r.race === tab);
}

/** Stable sort on one column; equal keys keep their incoming order. */
export function sortRunners(
  rows: RunnerRow[],
  key: SortKey,
  direction: "asc" | "desc" = "asc",
): RunnerRow[] {
  const sign = direction === "asc" ? 1 : -1;
  return rows
    .map((row, index) => ({ row, index }))
    .sort((a, b) => {
      const va = a.row[key];
      const vb = b.row[key];
      if (va < vb) return -sign;
      if (va > vb) return sign;
      return a.index - b.index;
    })
    .map((item) => item.row);
}

/** Seconds since the gun as h:mm:ss, the format runner exports use. */
export function formatClock(totalSeconds: number): string {
  const s = Math.round(totalSeconds);
  const hours = Math.floor(s / 3600);
  const minutes = Math.floor((s % 3600) / 60);
  const seconds = s % 60;
  const mm = String(minutes).padStart(2, "0");
  const ss = String(seconds).padStart(2, "0");
  return `${hours}:${mm}:${ss}`;
}

export interface ChartPoint {
  x: number;
  y: number;
  entry: TimelineEntry;
}

/**
 * Map timeline entries (distance vs passing time) into pixel space for a
 * simple line chart, leaving a fixed margin on every side.
 */
export function timelineChartPoints(
  entries: TimelineEntry[],
  width: number,
  height: number,
  margin = 30,
): ChartPoint[] {
  if (entries.length === 0) return [];
  const xs = entries.map((e) => e.distance_km);
  const ys = entries.map((e) => e.estimated_passing_s);
  const xMin = Math.min(0, ...xs);
  const xMax = Math.max(...xs);
  const yMin = Math.min(0, ...ys);
  const yMax = Math.max(...ys);
  const xSpan = xMax - xMin || 1;
  const ySpan = yMax - yMin || 1;
  const innerW = width - 2 * margin;
  const innerH = height - 2 * margin;
  return entries.map((entry) => ({
    x: margin + ((entry.distance_km - xMin) / xSpan) * innerW,
    // y axis points down in canvas space; later times sit lower
    y: margin + ((entry.estimated_passing_s - yMin) / ySpan) * innerH,
    entry,
  }));
}
