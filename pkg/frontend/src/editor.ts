/**
 * DOM-free helpers for the keyframe box editor: rubber-band box geometry
 * and crop-to-probe pixel extraction for the re-id panel.
 */

export interface FramePixels {
  width: number;
  height: number;
  /** RGBA bytes, row-major, as produced by CanvasRenderingContext2D.getImageData. */
  data: Uint8ClampedArray | number[];
}

/** Normalize a drag gesture into (x_min, y_min, x_max, y_max). */
export function dragToBox(
  x0: number,
  y0: number,
  x1: number,
  y1: number,
): [number, number, number, number] {
  return [
    Math.max(0, Math.min(x0, x1)),
    Math.max(0, Math.min(y0, y1)),
    Math.max(x0, x1),
    Math.max(y0, y1),
  ];
}

/**
 * Extract the pixels inside a box as rows x cols x [R, G, B].
 *
 * A pixel at integer coordinates (x, y) is included when
 * x_min <= x <= x_max and y_min <= y <= y_max — both edges inclusive,
 * matching the containment rule the linking engine uses for path points.
 */
export function cropToProbe(
  frame: FramePixels,
  box: [number, number, number, number],
): number[][][] {
  const [xMin, yMin, xMax, yMax] = box;
  const colStart = Math.max(0, Math.ceil(xMin));
  const colEnd = Math.min(frame.width - 1, Math.floor(xMax));
  const rowStart = Math.max(0, Math.ceil(yMin));
  const rowEnd = Math.min(frame.height - 1, Math.floor(yMax));
  if (colEnd < colStart || rowEnd < rowStart) {
    throw new Error("crop region contains no whole pixels");
  }
  const rows: number[][][] = [];
  for (let y = rowStart; y <= rowEnd; y++) {
    const row: number[][] = [];
    for (let x = colStart; x <= colEnd; x++) {
      const offset = (y * frame.width + x) * 4;
      row.push([
        frame.data[offset],
        frame.data[offset + 1],
        frame.data[offset + 2],
      ]);
    }
    rows.push(row);
  }
  return rows;
}

/** Pull the interpolated box for one frame out of a dense preview, if any. */
export function previewBoxAt(
  boxes: { frame_index: number; box: [number, number, number, number] }[],
  frameIndex: number,
): [number, number, number, number] | null {
  const hit = boxes.find((b) => b.frame_index === frameIndex);
  return hit ? hit.box : null;
}
