/**
 * Page wiring for the annotation dashboard. Two panels:
 *  - keyframe box editor: step frames, draw boxes, live interpolation
 *    preview, conditional save;
 *  - alignment dashboard: runner search/sort, timeline chart, time-window
 *    query, one-click unique-id assignment, re-id probe from a crop.
 *
 * Every displayed number is fetched from the service.
 */

import {
  ApiClient,
  RevisionConflictError,
  type DenseBox,
  type RunnerRow,
} from "./api.js";
import { cropToProbe, dragToBox, previewBoxAt } from "./editor.js";
import {
  filterByRace,
  formatClock,
  sortRunners,
  timelineChartPoints,
  type RaceTab,
  type SortKey,
} from "./dashboard.js";
import { UiSession } from "./session.js";

const api = new ApiClient(
  (window as { MARATHONKIT_API?: string }).MARATHONKIT_API ?? "",
);
const session = new UiSession();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

// --- keyframe editor ---------------------------------------------------------

let frameIndices: number[] = [];
let framePosition = 0;
let previewBoxes: DenseBox[] = [];
let lastRevision: string | undefined;
let dragStart: [number, number] | null = null;
const frameImage = new Image();

function canvas(): HTMLCanvasElement {
  return el<HTMLCanvasElement>("editor-canvas");
}

function drawEditor(): void {
  const ctx = canvas().getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas().width, canvas().height);
  if (frameImage.complete && frameImage.naturalWidth > 0) {
    ctx.drawImage(frameImage, 0, 0);
  }
  const interpolated = previewBoxAt(previewBoxes, session.frameIndex);
  if (interpolated) {
    ctx.strokeStyle = "#2a9d8f";
    ctx.lineWidth = 2;
    const [x0, y0, x1, y1] = interpolated;
    ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
  }
  for (const kf of session.pendingKeyframes) {
    if (kf.frame_index !== session.frameIndex) continue;
    ctx.strokeStyle = "#e76f51";
    ctx.lineWidth = 2;
    const [x0, y0, x1, y1] = kf.box;
    ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
  }
}

function renderKeyframeList(): void {
  const list = el<HTMLUListElement>("keyframe-list");
  list.textContent = "";
  for (const kf of session.pendingKeyframes) {
    const item = document.createElement("li");
    item.textContent = `frame ${kf.frame_index}: [${kf.box.map((c) => c.toFixed(1)).join(", ")}]`;
    const remove = document.createElement("button");
    remove.textContent = "remove";
    remove.addEventListener("click", () => {
      session.removeKeyframe(kf.frame_index);
      void refreshPreview();
    });
    item.appendChild(remove);
    list.appendChild(item);
  }
  const problem = session.saveProblem();
  const save = el<HTMLButtonElement>("save-track");
  save.disabled = problem !== null;
  el("save-problem").textContent = problem ?? "";
}

async function refreshPreview(): Promise<void> {
  renderKeyframeList();
  if (session.pendingKeyframes.length >= 1 && session.canSave) {
    try {
      previewBoxes = await api.interpolate([...session.pendingKeyframes]);
    } catch (err) {
      setStatus(`interpolation preview failed: ${String(err)}`, true);
      previewBoxes = [];
    }
  } else {
    previewBoxes = [];
  }
  drawEditor();
}

function setStatus(text: string, isError = false): void {
  const node = el("status");
  node.textContent = text;
  node.className = isError ? "error" : "";
}

function showFrame(position: number): void {
  if (frameIndices.length === 0 || !session.videoId) return;
  framePosition = Math.max(0, Math.min(frameIndices.length - 1, position));
  session.frameIndex = frameIndices[framePosition];
  el("frame-label").textContent =
    `frame ${session.frameIndex} (${framePosition + 1}/${frameIndices.length})`;
  frameImage.onload = drawEditor;
  frameImage.src = api.frameUrl(session.videoId, session.frameIndex);
  drawEditor();
}

async function loadVideo(videoId: string, fps: number): Promise<void> {
  session.videoId = videoId;
  frameIndices = await api.listFrameIndices(videoId, fps);
  showFrame(0);
}

async function saveTrack(): Promise<void> {
  if (!session.videoId || !session.canSave) return;
  try {
    lastRevision = await api.putTrack(
      session.videoId,
      session.trackBody(),
      lastRevision,
    );
    setStatus(`saved track ${session.selectedIdentity} (rev ${lastRevision.slice(0, 12)}…)`);
  } catch (err) {
    if (err instanceof RevisionConflictError) {
      setStatus(
        "another annotator changed this track — reload it, then save again",
        true,
      );
    } else {
      setStatus(`save failed: ${String(err)} — retry when the service is back`, true);
    }
  }
}

async function loadTrack(): Promise<void> {
  if (!session.videoId || !session.selectedIdentity) return;
  try {
    const { track, revision } = await api.getTrack(
      session.videoId,
      session.selectedIdentity,
    );
    session.loadKeyframes(track.keyframes);
    lastRevision = revision;
    await refreshPreview();
    setStatus(`loaded track ${session.selectedIdentity}`);
  } catch (err) {
    setStatus(`no stored track: ${String(err)}`, true);
  }
}

function wireEditor(): void {
  const surface = canvas();
  surface.addEventListener("mousedown", (event) => {
    const rect = surface.getBoundingClientRect();
    dragStart = [event.clientX - rect.left, event.clientY - rect.top];
  });
  surface.addEventListener("mouseup", (event) => {
    if (!dragStart) return;
    const rect = surface.getBoundingClientRect();
    const box = dragToBox(
      dragStart[0],
      dragStart[1],
      event.clientX - rect.left,
      event.clientY - rect.top,
    );
    dragStart = null;
    if (box[2] - box[0] < 1 || box[3] - box[1] < 1) return;
    session.setKeyframe(session.frameIndex, box);
    void refreshPreview();
  });
  el<HTMLButtonElement>("frame-prev").addEventListener("click", () =>
    showFrame(framePosition - 1),
  );
  el<HTMLButtonElement>("frame-next").addEventListener("click", () =>
    showFrame(framePosition + 1),
  );
  el<HTMLInputElement>("identity-input").addEventListener("change", (event) => {
    session.selectedIdentity = (event.target as HTMLInputElement).value.trim();
    lastRevision = undefined;
    renderKeyframeList();
  });
  el<HTMLButtonElement>("save-track").addEventListener("click", () => void saveTrack());
  el<HTMLButtonElement>("load-track").addEventListener("click", () => void loadTrack());
  el<HTMLSelectElement>("video-select").addEventListener("change", (event) => {
    const videoId = (event.target as HTMLSelectElement).value;
    const fps = Number(el<HTMLSelectElement>("fps-select").value);
    session.clearPending();
    void loadVideo(videoId, fps).then(refreshPreview);
  });
  el<HTMLButtonElement>("reid-crop").addEventListener("click", () => void runReidQuery());
}

// --- re-id panel ---------------------------------------------------------------

async function runReidQuery(): Promise<void> {
  const kf = session.pendingKeyframes.find(
    (k) => k.frame_index === session.frameIndex,
  );
  if (!kf) {
    setStatus("draw a box on the current frame to use as the probe", true);
    return;
  }
  const ctx = canvas().getContext("2d");
  if (!ctx) return;
  const image = ctx.getImageData(0, 0, canvas().width, canvas().height);
  let pixels: number[][][];
  try {
    pixels = cropToProbe(image, kf.box);
  } catch (err) {
    setStatus(String(err), true);
    return;
  }
  try {
    const matches = await api.reidQueryPixels(pixels);
    const list = el<HTMLOListElement>("reid-results");
    list.textContent = "";
    if (matches.length === 0) {
      list.appendChild(document.createElement("li")).textContent =
        "gallery returned no matches";
      return;
    }
    for (const match of matches) {
      const item = document.createElement("li");
      item.textContent = `${match.image_id} — distance ${match.distance.toFixed(4)}`;
      list.appendChild(item);
    }
  } catch (err) {
    setStatus(`re-id query failed: ${String(err)}`, true);
  }
}

// --- alignment dashboard --------------------------------------------------------

let allRunners: RunnerRow[] = [];
let currentTab: RaceTab = "FullMarathon";
let sortKey: SortKey = "bib";
let sortDirection: "asc" | "desc" = "asc";

function renderRunnerTable(): void {
  const tbody = el<HTMLTableSectionElement>("runner-rows");
  tbody.textContent = "";
  const rows = sortRunners(filterByRace(allRunners, currentTab), sortKey, sortDirection);
  if (rows.length === 0) {
    const cell = tbody.insertRow().insertCell();
    cell.colSpan = 6;
    cell.textContent = "no runners match";
    return;
  }
  for (const runner of rows) {
    const tr = tbody.insertRow();
    tr.insertCell().textContent = String(runner.bib);
    tr.insertCell().textContent = runner.name;
    tr.insertCell().textContent = runner.gender;
    tr.insertCell().textContent = runner.countryCode;
    tr.insertCell().textContent = formatClock(runner.finish_time_s);
    const actions = tr.insertCell();
    const chart = document.createElement("button");
    chart.textContent = "timeline";
    chart.addEventListener("click", () => void drawTimeline(runner.bib));
    actions.appendChild(chart);
  }
}

async function drawTimeline(bib: number): Promise<void> {
  const entries = await api.runnerTimeline(bib);
  const chart = el<HTMLCanvasElement>("timeline-canvas");
  const ctx = chart.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, chart.width, chart.height);
  const points = timelineChartPoints(entries, chart.width, chart.height);
  if (points.length === 0) {
    ctx.fillText(`bib ${bib}: no covered checkpoints`, 10, 20);
    return;
  }
  ctx.beginPath();
  ctx.moveTo(points[0].x, points[0].y);
  for (const point of points.slice(1)) ctx.lineTo(point.x, point.y);
  ctx.strokeStyle = "#264653";
  ctx.stroke();
  for (const point of points) {
    ctx.fillRect(point.x - 2, point.y - 2, 4, 4);
  }
  ctx.fillText(`bib ${bib}`, 10, 14);
}

async function runSearch(): Promise<void> {
  const fragment = el<HTMLInputElement>("search-input").value.trim();
  allRunners = await api.searchRunners(fragment);
  renderRunnerTable();
}

async function runTimeWindowQuery(): Promise<void> {
  const location = Number(el<HTMLInputElement>("query-location").value);
  const t = Number(el<HTMLInputElement>("query-t").value);
  const dt = Number(el<HTMLInputElement>("query-dt").value) || session.deltaT;
  const output = el("query-results");
  try {
    const result = await api.alignmentQuery(location, t, dt);
    output.textContent =
      result.bibs.length === 0
        ? `no runners pass location ${location} in [${t - dt}, ${t + dt}] s`
        : `candidates: ${result.bibs.join(", ")}`;
  } catch (err) {
    output.textContent = String(err);
  }
}

async function assignId(): Promise<void> {
  const location = Number(el<HTMLInputElement>("assign-location").value);
  try {
    const uniqueId = await api.assignUniqueId(location);
    el("assign-result").textContent = `assigned ${uniqueId}`;
  } catch (err) {
    el("assign-result").textContent = String(err);
  }
}

function wireDashboard(): void {
  el<HTMLButtonElement>("search-button").addEventListener("click", () => void runSearch());
  el<HTMLButtonElement>("tab-full").addEventListener("click", () => {
    currentTab = "FullMarathon";
    renderRunnerTable();
  });
  el<HTMLButtonElement>("tab-half").addEventListener("click", () => {
    currentTab = "HalfMarathon";
    renderRunnerTable();
  });
  for (const key of ["bib", "name", "gender", "countryCode", "finish_time_s"] as SortKey[]) {
    el<HTMLElement>(`sort-${key}`).addEventListener("click", () => {
      sortDirection = sortKey === key && sortDirection === "asc" ? "desc" : "asc";
      sortKey = key;
      renderRunnerTable();
    });
  }
  el<HTMLButtonElement>("query-button").addEventListener("click", () => void runTimeWindowQuery());
  el<HTMLButtonElement>("assign-button").addEventListener("click", () => void assignId());
}

async function boot(): Promise<void> {
  wireEditor();
  wireDashboard();
  const videos = await api.listVideos();
  const select = el<HTMLSelectElement>("video-select");
  for (const video of videos) {
    const option = document.createElement("option");
    option.value = video.video_id;
    option.textContent = `${video.video_id} (location ${video.LocationNumber})`;
    select.appendChild(option);
  }
  await runSearch();
  if (videos.length > 0) {
    select.value = videos[0].video_id;
    await loadVideo(videos[0].video_id, Number(el<HTMLSelectElement>("fps-select").value));
  }
}

window.addEventListener("DOMContentLoaded", () => void boot());
