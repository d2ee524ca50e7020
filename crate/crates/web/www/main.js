import init, { ratios, trace, phiCurve } from "./pkg/raysearch_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);
const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"];

function show(id, text, isError = false) {
  $(id).textContent = text;
  $(id).className = isError ? "out err" : "out";
}

// Line chart with shared axes; series = [{ xs, ys, color, label }].
function chart(canvas, series, opts = {}) {
  const ctx = canvas.getContext("2d");
  const { width: W, height: H } = canvas;
  const pad = 40;
  ctx.clearRect(0, 0, W, H);
  const xs = series.flatMap((s) => s.xs);
  const ys = series.flatMap((s) => s.ys).filter(Number.isFinite);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  const y0 = opts.yMin ?? Math.min(...ys);
  const y1 = opts.yMax ?? Math.max(...ys);
  const px = (x) => pad + ((x - x0) / (x1 - x0 || 1)) * (W - 2 * pad);
  const py = (y) => H - pad - ((Math.min(y, y1) - y0) / (y1 - y0 || 1)) * (H - 2 * pad);

  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, W - 2 * pad, H - 2 * pad);
  ctx.fillStyle = "#444";
  ctx.fillText(x0.toFixed(2), pad, H - pad + 14);
  ctx.fillText(x1.toFixed(2), W - pad - 24, H - pad + 14);
  ctx.fillText(y1.toFixed(2), 2, pad + 4);
  ctx.fillText(y0.toFixed(2), 2, H - pad);

  series.forEach((s, k) => {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    ctx.beginPath();
    s.xs.forEach((x, i) => (i ? ctx.lineTo(px(x), py(s.ys[i])) : ctx.moveTo(px(x), py(s.ys[i]))));
    ctx.stroke();
    if (s.dots) s.xs.forEach((x, i) => ctx.fillRect(px(x) - 2, py(s.ys[i]) - 2, 5, 5));
    ctx.fillText(s.label, W - pad - 160, pad + 16 + 14 * k);
  });
  for (const m of opts.marks ?? []) {
    ctx.fillStyle = "#000";
    ctx.beginPath();
    ctx.arc(px(m.x), py(m.y), 4, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillText(m.label, px(m.x) + 6, py(m.y) - 6);
  }
}

function runRatios() {
  try {
    const data = JSON.parse(ratios(num("r-w"), num("r-lambda")));
    const lam = data.by_lambda.map((p) => p.lambda);
    chart($("r-canvas"), [
      { xs: lam, ys: data.by_lambda.map((p) => p.det_ratio), color: COLORS[0], label: "deterministic", dots: true },
      { xs: lam, ys: data.by_lambda.map((p) => p.rand_bound), color: COLORS[1], label: "randomized bound", dots: true },
    ], { yMin: 0 });
    const r = data.report;
    show("r-out", [
      `deterministic ratio   ${r.det_ratio.toFixed(6)}`,
      `randomized bound      ${r.rand_multi_bound.toFixed(6)}`,
      `one-robot randomized  ${r.rand_single.toFixed(6)}`,
      `speed ratio v         ${r.speed_v.toFixed(6)}`,
      `growth rate           ${r.r_w_prime === null ? "n/a" : r.r_w_prime.toFixed(6)}`,
    ].join("\n"));
  } catch (e) {
    show("r-out", String(e.message ?? e), true);
  }
}

let animation = null;

function drawTrace(data, w, goalPath, goalDist, upto) {
  const canvas = $("t-canvas");
  const ctx = canvas.getContext("2d");
  const { width: W, height: H } = canvas;
  const cx = W / 2, cy = H / 2, R = Math.min(W, H) / 2 - 30;
  const maxPos = Math.max(goalDist, ...data.segments.map((s) => Math.max(s.from_pos, s.to_pos)));
  // Log scale so early stages stay visible next to late ones.
  const rad = (p) => (Math.log1p(p) / Math.log1p(maxPos)) * R;
  const dir = (path) => [Math.cos((2 * Math.PI * path) / w - Math.PI / 2), Math.sin((2 * Math.PI * path) / w - Math.PI / 2)];
  ctx.clearRect(0, 0, W, H);

  for (let p = 0; p < w; p++) {
    const [dx, dy] = dir(p);
    ctx.strokeStyle = "#ccc";
    ctx.beginPath();
    ctx.moveTo(cx, cy);
    ctx.lineTo(cx + dx * R, cy + dy * R);
    ctx.stroke();
    ctx.fillStyle = "#666";
    ctx.fillText(`ray ${p}`, cx + dx * (R + 12) - 12, cy + dy * (R + 12));
  }
  const reach = new Array(w).fill(0);
  const offsets = (robot) => (robot - 1) * 3;
  data.segments.slice(0, upto).forEach((s) => {
    const [dx, dy] = dir(s.path);
    const off = offsets(s.robot);
    ctx.strokeStyle = COLORS[(s.robot - 1) % COLORS.length];
    ctx.lineWidth = 2;
    ctx.beginPath();
    ctx.moveTo(cx + dx * rad(s.from_pos) - dy * off, cy + dy * rad(s.from_pos) + dx * off);
    ctx.lineTo(cx + dx * rad(s.to_pos) - dy * off, cy + dy * rad(s.to_pos) + dx * off);
    ctx.stroke();
    reach[s.path] = Math.max(reach[s.path], s.to_pos);
  });
  ctx.lineWidth = 1;
  const [gx, gy] = dir(goalPath);
  ctx.fillStyle = "#000";
  ctx.beginPath();
  ctx.arc(cx + gx * rad(goalDist), cy + gy * rad(goalDist), 6, 0, 2 * Math.PI);
  ctx.fill();
  ctx.fillText("goal", cx + gx * rad(goalDist) + 8, cy + gy * rad(goalDist));
}

function runTrace() {
  if (animation) cancelAnimationFrame(animation);
  const w = num("t-w"), lambda = num("t-lambda"), path = num("t-path"), dist = num("t-dist");
  const seed = $("t-seed").value === "" ? -1 : num("t-seed");
  try {
    const data = JSON.parse(trace(w, lambda, seed, path, dist));
    show("t-out", [
      `${seed < 0 ? "deterministic" : `randomized, seed ${seed}`}: ${data.segments.length} segments`,
      `total distance ${data.ledger.total.toFixed(3)}, ratio ${data.ratio.toFixed(4)}`,
      `per robot ${data.ledger.per_robot_distance.map((d) => d.toFixed(2)).join(", ")}`,
    ].join("\n"));
    let k = 0;
    const step = () => {
      drawTrace(data, w, path, dist, ++k);
      if (k < data.segments.length) animation = requestAnimationFrame(() => setTimeout(step, 60));
    };
    step();
  } catch (e) {
    show("t-out", String(e.message ?? e), true);
  }
}

function runPhi() {
  try {
    const data = JSON.parse(phiCurve(num("p-w"), num("p-max"), 400));
    const cap = data.c_w * 3;
    chart($("p-canvas"), [{ xs: data.rates, ys: data.values, color: COLORS[3], label: "cost factor" }], {
      yMin: 0,
      yMax: cap,
      marks: [{ x: data.r_w, y: data.c_w, label: `r = ${data.r_w.toFixed(4)}, min ${data.c_w.toFixed(4)}` }],
    });
    show("p-out", `minimizer ${data.r_w.toFixed(8)}, minimum ${data.c_w.toFixed(8)}`);
  } catch (e) {
    show("p-out", String(e.message ?? e), true);
  }
}

await init();
$("r-go").onclick = runRatios;
$("t-go").onclick = runTrace;
$("p-go").onclick = runPhi;
runRatios();
runTrace();
runPhi();
