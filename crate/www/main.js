import init, { coliseum, julia, staircase } from "./pkg/randdyn_web.js";

const $ = (id) => document.getElementById(id);

function paint(canvas, rgba) {
  const n = canvas.width;
  canvas.getContext("2d").putImageData(new ImageData(new Uint8ClampedArray(rgba), n, n), 0, 0);
}

function timed(out, f) {
  const t0 = performance.now();
  try {
    f();
    out.textContent = `${(performance.now() - t0).toFixed(0)} ms`;
  } catch (e) {
    out.textContent = String(e);
  }
}

function renderColiseum() {
  const canvas = $("col-canvas");
  timed($("col-time"), () =>
    paint(canvas, coliseum($("col-scene").value, Number($("col-p").value), canvas.width, Number($("col-depth").value))));
}

function renderJulia() {
  const canvas = $("jul-canvas");
  timed($("jul-time"), () =>
    paint(canvas, julia($("jul-scene").value, Number($("jul-points").value), canvas.width, BigInt($("jul-seed").value))));
}

function renderStaircase() {
  const canvas = $("st-canvas");
  const ctx = canvas.getContext("2d");
  const n = canvas.width;
  const a = $("st-cantor").checked ? NaN : Number($("st-a").value);
  const ys = staircase(a, n, 48);
  ctx.clearRect(0, 0, n, n);
  ctx.beginPath();
  ys.forEach((y, k) => (k ? ctx.lineTo : ctx.moveTo).call(ctx, k, (1 - y) * (n - 1)));
  ctx.stroke();
}

await init();
$("col-p").addEventListener("input", (e) => ($("col-p-out").value = Number(e.target.value).toFixed(2)));
$("col-go").addEventListener("click", renderColiseum);
$("jul-go").addEventListener("click", renderJulia);
$("st-a").addEventListener("input", (e) => {
  $("st-a-out").value = Number(e.target.value).toFixed(2);
  $("st-cantor").checked = false;
  renderStaircase();
});
$("st-cantor").addEventListener("change", renderStaircase);
renderColiseum();
renderJulia();
renderStaircase();
