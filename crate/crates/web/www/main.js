import init, { Demo } from "./pkg/hypertri_web.js";

const $ = (id) => document.getElementById(id);
let demo;

function mode() {
  return document.querySelector("input[name=mode]:checked").value;
}

function redraw() {
  $("c-level-out").textContent = $("c-level").value;
  $("m-t-out").textContent = $("m-t").value;
  $("d-t-out").textContent = $("d-t").value;
  try {
    let svg;
    switch (mode()) {
      case "concentrate":
        svg = demo.concentrate(Number($("c-vertex").value), Number($("c-level").value));
        break;
      case "morph":
        svg = demo.morph(Number($("m-t").value));
        break;
      default:
        svg = demo.degenerate(Number($("d-vertex").value), Number($("d-t").value));
    }
    $("view").innerHTML = svg;
    $("status").textContent = "theta_min = " + demo.theta_min().toExponential(4);
  } catch (e) {
    $("status").textContent = "error: " + e;
  }
}

function reseed() {
  if (demo) demo.free();
  demo = new Demo(BigInt($("seed").value || 0));
  const n = demo.vertex_count() - 1;
  $("c-vertex").max = n;
  $("d-vertex").max = n;
  redraw();
}

await init();
for (const el of document.querySelectorAll("input")) {
  el.addEventListener("input", el.id === "seed" ? reseed : redraw);
}
reseed();
