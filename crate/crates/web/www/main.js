import init, { riemannCurve, cornerLocus, kummerCurve } from "./pkg/tropical_theta_web.js";

const $ = (id) => document.getElementById(id);
const NS = "http://www.w3.org/2000/svg";

function plot(pieces) {
  const w = 640, h = 240, m = 20;
  const xs = pieces.flatMap((p) => [p.plot[0], p.plot[2]]);
  const ys = pieces.flatMap((p) => [p.plot[1], p.plot[3]]);
  const [x0, x1] = [Math.min(...xs), Math.max(...xs)];
  let [y0, y1] = [Math.min(...ys), Math.max(...ys)];
  if (y1 - y0 < 1e-9) { y0 -= 1; y1 += 1; }
  const sx = (x) => m + ((x - x0) / (x1 - x0)) * (w - 2 * m);
  const sy = (y) => h - m - ((y - y0) / (y1 - y0)) * (h - 2 * m);
  const svg = document.createElementNS(NS, "svg");
  svg.setAttribute("width", w);
  svg.setAttribute("height", h);
  svg.setAttribute("class", "plot");
  const line = document.createElementNS(NS, "polyline");
  const pts = [[pieces[0].plot[0], pieces[0].plot[1]], ...pieces.map((p) => [p.plot[2], p.plot[3]])];
  line.setAttribute("points", pts.map(([x, y]) => `${sx(x)},${sy(y)}`).join(" "));
  line.setAttribute("fill", "none");
  line.setAttribute("stroke", "#b03020");
  line.setAttribute("stroke-width", "2");
  svg.appendChild(line);
  for (const p of pieces.slice(1)) {
    const dot = document.createElementNS(NS, "circle");
    dot.setAttribute("cx", sx(p.plot[0]));
    dot.setAttribute("cy", sy(p.plot[1]));
    dot.setAttribute("r", 3);
    svg.appendChild(dot);
  }
  return svg;
}

function table(pieces) {
  const t = document.createElement("table");
  t.innerHTML = "<tr><th>from</th><th>to</th><th>slope</th><th>value at from</th><th>value at to</th></tr>";
  for (const p of pieces) {
    const row = t.insertRow();
    for (const v of [p.from, p.to, p.slope, p.value_from, p.value_to]) row.insertCell().textContent = v;
  }
  return t;
}

function show(out, compute) {
  out.replaceChildren();
  try {
    compute(out);
  } catch (e) {
    const p = document.createElement("p");
    p.className = "error";
    p.textContent = e.message ?? String(e);
    out.appendChild(p);
  }
}

function curve(out, json) {
  const { pieces } = JSON.parse(json);
  out.append(plot(pieces), table(pieces));
}

await init();

$("r-go").onclick = () => show($("r-out"), (out) => curve(out, riemannCurve($("r-p").value, $("r-a").value, $("r-b").value)));
$("k-go").onclick = () =>
  show($("k-out"), (out) => curve(out, kummerCurve($("k-p").value, $("k-w").value, $("k-a").value, $("k-b").value)));
$("c-go").onclick = () =>
  show($("c-out"), (out) => {
    const r = JSON.parse(cornerLocus($("c-a").value, $("c-b").value, $("c-c").value));
    const div = document.createElement("div");
    div.innerHTML = r.svg.replace(/<\?xml[^>]*>\s*/, "");
    const info = document.createElement("p");
    info.textContent =
      `${r.vertices} vertices and ${r.edges} edges modulo periods; ` +
      `Betti numbers ${r.betti.join(", ")}; Euler characteristic ${r.euler_characteristic}`;
    out.append(div, info);
  });

for (const id of ["r-go", "c-go", "k-go"]) $(id).click();
