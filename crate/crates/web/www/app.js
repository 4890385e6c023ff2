import init, { nat_snake, classify_cells, letterplace_pair } from "./pkg/profun_web.js";

const $ = (id) => document.getElementById(id);

function fail(el, msg) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "err";
  p.textContent = msg;
  el.appendChild(p);
}

// rows are q from top to bottom, columns p; cell(q, p) returns the td
function grid(rows, cols, rowLabel, colLabel) {
  const t = document.createElement("table");
  t.className = "grid";
  const cells = [];
  for (let q = rows - 1; q >= 0; q--) {
    const tr = t.insertRow();
    const th = document.createElement("th");
    th.textContent = rowLabel(q);
    tr.appendChild(th);
    cells[q] = [];
    for (let p = 0; p < cols; p++) cells[q][p] = tr.insertCell();
  }
  const foot = t.insertRow();
  foot.appendChild(document.createElement("th"));
  for (let p = 0; p < cols; p++) {
    const th = document.createElement("th");
    th.textContent = colLabel(p);
    foot.appendChild(th);
  }
  return { table: t, cell: (q, p) => cells[q][p] };
}

function drawSnake() {
  const out = $("snake-out");
  const qmax = Number($("wq").value), pmax = Number($("wp").value);
  const r = JSON.parse(nat_snake($("lit").value, qmax, pmax));
  if (r.error) return fail(out, r.error);
  out.innerHTML = "";
  const info = document.createElement("pre");
  info.textContent = `f  = ${r.map}   (${r.class})\nDf = ${r.dual}   (${r.dual_class})\nf(1..${pmax}) = ${r.values.join(", ")}`;
  out.appendChild(info);
  const g = grid(qmax, pmax, (q) => q + 1, (p) => p + 1);
  const mark = (pairs, cls) => {
    for (const [q, p] of pairs) {
      const td = g.cell(q - 1, p - 1);
      td.className = td.className && td.className !== cls ? "both" : cls;
    }
  };
  mark(r.ascent, "asc");
  mark(r.graph, "gra");
  out.appendChild(g.table);
}

let picked = new Set();

function drawGrid() {
  const out = $("grid-out");
  const cells = Uint32Array.from(picked);
  const r = JSON.parse(classify_cells($("cp").value, $("cq").value, $("ccut").value, cells));
  if (r.error) return fail(out, r.error);
  out.innerHTML = "";
  const np = r.p.length;
  const wit = new Set(r.witness_cells);
  const g = grid(r.q.length, np, (q) => r.q[q], (p) => r.p[p]);
  for (let q = 0; q < r.q.length; q++) {
    for (let p = 0; p < np; p++) {
      const idx = q * np + p;
      const td = g.cell(q, p);
      td.className = (picked.has(idx) ? "on" : "off") + (wit.has(idx) ? " wit" : "");
      td.onclick = () => {
        picked.has(idx) ? picked.delete(idx) : picked.add(idx);
        drawGrid();
      };
    }
  }
  out.appendChild(g.table);
  const v = document.createElement("p");
  v.textContent = r.verdict === "contains-ascent"
    ? `S contains the ascent of ${r.witness}`
    : r.verdict === "avoids-graph"
      ? `S misses the graph of ${r.witness}`
      : `verdict: ${r.verdict}`;
  out.appendChild(v);
}

function drawLetterplace() {
  const out = $("lp-out");
  const r = JSON.parse(letterplace_pair(Number($("ln").value), $("lp").value));
  if (r.error) return fail(out, r.error);
  out.innerHTML = "";
  const pre = document.createElement("pre");
  const route = r.poset_side_route === null ? "not a forest, skipped" : r.poset_side_route;
  pre.textContent = `L([n],P) = ${r.letterplace}\nL(P,[n]) = ${r.co_letterplace}\nAlexander dual: ${r.dual}\nforest-side route: ${route}`;
  out.appendChild(pre);
}

await init();
$("snake-go").onclick = drawSnake;
$("grid-go").onclick = () => { picked = new Set(); drawGrid(); };
$("lp-go").onclick = drawLetterplace;
drawSnake();
drawGrid();
drawLetterplace();
