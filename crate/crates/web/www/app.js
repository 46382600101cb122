import init, { random_instance, solve, compare } from "./pkg/eas_web.js";

const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

function status(text) {
  $("status").textContent = text;
}

function generate() {
  try {
    const text = random_instance(num("jobs"), num("horizon"), num("emax"), num("hmax"), num("seed"), $("common").checked);
    $("instance").value = JSON.stringify(JSON.parse(text), null, 1);
    status("");
    run();
  } catch (e) {
    status(String(e));
  }
}

// Harvest bars per slot, job labels on busy slots, and the energy level
// before each slot as a line.
function draw(instance, result) {
  const canvas = $("chart");
  const ctx = canvas.getContext("2d");
  const { width, height } = canvas;
  ctx.clearRect(0, 0, width, height);

  const T = instance.horizon;
  const busy = new Map(result.by_slot.map(([slot, job]) => [slot, job]));
  const energy = Object.fromEntries(instance.jobs.map((j) => [j.id, j.energy]));
  const top = Math.max(1, ...result.ledger, ...instance.harvest);
  const pad = 30;
  const slotWidth = (width - 2 * pad) / (T + 1);
  const y = (v) => height - pad - (v / top) * (height - 2 * pad);

  for (let t = 1; t <= T; t++) {
    const x = pad + (t - 1) * slotWidth;
    const h = instance.harvest[t - 1];
    const job = busy.get(t);
    ctx.fillStyle = job === undefined ? "#8cc084" : "#ddd";
    ctx.fillRect(x + 2, y(h), slotWidth - 4, y(0) - y(h));
    if (job !== undefined) {
      ctx.fillStyle = "#c0504d";
      ctx.fillRect(x + 2, y(0) + 4, slotWidth - 4, 14);
      ctx.fillStyle = "#fff";
      ctx.fillText(`j${job} e${energy[job]}`, x + 5, y(0) + 15);
    }
    ctx.fillStyle = "#555";
    ctx.fillText(String(t), x + slotWidth / 2 - 3, height - 6);
  }

  ctx.strokeStyle = "#1f4e79";
  ctx.lineWidth = 2;
  ctx.beginPath();
  result.ledger.forEach((e, i) => {
    const x = pad + i * slotWidth;
    if (i === 0) ctx.moveTo(x, y(e));
    else ctx.lineTo(x, y(e));
  });
  ctx.stroke();

  ctx.fillStyle = "#222";
  ctx.fillText(`${result.algo}: objective ${result.objective}, leftover ${result.ledger[T]}`, pad, 16);
}

function table(rows) {
  const head = "<tr><th>algorithm</th><th>objective</th><th>oracle</th></tr>";
  const body = rows
    .map((r) => `<tr><td>${r.algo}</td><td>${r.objective ?? r.error}</td><td>${r.oracle ?? "-"}</td></tr>`)
    .join("");
  $("table").innerHTML = head + body;
}

function run() {
  try {
    const text = $("instance").value;
    const result = JSON.parse(solve(text, $("algo").value, $("epsilon").value));
    draw(JSON.parse(text), result);
    status("");
  } catch (e) {
    status(String(e));
  }
}

function compareAll() {
  try {
    table(JSON.parse(compare($("instance").value, $("epsilon").value)));
    status("");
  } catch (e) {
    status(String(e));
  }
}

await init();
$("generate").onclick = generate;
$("solve").onclick = run;
$("compare").onclick = compareAll;
generate();
