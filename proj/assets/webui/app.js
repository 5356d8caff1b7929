// codecarta diagram viewer. Reads the graph document, layout snapshot and
// style document either from inline data blocks or from sibling JSON files.
"use strict";

(function () {
  const MEMBER_KINDS = new Set(["field", "method", "property", "event"]);
  const ALL_KINDS = ["solution", "project", "package", "namespace", "type", "field", "method", "property", "event"];
  const RELATIONS = ["declares", "inheritsFrom", "typeOf", "returns", "dependsOn"];

  // ---------------------------------------------------------------- loading

  function decodeBlock(id) {
    const el = document.getElementById(id);
    if (!el) return null;
    const bin = atob(el.textContent.trim());
    const bytes = new Uint8Array(bin.length);
    for (let i = 0; i < bin.length; i++) bytes[i] = bin.charCodeAt(i);
    if (String(bytes.length) !== el.dataset.length) throw new Error(id + ": length prefix mismatch");
    return JSON.parse(new TextDecoder("utf-8").decode(bytes));
  }

  async function loadDocuments() {
    const inline = decodeBlock("codecarta-graph");
    if (inline) {
      return { graph: inline, layout: decodeBlock("codecarta-layout"), style: decodeBlock("codecarta-style") };
    }
    const get = async (name) => (await fetch(name)).json();
    const [graph, layout, style] = await Promise.all([get("graph.json"), get("layout.json"), get("style.json")]);
    return { graph, layout, style };
  }

  // ------------------------------------------------------------------ model

  function tokenCompare(a, b) {
    const x = a.split(".").map(Number), y = b.split(".").map(Number);
    for (let i = 0; i < Math.min(x.length, y.length); i++) if (x[i] !== y[i]) return x[i] - y[i];
    return x.length - y.length;
  }

  function buildModel(doc) {
    const entities = doc.entities;
    const children = new Map(), parent = new Map();
    for (const [p, c] of doc.relations.declares || []) {
      if (!children.has(p)) children.set(p, []);
      children.get(p).push(c);
      parent.set(c, p);
    }
    for (const list of children.values()) list.sort(tokenCompare);
    const tokens = Object.keys(entities).sort(tokenCompare);
    return { entities, relations: doc.relations, children, parent, tokens };
  }

  function ancestors(model, token) {
    const out = [];
    for (let p = model.parent.get(token); p !== undefined; p = model.parent.get(p)) out.push(p);
    return out;
  }

  // Mirrors the closed-form visibility rule of the command-line tool.
  function isVisible(model, view, token) {
    if (!view.kinds.has(model.entities[token].kind)) return false;
    if (view.removed.has(token)) return false;
    for (const a of ancestors(model, token)) {
      if (view.removed.has(a) || !view.expanded.has(a)) return false;
    }
    return true;
  }

  function recompute(model, view) {
    view.visible = new Set(model.tokens.filter((t) => isVisible(model, view, t)));
  }

  function defaultView(model, style) {
    const view = {
      expanded: new Set(model.tokens.filter((t) => model.entities[t].kind === "solution")),
      removed: new Set(),
      kinds: new Set(ALL_KINDS.filter((k) => k !== "package")),
      relations: new Set(RELATIONS.filter((r) => style.relations[r] && style.relations[r].enabled)),
      highlighted: null,
      isolated: null,
      visible: new Set(),
    };
    view.relations.add("declares");
    recompute(model, view);
    return view;
  }

  // ------------------------------------------------------------------ state

  const state = {
    model: null, style: null, view: null,
    positions: new Map(), pinned: new Set(),
    tool: "select", selected: null,
    camera: { x: 0, y: 0, scale: 1 },
    particles: [], time: 0,
    reducedMotion: window.matchMedia && window.matchMedia("(prefers-reduced-motion: reduce)").matches,
  };

  function shown() {
    const v = state.view;
    if (!v.isolated) return v.visible;
    return new Set([...v.visible].filter((t) => v.isolated.has(t)));
  }

  // Places nodes without a position on a small ring around their nearest
  // positioned ancestor.
  function placeMissing() {
    const m = state.model;
    const perParent = new Map();
    for (const t of state.view.visible) {
      if (state.positions.has(t)) continue;
      const anchor = ancestors(m, t).find((a) => state.positions.has(a));
      const base = anchor ? state.positions.get(anchor) : { x: 0, y: 0 };
      const key = anchor || "";
      const k = perParent.get(key) || 0;
      perParent.set(key, k + 1);
      const siblings = anchor ? (m.children.get(anchor) || []).length : 1;
      const angle = (2 * Math.PI * k) / Math.max(siblings, 1);
      const r = 3 * radiusOf(anchor || t);
      state.positions.set(t, { x: base.x + r * Math.cos(angle), y: base.y + r * Math.sin(angle) });
    }
  }

  function radiusOf(token) {
    const g = state.style.glyphs[token];
    return g ? g.radius : 5;
  }

  // Lightweight relaxation used by Refresh: spring on visible edges,
  // pairwise repulsion, gravity; pinned nodes stay put.
  function relax(iterations) {
    const nodes = [...shown()];
    const index = new Map(nodes.map((t, i) => [t, i]));
    const pos = nodes.map((t) => ({ ...state.positions.get(t) }));
    const links = visibleEdges().map((e) => [index.get(e.source), index.get(e.target)]);
    for (let it = 0; it < iterations; it++) {
      const force = nodes.map(() => ({ x: 0, y: 0 }));
      for (let i = 0; i < nodes.length; i++) {
        for (let j = i + 1; j < nodes.length; j++) {
          const dx = pos[i].x - pos[j].x, dy = pos[i].y - pos[j].y;
          const d2 = Math.max(dx * dx + dy * dy, 1);
          const f = 400 / d2;
          force[i].x += dx * f; force[i].y += dy * f;
          force[j].x -= dx * f; force[j].y -= dy * f;
        }
      }
      for (const [a, b] of links) {
        const dx = pos[b].x - pos[a].x, dy = pos[b].y - pos[a].y;
        force[a].x += 0.02 * dx; force[a].y += 0.02 * dy;
        force[b].x -= 0.02 * dx; force[b].y -= 0.02 * dy;
      }
      for (let i = 0; i < nodes.length; i++) {
        if (state.pinned.has(nodes[i])) continue;
        force[i].x -= 0.01 * pos[i].x; force[i].y -= 0.01 * pos[i].y;
        const len = Math.hypot(force[i].x, force[i].y), cap = 10;
        const s = len > cap ? cap / len : 1;
        pos[i].x += force[i].x * s; pos[i].y += force[i].y * s;
      }
    }
    nodes.forEach((t, i) => state.positions.set(t, pos[i]));
  }

  function visibleEdges() {
    const vis = shown(), out = [];
    for (const r of RELATIONS) {
      if (!state.view.relations.has(r)) continue;
      for (const [s, t] of state.model.relations[r] || []) {
        if (vis.has(s) && vis.has(t)) out.push({ relation: r, source: s, target: t });
      }
    }
    return out;
  }

  // ----------------------------------------------------------------- search

  function runSearch(mode, query) {
    const err = document.getElementById("search-error");
    err.textContent = "";
    let test;
    if (mode === "regex") {
      try {
        const re = new RegExp(query);
        test = (name) => re.test(name);
      } catch (e) {
        err.textContent = String(e.message);
        return null;
      }
    } else {
      const q = query.toLowerCase();
      test = (name) => name.toLowerCase().includes(q);
    }
    return new Set(state.model.tokens.filter((t) => test(state.model.entities[t].name)));
  }

  function applySearch(action) {
    const mode = document.getElementById("search-mode").value;
    const matches = runSearch(mode, document.getElementById("search-query").value);
    if (!matches) return;
    const list = document.getElementById("search-results");
    list.textContent = "";
    for (const t of [...matches].slice(0, 200)) {
      const li = document.createElement("li");
      li.textContent = state.model.entities[t].name + "  (" + t + ")";
      li.onclick = () => select(t);
      list.appendChild(li);
    }
    if (action === "highlight") {
      state.view.highlighted = matches;
      state.view.isolated = null;
    } else {
      // Isolate keeps matches plus their declares ancestors and reveals them.
      const keep = new Set(matches);
      for (const t of matches) for (const a of ancestors(state.model, t)) keep.add(a);
      for (const t of keep) {
        for (const a of ancestors(state.model, t)) state.view.expanded.add(a);
      }
      recompute(state.model, state.view);
      state.view.isolated = keep;
      state.view.highlighted = null;
      placeMissing();
    }
  }

  // ------------------------------------------------------------ interaction

  function select(token) {
    state.selected = token;
    const e = state.model.entities[token];
    const panel = document.getElementById("panel-properties");
    panel.textContent = "";
    const h = document.createElement("h3");
    h.textContent = e.name;
    panel.appendChild(h);
    const dl = document.createElement("dl");
    dl.className = "props";
    const add = (k, v) => {
      if (v === undefined || v === null || v === "") return;
      const dt = document.createElement("dt"), dd = document.createElement("dd");
      dt.textContent = k;
      dd.textContent = String(v);
      dl.append(dt, dd);
    };
    add("Token", token);
    add("Kind", e.kind + (e.typeKind ? " / " + e.typeKind : "") + (e.methodKind ? " / " + e.methodKind : ""));
    add("Accessibility", e.accessibility);
    add("Static", e.isStatic ? "yes" : "no");
    if (e.kind === "type") add("Members", e.instanceMemberCount + " instance, " + e.staticMemberCount + " static");
    for (const [k, v] of Object.entries(e.extra || {})) add(k, v);
    panel.appendChild(dl);
    if (e.doc) {
      const doc = document.createElement("div");
      doc.className = "doc";
      for (const para of e.doc) {
        const p = document.createElement("p");
        para.split("`").forEach((part, i) => {
          if (i % 2) {
            const c = document.createElement("code");
            c.textContent = part;
            p.appendChild(c);
          } else {
            p.appendChild(document.createTextNode(part));
          }
        });
        doc.appendChild(p);
      }
      panel.appendChild(doc);
    }
    for (const d of e.diagnostics || []) {
      const p = document.createElement("p");
      p.className = "diag-" + d.severity;
      p.textContent = d.severity + (d.code ? " " + d.code : "") + ": " + d.message;
      panel.appendChild(p);
    }
    showPanel("properties");
  }

  function toggle(token) {
    const v = state.view;
    if (v.expanded.has(token)) v.expanded.delete(token);
    else v.expanded.add(token);
    recompute(state.model, v);
    placeMissing();
  }

  function removeNode(token) {
    state.view.removed.add(token);
    recompute(state.model, state.view);
  }

  function refresh() {
    state.view.removed.clear();
    state.view.highlighted = null;
    state.view.isolated = null;
    recompute(state.model, state.view);
    placeMissing();
    relax(Math.min(300, 30000 / Math.max(1, state.view.visible.size)));
  }

  function showPanel(name) {
    document.querySelectorAll("#dock button").forEach((b) => b.classList.toggle("active", b.dataset.panel === name));
    document.querySelectorAll(".panel").forEach((p) => p.classList.toggle("active", p.id === "panel-" + name));
  }

  // ---------------------------------------------------------------- drawing

  const canvas = document.getElementById("diagram");
  const ctx = canvas.getContext("2d");

  function toScreen(p) {
    const c = state.camera;
    return { x: (p.x - c.x) * c.scale + canvas.width / 2, y: (p.y - c.y) * c.scale + canvas.height / 2 };
  }

  function toWorld(x, y) {
    const c = state.camera;
    return { x: (x - canvas.width / 2) / c.scale + c.x, y: (y - canvas.height / 2) / c.scale + c.y };
  }

  function fit() {
    const vis = [...shown()];
    if (!vis.length) return;
    let minX = Infinity, minY = Infinity, maxX = -Infinity, maxY = -Infinity;
    for (const t of vis) {
      const p = state.positions.get(t), r = radiusOf(t);
      minX = Math.min(minX, p.x - r); maxX = Math.max(maxX, p.x + r);
      minY = Math.min(minY, p.y - r); maxY = Math.max(maxY, p.y + r);
    }
    state.camera.x = (minX + maxX) / 2;
    state.camera.y = (minY + maxY) / 2;
    state.camera.scale = 0.9 * Math.min(canvas.width / (maxX - minX || 1), canvas.height / (maxY - minY || 1));
  }

  function saturate(hex, amount, gray) {
    const n = parseInt(hex.slice(1), 16);
    let r = (n >> 16) & 255, g = (n >> 8) & 255, b = n & 255;
    const l = 0.3 * r + 0.59 * g + 0.11 * b;
    const s = gray ? 0 : amount;
    r = Math.round(l + (r - l) * s); g = Math.round(l + (g - l) * s); b = Math.round(l + (b - l) * s);
    return "rgb(" + r + "," + g + "," + b + ")";
  }

  // Icon set: small vector marks drawn inside the node, one per icon id.
  const ICONS = {
    solution: (c, r) => { c.strokeRect(-r, -r, 2 * r, 2 * r); c.strokeRect(-r / 2, -r / 2, r, r); },
    project: (c, r) => { c.strokeRect(-r, -0.7 * r, 2 * r, 1.4 * r); c.beginPath(); c.moveTo(-r, -0.3 * r); c.lineTo(r, -0.3 * r); c.stroke(); },
    package: (c, r) => { c.beginPath(); c.moveTo(0, -r); c.lineTo(r, -0.4 * r); c.lineTo(r, 0.6 * r); c.lineTo(0, r); c.lineTo(-r, 0.6 * r); c.lineTo(-r, -0.4 * r); c.closePath(); c.stroke(); },
    namespace: (c, r) => { c.font = "bold " + 1.6 * r + "px monospace"; c.fillText("{}", 0, 0.1 * r); },
    class: (c, r) => { c.font = "bold " + 1.8 * r + "px sans-serif"; c.fillText("C", 0, 0.1 * r); },
    struct: (c, r) => { c.font = "bold " + 1.8 * r + "px sans-serif"; c.fillText("S", 0, 0.1 * r); },
    enum: (c, r) => { c.font = "bold " + 1.8 * r + "px sans-serif"; c.fillText("E", 0, 0.1 * r); },
    interface: (c, r) => { c.font = "bold " + 1.8 * r + "px sans-serif"; c.fillText("I", 0, 0.1 * r); },
    delegate: (c, r) => { c.font = "bold " + 1.8 * r + "px sans-serif"; c.fillText("D", 0, 0.1 * r); },
    field: (c, r) => { c.fillRect(-0.6 * r, -0.6 * r, 1.2 * r, 1.2 * r); },
    method: (c, r) => { c.beginPath(); c.moveTo(0, -r); c.lineTo(r, 0); c.lineTo(0, r); c.lineTo(-r, 0); c.closePath(); c.fill(); },
    property: (c, r) => { c.beginPath(); c.arc(0, 0, 0.6 * r, 0, 2 * Math.PI); c.stroke(); c.fillRect(-0.2 * r, -0.2 * r, 0.4 * r, 0.4 * r); },
    event: (c, r) => { c.beginPath(); c.moveTo(0.3 * r, -r); c.lineTo(-0.5 * r, 0.1 * r); c.lineTo(0.1 * r, 0.1 * r); c.lineTo(-0.3 * r, r); c.lineTo(0.5 * r, -0.1 * r); c.lineTo(-0.1 * r, -0.1 * r); c.closePath(); c.fill(); },
  };

  const CORNERS = {
    "access-internal": "i", "access-protected": "#", "access-protected-internal": "#i",
    "access-private-protected": "-#", "access-private": "-",
  };

  function drawGlyph(token, gray) {
    const g = state.style.glyphs[token];
    const p = toScreen(state.positions.get(token));
    const r = g.radius * state.camera.scale;
    if (r < 0.5) return;
    const rings = [[g.outer, r + g.inner.width + g.middle.width], [g.middle, r + g.inner.width], [g.inner, r]];
    for (const [o, at] of rings) {
      if (o.width <= 0) continue;
      const w = Math.max(o.width * state.camera.scale, 0.5);
      ctx.beginPath();
      ctx.setLineDash(o.style === "dashed" ? [3, 2] : []);
      ctx.lineWidth = w;
      ctx.strokeStyle = saturate(g.tint, o.saturation, gray);
      ctx.arc(p.x, p.y, at + w / 2, 0, 2 * Math.PI);
      ctx.stroke();
    }
    ctx.setLineDash([]);
    ctx.beginPath();
    ctx.fillStyle = gray ? "#e4e4e4" : "#ffffff";
    ctx.arc(p.x, p.y, r, 0, 2 * Math.PI);
    ctx.fill();
    const icon = ICONS[g.icon];
    ctx.save();
    ctx.translate(p.x, p.y);
    ctx.fillStyle = ctx.strokeStyle = saturate(g.tint, 1, gray);
    ctx.lineWidth = Math.max(1, r / 8);
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    if (icon) icon(ctx, r * 0.55);
    else ctx.fillRect(-r / 3, -r / 3, (2 * r) / 3, (2 * r) / 3);
    if (g.corner && r > 4) {
      ctx.font = "bold " + Math.max(8, r * 0.6) + "px monospace";
      ctx.fillStyle = gray ? "#999" : "#333";
      ctx.fillText(CORNERS[g.corner] || "?", r * 0.8, -r * 0.8);
    }
    ctx.restore();
    if (g.effect !== "none" && !gray) emitParticles(p, r, g.effect);
    if (r > 7) {
      ctx.fillStyle = gray ? "#aaa" : "#333";
      ctx.font = "11px sans-serif";
      ctx.textAlign = "center";
      ctx.fillText(state.model.entities[token].name, p.x, p.y + r + 12);
    }
  }

  function emitParticles(p, r, effect) {
    if (state.reducedMotion) {
      ctx.fillStyle = effect === "fire" ? "#e8491d" : "#777";
      ctx.beginPath();
      ctx.arc(p.x - r * 0.8, p.y - r * 0.8, Math.max(3, r / 4), 0, 2 * Math.PI);
      ctx.fill();
      return;
    }
    if (state.particles.length < 4000 && Math.random() < 0.5) {
      state.particles.push({
        x: p.x + (Math.random() - 0.5) * r, y: p.y - r * 0.5, vy: -0.5 - Math.random(), life: 1,
        fire: effect === "fire", size: Math.max(2, r / 4),
      });
    }
  }

  function drawParticles() {
    const next = [];
    for (const q of state.particles) {
      q.y += q.vy;
      q.life -= 0.03;
      if (q.life <= 0) continue;
      ctx.globalAlpha = q.life * 0.8;
      ctx.fillStyle = q.fire ? (q.life > 0.5 ? "#ffb200" : "#e8491d") : "#8a8a8a";
      ctx.beginPath();
      ctx.arc(q.x, q.y, q.size * (q.fire ? q.life : 2 - q.life), 0, 2 * Math.PI);
      ctx.fill();
      next.push(q);
    }
    ctx.globalAlpha = 1;
    state.particles = next;
  }

  function draw() {
    canvas.width = canvas.clientWidth;
    canvas.height = canvas.clientHeight;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    const hl = state.view.highlighted;
    for (const e of visibleEdges()) {
      const s = state.style.relations[e.relation];
      const a = toScreen(state.positions.get(e.source)), b = toScreen(state.positions.get(e.target));
      ctx.strokeStyle = hl && !(hl.has(e.source) && hl.has(e.target)) ? "#dddddd" : s.color;
      ctx.lineWidth = s.lineWeight;
      ctx.beginPath();
      ctx.moveTo(a.x, a.y);
      ctx.lineTo(b.x, b.y);
      ctx.stroke();
    }
    for (const t of shown()) drawGlyph(t, hl !== null && !hl.has(t));
    drawParticles();
    document.getElementById("status").textContent =
      shown().size + " of " + state.model.tokens.length + " nodes visible" + (state.selected ? "  |  selected " + state.selected : "");
    requestAnimationFrame(draw);
  }

  function hit(x, y) {
    const w = toWorld(x, y);
    let best = null, bestD = Infinity;
    for (const t of shown()) {
      const p = state.positions.get(t);
      const d = Math.hypot(p.x - w.x, p.y - w.y);
      if (d <= radiusOf(t) * 1.2 && d < bestD) { best = t; bestD = d; }
    }
    return best;
  }

  function wire() {
    document.querySelectorAll("#toolbox button").forEach((b) => {
      b.onclick = () => {
        state.tool = b.dataset.tool;
        document.querySelectorAll("#toolbox button").forEach((x) => x.classList.toggle("active", x === b));
      };
    });
    document.querySelectorAll("#dock button").forEach((b) => (b.onclick = () => showPanel(b.dataset.panel)));
    document.getElementById("search-highlight").onclick = () => applySearch("highlight");
    document.getElementById("search-isolate").onclick = () => applySearch("isolate");
    document.getElementById("search-query").onkeydown = (e) => { if (e.key === "Enter") applySearch("highlight"); };
    document.getElementById("search-clear").onclick = () => {
      state.view.highlighted = null;
      state.view.isolated = null;
      document.getElementById("search-results").textContent = "";
      document.getElementById("search-error").textContent = "";
    };
    document.getElementById("layout-refresh").onclick = refresh;
    document.getElementById("guide-close").onclick = () => {
      try { localStorage.setItem("codecarta-tour-seen", "1"); } catch (e) { /* storage may be unavailable */ }
      showPanel("properties");
    };

    const kinds = document.getElementById("layout-kinds");
    for (const k of ALL_KINDS) {
      const label = document.createElement("label"), box = document.createElement("input");
      box.type = "checkbox";
      box.checked = state.view.kinds.has(k);
      box.onchange = () => {
        if (box.checked) state.view.kinds.add(k); else state.view.kinds.delete(k);
        recompute(state.model, state.view);
        placeMissing();
      };
      label.append(box, " " + k);
      kinds.appendChild(label);
    }
    const rels = document.getElementById("layout-relations");
    for (const r of RELATIONS) {
      const label = document.createElement("label"), box = document.createElement("input"), swatch = document.createElement("input");
      box.type = "checkbox";
      box.checked = state.view.relations.has(r);
      box.disabled = r === "declares";
      box.onchange = () => { if (box.checked) state.view.relations.add(r); else state.view.relations.delete(r); };
      swatch.type = "color";
      swatch.value = state.style.relations[r].color;
      swatch.oninput = () => { state.style.relations[r].color = swatch.value; };
      label.append(box, " " + r + " ", swatch);
      rels.appendChild(label);
    }

    let drag = null, pan = null;
    canvas.onmousedown = (e) => {
      const t = hit(e.offsetX, e.offsetY);
      if (state.tool === "move" && t) { drag = t; state.pinned.add(t); return; }
      if (!t) { pan = { x: e.offsetX, y: e.offsetY, cx: state.camera.x, cy: state.camera.y }; state.selected = null; return; }
      if (state.tool === "select") select(t);
      else if (state.tool === "toggle") toggle(t);
      else if (state.tool === "remove") removeNode(t);
    };
    canvas.onmousemove = (e) => {
      if (drag) state.positions.set(drag, toWorld(e.offsetX, e.offsetY));
      if (pan) {
        state.camera.x = pan.cx - (e.offsetX - pan.x) / state.camera.scale;
        state.camera.y = pan.cy - (e.offsetY - pan.y) / state.camera.scale;
      }
    };
    canvas.onmouseup = () => { drag = null; pan = null; };
    canvas.onwheel = (e) => {
      e.preventDefault();
      state.camera.scale *= e.deltaY < 0 ? 1.1 : 1 / 1.1;
    };
  }

  function firstVisit() {
    try { return !localStorage.getItem("codecarta-tour-seen"); } catch (e) { return true; }
  }

  loadDocuments().then((docs) => {
    state.model = buildModel(docs.graph);
    state.style = docs.style;
    state.view = defaultView(state.model, state.style);
    const snapshot = (docs.layout && docs.layout.positions) || {};
    for (const [t, xy] of Object.entries(snapshot)) state.positions.set(t, { x: xy[0], y: xy[1] });
    placeMissing();
    wire();
    fit();
    if (firstVisit()) showPanel("guide");
    requestAnimationFrame(draw);
  }).catch((err) => {
    document.getElementById("status").textContent = "Cannot load the diagram: " + err.message;
  });
})();
