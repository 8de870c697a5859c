import { badgeText, parseDot } from "./dot.js";
import { formatMeasureValue } from "./format.js";
import { histogramSvg } from "./histogram.js";
import { layoutGraph } from "./layout.js";
import { AppStore, ViewState } from "./state.js";
import { AGGREGATIONS, Aggregation } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderApp(root: HTMLElement, state: ViewState, store: AppStore): void {
  renderBanner(root.querySelector("#banner")!, state);
  renderSummary(root.querySelector("#summary")!, state);
  renderControls(root.querySelector("#controls")!, state, store);
  renderGraph(root.querySelector("#graph")!, state, store);
  renderDetail(root.querySelector("#detail")!, state);
}

function renderBanner(target: Element, state: ViewState): void {
  target.textContent = state.error ? `Error: ${state.error}` : "";
  (target as HTMLElement).style.display = state.error ? "block" : "none";
}

function renderSummary(target: Element, state: ViewState): void {
  target.textContent = "";
  const summary = state.summary;
  if (!summary) return;
  const headline = summary.events
    ? `${summary.events} events`
    : "0 events — empty log";
  target.appendChild(el("h2", {}, headline));
  const facts = el("p", { class: "facts" });
  const typeText = summary.objectTypes
    .map((ot) => `${ot}(${summary.objectCounts[ot]})`)
    .join(", ");
  facts.textContent = summary.events
    ? `objects by type: ${typeText}  ·  span: ${summary.span?.from} → ${summary.span?.to}`
    : "upload contained no events";
  target.appendChild(facts);
  if (!summary.rows.length) return;

  const table = el("table", { class: "events" });
  const head = el("tr");
  for (const column of ["event", "activity", "start", "complete", "objects"]) {
    head.appendChild(el("th", {}, column));
  }
  table.appendChild(head);
  for (const row of summary.rows.slice(0, 50)) {
    const tr = el("tr");
    tr.appendChild(el("td", {}, row.id));
    tr.appendChild(el("td", {}, row.activity));
    tr.appendChild(el("td", {}, row.start));
    tr.appendChild(el("td", {}, row.complete));
    tr.appendChild(el("td", {}, row.objects.join(", ")));
    table.appendChild(tr);
  }
  target.appendChild(table);
  if (summary.rows.length > 50) {
    target.appendChild(el("p", { class: "muted" }, `… ${summary.rows.length - 50} more`));
  }
}

function renderControls(target: Element, state: ViewState, store: AppStore): void {
  target.textContent = "";
  if (!state.sessionId || !state.summary) return;

  if (!state.model) {
    const button = el("button", { class: "primary" }, "Discover model");
    button.addEventListener("click", () => void store.discover());
    target.appendChild(button);
    return;
  }

  const info = el("p", { class: "muted" });
  info.textContent =
    `model: ${state.model.places} places, ${state.model.transitions} transitions, ` +
    `${state.model.arcs} arcs (${state.model.variable_arcs} variable)`;
  target.appendChild(info);

  const measureBox = el("fieldset");
  measureBox.appendChild(el("legend", {}, "measures"));
  const allKeys = state.measures.length
    ? state.measures
    : [];
  for (const key of allKeys) {
    const label = el("label", { class: "check" });
    const input = el("input", { type: "checkbox" }) as HTMLInputElement;
    input.checked = state.measures.includes(key);
    input.addEventListener("change", () => {
      const next = input.checked
        ? [...state.measures, key]
        : state.measures.filter((k) => k !== key);
      store.setMeasures(next);
    });
    label.appendChild(input);
    label.appendChild(document.createTextNode(key));
    measureBox.appendChild(label);
  }
  target.appendChild(measureBox);

  const row = el("div", { class: "row" });

  const badgeSelect = el("select", { title: "badge measure" }) as HTMLSelectElement;
  for (const key of state.measures) {
    const option = el("option", { value: key }, key) as HTMLOptionElement;
    option.selected = key === state.badgeMeasure;
    badgeSelect.appendChild(option);
  }
  badgeSelect.addEventListener("change", () => store.setBadgeMeasure(badgeSelect.value));
  row.appendChild(labeled("badge", badgeSelect));

  const aggSelect = el("select", { title: "aggregation" }) as HTMLSelectElement;
  for (const agg of AGGREGATIONS) {
    const option = el("option", { value: agg }, agg) as HTMLOptionElement;
    option.selected = agg === state.aggregation;
    aggSelect.appendChild(option);
  }
  aggSelect.addEventListener("change", () =>
    store.setAggregation(aggSelect.value as Aggregation),
  );
  row.appendChild(labeled("aggregation", aggSelect));

  const fromInput = el("input", {
    type: "text", placeholder: "window from", value: state.window?.from ?? "",
  }) as HTMLInputElement;
  const toInput = el("input", {
    type: "text", placeholder: "window to", value: state.window?.to ?? "",
  }) as HTMLInputElement;
  const applyWindow = () => {
    if (fromInput.value.trim() && toInput.value.trim()) {
      store.setWindow({ from: fromInput.value.trim(), to: toInput.value.trim() });
    } else if (!fromInput.value.trim() && !toInput.value.trim()) {
      store.setWindow(null);
    }
  };
  fromInput.addEventListener("change", applyWindow);
  toInput.addEventListener("change", applyWindow);
  row.appendChild(labeled("window", fromInput));
  row.appendChild(toInput);

  if (state.busy) row.appendChild(el("span", { class: "busy" }, "…"));
  target.appendChild(row);
}

function labeled(text: string, control: HTMLElement): HTMLElement {
  const wrap = el("label", { class: "inline" });
  wrap.appendChild(el("span", { class: "muted" }, `${text} `));
  wrap.appendChild(control);
  return wrap;
}

function renderGraph(target: Element, state: ViewState, store: AppStore): void {
  target.textContent = "";
  if (!state.dot) return;
  const graph = parseDot(state.dot);
  const { positions, width, height } = layoutGraph(graph.nodes, graph.edges);

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("class", "net");

  for (const edge of graph.edges) {
    const a = positions.get(edge.source);
    const b = positions.get(edge.target);
    if (!a || !b) continue;
    const draw = (strokeWidth: number, color: string) => {
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
      line.setAttribute("stroke", color);
      line.setAttribute("stroke-width", String(strokeWidth));
      svg.appendChild(line);
    };
    if (edge.variable) {
      draw(5, edge.color);
      draw(1.8, "#ffffff"); // gap turns the thick stroke into double lines
    } else {
      draw(1.6, edge.color);
    }
  }

  for (const node of graph.nodes) {
    const pos = positions.get(node.id);
    if (!pos) continue;
    const group = document.createElementNS(SVG_NS, "g");
    if (node.kind === "place") {
      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(pos.x));
      circle.setAttribute("cy", String(pos.y));
      circle.setAttribute("r", "13");
      circle.setAttribute("fill", "#ffffff");
      circle.setAttribute("stroke", node.color ?? "#333");
      circle.setAttribute("stroke-width", "2");
      group.appendChild(circle);
      const title = document.createElementNS(SVG_NS, "title");
      title.textContent = `${node.name} (${node.objectType ?? "?"})`;
      group.appendChild(title);
    } else {
      const rect = document.createElementNS(SVG_NS, "rect");
      rect.setAttribute("x", String(pos.x - 44));
      rect.setAttribute("y", String(pos.y - 18));
      rect.setAttribute("width", "88");
      rect.setAttribute("height", "36");
      rect.setAttribute("rx", "4");
      rect.setAttribute("fill", node.silent ? "#333333" : "#ffffff");
      rect.setAttribute("stroke", "#333333");
      if (node.name === state.selectedTransition) {
        rect.setAttribute("stroke-width", "3");
      }
      group.appendChild(rect);
      if (!node.silent) {
        const name = document.createElementNS(SVG_NS, "text");
        name.setAttribute("x", String(pos.x));
        name.setAttribute("y", String(pos.y - 2));
        name.setAttribute("text-anchor", "middle");
        name.setAttribute("class", "t-name");
        name.textContent = node.label;
        group.appendChild(name);
        const badge = document.createElementNS(SVG_NS, "text");
        badge.setAttribute("x", String(pos.x));
        badge.setAttribute("y", String(pos.y + 12));
        badge.setAttribute("text-anchor", "middle");
        badge.setAttribute("class", "t-badge");
        badge.textContent = badgeText(node.annotation);
        group.appendChild(badge);
        group.addEventListener("click", () => store.selectTransition(node.name));
        group.setAttribute("class", "clickable");
      }
    }
    svg.appendChild(group);
  }
  target.appendChild(svg);
}

function renderDetail(target: Element, state: ViewState): void {
  target.textContent = "";
  const name = state.selectedTransition;
  if (!name || !state.report) return;
  const measures = state.report.transitions[name];
  if (!measures) return;

  target.appendChild(el("h3", {}, name));
  const table = el("table", { class: "detail" });
  const head = el("tr");
  for (const col of ["measure", "mean", "median", "min", "max", "count", "undefined"]) {
    head.appendChild(el("th", {}, col));
  }
  table.appendChild(head);
  for (const key of Object.keys(measures).sort()) {
    const stats = measures[key];
    const tr = el("tr");
    tr.appendChild(el("td", {}, key));
    for (const agg of AGGREGATIONS) {
      tr.appendChild(el("td", {}, formatMeasureValue(key, stats[agg])));
    }
    tr.appendChild(el("td", {}, String(stats.count)));
    tr.appendChild(el("td", {}, String(stats.undefined_count)));
    table.appendChild(tr);
  }
  target.appendChild(table);

  const badgeKey = state.badgeMeasure;
  if (badgeKey && measures[badgeKey]) {
    target.appendChild(el("h4", {}, `${badgeKey} samples`));
    const holder = el("div");
    holder.innerHTML = histogramSvg(measures[badgeKey].samples);
    target.appendChild(holder);
  }
}
