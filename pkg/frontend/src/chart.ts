/**
 * Client-side chart rendering from a PlotSpec.
 *
 * Charts in the explorer are drawn from the spec JSON (points + labels)
 * rather than the server's SVG, so they can carry tooltips and resize
 * with the page; the server image is used only by the export buttons.
 * One element with class "mark" is emitted per point, mirroring the
 * server renderer's structure.
 */

import type { PlotSpecJson } from "./api";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 720;
const HEIGHT = 420;
const MARGIN = { left: 64, right: 16, top: 16, bottom: 56 };

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, value);
  }
  return el;
}

function xText(value: string | number | null): string {
  return value === null ? "(null)" : String(value);
}

export function renderChart(spec: PlotSpecJson): SVGSVGElement {
  const svg = svgElement("svg", {
    viewBox: `0 0 ${WIDTH} ${HEIGHT}`,
    width: "100%",
    role: "img",
    "aria-label": `${spec.kind} chart of ${spec.y_label} by ${spec.x_label}`,
    class: "chart",
  });
  if (spec.kind === "pie") {
    renderPie(svg, spec);
  } else {
    renderXY(svg, spec);
  }
  return svg;
}

function renderXY(svg: SVGSVGElement, spec: PlotSpecJson): void {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const ys = spec.points.map(([, y]) => y);
  const lo = Math.min(0, ...ys);
  const hi = Math.max(0, ...ys);
  const span = hi - lo || 1;
  const n = spec.points.length;

  const xPos = (i: number): number => MARGIN.left + ((i + 0.5) / n) * plotW;
  const yPos = (v: number): number => MARGIN.top + ((hi - v) / span) * plotH;

  // axes
  svg.appendChild(
    svgElement("line", {
      x1: String(MARGIN.left),
      y1: String(yPos(0)),
      x2: String(WIDTH - MARGIN.right),
      y2: String(yPos(0)),
      class: "axis",
    }),
  );
  svg.appendChild(
    svgElement("line", {
      x1: String(MARGIN.left),
      y1: String(MARGIN.top),
      x2: String(MARGIN.left),
      y2: String(HEIGHT - MARGIN.bottom),
      class: "axis",
    }),
  );

  if (spec.kind === "line" || spec.kind === "line_marker") {
    const path = spec.points
      .map(([, y], i) => `${xPos(i).toFixed(1)},${yPos(y).toFixed(1)}`)
      .join(" ");
    svg.appendChild(svgElement("polyline", { points: path, class: "series" }));
  }

  spec.points.forEach(([x, y], i) => {
    let mark: SVGElement;
    if (spec.kind === "bar") {
      const barWidth = Math.max(2, (plotW / n) * 0.7);
      const top = Math.min(yPos(0), yPos(y));
      const height = Math.max(1, Math.abs(yPos(y) - yPos(0)));
      mark = svgElement("rect", {
        x: (xPos(i) - barWidth / 2).toFixed(1),
        y: top.toFixed(1),
        width: barWidth.toFixed(1),
        height: height.toFixed(1),
        class: "mark",
      });
    } else {
      const radius = spec.kind === "line" ? 0 : 3.5;
      mark = svgElement("circle", {
        cx: xPos(i).toFixed(1),
        cy: yPos(y).toFixed(1),
        r: String(radius),
        class: "mark",
      });
    }
    const tip = svgElement("title", {});
    tip.textContent = `${xText(x)}: ${y}`;
    mark.appendChild(tip);
    svg.appendChild(mark);
  });

  // sparse x labels
  const step = Math.max(1, Math.ceil(n / 12));
  spec.points.forEach(([x], i) => {
    if (i % step !== 0) return;
    const label = svgElement("text", {
      x: xPos(i).toFixed(1),
      y: String(HEIGHT - MARGIN.bottom + 18),
      "text-anchor": "middle",
      class: "tick-label",
    });
    label.textContent = xText(x);
    svg.appendChild(label);
  });

  const xAxis = svgElement("text", {
    x: String(MARGIN.left + plotW / 2),
    y: String(HEIGHT - 8),
    "text-anchor": "middle",
    class: "axis-label",
  });
  xAxis.textContent = spec.x_label;
  svg.appendChild(xAxis);

  const yAxis = svgElement("text", {
    x: "14",
    y: String(MARGIN.top + plotH / 2),
    "text-anchor": "middle",
    transform: `rotate(-90 14 ${MARGIN.top + plotH / 2})`,
    class: "axis-label",
  });
  yAxis.textContent = spec.y_label;
  svg.appendChild(yAxis);
}

function renderPie(svg: SVGSVGElement, spec: PlotSpecJson): void {
  const cx = WIDTH / 2;
  const cy = HEIGHT / 2;
  const radius = Math.min(WIDTH, HEIGHT) / 2 - 40;
  const total = spec.points.reduce((acc, [, y]) => acc + y, 0);

  let angle = -Math.PI / 2;
  spec.points.forEach(([x, y], i) => {
    const fraction = total > 0 ? y / total : 0;
    const sweep = fraction * 2 * Math.PI;
    let mark: SVGElement;
    if (fraction >= 1) {
      mark = svgElement("circle", {
        cx: String(cx),
        cy: String(cy),
        r: String(radius),
        class: "mark",
        "data-fraction": String(fraction),
      });
    } else {
      const x1 = cx + radius * Math.cos(angle);
      const y1 = cy + radius * Math.sin(angle);
      const x2 = cx + radius * Math.cos(angle + sweep);
      const y2 = cy + radius * Math.sin(angle + sweep);
      const large = sweep > Math.PI ? 1 : 0;
      mark = svgElement("path", {
        d:
          `M ${cx.toFixed(1)} ${cy.toFixed(1)} ` +
          `L ${x1.toFixed(1)} ${y1.toFixed(1)} ` +
          `A ${radius} ${radius} 0 ${large} 1 ${x2.toFixed(1)} ${y2.toFixed(1)} Z`,
        class: "mark",
        "data-fraction": String(fraction),
        "data-slice": String(i),
      });
    }
    const tip = svgElement("title", {});
    tip.textContent = `${xText(x)}: ${y} (${(fraction * 100).toFixed(1)}%)`;
    mark.appendChild(tip);
    svg.appendChild(mark);
    angle += sweep;
  });

  const caption = svgElement("text", {
    x: String(cx),
    y: String(HEIGHT - 10),
    "text-anchor": "middle",
    class: "axis-label",
  });
  caption.textContent = `${spec.y_label} by ${spec.x_label}`;
  svg.appendChild(caption);
}
