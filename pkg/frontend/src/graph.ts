/** Topology view: entry node plus one node per service, one labeled edge
 * per stored branch row. Edges carry their path id so affected paths can be
 * highlighted after a risk query.
 */

import type { SnapshotSummary } from './types.js';

export interface GraphNode {
  id: string;
  kind: 'entry' | 'service';
  depth: number;
}

export interface GraphEdge {
  from: string;
  to: string;
  op: string;
  count: number;
  pathId: number;
  key: string;
}

export interface GraphModel {
  nodes: GraphNode[];
  edges: GraphEdge[];
}

const ENTRY_ID = '__entry__';

export function buildGraphModel(summary: SnapshotSummary): GraphModel {
  const serviceOf = new Map<string, string>();
  for (const op of summary.operations) serviceOf.set(op.label, op.service);

  const edges: GraphEdge[] = [];
  const depth = new Map<string, number>();
  for (const path of summary.paths) {
    for (const key of Object.keys(path.branches).sort()) {
      const labels = key.split(';');
      const last = labels[labels.length - 1]!;
      const to = serviceOf.get(last) ?? last;
      const from =
        labels.length === 1 ? ENTRY_ID : serviceOf.get(labels[labels.length - 2]!) ?? ENTRY_ID;
      edges.push({
        from,
        to,
        op: last,
        count: path.branches[key]!,
        pathId: path.id,
        key,
      });
      depth.set(to, Math.min(depth.get(to) ?? labels.length, labels.length));
    }
  }

  const nodes: GraphNode[] = [{ id: ENTRY_ID, kind: 'entry', depth: 0 }];
  for (const service of summary.services) {
    nodes.push({ id: service, kind: 'service', depth: depth.get(service) ?? 1 });
  }
  return { nodes, edges };
}

const SVG_NS = 'http://www.w3.org/2000/svg';
const COLUMN_WIDTH = 170;
const ROW_HEIGHT = 78;
const MARGIN = 48;

interface Point {
  x: number;
  y: number;
}

function layout(model: GraphModel): Map<string, Point> {
  const columns = new Map<number, GraphNode[]>();
  for (const node of model.nodes) {
    const column = columns.get(node.depth) ?? [];
    column.push(node);
    columns.set(node.depth, column);
  }
  const points = new Map<string, Point>();
  for (const [depth, nodes] of columns) {
    nodes.sort((a, b) => a.id.localeCompare(b.id));
    nodes.forEach((node, row) => {
      points.set(node.id, { x: MARGIN + depth * COLUMN_WIDTH, y: MARGIN + row * ROW_HEIGHT });
    });
  }
  return points;
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attributes: Record<string, string>,
): SVGElementTagNameMap[K] {
  const element = document.createElementNS(SVG_NS, tag);
  for (const [name, value] of Object.entries(attributes)) {
    element.setAttribute(name, value);
  }
  return element;
}

/** Draw the topology; edges on affected paths get the "affected" class. */
export function renderTopology(
  container: HTMLElement,
  summary: SnapshotSummary,
  affectedPathIds: ReadonlySet<number>,
): void {
  const model = buildGraphModel(summary);
  const points = layout(model);
  container.textContent = '';

  if (!model.edges.length) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = 'No call paths observed in this snapshot.';
    container.appendChild(empty);
    return;
  }

  const width = MARGIN * 2 + COLUMN_WIDTH * Math.max(...model.nodes.map((n) => n.depth));
  const height = MARGIN + ROW_HEIGHT * Math.max(3, ...countRows(model));
  const svg = svgElement('svg', {
    viewBox: `0 0 ${width + MARGIN} ${height}`,
    class: 'topology',
    role: 'img',
  });

  const seenPairs = new Map<string, number>();
  for (const edge of model.edges) {
    const from = points.get(edge.from)!;
    const to = points.get(edge.to)!;
    const pairKey = `${edge.from}->${edge.to}`;
    const offset = (seenPairs.get(pairKey) ?? 0) * 14;
    seenPairs.set(pairKey, (seenPairs.get(pairKey) ?? 0) + 1);

    const affected = affectedPathIds.has(edge.pathId);
    const group = svgElement('g', {
      class: affected ? 'edge affected' : 'edge',
      'data-path': String(edge.pathId),
      'data-key': edge.key,
    });
    const midX = (from.x + to.x) / 2;
    const midY = (from.y + to.y) / 2 + offset;
    group.appendChild(
      svgElement('path', {
        d: `M ${from.x} ${from.y} Q ${midX} ${midY + 8} ${to.x} ${to.y}`,
        fill: 'none',
      }),
    );
    const label = svgElement('text', { x: String(midX), y: String(midY - 2), class: 'edge-label' });
    label.textContent = `${edge.op} (${edge.count})`;
    group.appendChild(label);
    svg.appendChild(group);
  }

  for (const node of model.nodes) {
    const point = points.get(node.id)!;
    const group = svgElement('g', { class: `node ${node.kind}` });
    group.appendChild(
      svgElement('circle', { cx: String(point.x), cy: String(point.y), r: '22' }),
    );
    const text = svgElement('text', {
      x: String(point.x),
      y: String(point.y + 4),
      'text-anchor': 'middle',
      class: 'node-label',
    });
    text.textContent = node.kind === 'entry' ? 'entry' : node.id;
    group.appendChild(text);
    svg.appendChild(group);
  }

  container.appendChild(svg);
}

function countRows(model: GraphModel): number[] {
  const perDepth = new Map<number, number>();
  for (const node of model.nodes) {
    perDepth.set(node.depth, (perDepth.get(node.depth) ?? 0) + 1);
  }
  return [...perDepth.values()];
}
