import { describe, expect, it } from 'vitest';

import { buildGraphModel, renderTopology } from '../src/graph.js';
import type { SnapshotSummary } from '../src/types.js';
import { fixtureJson } from './helpers.js';

const summary = fixtureJson<SnapshotSummary>('snapshot_mce0.json');

describe('buildGraphModel', () => {
  it('one node per service plus the entry node', () => {
    const model = buildGraphModel(summary);
    expect(model.nodes).toHaveLength(8); // 7 services + entry
    expect(model.nodes.filter((n) => n.kind === 'entry')).toHaveLength(1);
  });

  it('one labeled edge per stored branch row', () => {
    const model = buildGraphModel(summary);
    expect(model.edges).toHaveLength(12);
    const roots = model.edges.filter((e) => e.from === '__entry__');
    expect(roots.map((e) => e.op).sort()).toEqual(['OPA1', 'OPD1', 'OPD2', 'OPF1']);
  });

  it('derives the caller from the penultimate operation', () => {
    const model = buildGraphModel(summary);
    const deep = model.edges.find((e) => e.key === 'OPD1;OPB2;OPE1');
    expect(deep).toMatchObject({ from: 'B', to: 'E', op: 'OPE1', count: 15, pathId: 3 });
  });
});

describe('renderTopology', () => {
  it('draws every edge and highlights affected paths', () => {
    const container = document.createElement('div');
    renderTopology(container, summary, new Set([3, 4]));
    const edges = container.querySelectorAll('.edge');
    expect(edges).toHaveLength(12);
    const affected = [...container.querySelectorAll('.edge.affected')];
    const affectedPathIds = new Set(affected.map((e) => e.getAttribute('data-path')));
    expect(affectedPathIds).toEqual(new Set(['3', '4']));
    expect(container.textContent).toContain('OPB1 (20)');
  });

  it('shows an empty state without paths', () => {
    const container = document.createElement('div');
    renderTopology(
      container,
      { entry_label: 'ENTRY', grand_total: 0, services: [], operations: [], paths: [] },
      new Set(),
    );
    expect(container.querySelector('.empty-state')).not.toBeNull();
  });
});
