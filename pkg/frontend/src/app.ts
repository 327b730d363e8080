/** What-if explorer wiring: pick operations, watch the risk answer move.
 *
 * The page is a pure client of /api/v1 — topology, scores, and sweep all
 * come from the service, and the whole view is reproducible from the URL
 * query string (?ops=OPC1,OPE1&mode=affected-paths).
 */

import { ApiError, RiskApi } from './api.js';
import { renderGauge } from './gauge.js';
import { renderTopology } from './graph.js';
import {
  applyStateToSearch,
  defaultState,
  queryToState,
  setMode,
  toggleOp,
  type UiState,
} from './state.js';
import { renderSweepChart } from './sweep.js';
import type { RiskMode, RiskReport, SnapshotSummary, SweepResponse } from './types.js';

const MODES: RiskMode[] = ['affected-paths', 'literal'];

export class App {
  state: UiState = defaultState();
  summary: SnapshotSummary | null = null;
  lastReport: RiskReport | null = null;
  lastSweep: SweepResponse | null = null;
  /** Most recent fetch round triggered by a UI event; awaitable in tests. */
  pending: Promise<void> = Promise.resolve();

  private readonly regions: Record<string, HTMLElement> = {};

  constructor(
    private readonly root: HTMLElement,
    private readonly api: RiskApi,
    private readonly win: Window = window,
  ) {}

  async start(): Promise<void> {
    this.state = queryToState(this.win.location.search);
    this.buildSkeleton();
    await this.loadEverything();
  }

  private async loadEverything(): Promise<void> {
    this.clearBanner();
    try {
      this.summary = await this.api.snapshot();
    } catch (error) {
      this.summary = null;
      if (error instanceof ApiError && error.code === 'no_snapshot') {
        this.showEmptyState();
      } else {
        this.showBanner(error, () => this.loadEverything());
      }
      return;
    }
    this.renderAll();
    await Promise.all([this.refreshRisk(), this.refreshSweep()]);
  }

  toggle(label: string): void {
    this.state = toggleOp(this.state, label);
    this.syncUrl();
    this.renderOpsPanel();
    this.renderSweep(); // selection highlight only; sweep data is mode-bound
    this.pending = this.refreshRisk();
  }

  switchMode(mode: RiskMode): void {
    if (mode === this.state.mode) return;
    this.state = setMode(this.state, mode);
    this.syncUrl();
    this.renderModePicker();
    this.pending = Promise.all([this.refreshRisk(), this.refreshSweep()]).then(() => undefined);
  }

  private syncUrl(): void {
    const query = applyStateToSearch(this.win.location.search, this.state);
    const url = this.win.location.pathname + query;
    this.win.history.replaceState(null, '', url);
  }

  private async refreshRisk(): Promise<void> {
    if (!this.summary) return;
    if (!this.state.ops.length) {
      this.lastReport = null;
      this.renderResults();
      return;
    }
    try {
      const report = await this.api.queryRisk(this.state.ops, this.state.mode);
      if (report === null) return; // superseded by a newer query
      this.lastReport = report;
      this.renderResults();
    } catch (error) {
      this.showBanner(error, () => this.refreshRisk());
    }
  }

  private async refreshSweep(): Promise<void> {
    if (!this.summary) return;
    try {
      this.lastSweep = await this.api.sweep(this.state.mode);
      this.renderSweep();
    } catch (error) {
      this.showBanner(error, () => this.refreshSweep());
    }
  }

  affectedPathIds(): Set<number> {
    return new Set((this.lastReport?.per_path ?? []).map((row) => row.path));
  }

  // --- rendering -----------------------------------------------------------

  private region(name: string): HTMLElement {
    return this.regions[name]!;
  }

  private buildSkeleton(): void {
    this.root.textContent = '';
    const banner = document.createElement('div');
    banner.className = 'banner hidden';
    this.regions.banner = banner;
    this.root.appendChild(banner);

    const grid = document.createElement('div');
    grid.className = 'layout';
    for (const [name, title] of [
      ['gauge', 'Risk'],
      ['ops', 'Breaking operations'],
      ['topology', 'Topology'],
      ['sweep', 'Single-break sweep'],
    ] as const) {
      const section = document.createElement('section');
      section.className = `panel panel-${name}`;
      const heading = document.createElement('h2');
      heading.textContent = title;
      section.appendChild(heading);
      const body = document.createElement('div');
      body.className = 'panel-body';
      body.dataset.region = name;
      section.appendChild(body);
      this.regions[name] = body;
      grid.appendChild(section);
    }
    this.root.appendChild(grid);
  }

  private renderAll(): void {
    this.renderOpsPanel();
    this.renderResults();
    this.renderSweep();
  }

  private renderResults(): void {
    if (!this.summary) return;
    renderGauge(this.region('gauge'), this.summary, this.lastReport);
    renderTopology(this.region('topology'), this.summary, this.affectedPathIds());
  }

  private renderSweep(): void {
    renderSweepChart(this.region('sweep'), this.lastSweep, new Set(this.state.ops), (op) =>
      this.toggle(op),
    );
  }

  private renderOpsPanel(): void {
    if (!this.summary) return;
    const panel = this.region('ops');
    panel.textContent = '';
    this.renderModePicker();

    const known = new Set(this.summary.operations.map((op) => op.label));
    const list = document.createElement('div');
    list.className = 'op-list';
    for (const op of this.summary.operations) {
      const item = document.createElement('label');
      item.className = 'op-item';
      const box = document.createElement('input');
      box.type = 'checkbox';
      box.value = op.label;
      box.checked = this.state.ops.includes(op.label);
      box.addEventListener('change', () => this.toggle(op.label));
      item.appendChild(box);
      const text = document.createElement('span');
      text.textContent = `${op.label} — service ${op.service}`;
      item.appendChild(text);
      list.appendChild(item);
    }
    // free-text entries (planned but unobserved operations) stay toggleable
    for (const label of this.state.ops.filter((op) => !known.has(op))) {
      const item = document.createElement('label');
      item.className = 'op-item unknown';
      const box = document.createElement('input');
      box.type = 'checkbox';
      box.value = label;
      box.checked = true;
      box.addEventListener('change', () => this.toggle(label));
      item.appendChild(box);
      const text = document.createElement('span');
      text.textContent = `${label} — not observed`;
      item.appendChild(text);
      list.appendChild(item);
    }
    panel.appendChild(list);

    const form = document.createElement('form');
    form.className = 'op-entry';
    const input = document.createElement('input');
    input.type = 'text';
    input.placeholder = 'add operation label…';
    form.appendChild(input);
    const button = document.createElement('button');
    button.type = 'submit';
    button.textContent = 'add';
    form.appendChild(button);
    form.addEventListener('submit', (event) => {
      event.preventDefault();
      if (input.value.trim()) {
        this.toggle(input.value);
        input.value = '';
      }
    });
    panel.appendChild(form);
  }

  private renderModePicker(): void {
    const panel = this.region('ops');
    let picker = panel.querySelector<HTMLElement>('.mode-picker');
    if (!picker) {
      picker = document.createElement('div');
      picker.className = 'mode-picker';
      panel.prepend(picker);
    }
    picker.textContent = '';
    for (const mode of MODES) {
      const label = document.createElement('label');
      const radio = document.createElement('input');
      radio.type = 'radio';
      radio.name = 'mode';
      radio.value = mode;
      radio.checked = this.state.mode === mode;
      radio.addEventListener('change', () => this.switchMode(mode));
      label.appendChild(radio);
      label.appendChild(document.createTextNode(` ${mode}`));
      picker.appendChild(label);
    }
  }

  private showEmptyState(): void {
    for (const name of ['gauge', 'ops', 'topology', 'sweep']) {
      const region = this.regions[name];
      if (region) {
        region.textContent = '';
        const empty = document.createElement('p');
        empty.className = 'empty-state';
        empty.textContent = 'No snapshot is loaded on the service.';
        region.appendChild(empty);
      }
    }
  }

  private showBanner(error: unknown, retry: () => Promise<void> | void): void {
    const banner = this.region('banner');
    banner.textContent = '';
    banner.classList.remove('hidden');
    const message = document.createElement('span');
    message.textContent =
      error instanceof Error ? `request failed: ${error.message}` : 'request failed';
    banner.appendChild(message);
    const button = document.createElement('button');
    button.type = 'button';
    button.textContent = 'retry';
    button.addEventListener('click', () => {
      this.clearBanner();
      this.pending = Promise.resolve(retry());
    });
    banner.appendChild(button);
  }

  private clearBanner(): void {
    const banner = this.regions.banner;
    if (banner) {
      banner.textContent = '';
      banner.classList.add('hidden');
    }
  }
}
