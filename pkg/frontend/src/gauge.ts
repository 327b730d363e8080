/** Risk gauge: the headline score plus per-path contribution bars.
 * Displays the service's numbers verbatim; no scoring happens client-side.
 */

import { formatScore } from './format.js';
import type { RiskReport, SnapshotSummary } from './types.js';

export function renderGauge(
  container: HTMLElement,
  summary: SnapshotSummary,
  report: RiskReport | null,
): void {
  container.textContent = '';

  const value = document.createElement('div');
  value.className = 'gauge-value';
  value.textContent = report ? formatScore(report.total) : '–';
  container.appendChild(value);

  const caption = document.createElement('div');
  caption.className = 'gauge-caption';
  caption.textContent = report
    ? `${report.mode} risk for the selected operations`
    : 'select operations to score a change';
  container.appendChild(caption);

  if (report) {
    if (report.per_path.length === summary.paths.length && summary.paths.length > 0) {
      const badge = document.createElement('span');
      badge.className = 'badge all-paths';
      badge.textContent = 'all paths affected';
      container.appendChild(badge);
    }
    if (report.clamped) {
      const badge = document.createElement('span');
      badge.className = 'badge clamped';
      badge.textContent = 'clamped';
      container.appendChild(badge);
    }
    if (report.unmatched.length) {
      const note = document.createElement('div');
      note.className = 'unmatched-note';
      note.textContent = `zero-risk, never requested: ${report.unmatched.join(', ')}`;
      container.appendChild(note);
    }
  }

  const bars = document.createElement('div');
  bars.className = 'path-bars';
  const contributions = new Map<number, number>();
  for (const row of report?.per_path ?? []) contributions.set(row.path, row.contribution);
  for (const path of summary.paths) {
    const row = document.createElement('div');
    row.className = 'path-bar-row';
    const contribution = contributions.get(path.id) ?? 0;

    const name = document.createElement('span');
    name.className = 'path-bar-name';
    name.textContent = `path ${path.id} (${path.root})`;
    row.appendChild(name);

    const track = document.createElement('div');
    track.className = 'path-bar-track';
    const fill = document.createElement('div');
    fill.className = contribution > 0 ? 'path-bar-fill affected' : 'path-bar-fill';
    fill.style.width = `${Math.round(contribution * 1000) / 10}%`;
    track.appendChild(fill);
    row.appendChild(track);

    const score = document.createElement('span');
    score.className = 'path-bar-score';
    score.textContent = formatScore(contribution);
    row.appendChild(score);

    bars.appendChild(row);
  }
  container.appendChild(bars);
}
