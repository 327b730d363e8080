/** Single-break sweep chart: one bar per operation, sorted by the server.
 * Clicking a bar toggles that operation into the breaking set.
 */

import { formatScore } from './format.js';
import type { SweepResponse } from './types.js';

export function renderSweepChart(
  container: HTMLElement,
  sweep: SweepResponse | null,
  selected: ReadonlySet<string>,
  onToggle: (label: string) => void,
): void {
  container.textContent = '';
  if (!sweep || !sweep.results.length) {
    const empty = document.createElement('p');
    empty.className = 'empty-state';
    empty.textContent = 'No operations to sweep.';
    container.appendChild(empty);
    return;
  }

  for (const entry of sweep.results) {
    const row = document.createElement('button');
    row.type = 'button';
    row.className = selected.has(entry.op) ? 'sweep-row selected' : 'sweep-row';
    row.dataset.op = entry.op;
    row.addEventListener('click', () => onToggle(entry.op));

    const name = document.createElement('span');
    name.className = 'sweep-op';
    name.textContent = entry.op;
    row.appendChild(name);

    const track = document.createElement('span');
    track.className = 'sweep-track';
    const fill = document.createElement('span');
    fill.className = 'sweep-fill';
    fill.style.width = `${Math.round(entry.score * 1000) / 10}%`;
    track.appendChild(fill);
    row.appendChild(track);

    const score = document.createElement('span');
    score.className = 'sweep-score';
    score.textContent = formatScore(entry.score);
    row.appendChild(score);

    container.appendChild(row);
  }
}
