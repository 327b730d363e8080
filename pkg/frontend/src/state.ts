/** UI state and its URL query-string round trip.
 *
 * Every view is reproducible from (selected ops, mode) alone, so the whole
 * state lives in the query string and deep links restore it exactly.
 */

import type { RiskMode } from './types.js';

export const DEFAULT_MODE: RiskMode = 'affected-paths';

export interface UiState {
  ops: string[];
  mode: RiskMode;
}

export function defaultState(): UiState {
  return { ops: [], mode: DEFAULT_MODE };
}

/** Add the label if absent, remove it if present (involution). */
export function toggleOp(state: UiState, label: string): UiState {
  const trimmed = label.trim();
  if (!trimmed) return state;
  const ops = state.ops.includes(trimmed)
    ? state.ops.filter((op) => op !== trimmed)
    : [...state.ops, trimmed];
  return { ...state, ops };
}

export function setMode(state: UiState, mode: RiskMode): UiState {
  return { ...state, mode };
}

function parseMode(raw: string | null): RiskMode {
  return raw === 'literal' || raw === 'affected-paths' ? raw : DEFAULT_MODE;
}

/** Read ops/mode out of a query string; unknown params are left alone. */
export function queryToState(search: string): UiState {
  const params = new URLSearchParams(search);
  const rawOps = params.get('ops') ?? '';
  const ops: string[] = [];
  for (const piece of rawOps.split(',')) {
    const label = piece.trim();
    if (label && !ops.includes(label)) ops.push(label);
  }
  return { ops, mode: parseMode(params.get('mode')) };
}

/** Write ops/mode into a query string, preserving unrelated params. */
export function applyStateToSearch(search: string, state: UiState): string {
  const params = new URLSearchParams(search);
  if (state.ops.length) {
    params.set('ops', state.ops.join(','));
    params.set('mode', state.mode);
  } else {
    params.delete('ops');
    if (state.mode !== DEFAULT_MODE) params.set('mode', state.mode);
    else params.delete('mode');
  }
  // keep the op-separating commas readable: ?ops=OPC1,OPE1&mode=...
  const text = params.toString().replace(/%2C/g, ',');
  return text ? `?${text}` : '';
}

export function stateToQuery(state: UiState): string {
  return applyStateToSearch('', state);
}
