import { describe, expect, it } from 'vitest';

import {
  applyStateToSearch,
  defaultState,
  queryToState,
  setMode,
  stateToQuery,
  toggleOp,
} from '../src/state.js';

describe('toggleOp', () => {
  it('adds then removes (involution)', () => {
    const once = toggleOp(defaultState(), 'OPE1');
    expect(once.ops).toEqual(['OPE1']);
    expect(toggleOp(once, 'OPE1').ops).toEqual([]);
  });

  it('keeps selection order', () => {
    let state = defaultState();
    for (const op of ['OPC1', 'OPE1', 'OPA1']) state = toggleOp(state, op);
    expect(state.ops).toEqual(['OPC1', 'OPE1', 'OPA1']);
    state = toggleOp(state, 'OPE1');
    expect(state.ops).toEqual(['OPC1', 'OPA1']);
  });

  it('ignores blank labels', () => {
    expect(toggleOp(defaultState(), '  ').ops).toEqual([]);
  });
});

describe('url round trip', () => {
  it('renders the documented shape', () => {
    const state = { ops: ['OPC1', 'OPE1'], mode: 'affected-paths' as const };
    expect(stateToQuery(state)).toBe('?ops=OPC1,OPE1&mode=affected-paths');
  });

  it('parses back to the same state', () => {
    const state = setMode(toggleOp(toggleOp(defaultState(), 'OPC1'), 'OPE1'), 'literal');
    expect(queryToState(stateToQuery(state))).toEqual(state);
  });

  it('empty state keeps the url clean', () => {
    expect(stateToQuery(defaultState())).toBe('');
  });

  it('non-default mode survives without ops', () => {
    const state = setMode(defaultState(), 'literal');
    expect(stateToQuery(state)).toBe('?mode=literal');
    expect(queryToState('?mode=literal')).toEqual(state);
  });

  it('unknown mode falls back to the default', () => {
    expect(queryToState('?mode=bogus').mode).toBe('affected-paths');
  });

  it('deduplicates ops from hand-edited urls', () => {
    expect(queryToState('?ops=OPE1,OPE1,OPC1').ops).toEqual(['OPE1', 'OPC1']);
  });

  it('preserves unrelated query params', () => {
    const next = applyStateToSearch('?api=http%3A%2F%2Flocalhost%3A8080', {
      ops: ['OPC1'],
      mode: 'affected-paths',
    });
    expect(next).toContain('api=');
    expect(next).toContain('ops=OPC1');
    const cleared = applyStateToSearch(next, defaultState());
    expect(cleared).toContain('api=');
    expect(cleared).not.toContain('ops=');
  });
});
