import { readFileSync } from 'node:fs';
import { join } from 'node:path';

export function fixtureText(name: string): string {
  // vitest runs with the package root as cwd; import.meta.url is rewritten
  // by the jsdom environment, so resolve from cwd instead
  return readFileSync(join(process.cwd(), 'tests', 'fixtures', name), 'utf-8');
}

export function fixtureJson<T>(name: string): T {
  return JSON.parse(fixtureText(name)) as T;
}

const RISK_FIXTURES: Record<string, string> = {
  'affected-paths|OPC1': 'risk_opc1.json',
  'affected-paths|OPE1': 'risk_ope1.json',
  'affected-paths|OPC1,OPE1': 'risk_opc1_ope1.json',
  'literal|OPE1': 'risk_ope1_literal.json',
};

function jsonResponse(text: string, status = 200): Response {
  return new Response(text, {
    status,
    headers: { 'content-type': 'application/json' },
  });
}

/** Serves the captured service responses for the mce0 snapshot. */
export function installFetchStub(): string[] {
  const calls: string[] = [];
  const stub = async (input: RequestInfo | URL, init?: RequestInit): Promise<Response> => {
    const url = String(input);
    calls.push(url);
    if (url.endsWith('/api/v1/snapshot')) {
      return jsonResponse(fixtureText('snapshot_mce0.json'));
    }
    if (url.includes('/api/v1/sweep')) {
      return jsonResponse(fixtureText('sweep_mce0.json'));
    }
    if (url.endsWith('/api/v1/risk')) {
      const body = JSON.parse(String(init?.body ?? '{}')) as {
        operations?: string[];
        mode?: string;
      };
      const ops = [...(body.operations ?? [])].sort().join(',');
      const key = `${body.mode ?? 'affected-paths'}|${ops}`;
      const fixture = RISK_FIXTURES[key];
      if (!fixture) {
        return jsonResponse(
          JSON.stringify({ code: 'missing_fixture', message: `no fixture for ${key}` }),
          500,
        );
      }
      return jsonResponse(fixtureText(fixture));
    }
    return jsonResponse(JSON.stringify({ code: 'not_found', message: url }), 404);
  };
  globalThis.fetch = stub as typeof fetch;
  return calls;
}
