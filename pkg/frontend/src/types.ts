/** Shapes of the /api/v1 responses this client consumes. */

export type RiskMode = 'literal' | 'affected-paths';

export interface OperationInfo {
  label: string;
  service: string;
  name: string;
}

export interface PathInfo {
  id: number;
  root: string;
  weight: number;
  branches: Record<string, number>;
}

export interface SnapshotSummary {
  entry_label: string;
  grand_total: number;
  services: string[];
  operations: OperationInfo[];
  paths: PathInfo[];
}

export interface PathContribution {
  path: number;
  contribution: number;
}

export interface BranchContribution {
  branch: string;
  op: string | null;
  contribution: number;
}

export interface RiskReport {
  mode: RiskMode;
  total: number;
  clamped: boolean;
  per_path: PathContribution[];
  per_branch: BranchContribution[];
  unmatched: string[];
}

export interface SweepEntry {
  op: string;
  score: number;
}

export interface SweepResponse {
  mode: RiskMode;
  results: SweepEntry[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
}
