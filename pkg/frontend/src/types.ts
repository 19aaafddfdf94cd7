// JSON shapes of the statguide HTTP API.

export interface WorkflowStepSummary {
  id: string;
  title: string;
  kind: "user_input" | "assumption_check" | "result_presentation";
}

export interface WorkflowSummary {
  id: string;
  name: string;
  steps: WorkflowStepSummary[];
}

export interface ParamSpec {
  name: string;
  kind: "column-ref" | "column-ref-list" | "category-value" | "enum" | "real" | "flag";
  required: boolean;
  default: unknown;
  choices: string[] | null;
  constraints: Record<string, unknown>;
}

export interface ColumnInfo {
  name: string;
  dtype: "numeric" | "categorical";
  missing_count: number;
}

export interface DatasetOverview {
  row_count: number;
  version: number;
  columns: ColumnInfo[];
  preview: Record<string, unknown>[];
  provenance: string[];
}

export interface Suggestion {
  id: string;
  message: string;
  action: Record<string, unknown> & { type: string };
}

export type StepStatus = "pending" | "active" | "done" | "invalidated";

export interface StepState {
  def_id: string;
  title: string;
  kind: WorkflowStepSummary["kind"];
  status: StepStatus;
  inputs: Record<string, unknown>;
  effective_inputs: Record<string, unknown> | null;
  outputs: Record<string, any> | null;
  active_suggestions: Suggestion[];
  preset_inputs: Record<string, unknown>;
  applied_actions: string[];
  input_schema: ParamSpec[];
}

export interface SessionState {
  session_id: string;
  workflow: WorkflowSummary;
  dataset: DatasetOverview;
  active_step: string | null;
  steps: StepState[];
}

export interface SessionPayload {
  session: SessionState;
  outcome?: Record<string, unknown>;
  effect?: ActionEffect;
}

export interface ActionEffect {
  type: "preset_parameter" | "emit_snippet" | "show_notice";
  target_step?: string;
  param?: string;
  value?: unknown;
  text?: string;
  snippet?: { template_id: string; rendered_text: string; bindings: Record<string, string> };
}

export interface Explanation {
  objective: string;
  concepts_and_interpretation: string;
  suggested_actions: string[];
}

export interface ReportStep {
  step_id: string;
  title: string;
  kind: string;
  status: StepStatus;
  inputs: Record<string, unknown>;
  assumption_outcome: "pass" | "violated" | "bypassed" | null;
  actions_taken: string[];
  outputs: Record<string, any> | null;
}

export interface Report {
  session_id: string;
  workflow_id: string;
  workflow_name: string;
  dataset: { version: number; row_count: number; provenance: string[] };
  steps: ReportStep[];
  final_results: Record<string, any> | null;
  unresolved_violations: string[];
  history: unknown[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: { param?: string; reason?: string }[];
}

export interface HistogramData {
  bin_edges: number[];
  counts: number[];
}

export interface DensityCurve {
  xs: number[];
  ys: number[];
  bandwidth: number;
}
