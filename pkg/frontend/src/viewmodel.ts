// Session view model: the last API response plus local form state.
//
// No statistics are computed client-side; every number rendered comes from
// the server's step outputs. A monotone response counter discards stale
// responses, and a single-mutation guard keeps one in-flight write per
// session.

import { ApiClient, ApiError } from "./api.js";
import type { ParamSpec, SessionPayload, SessionState, StepState } from "./types.js";

export type Listener = (vm: SessionViewModel) => void;

export class SessionViewModel {
  session: SessionState | null = null;
  selectedStep: string | null = null;
  formValues: Map<string, Record<string, unknown>> = new Map();
  fieldErrors: Map<string, string> = new Map(); // param -> reason, for the selected step
  globalError: string | null = null;
  lastEffect: SessionPayload["effect"] | null = null;

  private responseSeq = 0;
  private applied = 0;
  private inflight = false;
  private listeners: Listener[] = [];

  constructor(public api: ApiClient) {}

  get token(): string {
    if (!this.session) throw new Error("no session");
    return this.session.session_id;
  }

  onChange(listener: Listener): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const l of this.listeners) l(this);
  }

  /** Install a server response; stale responses (older seq) are dropped. */
  update(payload: SessionPayload, seq?: number): void {
    const n = seq ?? ++this.responseSeq;
    if (n < this.applied) return;
    this.applied = n;
    this.session = payload.session;
    if (payload.effect) this.lastEffect = payload.effect;
    if (
      this.selectedStep === null ||
      !payload.session.steps.some((s) => s.def_id === this.selectedStep)
    ) {
      this.selectedStep = payload.session.active_step ?? payload.session.steps[0].def_id;
    }
    this.notify();
  }

  select(stepId: string): void {
    this.selectedStep = stepId;
    this.fieldErrors.clear();
    this.globalError = null;
    this.notify();
  }

  step(stepId: string): StepState {
    const found = this.session?.steps.find((s) => s.def_id === stepId);
    if (!found) throw new Error(`unknown step ${stepId}`);
    return found;
  }

  get selected(): StepState | null {
    return this.selectedStep ? this.step(this.selectedStep) : null;
  }

  get activeStep(): StepState | null {
    const id = this.session?.active_step;
    return id ? this.step(id) : null;
  }

  get busy(): boolean {
    return this.inflight;
  }

  /** Pending local value for a form field, falling back to preset/default. */
  fieldValue(stepId: string, spec: ParamSpec): unknown {
    const local = this.formValues.get(stepId)?.[spec.name];
    if (local !== undefined) return local;
    const step = this.step(stepId);
    if (spec.name in step.preset_inputs) return step.preset_inputs[spec.name];
    if (step.inputs && spec.name in step.inputs) return step.inputs[spec.name];
    return spec.default ?? undefined;
  }

  isPreset(stepId: string, param: string): boolean {
    const step = this.step(stepId);
    return param in step.preset_inputs && !(this.formValues.get(stepId)?.[param] !== undefined);
  }

  setField(stepId: string, param: string, value: unknown): void {
    const bag = this.formValues.get(stepId) ?? {};
    if (value === undefined) {
      delete bag[param];
    } else {
      bag[param] = value;
    }
    this.formValues.set(stepId, bag);
  }

  /** Collected explicit inputs for a step; presets/defaults are left to the server. */
  collectInputs(stepId: string): Record<string, unknown> {
    return { ...(this.formValues.get(stepId) ?? {}) };
  }

  /** Run one mutating call; rejects overlapping mutations for the session. */
  async mutate(fn: (api: ApiClient, token: string) => Promise<SessionPayload>): Promise<boolean> {
    if (this.inflight) return false;
    this.inflight = true;
    this.fieldErrors.clear();
    this.globalError = null;
    const seq = ++this.responseSeq;
    try {
      const payload = await fn(this.api, this.token);
      this.update(payload, seq);
      return true;
    } catch (err) {
      if (err instanceof ApiError) {
        for (const d of err.body.details ?? []) {
          if (d.param) this.fieldErrors.set(d.param, d.reason ?? "invalid");
        }
        this.globalError = err.body.message;
      } else {
        this.globalError = String(err);
      }
      this.notify();
      return false;
    } finally {
      this.inflight = false;
    }
  }

  async submitSelected(): Promise<boolean> {
    const step = this.selected;
    if (!step) return false;
    const inputs = this.collectInputs(step.def_id);
    const isEdit = step.status === "done";
    const ok = await this.mutate((api, token) =>
      isEdit
        ? api.editStep(token, step.def_id, { ...step.inputs, ...inputs })
        : api.submitInputs(token, step.def_id, inputs),
    );
    if (ok) this.formValues.delete(step.def_id);
    return ok;
  }

  async applySuggestion(stepId: string, suggestionId: string): Promise<boolean> {
    return this.mutate((api, token) => api.applyAction(token, stepId, suggestionId));
  }

  async replaceDataset(csvText: string): Promise<boolean> {
    return this.mutate((api, token) => api.replaceDataset(token, { csv_text: csvText }));
  }

  /** True when the UI may send inputs to this step (active/invalidated frontier, or done for edits). */
  canSubmit(step: StepState): boolean {
    return (
      step.status === "active" || step.status === "invalidated" || step.status === "done"
    );
  }
}

export async function startSession(
  api: ApiClient,
  workflowId: string,
  dataset: { sample?: string; csv_text?: string },
): Promise<SessionViewModel> {
  const vm = new SessionViewModel(api);
  const payload = await api.createSession({ workflow_id: workflowId, ...dataset });
  vm.update(payload);
  return vm;
}
