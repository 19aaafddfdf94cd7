// View rendering: step wizard, assumption panels, dataset and report views.
// Statuses and verdicts are taken verbatim from the last server response.

import { densitySvg, histogramSvg, meanDiffSvg } from "./charts.js";
import { renderForm } from "./forms.js";
import type { StepState, Suggestion } from "./types.js";
import type { SessionViewModel } from "./viewmodel.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function fmtNum(v: unknown, digits = 4): string {
  if (v === null || v === undefined) return "inf";
  const n = Number(v);
  if (Number.isInteger(n)) return String(n);
  if (Math.abs(n) < 1e-6 && n !== 0) return n.toExponential(3);
  return n.toFixed(digits);
}

export function verdictBadge(verdict: string): HTMLElement {
  return el("span", `verdict verdict-${verdict}`, verdict);
}

// -- step list ------------------------------------------------------------

export function renderStepList(vm: SessionViewModel): HTMLElement {
  const list = el("ol", "step-list");
  for (const step of vm.session?.steps ?? []) {
    const item = el("li", `step-item status-${step.status}`);
    item.dataset.stepId = step.def_id;
    const btn = el("button", "step-link", step.title);
    btn.onclick = () => vm.select(step.def_id);
    item.appendChild(btn);
    item.appendChild(el("span", `badge badge-${step.status}`, step.status));
    if (step.kind === "assumption_check" && step.outputs?.verdict) {
      item.appendChild(verdictBadge(step.outputs.verdict as string));
    }
    if (step.def_id === vm.selectedStep) item.classList.add("selected");
    list.appendChild(item);
  }
  return list;
}

// -- step outputs ------------------------------------------------------------

function keyValueTable(pairs: [string, string][]): HTMLElement {
  const table = el("table", "kv");
  for (const [k, v] of pairs) {
    const row = el("tr");
    row.appendChild(el("th", undefined, k));
    row.appendChild(el("td", undefined, v));
    table.appendChild(row);
  }
  return table;
}

function renderOutlierPanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel outlier-panel");
  panel.appendChild(
    keyValueTable([
      ["outliers", `${outputs.outlier_count} (${(outputs.outlier_fraction * 100).toFixed(2)}% of rows)`],
      ["fences", `[${fmtNum(outputs.report.lower_fence)}, ${fmtNum(outputs.report.upper_fence)}]`],
      ["median", fmtNum(outputs.box?.median)],
    ]),
  );
  if (outputs.histogram) {
    panel.appendChild(
      histogramSvg(outputs.histogram, {
        lower: outputs.report.lower_fence,
        upper: outputs.report.upper_fence,
      }),
    );
  }
  return panel;
}

function renderMultiOutlierPanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel");
  const table = el("table", "data-table");
  const head = el("tr");
  for (const h of ["variable", "outliers", "fraction"]) head.appendChild(el("th", undefined, h));
  table.appendChild(head);
  for (const r of outputs.reports ?? []) {
    const row = el("tr", r.outlier_fraction > 0.05 ? "flagged" : undefined);
    row.appendChild(el("td", undefined, r.variable));
    row.appendChild(el("td", undefined, String(r.outlier_count)));
    row.appendChild(el("td", undefined, `${(r.outlier_fraction * 100).toFixed(2)}%`));
    table.appendChild(row);
  }
  panel.appendChild(table);
  return panel;
}

function renderVifPanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel vif-panel");
  const table = el("table", "data-table");
  const head = el("tr");
  for (const h of ["variable", "VIF"]) head.appendChild(el("th", undefined, h));
  table.appendChild(head);
  for (const entry of outputs.entries ?? []) {
    const value = entry.infinite ? Infinity : entry.vif;
    const row = el("tr", value > outputs.threshold ? "flagged" : undefined);
    row.appendChild(el("td", undefined, entry.variable));
    row.appendChild(el("td", undefined, entry.infinite ? "infinite" : fmtNum(entry.vif, 2)));
    table.appendChild(row);
  }
  panel.appendChild(table);
  if (outputs.note) panel.appendChild(el("p", "note", outputs.note));
  if (outputs.interpretation) panel.appendChild(el("p", "note", outputs.interpretation));
  return panel;
}

function renderLevenePanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel levene-panel");
  panel.appendChild(
    keyValueTable([
      ["Levene W", fmtNum(outputs.levene.w)],
      ["p-value", fmtNum(outputs.levene.p)],
      ["groups", `${outputs.group_a} (n=${outputs.n_a}) vs ${outputs.group_b} (n=${outputs.n_b})`],
    ]),
  );
  panel.appendChild(
    densitySvg([
      { label: String(outputs.group_a), curve: outputs.density_a },
      { label: String(outputs.group_b), curve: outputs.density_b },
    ]),
  );
  return panel;
}

function renderNormalityPanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel normality-panel");
  panel.appendChild(
    keyValueTable([
      ["group", String(outputs.group_value)],
      ["n", String(outputs.n)],
      ["skewness", fmtNum(outputs.normality.skewness)],
      ["excess kurtosis", fmtNum(outputs.normality.excess_kurtosis)],
      ["large sample", String(outputs.large_sample)],
    ]),
  );
  panel.appendChild(el("p", "note", outputs.normality.verdict));
  if (outputs.density) {
    panel.appendChild(densitySvg([{ label: String(outputs.group_value), curve: outputs.density }]));
  }
  return panel;
}

function renderTTestPanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel result-panel");
  const t = outputs.ttest;
  panel.appendChild(
    keyValueTable([
      ["t statistic", fmtNum(t.t)],
      ["degrees of freedom", fmtNum(t.df, 1)],
      ["p-value", t.p === 0 ? "0" : fmtNum(t.p, 6)],
      ["mean difference", fmtNum(t.mean_diff)],
      ["95% CI", `[${fmtNum(t.ci_low)}, ${fmtNum(t.ci_high)}]`],
      ["equal variance", String(t.equal_variance)],
      ["reject null", String(t.reject_null)],
    ]),
  );
  if (outputs.mean_difference) panel.appendChild(meanDiffSvg(outputs.mean_difference));
  panel.appendChild(el("p", "interpretation", outputs.interpretation));
  return panel;
}

function renderRegressionPanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel result-panel");
  const m = outputs.model;
  const pairs: [string, string][] = [
    ["R-squared", fmtNum(m.r_squared)],
    ["adjusted R-squared", fmtNum(m.adj_r_squared)],
    ["observations", String(m.n_obs)],
  ];
  if (outputs.heldout_r_squared !== null && outputs.heldout_r_squared !== undefined) {
    pairs.push(["held-out R-squared", fmtNum(outputs.heldout_r_squared)]);
  }
  panel.appendChild(keyValueTable(pairs));
  const table = el("table", "data-table");
  const head = el("tr");
  for (const h of ["term", "coefficient", "std error", "t", "p"]) {
    head.appendChild(el("th", undefined, h));
  }
  table.appendChild(head);
  for (const term of m.terms) {
    const row = el("tr");
    row.appendChild(el("td", undefined, term.name));
    row.appendChild(el("td", undefined, fmtNum(term.coefficient)));
    row.appendChild(el("td", undefined, fmtNum(term.std_error)));
    row.appendChild(el("td", undefined, term.t_value === null ? "inf" : fmtNum(term.t_value, 2)));
    row.appendChild(el("td", undefined, fmtNum(term.p_value, 6)));
    table.appendChild(row);
  }
  panel.appendChild(table);
  panel.appendChild(el("p", "interpretation", outputs.interpretation));
  return panel;
}

function renderOverviewPanel(outputs: Record<string, any>): HTMLElement {
  const panel = el("div", "panel");
  panel.appendChild(keyValueTable([["rows", String(outputs.row_count)]]));
  const table = el("table", "data-table");
  const head = el("tr");
  for (const h of ["column", "dtype", "missing"]) head.appendChild(el("th", undefined, h));
  table.appendChild(head);
  for (const c of outputs.columns ?? []) {
    const row = el("tr");
    row.appendChild(el("td", undefined, c.name));
    row.appendChild(el("td", undefined, c.dtype));
    row.appendChild(el("td", undefined, String(c.missing_count)));
    table.appendChild(row);
  }
  panel.appendChild(table);
  return panel;
}

export function renderOutputs(step: StepState): HTMLElement {
  const outputs = step.outputs;
  if (!outputs) return el("div", "panel empty", "not computed yet");
  if ("ttest" in outputs) return renderTTestPanel(outputs);
  if ("model" in outputs) return renderRegressionPanel(outputs);
  if ("levene" in outputs) return renderLevenePanel(outputs);
  if ("normality" in outputs) return renderNormalityPanel(outputs);
  if ("entries" in outputs) return renderVifPanel(outputs);
  if ("reports" in outputs) return renderMultiOutlierPanel(outputs);
  if ("outlier_count" in outputs) return renderOutlierPanel(outputs);
  if ("columns" in outputs && "row_count" in outputs) return renderOverviewPanel(outputs);
  return keyValueTable(
    Object.entries(outputs).map(([k, v]) => [k, JSON.stringify(v)]),
  );
}

// -- suggestions ----------------------------------------------------------------

export function renderSuggestions(vm: SessionViewModel, step: StepState): HTMLElement {
  const box = el("div", "suggestions");
  for (const suggestion of step.active_suggestions) {
    box.appendChild(renderSuggestion(vm, step, suggestion));
  }
  return box;
}

function renderSuggestion(
  vm: SessionViewModel,
  step: StepState,
  suggestion: Suggestion,
): HTMLElement {
  const card = el("div", "suggestion");
  card.dataset.suggestionId = suggestion.id;
  card.appendChild(el("p", "suggestion-message", suggestion.message));
  const btn = el("button", "action-btn", actionLabel(suggestion));
  btn.onclick = () => void vm.applySuggestion(step.def_id, suggestion.id);
  card.appendChild(btn);
  if (step.applied_actions.includes(suggestion.id)) {
    card.appendChild(el("span", "applied-badge", "applied"));
  }
  return card;
}

function actionLabel(suggestion: Suggestion): string {
  switch (suggestion.action.type) {
    case "preset_parameter":
      return `Pre-set ${suggestion.action["param"]} = ${suggestion.action["value"]}`;
    case "emit_snippet":
      return "Export code snippet";
    case "show_notice":
      return "Show notice";
    default:
      return "Apply";
  }
}

export function renderEffect(vm: SessionViewModel): HTMLElement | null {
  const effect = vm.lastEffect;
  if (!effect) return null;
  if (effect.type === "emit_snippet" && effect.snippet) {
    const box = el("div", "effect snippet-box");
    box.appendChild(el("h4", undefined, "Exported snippet"));
    const pre = el("pre", "snippet", effect.snippet.rendered_text);
    box.appendChild(pre);
    const copy = el("button", "copy-btn", "Copy");
    copy.onclick = () => void navigator.clipboard?.writeText(effect.snippet!.rendered_text);
    box.appendChild(copy);
    return box;
  }
  if (effect.type === "show_notice" && effect.text) {
    return el("div", "effect notice", effect.text);
  }
  if (effect.type === "preset_parameter") {
    return el(
      "div",
      "effect preset-note",
      `Pre-set ${effect.param} = ${String(effect.value)} on step ${effect.target_step}`,
    );
  }
  return null;
}

// -- step panel -------------------------------------------------------------------

export function renderStepPanel(vm: SessionViewModel): HTMLElement {
  const panel = el("section", "step-panel");
  const step = vm.selected;
  if (!step) return panel;
  panel.dataset.stepId = step.def_id;

  const header = el("div", "step-header");
  header.appendChild(el("h2", undefined, step.title));
  header.appendChild(el("span", `badge badge-${step.status}`, step.status));
  if (step.kind === "assumption_check" && step.outputs?.verdict) {
    header.appendChild(verdictBadge(step.outputs.verdict as string));
  }
  panel.appendChild(header);

  const explain = el("div", "explanation");
  explain.id = "explanation-box";
  panel.appendChild(explain);
  void vm.api.getExplanation(vm.token, step.def_id).then((exp) => {
    explain.appendChild(el("p", "objective", exp.objective));
    explain.appendChild(el("p", "concepts", exp.concepts_and_interpretation));
  });

  if (step.input_schema.length > 0 && vm.canSubmit(step)) {
    panel.appendChild(renderForm(vm, step));
  }
  panel.appendChild(renderOutputs(step));
  panel.appendChild(renderSuggestions(vm, step));
  const effect = renderEffect(vm);
  if (effect) panel.appendChild(effect);
  return panel;
}

// -- dataset + report views ----------------------------------------------------------

export function renderDatasetPanel(vm: SessionViewModel): HTMLElement {
  const panel = el("section", "dataset-panel");
  const ds = vm.session?.dataset;
  if (!ds) return panel;
  panel.appendChild(el("h3", undefined, `Dataset (version ${ds.version}, ${ds.row_count} rows)`));
  for (const note of ds.provenance) panel.appendChild(el("p", "provenance", note));

  const table = el("table", "data-table preview");
  const head = el("tr");
  for (const c of ds.columns) {
    const th = el("th");
    th.appendChild(document.createTextNode(c.name));
    th.appendChild(el("span", `dtype-badge dtype-${c.dtype}`, c.dtype));
    head.appendChild(th);
  }
  table.appendChild(head);
  for (const row of ds.preview.slice(0, 50)) {
    const tr = el("tr");
    for (const c of ds.columns) {
      tr.appendChild(el("td", undefined, row[c.name] === null ? "" : String(row[c.name])));
    }
    table.appendChild(tr);
  }
  panel.appendChild(table);

  const uploadLabel = el("label", "upload-label", "Re-import a transformed CSV: ");
  const upload = el("input");
  upload.type = "file";
  upload.accept = ".csv,text/csv";
  upload.id = "reimport-input";
  upload.onchange = async () => {
    const file = upload.files?.[0];
    if (!file) return;
    const text = await file.text();
    await vm.replaceDataset(text);
  };
  uploadLabel.appendChild(upload);
  panel.appendChild(uploadLabel);
  return panel;
}

export function renderReportView(vm: SessionViewModel, container: HTMLElement): void {
  container.textContent = "";
  void vm.api.getReport(vm.token).then((report) => {
    container.appendChild(el("h3", undefined, `Report: ${report.workflow_name}`));
    const list = el("ul", "report-steps");
    for (const step of report.steps) {
      const item = el("li", "report-step");
      item.dataset.stepId = step.step_id;
      item.appendChild(el("strong", undefined, step.title));
      item.appendChild(el("span", ` badge badge-${step.status}`, step.status));
      if (step.assumption_outcome) {
        item.appendChild(el("span", "report-outcome", ` outcome: ${step.assumption_outcome}`));
      }
      if (step.actions_taken.length) {
        item.appendChild(el("span", "report-actions", ` actions: ${step.actions_taken.join(", ")}`));
      }
      list.appendChild(item);
    }
    container.appendChild(list);
    if (report.unresolved_violations.length) {
      container.appendChild(
        el("p", "violations", `Unresolved violations: ${report.unresolved_violations.join(", ")}`),
      );
    } else {
      container.appendChild(el("p", "violations-none", "No unresolved assumption violations."));
    }

    const downloads = el("div", "downloads");
    downloads.appendChild(
      downloadButton("Download report (JSON)", "report.json", () =>
        Promise.resolve(JSON.stringify(report, null, 2)),
      ),
    );
    downloads.appendChild(
      downloadButton("Download report (text)", "report.txt", () =>
        vm.api.getReportText(vm.token),
      ),
    );
    downloads.appendChild(
      downloadButton("Download model (JSON)", "model.json", async () =>
        JSON.stringify(await vm.api.exportModel(vm.token), null, 2),
      ),
    );
    container.appendChild(downloads);
  });
}

function downloadButton(
  label: string,
  filename: string,
  produce: () => Promise<string>,
): HTMLElement {
  const btn = el("button", "download-btn", label);
  btn.onclick = async () => {
    try {
      const text = await produce();
      const blob = new Blob([text], { type: "application/octet-stream" });
      const a = el("a");
      a.href = URL.createObjectURL(blob);
      a.download = filename;
      a.click();
      URL.revokeObjectURL(a.href);
    } catch (err) {
      alert(String(err));
    }
  };
  return btn;
}
