// Schema-driven input forms: one widget per ParamSpec kind, value plumbing
// through the view model so presets surface as highlighted defaults.

import type { ParamSpec, StepState } from "./types.js";
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

function columnOptions(vm: SessionViewModel, spec: ParamSpec): string[] {
  const dtype = spec.constraints["dtype"] as string | undefined;
  return (vm.session?.dataset.columns ?? [])
    .filter((c) => !dtype || c.dtype === dtype)
    .map((c) => c.name);
}

function fieldWrap(spec: ParamSpec, vm: SessionViewModel, step: StepState): HTMLElement {
  const wrap = el("div", "field");
  const label = el("label", "field-label", spec.name.replace(/_/g, " "));
  label.htmlFor = `field-${step.def_id}-${spec.name}`;
  if (spec.name in step.preset_inputs) {
    const badge = el("span", "preset-badge", `preset: ${String(step.preset_inputs[spec.name])}`);
    label.appendChild(badge);
  }
  wrap.appendChild(label);
  const err = vm.fieldErrors.get(spec.name);
  if (err) wrap.appendChild(el("div", "field-error", err));
  return wrap;
}

export function renderField(
  vm: SessionViewModel,
  step: StepState,
  spec: ParamSpec,
): HTMLElement {
  const wrap = fieldWrap(spec, vm, step);
  const id = `field-${step.def_id}-${spec.name}`;
  const current = vm.fieldValue(step.def_id, spec);

  switch (spec.kind) {
    case "column-ref": {
      const select = el("select");
      select.id = id;
      select.appendChild(new Option("(choose a column)", ""));
      for (const name of columnOptions(vm, spec)) {
        select.appendChild(new Option(name, name, false, name === current));
      }
      select.onchange = () =>
        vm.setField(step.def_id, spec.name, select.value || undefined);
      wrap.appendChild(select);
      break;
    }
    case "column-ref-list": {
      const box = el("div", "column-multi");
      const chosen = new Set((current as string[] | undefined) ?? []);
      for (const name of columnOptions(vm, spec)) {
        const lbl = el("label", "check");
        const cb = el("input");
        cb.type = "checkbox";
        cb.value = name;
        cb.checked = chosen.has(name);
        cb.onchange = () => {
          if (cb.checked) chosen.add(name);
          else chosen.delete(name);
          vm.setField(step.def_id, spec.name, [...chosen]);
        };
        lbl.appendChild(cb);
        lbl.appendChild(document.createTextNode(name));
        box.appendChild(lbl);
      }
      box.id = id;
      wrap.appendChild(box);
      break;
    }
    case "category-value": {
      const select = el("select");
      select.id = id;
      select.appendChild(new Option("(choose a value)", ""));
      // values depend on the column picked in a sibling field; offer the
      // distinct preview values plus free-text entry
      const columnParam = spec.constraints["column_param"] as string;
      const column = vm.fieldValue(step.def_id, {
        ...spec,
        name: columnParam,
        kind: "column-ref",
      } as ParamSpec) as string | undefined;
      const seen = new Set<string>();
      if (column) {
        for (const row of vm.session?.dataset.preview ?? []) {
          const v = row[column];
          if (v !== null && v !== undefined) seen.add(String(v));
        }
      }
      if (current !== undefined) seen.add(String(current));
      for (const v of [...seen].sort()) {
        select.appendChild(new Option(v, v, false, v === String(current)));
      }
      const free = el("input");
      free.type = "text";
      free.placeholder = "or type a value";
      free.oninput = () => vm.setField(step.def_id, spec.name, free.value || undefined);
      select.onchange = () =>
        vm.setField(step.def_id, spec.name, select.value || undefined);
      wrap.appendChild(select);
      wrap.appendChild(free);
      break;
    }
    case "enum": {
      const select = el("select");
      select.id = id;
      for (const choice of spec.choices ?? []) {
        select.appendChild(new Option(choice, choice, false, choice === current));
      }
      select.onchange = () => vm.setField(step.def_id, spec.name, select.value);
      wrap.appendChild(select);
      break;
    }
    case "real": {
      const input = el("input");
      input.id = id;
      input.type = "number";
      input.step = "any";
      if (current !== undefined) input.value = String(current);
      input.oninput = () =>
        vm.setField(
          step.def_id,
          spec.name,
          input.value === "" ? undefined : Number(input.value),
        );
      wrap.appendChild(input);
      break;
    }
    case "flag": {
      const lbl = el("label", "check");
      const cb = el("input");
      cb.id = id;
      cb.type = "checkbox";
      cb.checked = Boolean(current);
      cb.onchange = () => vm.setField(step.def_id, spec.name, cb.checked);
      lbl.appendChild(cb);
      lbl.appendChild(document.createTextNode(spec.name.replace(/_/g, " ")));
      wrap.appendChild(lbl);
      break;
    }
  }
  return wrap;
}

export function renderForm(vm: SessionViewModel, step: StepState): HTMLElement {
  const form = el("div", "step-form");
  for (const spec of step.input_schema) {
    form.appendChild(renderField(vm, step, spec));
  }
  const submit = el("button", "submit-btn", step.status === "done" ? "Re-run with changes" : "Submit");
  submit.id = `submit-${step.def_id}`;
  submit.disabled = !vm.canSubmit(step) || vm.busy;
  submit.onclick = () => void vm.submitSelected();
  form.appendChild(submit);
  if (vm.globalError) form.appendChild(el("div", "form-error", vm.globalError));
  return form;
}
