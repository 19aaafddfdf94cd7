// Application entry: session bootstrap and top-level re-rendering.

import { ApiClient } from "./api.js";
import { renderDatasetPanel, renderReportView, renderStepList, renderStepPanel } from "./views.js";
import { SessionViewModel, startSession } from "./viewmodel.js";

const API_BASE = (window as any).STATGUIDE_API_BASE ?? "";

function byId(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

export function renderAll(vm: SessionViewModel): void {
  const stepList = byId("step-list");
  stepList.textContent = "";
  stepList.appendChild(renderStepList(vm));

  const panel = byId("step-panel");
  panel.textContent = "";
  panel.appendChild(renderStepPanel(vm));

  const dataset = byId("dataset-panel");
  dataset.textContent = "";
  dataset.appendChild(renderDatasetPanel(vm));
}

async function boot(): Promise<void> {
  const api = new ApiClient(API_BASE);
  const workflowSelect = byId("workflow-select") as HTMLSelectElement;
  const sampleSelect = byId("sample-select") as HTMLSelectElement;
  const fileInput = byId("upload-input") as HTMLInputElement;
  const startBtn = byId("start-btn") as HTMLButtonElement;
  const reportBtn = byId("report-btn") as HTMLButtonElement;

  const { workflows } = await api.listWorkflows();
  for (const wf of workflows) {
    workflowSelect.appendChild(new Option(wf.name, wf.id));
  }

  let vm: SessionViewModel | null = null;

  startBtn.onclick = async () => {
    const dataset: { sample?: string; csv_text?: string } = {};
    const file = fileInput.files?.[0];
    if (file) {
      dataset.csv_text = await file.text();
    } else {
      dataset.sample = sampleSelect.value;
    }
    startBtn.disabled = true;
    try {
      vm = await startSession(api, workflowSelect.value, dataset);
      vm.onChange(renderAll);
      renderAll(vm);
      byId("report-view").textContent = "";
    } catch (err) {
      alert(String(err));
    } finally {
      startBtn.disabled = false;
    }
  };

  reportBtn.onclick = () => {
    if (vm) renderReportView(vm, byId("report-view"));
  };
}

if (typeof document !== "undefined" && document.getElementById("step-list")) {
  void boot();
}
