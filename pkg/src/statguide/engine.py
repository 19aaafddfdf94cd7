"""Session engine for stepwise statistical workflows.

A workflow is an ordered list of step definitions; a session runs one
workflow over one dataset version. Steps are of three kinds: user-input
steps wait for parameters, assumption-checking and result-presentation
steps run automatically once reachable. Editing an earlier step or
replacing the dataset reruns everything downstream with the stored
decisions; a step whose stored decisions no longer validate is marked
``invalidated`` and becomes the frontier the user must address (it accepts
a fresh submission like an active step). Assumption checks never block:
a violated check records its verdict and the workflow continues.

Every decision is appended to an event log with monotone sequence numbers,
and ``replay`` re-executes a log from the original dataset to reproduce all
step outputs exactly.
"""

from __future__ import annotations

import math
import secrets
import string
import time
from dataclasses import dataclass, field

import numpy as np

from .dataset import NUMERIC, Dataset
from .errors import (
    DataError,
    LifecycleError,
    SchemaError,
    StatGuideError,
    UnknownIdError,
)

USER_INPUT = "user_input"
ASSUMPTION_CHECK = "assumption_check"
RESULT_PRESENTATION = "result_presentation"
STEP_KINDS = (USER_INPUT, ASSUMPTION_CHECK, RESULT_PRESENTATION)

PENDING = "pending"
ACTIVE = "active"
DONE = "done"
INVALIDATED = "invalidated"

PARAM_KINDS = ("column-ref", "column-ref-list", "category-value", "enum", "real", "flag")


# -- definitions ---------------------------------------------------------------


@dataclass(frozen=True)
class ParamSpec:
    name: str
    kind: str
    required: bool = True
    default: object = None
    choices: tuple | None = None
    constraints: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in PARAM_KINDS:
            raise DataError(f"unknown parameter kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "required": self.required,
            "default": self.default,
            "choices": list(self.choices) if self.choices else None,
            "constraints": dict(self.constraints),
        }


@dataclass(frozen=True)
class SuggestionSpec:
    """Declarative suggestion rule: trigger predicate plus a message/action
    template instantiated against the step's output context."""

    id: str
    when: dict
    message: str
    action: dict

    def to_dict(self) -> dict:
        return {"id": self.id, "when": dict(self.when), "message": self.message,
                "action": dict(self.action)}


@dataclass(frozen=True)
class Explanation:
    objective: str
    concepts: str
    suggestion_templates: tuple[SuggestionSpec, ...] = ()


@dataclass(frozen=True)
class StepDef:
    id: str
    kind: str
    title: str
    explanation: Explanation
    input_schema: tuple[ParamSpec, ...]
    compute_fn: str
    compute_args: dict  # name -> {"param": p} | {"from_step": id, "param": p} | {"value": v}

    def __post_init__(self):
        if self.kind not in STEP_KINDS:
            raise DataError(f"unknown step kind {self.kind!r}")
        if self.kind == USER_INPUT and not self.input_schema:
            raise DataError(f"user-input step {self.id!r} needs a non-empty input schema")
        if not self.explanation.objective:
            raise DataError(f"step {self.id!r} has an empty objective")
        if self.kind != ASSUMPTION_CHECK and self.explanation.suggestion_templates:
            raise DataError(
                f"step {self.id!r}: suggested actions are only for assumption-checking steps"
            )


@dataclass(frozen=True)
class WorkflowDef:
    id: str
    name: str
    steps: tuple[StepDef, ...]
    model_output_key: str = "model"

    def __post_init__(self):
        ids = [s.id for s in self.steps]
        if len(set(ids)) != len(ids):
            raise DataError(f"workflow {self.id!r} has duplicate step ids")
        if not self.steps or self.steps[-1].kind != RESULT_PRESENTATION:
            raise DataError(f"workflow {self.id!r} must end with a result-presentation step")
        if not any(s.kind == ASSUMPTION_CHECK for s in self.steps):
            raise DataError(f"workflow {self.id!r} needs at least one assumption-checking step")
        index = {s.id: i for i, s in enumerate(self.steps)}
        for i, s in enumerate(self.steps):
            for spec in s.explanation.suggestion_templates:
                action = spec.action
                if action.get("type") == "preset_parameter":
                    target = action.get("target_step")
                    if target not in index or index[target] <= i:
                        raise DataError(
                            f"suggestion {spec.id!r} on step {s.id!r} must preset a later step"
                        )

    def step_index(self, step_id: str) -> int:
        for i, s in enumerate(self.steps):
            if s.id == step_id:
                return i
        raise UnknownIdError(f"unknown step {step_id!r}")

    def summary(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "steps": [{"id": s.id, "title": s.title, "kind": s.kind} for s in self.steps],
        }


# -- runtime state -------------------------------------------------------------


@dataclass
class StepState:
    def_id: str
    status: str = PENDING
    submitted: bool = False  # has the user ever submitted this step
    inputs: dict = field(default_factory=dict)  # explicit user submissions only
    effective_inputs: dict | None = None  # what the last compute actually used
    outputs: dict | None = None
    active_suggestions: list = field(default_factory=list)
    preset_inputs: dict = field(default_factory=dict)
    applied_actions: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "def_id": self.def_id,
            "status": self.status,
            "inputs": dict(self.inputs),
            "effective_inputs": dict(self.effective_inputs) if self.effective_inputs else None,
            "outputs": self.outputs,
            "active_suggestions": list(self.active_suggestions),
            "preset_inputs": dict(self.preset_inputs),
            "applied_actions": list(self.applied_actions),
        }


@dataclass(frozen=True)
class Event:
    seq: int
    timestamp: float
    kind: str
    payload: dict

    def to_dict(self) -> dict:
        return {"seq": self.seq, "timestamp": self.timestamp, "kind": self.kind,
                "payload": self.payload}


class _DottedFormatter(string.Formatter):
    """str.format with dotted-path lookup into nested dicts."""

    def get_field(self, field_name, args, kwargs):
        obj = kwargs
        for part in field_name.split("."):
            obj = obj[part] if isinstance(obj, dict) else getattr(obj, part)
        return obj, field_name


_FORMATTER = _DottedFormatter()


def _lookup(ctx: dict, path: str):
    obj = ctx
    for part in path.split("."):
        obj = obj[part]
    return obj


def _trigger_fires(when: dict, ctx: dict) -> bool:
    if when.get("always"):
        return True
    value = _lookup(ctx, when["field"])
    ref = when["value"]
    op = when["op"]
    return {
        "==": value == ref,
        "!=": value != ref,
        ">": value > ref,
        "<": value < ref,
        ">=": value >= ref,
        "<=": value <= ref,
    }[op]


def _instantiate(template, ctx: dict):
    """Render string templates against the step context; non-strings pass through."""
    if isinstance(template, str) and "{" in template:
        return _FORMATTER.vformat(template, (), ctx)
    if isinstance(template, dict):
        return {k: _instantiate(v, ctx) for k, v in template.items()}
    if isinstance(template, list):
        return [_instantiate(v, ctx) for v in template]
    return template


def jsonsafe(value):
    """Recursively convert outputs to JSON-serializable python types.

    numpy scalars become python numbers; non-finite floats become None so
    responses stay valid strict JSON.
    """
    if isinstance(value, dict):
        return {k: jsonsafe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonsafe(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        value = float(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    return value


class Session:
    """A live workflow run over a dataset version."""

    def __init__(self, workflow: WorkflowDef, dataset: Dataset, registry,
                 load_options: dict | None = None, session_id: str | None = None,
                 clock=None):
        if dataset.row_count == 0:
            raise DataError("dataset has no rows")
        self.id = session_id or secrets.token_urlsafe(24)
        self.workflow = workflow
        self.dataset = dataset
        self.dataset_snapshots: dict[int, Dataset] = {dataset.version: dataset}
        self.states = [StepState(def_id=s.id) for s in workflow.steps]
        self.event_log: list[Event] = []
        self._registry = registry  # name -> fn(dataset, **args) -> outputs dict
        self._load_options = dict(load_options or {})
        self._clock = clock or time.time
        self._log("session_created", {
            "workflow_id": workflow.id,
            "dataset_version": dataset.version,
            "load_options": self._load_options,
        })
        # the load step completes immediately with a dataset overview
        self.states[0].submitted = True
        self.states[0].inputs = {}
        self._cascade(0)

    # -- plumbing ----------------------------------------------------------------

    def _log(self, kind: str, payload: dict) -> None:
        seq = len(self.event_log)
        ts = self._clock()
        if self.event_log and ts <= self.event_log[-1].timestamp:
            ts = self.event_log[-1].timestamp + 1e-6
        self.event_log.append(Event(seq, ts, kind, jsonsafe(payload)))

    def _state(self, step_id: str) -> tuple[int, StepState]:
        i = self.workflow.step_index(step_id)
        return i, self.states[i]

    def step_def(self, step_id: str) -> StepDef:
        return self.workflow.steps[self.workflow.step_index(step_id)]

    @property
    def frontier_index(self) -> int:
        """Index of the first step that is not done (len(steps) if all are)."""
        for i, s in enumerate(self.states):
            if s.status != DONE:
                return i
        return len(self.states)

    @property
    def active_step_id(self) -> str | None:
        i = self.frontier_index
        if i >= len(self.states):
            return None
        return self.states[i].def_id

    def check_invariants(self) -> None:
        """Raise AssertionError if the lifecycle invariants are broken."""
        statuses = [s.status for s in self.states]
        assert statuses.count(ACTIVE) <= 1, "more than one active step"
        frontier = self.frontier_index
        for i, st in enumerate(statuses):
            if i < frontier:
                assert st == DONE, f"step {i} before the frontier is {st}"
            elif i == frontier:
                assert st in (ACTIVE, INVALIDATED), f"frontier step {i} is {st}"
            else:
                assert st == PENDING, f"step {i} beyond the frontier is {st}"
        for s in self.states:
            if s.outputs is not None:
                assert s.status == DONE, "outputs on a non-done step"

    # -- input validation -----------------------------------------------------------

    def _effective_inputs(self, index: int, explicit: dict) -> dict:
        """defaults < presets < explicit, validated against the schema."""
        step = self.workflow.steps[index]
        state = self.states[index]
        known = {p.name for p in step.input_schema}
        details = [
            {"param": k, "reason": "unknown parameter"}
            for k in explicit if k not in known
        ]
        if details:
            raise SchemaError("unknown parameter(s)", details)
        merged = {}
        for p in step.input_schema:
            if p.name in explicit:
                merged[p.name] = explicit[p.name]
            elif p.name in state.preset_inputs:
                merged[p.name] = state.preset_inputs[p.name]
            elif p.default is not None:
                merged[p.name] = p.default
            elif p.required:
                details.append({"param": p.name, "reason": "required parameter missing"})
        if details:
            raise SchemaError("missing required parameter(s)", details)
        return {
            p.name: self._validate_param(p, merged[p.name], merged)
            for p in step.input_schema
            if p.name in merged
        }

    def _validate_param(self, spec: ParamSpec, value, merged: dict):
        c = spec.constraints

        def fail(reason: str):
            raise SchemaError(
                f"invalid value for {spec.name!r}: {reason}",
                [{"param": spec.name, "reason": reason}],
            )

        if spec.kind == "column-ref":
            if not isinstance(value, str):
                fail("expected a column name")
            if not self.dataset.has_column(value):
                fail(f"column {value!r} does not exist")
            if c.get("dtype") and self.dataset.column(value).dtype != c["dtype"]:
                fail(f"column {value!r} is not {c['dtype']}")
            return value
        if spec.kind == "column-ref-list":
            if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
                fail("expected a list of column names")
            if len(value) < c.get("min_items", 1):
                fail(f"need at least {c.get('min_items', 1)} column(s)")
            if len(set(value)) != len(value):
                fail("duplicate columns in list")
            for v in value:
                if not self.dataset.has_column(v):
                    fail(f"column {v!r} does not exist")
                if c.get("dtype") and self.dataset.column(v).dtype != c["dtype"]:
                    fail(f"column {v!r} is not {c['dtype']}")
            if "exclude_param" in c and merged.get(c["exclude_param"]) in value:
                fail(f"must not include the {c['exclude_param']!r} column")
            if "exclude_step_param" in c:
                src_step, src_param = c["exclude_step_param"]
                src = self.states[self.workflow.step_index(src_step)].effective_inputs or {}
                if src.get(src_param) in value:
                    fail(
                        f"must not include {src.get(src_param)!r}, which is already "
                        f"the {src_param!r} of step {src_step!r}"
                    )
            return list(value)
        if spec.kind == "category-value":
            column = merged.get(c["column_param"])
            if not isinstance(column, str) or not self.dataset.has_column(column):
                fail(f"depends on parameter {c['column_param']!r} naming an existing column")
            col = self.dataset.column(column)
            if col.dtype == NUMERIC:
                try:
                    v = float(value)
                except (TypeError, ValueError):
                    fail(f"expected a numeric value of column {column!r}")
                if not any(v == x for x in col.non_missing()):
                    fail(f"value {value!r} not present in column {column!r}")
                return v
            v = str(value)
            if v not in set(col.non_missing()):
                fail(f"value {value!r} not present in column {column!r}")
            return v
        if spec.kind == "enum":
            if spec.choices and value not in spec.choices:
                fail(f"must be one of {list(spec.choices)}")
            return value
        if spec.kind == "real":
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                fail("expected a number")
            v = float(value)
            if "gt" in c and not v > c["gt"]:
                fail(f"must be > {c['gt']}")
            if "ge" in c and not v >= c["ge"]:
                fail(f"must be >= {c['ge']}")
            if "lt" in c and not v < c["lt"]:
                fail(f"must be < {c['lt']}")
            if "le" in c and not v <= c["le"]:
                fail(f"must be <= {c['le']}")
            if c.get("integer"):
                if v != int(v):
                    fail("must be an integer")
                return int(v)
            return v
        if spec.kind == "flag":
            if not isinstance(value, bool):
                fail("expected true or false")
            return value
        raise AssertionError(f"unhandled kind {spec.kind}")

    # -- compute ---------------------------------------------------------------------

    def _resolve_args(self, index: int, effective: dict) -> dict:
        step = self.workflow.steps[index]
        resolved = {}
        for name, ref in step.compute_args.items():
            if "value" in ref:
                resolved[name] = ref["value"]
            elif "from_step" in ref:
                src_i = self.workflow.step_index(ref["from_step"])
                if src_i >= index:
                    raise DataError(
                        f"step {step.id!r} cannot read from later step {ref['from_step']!r}"
                    )
                src = self.states[src_i].effective_inputs or {}
                if ref["param"] not in src:
                    raise SchemaError(
                        f"step {step.id!r} needs {ref['param']!r} from step "
                        f"{ref['from_step']!r}, which is not available",
                        [{"param": ref["param"], "reason": "upstream input missing"}],
                    )
                resolved[name] = src[ref["param"]]
            else:
                resolved[name] = effective.get(ref["param"])
        return resolved

    def _compute(self, index: int, effective: dict) -> tuple[dict, list]:
        """Run the step's binding; pure with respect to session state."""
        step = self.workflow.steps[index]
        args = self._resolve_args(index, effective)
        fn = self._registry[step.compute_fn]
        outputs = jsonsafe(fn(self.dataset, **args))
        ctx = dict(outputs)
        for k, v in args.items():
            ctx.setdefault(k, v)
        suggestions = []
        for spec in step.explanation.suggestion_templates:
            if _trigger_fires(spec.when, ctx):
                suggestions.append({
                    "id": spec.id,
                    "message": _instantiate(spec.message, ctx),
                    "action": _instantiate(spec.action, ctx),
                })
        return outputs, suggestions

    def _commit(self, index: int, effective: dict, outputs: dict, suggestions: list) -> None:
        state = self.states[index]
        state.effective_inputs = effective
        state.outputs = outputs
        state.active_suggestions = suggestions
        state.status = DONE
        self._log("step_completed", {
            "step_id": state.def_id,
            "outputs": outputs,
            "suggestions": [s["id"] for s in suggestions],
            "effective_inputs": effective,
        })

    def _reset_downstream(self, index: int) -> None:
        """Clear computed state from ``index`` on; stored decisions survive."""
        for st in self.states[index:]:
            st.status = PENDING
            st.outputs = None
            st.active_suggestions = []
            st.effective_inputs = None

    def _cascade(self, start: int) -> None:
        """Advance from ``start``: auto-run checks and result steps, resume
        user steps with stored decisions, stop where the user is needed."""
        i = start
        n = len(self.states)
        while i < n:
            step = self.workflow.steps[i]
            state = self.states[i]
            if step.kind == USER_INPUT and not state.submitted:
                state.status = ACTIVE
                self._reset_downstream(i + 1)
                return
            try:
                effective = self._effective_inputs(i, state.inputs)
                outputs, suggestions = self._compute(i, effective)
            except StatGuideError as exc:
                state.status = INVALIDATED
                state.outputs = None
                state.active_suggestions = []
                state.effective_inputs = None
                self._log("step_invalidated", {"step_id": step.id, "reason": str(exc)})
                self._reset_downstream(i + 1)
                return
            self._commit(i, effective, outputs, suggestions)
            i += 1

    # -- operations ---------------------------------------------------------------------

    def submit_inputs(self, step_id: str, inputs: dict) -> dict:
        """Submit parameters to the frontier step, compute it, and advance."""
        index, state = self._state(step_id)
        if state.status not in (ACTIVE, INVALIDATED) or index != self.frontier_index:
            raise LifecycleError(
                f"step {step_id!r} is {state.status}; inputs go to the active step "
                f"({self.active_step_id!r})"
            )
        effective = self._effective_inputs(index, inputs)
        outputs, suggestions = self._compute(index, effective)
        self._log("inputs_submitted", {
            "step_id": step_id,
            "inputs": inputs,
            "preset_applied": sorted(set(state.preset_inputs) - set(inputs)),
        })
        state.submitted = True
        state.inputs = dict(inputs)
        self._commit(index, effective, outputs, suggestions)
        self._cascade(index + 1)
        return self._outcome(step_id)

    def edit_step(self, step_id: str, new_inputs: dict) -> dict:
        """Re-submit a done step and rerun everything after it."""
        index, state = self._state(step_id)
        if state.status != DONE:
            raise LifecycleError(
                f"step {step_id!r} is {state.status}; only done steps can be edited"
            )
        effective = self._effective_inputs(index, new_inputs)
        outputs, suggestions = self._compute(index, effective)
        self._log("step_edited", {
            "step_id": step_id,
            "inputs": new_inputs,
            "preset_applied": sorted(set(state.preset_inputs) - set(new_inputs)),
        })
        state.inputs = dict(new_inputs)
        self._commit(index, effective, outputs, suggestions)
        self._cascade(index + 1)
        return self._outcome(step_id)

    def replace_dataset(self, dataset: Dataset) -> None:
        """Swap in a new dataset version and rerun the analysis up to the
        current step. Steps whose stored decisions no longer apply degrade
        to invalidated rather than failing."""
        version = dataset.version
        if version <= self.dataset.version:
            version = self.dataset.version + 1
            dataset = Dataset(dataset.columns, version,
                              dataset.provenance + ("re-imported",))
        self.dataset = dataset
        self.dataset_snapshots[version] = dataset
        self._log("dataset_replaced", {"dataset_version": version,
                                       "row_count": dataset.row_count})
        self._cascade(0)

    def apply_action(self, step_id: str, suggestion_id: str) -> dict:
        """Execute a suggestion's action: preset a later parameter, render a
        code snippet, or surface a notice."""
        index, state = self._state(step_id)
        match = next((s for s in state.active_suggestions if s["id"] == suggestion_id), None)
        if match is None:
            raise UnknownIdError(
                f"no active suggestion {suggestion_id!r} on step {step_id!r}"
            )
        action = match["action"]
        kind = action["type"]
        if kind == "preset_parameter":
            t_index, t_state = self._state(action["target_step"])
            result = {"type": kind, "target_step": action["target_step"],
                      "param": action["param"], "value": action["value"]}
        elif kind == "emit_snippet":
            from .exporter import render_snippet

            snippet = render_snippet(action["template_id"], action["bindings"])
            result = {"type": kind, "snippet": snippet.to_dict()}
        elif kind == "show_notice":
            result = {"type": kind, "text": action["text"]}
        else:
            raise DataError(f"unknown action type {kind!r}")
        self._log("action_applied", {"step_id": step_id, "suggestion_id": suggestion_id,
                                     "action": action})
        state.applied_actions.append(suggestion_id)
        if kind == "preset_parameter":
            t_state.preset_inputs[action["param"]] = action["value"]
        return result

    def get_explanation(self, step_id: str) -> dict:
        """A step's explanation, with texts instantiated against current outputs."""
        index, state = self._state(step_id)
        step = self.workflow.steps[index]
        ctx = dict(state.outputs or {})
        concepts = step.explanation.concepts
        if state.outputs is not None and "{" in concepts:
            try:
                concepts = _instantiate(concepts, ctx)
            except (KeyError, AttributeError, TypeError):
                pass
        if state.active_suggestions:
            suggested = [s["message"] for s in state.active_suggestions]
        else:
            suggested = [t.message for t in step.explanation.suggestion_templates]
        return {
            "objective": step.explanation.objective,
            "concepts_and_interpretation": concepts,
            "suggested_actions": suggested,
        }

    # -- exports ------------------------------------------------------------------------

    def _outcome(self, step_id: str) -> dict:
        index, state = self._state(step_id)
        return {
            "step_id": step_id,
            "status": state.status,
            "outputs": state.outputs,
            "suggestions": list(state.active_suggestions),
            "active_step": self.active_step_id,
        }

    def assumption_outcome(self, index: int) -> str | None:
        """pass | violated | bypassed for computed assumption steps, else None.

        A violated check counts as bypassed once the user has applied one of
        its suggested actions (acknowledging the violation); otherwise it is
        an unresolved violation.
        """
        step = self.workflow.steps[index]
        state = self.states[index]
        if step.kind != ASSUMPTION_CHECK or state.outputs is None:
            return None
        verdict = state.outputs.get("verdict", "pass")
        if verdict == "pass":
            return "pass"
        return "bypassed" if state.applied_actions else "violated"

    def to_dict(self) -> dict:
        """Full state snapshot as served to clients."""
        return {
            "session_id": self.id,
            "workflow": self.workflow.summary(),
            "dataset": self.dataset.overview(),
            "active_step": self.active_step_id,
            "steps": [
                {**st.to_dict(), "title": sd.title, "kind": sd.kind,
                 "input_schema": [p.to_dict() for p in sd.input_schema]}
                for sd, st in zip(self.workflow.steps, self.states)
            ],
        }

    def export_report(self) -> dict:
        steps = []
        unresolved = []
        for i, (sd, st) in enumerate(zip(self.workflow.steps, self.states)):
            outcome = self.assumption_outcome(i)
            if outcome == "violated":
                unresolved.append(sd.id)
            steps.append({
                "step_id": sd.id,
                "title": sd.title,
                "kind": sd.kind,
                "status": st.status,
                "inputs": dict(st.inputs),
                "effective_inputs": dict(st.effective_inputs) if st.effective_inputs else None,
                "assumption_outcome": outcome,
                "actions_taken": list(st.applied_actions),
                "outputs": st.outputs,
            })
        return {
            "session_id": self.id,
            "workflow_id": self.workflow.id,
            "workflow_name": self.workflow.name,
            "dataset": {
                "version": self.dataset.version,
                "row_count": self.dataset.row_count,
                "provenance": list(self.dataset.provenance),
            },
            "steps": steps,
            "final_results": self.states[-1].outputs,
            "unresolved_violations": unresolved,
            "history": [e.to_dict() for e in self.event_log],
        }

    def export_model(self) -> dict:
        last = self.states[-1]
        if last.status != DONE or last.outputs is None:
            raise LifecycleError("model export requires the evaluation step to be done")
        result = last.outputs.get(self.workflow.model_output_key)
        if result is None:
            raise LifecycleError(
                f"evaluation outputs carry no {self.workflow.model_output_key!r} record"
            )
        return {
            "schema_version": 1,
            "workflow_id": self.workflow.id,
            "session_id": self.id,
            "dataset_version": self.dataset.version,
            "dataset_provenance": list(self.dataset.provenance),
            "result": result,
        }


def replay(session: Session) -> Session:
    """Re-execute a session's event log from the original dataset.

    Returns a fresh session whose step outputs must equal the source
    session's (the rerun-determinism invariant).
    """
    events = list(session.event_log)
    if not events or events[0].kind != "session_created":
        raise DataError("event log does not start with session_created")
    first = events[0].payload
    new = Session(
        session.workflow,
        session.dataset_snapshots[first["dataset_version"]],
        session._registry,
        load_options=first.get("load_options"),
    )
    for event in events[1:]:
        kind, payload = event.kind, event.payload
        if kind == "inputs_submitted":
            new.submit_inputs(payload["step_id"], payload["inputs"])
        elif kind == "step_edited":
            new.edit_step(payload["step_id"], payload["inputs"])
        elif kind == "dataset_replaced":
            new.replace_dataset(session.dataset_snapshots[payload["dataset_version"]])
        elif kind == "action_applied":
            new.apply_action(payload["step_id"], payload["suggestion_id"])
        # step_completed / step_invalidated entries are derived, not decisions
    return new
