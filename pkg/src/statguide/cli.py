"""Terminal front door: scripted workflow runs for reproduction and CI,
an interactive prompt-driven mode, and the service launcher.

Scripted and interactive runs use a fixed session id and a logical clock,
so two runs entering identical decisions produce byte-identical reports.

Exit codes: 0 on success, 1 on errors, 2 when --strict is set and the
report leaves assumption violations unresolved.
"""

from __future__ import annotations

import argparse
import os
import itertools
import json
import sys

from .dataset import Dataset, Predicate, load_csv
from .engine import Session
from .errors import SchemaError, StatGuideError
from .exporter import render_report_text
from .workflows import REGISTRY, get_workflow

_EXPORT_HINT = "report <path> | model <path>"


class _Quit(Exception):
    """Leave the interactive loop (explicit quit or end of input)."""


def _make_session(workflow_id: str, dataset: Dataset) -> Session:
    counter = itertools.count()
    return Session(
        get_workflow(workflow_id), dataset, REGISTRY,
        session_id="cli", clock=lambda: float(next(counter)),
    )


def _apply_transforms(dataset: Dataset, transforms: list[dict]) -> Dataset:
    for t in transforms:
        op = t["op"]
        if op == "drop_rows":
            dataset = dataset.drop_rows_where(
                Predicate(t["column"], t["comparator"], t["value"])
            )
        elif op == "derive_column":
            dataset = dataset.derive_column(t["name"], t["left"], t["operator"], t["right"])
        elif op == "log_transform":
            dataset = dataset.log_transform(t["column"])
        else:
            raise SchemaError(f"unknown transform op {op!r}")
    return dataset


def _write_report(session: Session, path: str) -> None:
    report = session.export_report()
    if path.endswith(".txt"):
        text = render_report_text(report)
    else:
        text = json.dumps(report, indent=2) + "\n"
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def _write_model(session: Session, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(session.export_model(), indent=2) + "\n")


def _step_summary(session: Session, step_id: str) -> list[str]:
    index, state = session._state(step_id)
    out = [f"[{state.status.upper()}] {session.workflow.steps[index].title}"]
    outcome = session.assumption_outcome(index)
    if outcome:
        out.append(f"  assumption: {outcome}")
    o = state.outputs or {}
    if "outlier_count" in o:
        out.append(f"  outliers: {o['outlier_count']} ({o['outlier_fraction'] * 100:.2f}%)")
    if "entries" in o:
        for e in o["entries"]:
            v = "inf" if e["vif"] is None else f"{e['vif']:.2f}"
            out.append(f"  VIF {e['variable']}: {v}")
    if "levene" in o:
        out.append(f"  Levene W = {o['levene']['w']:.4g}, p = {o['levene']['p']:.4g}")
    if "normality" in o:
        out.append(f"  n = {o['n']}, skewness = {o['normality']['skewness']:.3g}, "
                   f"large sample: {o['large_sample']}")
    if "ttest" in o:
        t = o["ttest"]
        out.append(f"  t = {t['t']:.4f}, df = {t['df']:.4g}, p = {t['p']:.4g}, "
                   f"reject null: {t['reject_null']}")
    if "model" in o:
        m = o["model"]
        out.append(f"  R^2 = {m['r_squared']:.4f} (adjusted {m['adj_r_squared']:.4f}, "
                   f"n = {m['n_obs']})")
    if "interpretation" in o:
        out.append(f"  {o['interpretation']}")
    for k, s in enumerate(state.active_suggestions, 1):
        out.append(f"  suggestion {k}: {s['message']}")
    return out


# -- scripted runs ------------------------------------------------------------------


def run_script(args) -> int:
    with open(args.script, encoding="utf-8") as f:
        script = json.loads(f.read())
    workflow_id = args.workflow or script.get("workflow")
    if not workflow_id:
        print("error: no workflow given (use --workflow or the script's 'workflow' field)",
              file=sys.stderr)
        return 1
    dataset = load_csv(args.data)
    session = _make_session(workflow_id, dataset)
    say = (lambda *_: None) if args.json else print

    for k, decision in enumerate(script.get("decisions", [])):
        try:
            if "submit" in decision:
                d = decision["submit"]
                inputs = dict(d.get("inputs", {}))
                if args.seed is not None:
                    schema = {p.name for p in session.step_def(d["step"]).input_schema}
                    if "seed" in schema and "seed" not in inputs:
                        inputs["seed"] = args.seed
                session.submit_inputs(d["step"], inputs)
                say(f"submitted {d['step']}")
            elif "edit" in decision:
                d = decision["edit"]
                session.edit_step(d["step"], d.get("inputs", {}))
                say(f"edited {d['step']}")
            elif "apply_action" in decision:
                d = decision["apply_action"]
                effect = session.apply_action(d["step"], d["suggestion"])
                say(f"applied {d['suggestion']} on {d['step']} ({effect['type']})")
            elif "replace_dataset" in decision:
                d = decision["replace_dataset"]
                new = _apply_transforms(session.dataset, d.get("transforms", []))
                session.replace_dataset(new)
                say(f"replaced dataset (version {session.dataset.version})")
            else:
                print(f"error: decision {k} has no recognized operation", file=sys.stderr)
                return 1
        except SchemaError as exc:
            for detail in exc.details or [{}]:
                print(f"error at decision {k} (step {d.get('step', '?')}): "
                      f"{detail.get('param', '?')}: {detail.get('reason', exc)}",
                      file=sys.stderr)
            return 1
        except StatGuideError as exc:
            print(f"error at decision {k}: {exc}", file=sys.stderr)
            return 1

    if not args.json:
        for state in session.states:
            for line in _step_summary(session, state.def_id):
                print(line)
    report = session.export_report()
    if args.report:
        _write_report(session, args.report)
        say(f"report written to {args.report}")
    if args.model:
        try:
            _write_model(session, args.model)
            say(f"model written to {args.model}")
        except StatGuideError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
    if args.json:
        print(json.dumps({"session": session.to_dict(), "report": report}, indent=2))
    if args.strict and report["unresolved_violations"]:
        print("unresolved assumption violations: "
              + ", ".join(report["unresolved_violations"]), file=sys.stderr)
        return 2
    return 0


# -- interactive mode -----------------------------------------------------------------


def _prompt(in_fn, out_fn, text: str) -> str:
    out_fn(text)
    try:
        return in_fn().strip()
    except (EOFError, StopIteration):
        raise _Quit


def _prompt_param(session: Session, spec, in_fn, out_fn, partial: dict):
    """Prompt until a value for one schema parameter validates; None skips."""
    ds = session.dataset
    preset_note = ""
    state = session.states[session.workflow.step_index(session.active_step_id)]
    if spec.name in state.preset_inputs:
        preset_note = f" [preset: {state.preset_inputs[spec.name]}]"
    elif spec.default is not None:
        preset_note = f" [default: {spec.default}]"

    while True:
        if spec.kind in ("column-ref", "column-ref-list"):
            dtype = spec.constraints.get("dtype")
            names = [c.name for c in ds.columns if not dtype or c.dtype == dtype]
            out_fn("columns: " + ", ".join(f"{i + 1}) {n}" for i, n in enumerate(names)))
            raw = _prompt(in_fn, out_fn, f"{spec.name}{preset_note}> ")
            if not raw:
                return None
            picks = [p.strip() for p in raw.split(",")] if spec.kind == "column-ref-list" else [raw]
            value = []
            for p in picks:
                if p.isdigit() and 1 <= int(p) <= len(names):
                    value.append(names[int(p) - 1])
                else:
                    value.append(p)
            value = value if spec.kind == "column-ref-list" else value[0]
        elif spec.kind == "category-value":
            column = partial.get(spec.constraints["column_param"])
            if isinstance(column, str) and ds.has_column(column):
                values = ds.distinct_values(column)
                shown = values[:30]
                out_fn(f"values of {column}: "
                       + ", ".join(f"{i + 1}) {v}" for i, v in enumerate(shown))
                       + (" ..." if len(values) > len(shown) else ""))
            else:
                values = []
            raw = _prompt(in_fn, out_fn, f"{spec.name}{preset_note}> ")
            if not raw:
                return None
            if raw.isdigit() and values and 1 <= int(raw) <= len(values):
                value = values[int(raw) - 1]
            else:
                value = raw
        elif spec.kind == "enum":
            out_fn("choices: " + ", ".join(f"{i + 1}) {c}" for i, c in enumerate(spec.choices)))
            raw = _prompt(in_fn, out_fn, f"{spec.name}{preset_note}> ")
            if not raw:
                return None
            value = spec.choices[int(raw) - 1] if raw.isdigit() and 1 <= int(raw) <= len(spec.choices) else raw
        elif spec.kind == "real":
            raw = _prompt(in_fn, out_fn, f"{spec.name}{preset_note}> ")
            if not raw:
                return None
            try:
                value = float(raw)
            except ValueError:
                out_fn(f"not a number: {raw!r}")
                continue
        elif spec.kind == "flag":
            raw = _prompt(in_fn, out_fn, f"{spec.name} (y/n){preset_note}> ").lower()
            if not raw:
                return None
            if raw in ("y", "yes", "true"):
                value = True
            elif raw in ("n", "no", "false"):
                value = False
            else:
                out_fn("answer y or n")
                continue
        else:
            return None
        # dry-run the single value against the schema before accepting it
        try:
            session._validate_param(spec, value, {**partial, spec.name: value})
            return value
        except SchemaError as exc:
            for detail in exc.details:
                out_fn(f"invalid {detail['param']}: {detail['reason']}")


def _command_loop(session: Session, in_fn, out_fn, suggestions: list) -> None:
    """Post-step command prompt: apply suggestions, export, or continue."""
    while True:
        hint = "Enter=continue"
        if suggestions:
            hint += f" | 1..{len(suggestions)}=apply suggestion"
        raw = _prompt(in_fn, out_fn, f"({hint} | explain | {_EXPORT_HINT} | quit)> ")
        if not raw:
            return
        if raw == "quit":
            raise _Quit
        if raw == "explain":
            target = session.active_step_id or session.workflow.steps[-1].id
            exp = session.get_explanation(target)
            out_fn(f"objective: {exp['objective']}")
            out_fn(f"concepts: {exp['concepts_and_interpretation']}")
            continue
        if raw.startswith("report ") or raw.startswith("model "):
            kind, _, path = raw.partition(" ")
            try:
                if kind == "report":
                    _write_report(session, path.strip())
                else:
                    _write_model(session, path.strip())
                out_fn(f"{kind} written to {path.strip()}")
            except (OSError, StatGuideError) as exc:
                out_fn(f"export failed: {exc}")
            continue
        if raw.isdigit() and suggestions and 1 <= int(raw) <= len(suggestions):
            step_id, suggestion = suggestions[int(raw) - 1]
            try:
                effect = session.apply_action(step_id, suggestion["id"])
            except StatGuideError as exc:
                out_fn(f"action failed: {exc}")
                continue
            if effect["type"] == "emit_snippet":
                out_fn("--- snippet ---")
                out_fn(effect["snippet"]["rendered_text"])
                out_fn("---------------")
            elif effect["type"] == "show_notice":
                out_fn(f"notice: {effect['text']}")
            else:
                out_fn(f"preset {effect['param']} = {effect['value']} "
                       f"on step {effect['target_step']}")
            continue
        out_fn(f"unrecognized: {raw!r}")


def interactive_loop(session: Session, in_fn=input, out_fn=print) -> None:
    try:
        _interactive_loop(session, in_fn, out_fn)
    except _Quit:
        pass


def _interactive_loop(session: Session, in_fn, out_fn) -> None:
    out_fn(f"workflow: {session.workflow.name} "
           f"({len(session.workflow.steps)} steps)")
    while True:
        active = session.active_step_id
        if active is None:
            out_fn("all steps complete")
            for line in _step_summary(session, session.workflow.steps[-1].id):
                out_fn(line)
            _command_loop(session, in_fn, out_fn, [])
            return
        index = session.workflow.step_index(active)
        step = session.workflow.steps[index]
        state = session.states[index]
        out_fn("")
        out_fn(f"step {index + 1}/{len(session.workflow.steps)}: {step.title}"
               + (" (invalidated, please resubmit)" if state.status == "invalidated" else ""))
        out_fn(session.get_explanation(active)["objective"])
        inputs = {}
        for spec in step.input_schema:
            value = _prompt_param(session, spec, in_fn, out_fn, inputs)
            if value is not None:
                inputs[spec.name] = value
        before = session.frontier_index
        try:
            session.submit_inputs(active, inputs)
        except StatGuideError as exc:
            out_fn(f"submit failed: {exc}")
            continue
        suggestions = []
        for i in range(before, session.frontier_index if session.active_step_id else len(session.states)):
            for line in _step_summary(session, session.states[i].def_id):
                out_fn(line)
            for s in session.states[i].active_suggestions:
                suggestions.append((session.states[i].def_id, s))
        for k, (sid, s) in enumerate(suggestions, 1):
            out_fn(f"{k}) [{sid}] {s['message']}")
        _command_loop(session, in_fn, out_fn, suggestions)


def run_interactive(args) -> int:
    dataset = load_csv(args.data)
    session = _make_session(args.workflow, dataset)
    interactive_loop(session)
    return 0


# -- entry point -----------------------------------------------------------------------


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="statguide",
        description="Guided statistical workflows with assumption checking.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a decision script against a dataset")
    p_run.add_argument("--workflow", help="workflow id (overrides the script)")
    p_run.add_argument("--data", required=True, help="path to the CSV dataset")
    p_run.add_argument("--script", required=True, help="path to the decision script JSON")
    p_run.add_argument("--report", help="write the report here (.txt for text, else JSON)")
    p_run.add_argument("--model", help="write the model record JSON here")
    p_run.add_argument("--strict", action="store_true",
                       help="exit 2 if assumption violations are left unresolved")
    p_run.add_argument("--seed", type=int, default=None,
                       help="seed injected into split steps unless the script sets one")
    p_run.add_argument("--json", action="store_true",
                       help="print machine-readable session state and report")
    p_run.set_defaults(fn=run_script)

    p_int = sub.add_parser("interactive", help="walk a workflow step by step")
    p_int.add_argument("--workflow", required=True)
    p_int.add_argument("--data", required=True)
    p_int.set_defaults(fn=run_interactive)

    env = os.environ
    p_srv = sub.add_parser("serve", help="run the HTTP session service")
    p_srv.add_argument("--listen", default=env.get("STATGUIDE_LISTEN", "127.0.0.1:8787"))
    p_srv.add_argument("--idle-expiry", type=float,
                       default=float(env.get("STATGUIDE_IDLE_EXPIRY", 7200.0)),
                       help="idle session expiry in seconds")
    p_srv.add_argument("--sample-dir", default=env.get("STATGUIDE_SAMPLE_DIR"),
                       help="directory of named sample CSVs (default: bundled)")
    p_srv.add_argument("--ui-origin", default=env.get("STATGUIDE_UI_ORIGIN", "*"),
                       help="CORS origin for the web UI")
    p_srv.add_argument("--static-dir", default=env.get("STATGUIDE_STATIC_DIR"),
                       help="serve these static assets at / (the built web UI)")
    p_srv.set_defaults(fn=None)

    args = parser.parse_args(argv)
    if args.command == "serve":
        from .service import serve

        serve(listen=args.listen, idle_expiry=args.idle_expiry,
              sample_dir=args.sample_dir, ui_origin=args.ui_origin,
              static_dir=args.static_dir)
        return 0
    try:
        return args.fn(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except StatGuideError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
