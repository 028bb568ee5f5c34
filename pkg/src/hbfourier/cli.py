"""Command-line front end: scenario execution and table/CSV/JSON emission.

Thin orchestration only; every numerical decision lives in the library
modules.  Exit codes: 0 success, 1 input error, 2 property violation (with a
machine-readable record on stdout).  Output is deterministic byte-for-byte
for fixed inputs: floats are printed with shortest round-trip formatting and
JSON keys are sorted.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, replace

import numpy as np

from . import inequality, posdef, sampling, zeros
from .measure import (
    PiecewiseLinearDensity,
    ScenarioError,
    StieltjesMeasure,
    from_fejer,
    from_pd_profile,
    parse_scenario,
)
from .transforms import eval_E, identity_residuals, real_transforms

COMMANDS = (
    "eval",
    "identities",
    "ineq",
    "interp",
    "zeros-count",
    "zeros-classify",
    "zeros-imag",
    "posdef",
    "demo",
)

_TASK_FIELDS = {"command", "grid", "rect", "tau", "n", "alpha", "tol", "terms", "output", "target"}

_DEFAULT_TOL = {"ineq": 1e-9, "identities": 1e-10, "interp": 1e-9}


@dataclass(frozen=True)
class TaskDescriptor:
    command: str
    grid: tuple = (-10.0, 10.0, None)  # (start, stop, step); None step = pi/(50 sigma)
    rect: tuple = zeros.DEFAULT_LOWER_RECT
    tau: float = 0.0
    n: int = 0
    alpha: float = 0.0
    tol: float | None = None
    terms: int = 10_000
    output: str = "table"
    target: str = "F"

    def resolved_tol(self) -> float:
        if self.tol is not None:
            return self.tol
        return _DEFAULT_TOL.get(self.command, 1e-9)

    @classmethod
    def from_mapping(cls, command: str, mapping: dict | None) -> "TaskDescriptor":
        task = cls(command=command)
        if not mapping:
            return task
        unknown = set(mapping) - _TASK_FIELDS
        if unknown:
            raise ScenarioError(f"unknown task fields {sorted(unknown)}", "task")
        fields = {}
        if "command" in mapping:
            if mapping["command"] != command and command != mapping["command"]:
                raise ScenarioError(
                    f"scenario task is {mapping['command']!r}, invoked as {command!r}", "task.command"
                )
        if "grid" in mapping:
            g = mapping["grid"]
            if not (isinstance(g, dict) and {"start", "stop"} <= set(g) <= {"start", "stop", "step"}):
                raise ScenarioError("grid must be {start, stop, step?}", "task.grid")
            fields["grid"] = (float(g["start"]), float(g["stop"]), float(g["step"]) if "step" in g else None)
        if "rect" in mapping:
            r = mapping["rect"]
            if not (isinstance(r, list) and len(r) == 4):
                raise ScenarioError("rect must be [x0, x1, y0, y1]", "task.rect")
            fields["rect"] = tuple(float(v) for v in r)
        for key, conv in (("tau", float), ("n", int), ("alpha", float), ("tol", float), ("terms", int)):
            if key in mapping:
                fields[key] = conv(mapping[key])
        if "output" in mapping:
            if mapping["output"] not in ("csv", "json", "table"):
                raise ScenarioError("output must be csv, json, or table", "task.output")
            fields["output"] = mapping["output"]
        if "target" in mapping:
            fields["target"] = str(mapping["target"])
        return replace(task, **fields)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, complex):
        return f"{value.real!r}{'+' if value.imag >= 0 else '-'}{abs(value.imag)!r}j"
    return str(value)


def _emit_rows(header, rows, output, out):
    if output == "csv":
        out.write(",".join(header) + "\n")
        for row in rows:
            out.write(",".join(_fmt(v) for v in row) + "\n")
    elif output == "json":
        payload = [dict(zip(header, row)) for row in rows]
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        widths = [max(len(h), 24) for h in header]
        out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)) + "\n")
        for row in rows:
            out.write("  ".join(_fmt(v).ljust(w) for v, w in zip(row, widths)) + "\n")


def _emit_doc(doc: dict, output: str, out):
    if output == "json":
        out.write(json.dumps(doc, sort_keys=True, default=_json_default) + "\n")
    else:
        for key in sorted(doc):
            out.write(f"{key}: {_fmt(doc[key]) if not isinstance(doc[key], (list, tuple, dict)) else doc[key]}\n")


def _json_default(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _violation(out, prop: str, location, observed, bound) -> int:
    record = {"violation": {"property": prop, "location": location, "observed": observed, "bound": bound}}
    out.write(json.dumps(record, sort_keys=True, default=_json_default) + "\n")
    return 2


def _make_grid(task: TaskDescriptor, sigma: float) -> np.ndarray:
    start, stop, step = task.grid
    if step is None:
        step = math.pi / (50.0 * sigma)
    if not (stop > start and step > 0):
        raise ValueError("grid needs stop > start and step > 0")
    return np.arange(start, stop + 0.5 * step, step)


def _run_eval(measure, task, out) -> int:
    grid = _make_grid(task, measure.sigma)
    rt = real_transforms(measure, grid, order=1)
    cfg = inequality.OmegaConfig(measure, task.n, task.tau)
    margins = inequality.margin_values(cfg, grid)
    e_vals = eval_E(measure, task.tau, task.n, grid)
    header = ["x", "F_re", "F_im", "G", "H", "C", "S", "Delta", "E", "margin"]
    rows = [
        (
            float(grid[i]),
            float(rt.G[i]),
            float(rt.H[i]),
            float(rt.G[i]),
            float(rt.H[i]),
            float(rt.C[i]),
            float(rt.S[i]),
            float(rt.Delta[i]),
            float(e_vals[i]),
            float(margins[i]),
        )
        for i in range(len(grid))
    ]
    _emit_rows(header, rows, task.output if task.output != "table" else "csv", out)
    return 0


def _run_identities(measure, task, out) -> int:
    grid = _make_grid(task, measure.sigma)
    res = identity_residuals(measure, grid)
    tol = task.resolved_tol()
    doc = {
        "max_linear_residual": res.max_linear(),
        "max_quadratic_residual": res.max_quadratic(),
        "linear_scale": res.linear_scale,
        "quadratic_scale": res.quadratic_scale,
    }
    _emit_doc(doc, task.output, out)
    if res.max_linear() > tol * res.linear_scale:
        return _violation(out, "identity_residual_linear", None, res.max_linear(), tol * res.linear_scale)
    if res.max_quadratic() > tol * res.quadratic_scale:
        return _violation(out, "identity_residual_quadratic", None, res.max_quadratic(), tol * res.quadratic_scale)
    return 0


def _run_ineq(measure, task, out) -> int:
    cfg = inequality.OmegaConfig(measure, task.n, task.tau)
    grid = _make_grid(task, measure.sigma)
    report = inequality.check_inequality(cfg, grid)
    tol = task.resolved_tol()
    if task.output == "csv":
        header = ["x", "margin", "E", "scale"]
        rows = [
            (float(report.grid[i]), float(report.margin[i]), float(report.e_values[i]), float(report.scale[i]))
            for i in range(len(report.grid))
        ]
        _emit_rows(header, rows, "csv", out)
    else:
        doc = {
            "hypothesis_ok": report.hypothesis_ok,
            "hypothesis_note": "grid-verified hypothesis" if report.hypothesis_ok else "grid hypothesis failed",
            "min_margin": report.min_margin,
            "worst_relative_margin": report.worst_relative_margin,
            "global_equality": report.global_equality,
            "equality_points": list(report.equality_points),
        }
        if report.global_equality:
            doc["summary"] = "global equality"
        _emit_doc(doc, task.output, out)
    if not report.hypothesis_ok:
        loc = float(report.grid[int(np.argmin(report.e_values))])
        return _violation(out, "grid_hypothesis_E_nonneg", loc, float(np.min(report.e_values)), 0.0)
    rel = report.margin / report.scale
    if float(np.min(rel)) < -tol:
        i = int(np.argmin(rel))
        return _violation(out, "min_margin", float(report.grid[i]), float(report.margin[i]), -tol * float(report.scale[i]))
    return 0


def _run_interp(measure, task, out) -> int:
    cfg = inequality.OmegaConfig(measure, task.n, task.tau)
    f = sampling.from_omega_config(cfg, task.alpha)
    grid = _make_grid(task, measure.sigma)
    probes = grid[:: max(len(grid) // 16, 1)]
    rows = []
    worst = None
    for x in probes:
        lhs = sampling.interp_lhs(f, measure.sigma, task.alpha, float(x))
        rhs = sampling.interp_rhs(f, measure.sigma, task.alpha, float(x), task.terms)
        gap = abs(lhs - rhs.value)
        rows.append((float(x), lhs, rhs.value, gap, rhs.tail_bound))
        if gap > rhs.tail_bound + task.resolved_tol():
            worst = (float(x), gap, rhs.tail_bound + task.resolved_tol())
    _emit_rows(["x", "lhs", "rhs", "gap", "tail_bound"], rows, task.output if task.output != "table" else "csv", out)
    if worst is not None:
        return _violation(out, "interpolation_identity", worst[0], worst[1], worst[2])
    return 0


def _run_zeros_count(measure, task, out) -> int:
    rect = zeros.Rectangle(*task.rect)
    result = zeros.count_zeros(measure, rect, task.target)
    _emit_doc(
        {
            "count": result.count,
            "winding_residual": result.winding_residual,
            "boundary_samples": result.boundary_samples,
            "rect": list(task.rect),
            "target": task.target,
        },
        task.output,
        out,
    )
    return 0


def _run_zeros_classify(measure, task, out) -> int:
    result = zeros.classify(measure, zeros.Rectangle(*task.rect))
    doc = {
        "verdict": result.verdict,
        "real_zeros": [[x, mult] for x, mult in result.real_zeros],
        "lower_zero": result.lower_zero,
        "defect": result.defect,
        "c_nonneg": result.c_nonneg,
        "s_nonneg": result.s_nonneg,
    }
    _emit_doc(doc, task.output, out)
    return 0


def _run_zeros_imag(measure, task, out) -> int:
    y_star = zeros.find_imaginary_zero(measure)
    _emit_doc({"y_star": y_star}, task.output, out)
    return 0


def _run_posdef(measure, task, out) -> int:
    rep = posdef.recover_pd_profile(measure)
    doc = {
        "s_nonneg": rep.s_nonneg,
        "note": "grid-verified" if rep.s_nonneg else "sine hypothesis failed on grid",
        "f0": rep.f0,
        "pd_bound_ok": rep.pd_bound_ok,
    }
    if rep.s_nonneg:
        moment_rep = posdef.h_prime_zero_checks(measure)
        doc["h_prime_zero"] = moment_rep.h_prime_zero
        doc["expected_sign"] = moment_rep.expected_sign
        doc["sign_ok"] = moment_rep.sign_ok
    _emit_doc(doc, task.output, out)
    return 0


_RUNNERS = {
    "eval": _run_eval,
    "identities": _run_identities,
    "ineq": _run_ineq,
    "interp": _run_interp,
    "zeros-count": _run_zeros_count,
    "zeros-classify": _run_zeros_classify,
    "zeros-imag": _run_zeros_imag,
    "posdef": _run_posdef,
}


def _demo_fixture(name: str):
    if name == "fejer2":
        return from_fejer(2, 1.0, 1.0), {"command": "ineq", "tau": 0.0, "n": 0, "grid": {"start": -20 * math.pi, "stop": 20 * math.pi}}
    if name == "atom-sigma":
        return StieltjesMeasure(1.0, ((1.0, 2.0),)), {"command": "ineq", "tau": math.pi / 2, "n": 0}
    if name == "triangle-case2":
        return from_pd_profile([0.0, 1.0], [1.0, 0.0], -0.5), {"command": "zeros-classify"}
    if name == "ramp":
        dens = PiecewiseLinearDensity.interpolant([0.0, 1.0], [0.0, 1.0])
        return StieltjesMeasure(1.0, (), dens), {"command": "ineq", "tau": -math.pi / 2, "n": 1}
    raise ValueError(f"unknown demo {name!r}")


def _run_demo(args, task_flags, out) -> int:
    name = args.scenario
    if name is None:
        raise ValueError("demo needs a name: fejer2, atom-sigma, triangle-case2, ramp, growth-limit")
    if name == "growth-limit":
        a = args.a if args.a is not None else -0.75
        d_small = inequality.borderline_growth_d(a, 0.1)
        d_large = inequality.borderline_growth_d(a, 100.0)
        _emit_doc(
            {
                "a": a,
                "d_at_0.1": d_small,
                "d_at_100": d_large,
                "sign_change": bool(d_small < 0.0 < d_large),
                "note": "linear growth breaks the Wronskian sign; expected behavior",
            },
            task_flags.get("output", "table"),
            out,
        )
        return 0
    measure, base_task = _demo_fixture(name)
    merged = dict(base_task)
    merged.update({k: v for k, v in task_flags.items() if v is not None})
    command = merged.pop("command")
    task = TaskDescriptor.from_mapping(command, merged)
    return _RUNNERS[command](measure, task, out)


def _flag_task_fields(args) -> dict:
    fields: dict = {}
    if args.grid:
        try:
            start, stop, step = (float(v) for v in args.grid.split(":"))
        except ValueError as exc:
            raise ValueError("--grid expects a:b:step") from exc
        fields["grid"] = {"start": start, "stop": stop, "step": step}
    if args.rect:
        try:
            fields["rect"] = [float(v) for v in args.rect.split(",")]
        except ValueError as exc:
            raise ValueError("--rect expects x0,x1,y0,y1") from exc
    if args.tau is not None:
        fields["tau"] = args.tau
    if args.n is not None:
        fields["n"] = args.n
    if args.alpha is not None:
        fields["alpha"] = args.alpha
    if args.tol is not None:
        fields["tol"] = args.tol
    if args.terms is not None:
        fields["terms"] = args.terms
    if args.out is not None:
        fields["output"] = args.out
    if args.target is not None:
        fields["target"] = args.target
    return fields


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hbf",
        description="Finite Fourier-Stieltjes transforms: inequality checks, interpolation, zero classification.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("scenario", nargs="?", help="scenario JSON path (or demo name for the demo command)")
    parser.add_argument("--grid", help="evaluation grid a:b:step")
    parser.add_argument("--rect", help="complex rectangle x0,x1,y0,y1")
    parser.add_argument("--tau", type=float)
    parser.add_argument("--n", type=int)
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--tol", type=float)
    parser.add_argument("--terms", type=int)
    parser.add_argument("--target", choices=("F", "zF", "F/z", "F'", "F''"))
    parser.add_argument("--a", type=float, help="parameter of the growth-limit demo")
    parser.add_argument("--out", choices=("csv", "json", "table"))
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        flag_fields = _flag_task_fields(args)
        if args.command == "demo":
            flag_fields_flat = dict(flag_fields)
            return _run_demo(args, flag_fields_flat, out)
        if args.scenario is None:
            raise ValueError(f"{args.command} needs a scenario file")
        try:
            with open(args.scenario, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ValueError(f"cannot read scenario: {exc}") from exc
        measure, task_mapping = parse_scenario(text)
        merged = dict(task_mapping or {})
        if "command" in merged and merged["command"] != args.command:
            raise ScenarioError(
                f"scenario task is {merged['command']!r}, invoked as {args.command!r}", "task.command"
            )
        merged.pop("command", None)
        merged.update(flag_fields)
        task = TaskDescriptor.from_mapping(args.command, merged)
        return _RUNNERS[args.command](measure, task, out)
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except zeros.BoundaryZeroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (zeros.DiagnosticFailure, zeros.HypothesisViolation) as exc:
        return _violation(out, "diagnostic", None, str(exc), None)


if __name__ == "__main__":
    sys.exit(main())
