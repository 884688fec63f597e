"""Command-line surface for the tensor kernel.

Subcommands:

    check        validate an index-notation expression, print the report JSON
    eval         evaluate an expression against a bindings file
    christoffel  tabulate nonzero Christoffel symbols on points or a grid
    field-op     sample grad/div/rot/laplace of a field over a chart
    audit        run chart invariant checks at random domain points

Exit codes: 0 success; 1 invalid expression (check); 2 parse/usage errors;
3 binding or shape errors (eval); 4 domain error at every sampled point
(field-op); 5 audit tolerance breach.

Output is deterministic: floats use the shortest round-trip representation,
JSON keys are sorted, and rows follow the sampling order. The --seed flag
(default 42) pins the audit's random points.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field as dataclass_field
from typing import Optional

import numpy as np

from . import curvilinear, fields, notation
from .errors import (
    BindingError,
    DegenerateMetric,
    DegenerateTransition,
    DomainError,
    ParameterError,
    ParseError,
    ShapeError,
    TensorCalcError,
    ValidationError,
)
from .fields import DifferentiationScheme, TensorField
from .tensors import DenseTensor, Valency

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_BINDING = 3
EXIT_DOMAIN = 4
EXIT_AUDIT = 5

_AXIS_NAMES = {"y1": 0, "y2": 1, "y3": 2, "x1": 0, "x2": 1, "x3": 2,
               "1": 0, "2": 1, "3": 2}


def _fmt(value: float) -> str:
    return repr(float(value))


@dataclass
class RunConfig:
    """Validated bag of options for one command invocation."""

    command: str
    expr: Optional[str] = None
    chart_name: Optional[str] = None
    chart_file: Optional[str] = None
    bindings_path: Optional[str] = None
    field_path: Optional[str] = None
    op: Optional[str] = None
    slot: int = 1
    dim: int = 3
    grid: dict = dataclass_field(default_factory=dict)
    points: list = dataclass_field(default_factory=list)
    scheme_order: int = 2
    step: Optional[float] = None
    seed: int = 42
    n_points: int = 100
    out: Optional[str] = None
    format: str = "csv"
    explicit: bool = False

    def scheme(self) -> DifferentiationScheme:
        return DifferentiationScheme(self.scheme_order, self.step)

    def chart(self) -> curvilinear.Chart:
        if self.chart_file:
            return curvilinear.load_chart(self.chart_file)
        if self.chart_name:
            return curvilinear.builtin_chart(self.chart_name)
        raise ParameterError("no chart given; pass --chart or --chart-file")

    def sample_points(self) -> list:
        """Points from --point flags plus the Cartesian product of --grid."""
        pts = [np.asarray(p, dtype=float) for p in self.points]
        if self.grid:
            missing = sorted(set(range(3)) - set(self.grid))
            if missing:
                raise ParameterError(
                    f"grid is missing axis {missing[0] + 1}; give all three axes")
            axes = []
            for a in range(3):
                lo, hi, count = self.grid[a]
                axes.append(np.linspace(lo, hi, count))
            for v1 in axes[0]:
                for v2 in axes[1]:
                    for v3 in axes[2]:
                        pts.append(np.array([v1, v2, v3]))
        if not pts:
            raise ParameterError("no evaluation points; pass --point or --grid")
        return pts


def _parse_grid_spec(text: str):
    """axis=min:max:count, e.g. y1=0.5:3:5."""
    try:
        axis_text, span = text.split("=", 1)
        lo_text, hi_text, count_text = span.split(":")
        axis = _AXIS_NAMES[axis_text.strip()]
        lo, hi, count = float(lo_text), float(hi_text), int(count_text)
    except (ValueError, KeyError) as exc:
        raise ParameterError(
            f"bad grid spec {text!r}; expected axis=min:max:count") from exc
    if count < 1:
        raise ParameterError(f"grid count must be at least 1, got {count}")
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ParameterError("grid range must be finite")
    return axis, (lo, hi, count)


def _parse_point(text: str) -> np.ndarray:
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise ParameterError(f"bad point {text!r}; expected three numbers") from exc
    if len(values) != 3:
        raise ParameterError(f"bad point {text!r}; expected three numbers")
    return np.array(values)


def _emit(config: RunConfig, text: str):
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- field specs -----------------------------------------------------------------


def load_field(source) -> TensorField:
    """TensorField from a JSON spec of component coefficient tables.

    {"r": 1, "s": 0, "components": [terms, terms, terms]} with one term list
    per component in row-major slot order (a scalar field has exactly one).
    Terms follow the chart-config grammar: {"coeff": c, "powers": [p1,p2,p3],
    "trig": [null | {"fn": "sin"|"cos", "freq": f}, ...]}.
    """
    if isinstance(source, dict):
        spec = source
    else:
        with open(str(source), "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    try:
        r, s = int(spec["r"]), int(spec["s"])
        component_tables = spec["components"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParameterError(f"malformed field spec: {exc}") from exc
    valency = Valency(r, s)
    count = 3 ** valency.order
    if not isinstance(component_tables, list) or len(component_tables) != count:
        raise ParameterError(
            f"field spec needs {count} component term lists for valency ({r},{s})")
    components = [
        curvilinear._compile_component(table, f"component {n}")
        for n, table in enumerate(component_tables)
    ]
    shape = (3,) * valency.order

    def func(y):
        values = np.array([c(y) for c in components])
        return values.reshape(shape) if shape else values[0]

    return TensorField(valency, func, 3)


def _component_paths(valency: Valency):
    """All (path string, multi-index) pairs in row-major slot order."""
    shape = (3,) * valency.order
    if not shape:
        return [("scalar", ())]
    out = []
    for flat in range(3 ** valency.order):
        idx = np.unravel_index(flat, shape)
        upper = idx[:valency.r]
        lower = idx[valency.r:]
        path = ""
        if upper:
            path += "^" + ".".join(str(i + 1) for i in upper)
        if lower:
            path += "_" + ".".join(str(j + 1) for j in lower)
        out.append((path, tuple(idx)))
    return out


# -- subcommands -----------------------------------------------------------------


def cmd_check(config: RunConfig) -> int:
    try:
        expression = notation.parse(config.expr)
    except ParseError as exc:
        _emit(config, _dump_json({
            "verdict": "parse-error",
            "message": str(exc),
            "position": exc.position,
        }))
        return EXIT_PARSE
    report = notation.validate(expression)
    text = _dump_json(report.as_dict())
    if config.explicit and report.is_valid:
        text += notation.explicit_form(expression, config.dim) + "\n"
    _emit(config, text)
    return EXIT_OK if report.is_valid else EXIT_INVALID


def cmd_eval(config: RunConfig) -> int:
    try:
        expression = notation.parse(config.expr)
    except ParseError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    try:
        with open(config.bindings_path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        bindings = {name: DenseTensor.from_dict(record)
                    for name, record in raw.items()}
        result = notation.evaluate(expression, bindings, config.dim)
    except (BindingError, ShapeError, ValidationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BINDING
    _emit(config, _dump_json(result.as_dict()))
    return EXIT_OK


def cmd_christoffel(config: RunConfig) -> int:
    chart = config.chart()
    rows = []
    for point in config.sample_points():
        try:
            gamma = curvilinear.christoffel(chart, point)
        except (DomainError, DegenerateTransition) as exc:
            sys.stderr.write(f"warning: skipping {point.tolist()}: {exc}\n")
            continue
        for k in range(3):
            for i in range(3):
                for j in range(3):
                    value = gamma.values[k, i, j]
                    if abs(value) > 1e-12:
                        rows.append((point, k + 1, i + 1, j + 1, value))
    if config.format == "json":
        payload = [
            {"y": point.tolist(), "k": k, "i": i, "j": j, "gamma": value}
            for point, k, i, j, value in rows
        ]
        _emit(config, _dump_json(payload))
    else:
        lines = ["y1,y2,y3,k,i,j,gamma"]
        for point, k, i, j, value in rows:
            lines.append(",".join([
                _fmt(point[0]), _fmt(point[1]), _fmt(point[2]),
                str(k), str(i), str(j), _fmt(value)]))
        _emit(config, "\n".join(lines) + "\n")
    return EXIT_OK


_FIELD_OPS = ("grad", "div", "rot", "laplace")


def _build_operator(op: str, chart, field_input: TensorField, slot: int,
                    scheme: DifferentiationScheme) -> TensorField:
    if op == "grad":
        return curvilinear.gradient_vector_in_chart(chart, field_input, scheme)
    if op == "div":
        return curvilinear.divergence_in_chart(chart, field_input, slot, scheme)
    if op == "rot":
        return curvilinear.rotor_in_chart(chart, field_input, scheme)
    if op == "laplace":
        return curvilinear.laplacian_in_chart(chart, field_input, scheme)
    raise ParameterError(f"unknown operator {op!r}; choose from {_FIELD_OPS}")


def cmd_field_op(config: RunConfig) -> int:
    chart = config.chart()
    field_input = load_field(config.field_path)
    result = _build_operator(config.op, chart, field_input, config.slot,
                             config.scheme())
    points = config.sample_points()
    samples = []
    failures = 0
    for point in points:
        try:
            tensor = result.evaluate(point)
        except (DomainError, DegenerateTransition, DegenerateMetric) as exc:
            sys.stderr.write(f"warning: skipping {point.tolist()}: {exc}\n")
            failures += 1
            continue
        samples.append((point, tensor))
    if failures == len(points):
        sys.stderr.write("error: every sample point failed\n")
        return EXIT_DOMAIN
    if config.format == "json":
        payload = [
            {"point": point.tolist(), "tensor": tensor.as_dict()}
            for point, tensor in samples
        ]
        _emit(config, _dump_json(payload))
    else:
        lines = ["x1,x2,x3,component-path,value"]
        for point, tensor in samples:
            for path, idx in _component_paths(tensor.valency):
                value = tensor.array[idx] if idx else tensor.item()
                lines.append(",".join([
                    _fmt(point[0]), _fmt(point[1]), _fmt(point[2]),
                    path, _fmt(value)]))
        _emit(config, "\n".join(lines) + "\n")
    return EXIT_OK


def _audit_checks(chart, points, scheme) -> list:
    """(name, residual, tolerance) triples for one chart."""
    analytic = chart.analytic
    jac_tol = 1e-6 if analytic else 1e-4
    sym_tol = 1e-9 if analytic else 1e-5
    conc_tol = 1e-6 if analytic else 1e-4
    eye = np.eye(chart.dim)

    roundtrip = 0.0
    jacobian = 0.0
    symmetry = 0.0
    for y in points:
        x = np.asarray(chart.forward(y), dtype=float)
        roundtrip = max(roundtrip, float(np.max(np.abs(
            np.asarray(chart.inverse(x), dtype=float) - y))))
        S = curvilinear.jacobian_direct(chart, y)
        T = curvilinear.jacobian_inverse(chart, y)
        jacobian = max(jacobian, float(np.max(np.abs(T @ S - eye))))
        symmetry = max(symmetry, curvilinear.christoffel(chart, y).symmetry_residual())

    gfield = TensorField(Valency(0, 2),
                         lambda y: curvilinear.metric_in_chart(chart, y).matrix)
    nabla_g = curvilinear.covariant_derivative(chart, gfield, scheme)
    concordance = 0.0
    for y in points:
        concordance = max(concordance, float(np.max(np.abs(
            nabla_g.evaluate_array(y)))))

    return [
        ("inverse-roundtrip", roundtrip, 1e-9),
        ("jacobian-inverse", jacobian, jac_tol),
        ("christoffel-symmetry", symmetry, sym_tol),
        ("concordance", concordance, conc_tol),
    ]


def cmd_audit(config: RunConfig) -> int:
    chart = config.chart()
    rng = np.random.default_rng(config.seed)
    lines = [f"audit of chart '{chart.name}' at {config.n_points} points (seed {config.seed})"]
    breached = False
    try:
        points = chart.sample_points(config.n_points, rng)
        checks = _audit_checks(chart, points, config.scheme())
    except (DomainError, DegenerateTransition, DegenerateMetric, ShapeError) as exc:
        lines.append(f"check aborted: {exc}")
        lines.append("verdict: FAIL")
        _emit(config, "\n".join(lines) + "\n")
        return EXIT_AUDIT
    for name, residual, tolerance in checks:
        status = "ok" if residual <= tolerance else "BREACH"
        breached = breached or residual > tolerance
        lines.append(f"{name}: max residual {_fmt(residual)} "
                     f"(tolerance {_fmt(tolerance)}) {status}")
    lines.append("verdict: " + ("FAIL" if breached else "PASS"))
    _emit(config, "\n".join(lines) + "\n")
    return EXIT_AUDIT if breached else EXIT_OK


# -- argument parsing --------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tensorcalc",
        description="Tensor calculus toolkit: index notation, Christoffel "
                    "tables, field operators, chart audits.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_chart_flags(p):
        p.add_argument("--chart", help="built-in chart name "
                       "(cylindrical, spherical, identity)")
        p.add_argument("--chart-file", help="custom chart config JSON")

    def add_sampling_flags(p):
        p.add_argument("--grid", action="append", default=[],
                       metavar="axis=min:max:count",
                       help="grid spec per axis, repeatable")
        p.add_argument("--point", action="append", default=[],
                       metavar="a,b,c", help="single point, repeatable")

    def add_output_flags(p):
        p.add_argument("--out", help="write output to a file instead of stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    def add_scheme_flags(p):
        p.add_argument("--scheme", choices=("central2", "central4"),
                       default="central2")
        p.add_argument("--step", type=float, default=None,
                       help="fixed finite-difference step")

    p_check = sub.add_parser("check", help="validate an index expression")
    p_check.add_argument("expr")
    p_check.add_argument("--dim", type=int, default=3)
    p_check.add_argument("--explicit", action="store_true",
                         help="also print the explicit-summation form")
    p_check.add_argument("--out")

    p_eval = sub.add_parser("eval", help="evaluate an index expression")
    p_eval.add_argument("expr")
    p_eval.add_argument("--bindings", required=True,
                        help="JSON file mapping symbol names to tensors")
    p_eval.add_argument("--dim", type=int, default=3)
    p_eval.add_argument("--out")

    p_chr = sub.add_parser("christoffel", help="tabulate Christoffel symbols")
    add_chart_flags(p_chr)
    add_sampling_flags(p_chr)
    add_output_flags(p_chr)

    p_fop = sub.add_parser("field-op", help="sample a field operator")
    p_fop.add_argument("op", choices=_FIELD_OPS)
    add_chart_flags(p_fop)
    p_fop.add_argument("--field", required=True, help="field spec JSON")
    p_fop.add_argument("--slot", type=int, default=1,
                       help="upper slot for div on multi-index fields")
    add_sampling_flags(p_fop)
    add_scheme_flags(p_fop)
    add_output_flags(p_fop)

    p_audit = sub.add_parser("audit", help="run chart invariant checks")
    add_chart_flags(p_audit)
    p_audit.add_argument("--points", type=int, default=100)
    p_audit.add_argument("--seed", type=int, default=42)
    add_scheme_flags(p_audit)
    p_audit.add_argument("--out")

    return parser


def _config_from_args(ns: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=ns.command)
    config.expr = getattr(ns, "expr", None)
    config.chart_name = getattr(ns, "chart", None)
    config.chart_file = getattr(ns, "chart_file", None)
    config.bindings_path = getattr(ns, "bindings", None)
    config.field_path = getattr(ns, "field", None)
    config.op = getattr(ns, "op", None)
    config.slot = getattr(ns, "slot", 1)
    config.dim = getattr(ns, "dim", 3)
    config.out = getattr(ns, "out", None)
    config.format = getattr(ns, "format", "csv")
    config.explicit = getattr(ns, "explicit", False)
    config.seed = getattr(ns, "seed", 42)
    config.n_points = getattr(ns, "points", 100)
    scheme_name = getattr(ns, "scheme", "central2")
    config.scheme_order = 4 if scheme_name == "central4" else 2
    config.step = getattr(ns, "step", None)
    for spec in getattr(ns, "grid", []):
        axis, span = _parse_grid_spec(spec)
        config.grid[axis] = span
    for text in getattr(ns, "point", []):
        config.points.append(_parse_point(text))
    return config


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits on usage errors and --help; keep the int contract
        return int(exc.code) if exc.code else 0
    handlers = {
        "check": cmd_check,
        "eval": cmd_eval,
        "christoffel": cmd_christoffel,
        "field-op": cmd_field_op,
        "audit": cmd_audit,
    }
    try:
        config = _config_from_args(ns)
        return handlers[ns.command](config)
    except (ParameterError, FileNotFoundError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except TensorCalcError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
