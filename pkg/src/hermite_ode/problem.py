"""TOML problem files and the bundled presets.

Example::

    n = 2
    interval = [0.0, 2.0]
    A = [["-2", "1"], ["1", "-1"]]
    q = ["2*sin(2*t)", "0"]

    [mesh]
    uniform = 13            # or: explicit = [0.0, 0.5, ...]

    [[constraints]]
    endpoint = "left"       # or "right"
    component = 1           # 1-based
    value = 0.0

    [solver]                # optional CG overrides
    rel_tol = 1e-12
    preconditioner = "jacobi"

    [quadrature]
    gauss = 8

    [reference]
    enabled = true
    dense_factor = 64
"""

from __future__ import annotations

import sys as _sys
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .analysis import DEFAULT_DENSE_FACTOR
from .expression import EvaluationError, ExpressionSyntaxError
from .model import BoundaryConditionError, BoundaryConditions, Constraint, Endpoint, LinearOdeSystem
from .solver import CgConfig, Preconditioner
from .spline import Mesh

if _sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

__all__ = ["Problem", "ProblemFileError", "load_problem", "parse_problem", "list_presets", "load_preset"]

_KNOWN_KEYS = {
    "name", "description", "n", "interval", "A", "q", "mesh", "constraints",
    "solver", "quadrature", "reference", "pin_initial_derivative",
}


class ProblemFileError(ValueError):
    """Malformed problem file; the message names the offending field."""


@dataclass
class Problem:
    system: LinearOdeSystem
    mesh: Mesh
    bcs: BoundaryConditions
    name: str = ""
    description: str = ""
    cg: CgConfig = field(default_factory=CgConfig)
    gauss: int = 8
    reference: bool = False
    dense_factor: int = DEFAULT_DENSE_FACTOR
    pin_initial_derivative: bool = False


def _require(doc, key, kind, where=None):
    where = where or key
    if key not in doc:
        raise ProblemFileError(f"missing required field '{where}'")
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, kind):
        raise ProblemFileError(f"field '{where}' has the wrong type ({type(value).__name__})")
    return value


def _entry(value, where):
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ProblemFileError(f"field '{where}' must be an expression string or a number")
    return value


def _check_keys(table, allowed, where):
    unknown = set(table) - set(allowed)
    if unknown:
        raise ProblemFileError(f"unknown field(s) in '{where}': {', '.join(sorted(unknown))}")


def _table(doc, key):
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise ProblemFileError(f"field '{key}' must be a table")
    return value


def parse_problem(doc: dict) -> Problem:
    """Validate a decoded TOML document and build a :class:`Problem`."""
    unknown = set(doc) - _KNOWN_KEYS
    if unknown:
        raise ProblemFileError(f"unknown field(s): {', '.join(sorted(unknown))}")
    n = _require(doc, "n", int)
    if n < 1:
        raise ProblemFileError("field 'n' must be >= 1")
    interval = _require(doc, "interval", list)
    if len(interval) != 2 or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in interval):
        raise ProblemFileError("field 'interval' must be a pair of numbers")

    a_rows = _require(doc, "A", list)
    if len(a_rows) != n or not all(isinstance(r, list) and len(r) == n for r in a_rows):
        raise ProblemFileError(f"field 'A' must be a {n}x{n} grid")
    a = [[_entry(v, f"A[{i + 1}][{j + 1}]") for j, v in enumerate(r)] for i, r in enumerate(a_rows)]
    q_list = _require(doc, "q", list)
    if len(q_list) != n:
        raise ProblemFileError(f"field 'q' must have {n} entries")
    q = [_entry(v, f"q[{i + 1}]") for i, v in enumerate(q_list)]

    try:
        system = LinearOdeSystem.from_entries(a, q, interval)
    except ExpressionSyntaxError as exc:
        raise ProblemFileError(f"field 'A' or 'q': {exc}") from None
    except EvaluationError as exc:
        raise ProblemFileError(f"field 'A': {exc}") from None
    except ValueError as exc:
        raise ProblemFileError(f"field 'interval': {exc}") from None

    mesh_doc = _require(doc, "mesh", dict)
    _check_keys(mesh_doc, ("uniform", "explicit"), "mesh")
    try:
        if "uniform" in mesh_doc and "explicit" in mesh_doc:
            raise ProblemFileError("field 'mesh' must give either 'uniform' or 'explicit', not both")
        if "uniform" in mesh_doc:
            points = _require(mesh_doc, "uniform", int, "mesh.uniform")
            if points < 3:
                raise ProblemFileError("field 'mesh.uniform' must be >= 3")
            mesh = Mesh.uniform(*system.interval, points)
        elif "explicit" in mesh_doc:
            knots = _require(mesh_doc, "explicit", list, "mesh.explicit")
            mesh = Mesh(knots)
            if tuple(mesh.knots[[0, -1]]) != system.interval:
                raise ProblemFileError("field 'mesh.explicit' must start at t0 and end at tm")
        else:
            raise ProblemFileError("field 'mesh' needs 'uniform' or 'explicit'")
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ProblemFileError):
            raise
        raise ProblemFileError(f"field 'mesh': {exc}") from None

    cons_doc = _require(doc, "constraints", list)
    constraints = []
    for k, c in enumerate(cons_doc):
        where = f"constraints[{k + 1}]"
        if not isinstance(c, dict):
            raise ProblemFileError(f"field '{where}' must be a table")
        _check_keys(c, ("endpoint", "component", "value"), where)
        endpoint = _require(c, "endpoint", str, f"{where}.endpoint")
        if endpoint not in ("left", "right"):
            raise ProblemFileError(f"field '{where}.endpoint' must be 'left' or 'right'")
        comp = _require(c, "component", int, f"{where}.component")
        if not 1 <= comp <= n:
            raise ProblemFileError(f"field '{where}.component' must be within 1..{n}")
        value = _require(c, "value", (int, float), f"{where}.value")
        constraints.append(Constraint(Endpoint(endpoint), comp - 1, float(value)))
    try:
        bcs = BoundaryConditions(tuple(constraints))
        bcs.validate(n)
    except BoundaryConditionError as exc:
        raise ProblemFileError(f"field 'constraints': {exc}") from None

    solver_doc = _table(doc, "solver")
    _check_keys(solver_doc, ("rel_tol", "abs_tol", "max_iter", "preconditioner"), "solver")
    max_iter = solver_doc.get("max_iter")
    if max_iter is not None and (isinstance(max_iter, bool) or not isinstance(max_iter, int)):
        raise ProblemFileError("field 'solver.max_iter' must be an integer")
    try:
        cg = CgConfig(
            rel_tol=float(solver_doc.get("rel_tol", 1e-12)),
            abs_tol=float(solver_doc.get("abs_tol", 1e-14)),
            max_iter=max_iter,
            preconditioner=Preconditioner(solver_doc.get("preconditioner", "jacobi")),
        )
    except (ValueError, TypeError) as exc:
        raise ProblemFileError(f"field 'solver': {exc}") from None

    quad_doc = _table(doc, "quadrature")
    _check_keys(quad_doc, ("gauss",), "quadrature")
    gauss = quad_doc.get("gauss", 8)
    if isinstance(gauss, bool) or not isinstance(gauss, int) or gauss < 1:
        raise ProblemFileError("field 'quadrature.gauss' must be a positive integer")
    ref_doc = _table(doc, "reference")
    _check_keys(ref_doc, ("enabled", "dense_factor"), "reference")
    dense_factor = ref_doc.get("dense_factor", DEFAULT_DENSE_FACTOR)
    if isinstance(dense_factor, bool) or not isinstance(dense_factor, int) or dense_factor < 1:
        raise ProblemFileError("field 'reference.dense_factor' must be a positive integer")
    pin = doc.get("pin_initial_derivative", False)
    if pin and not bcs.is_initial_value(n):
        raise ProblemFileError("field 'pin_initial_derivative' needs every component fixed at the left end")

    return Problem(
        system=system,
        mesh=mesh,
        bcs=bcs,
        name=str(doc.get("name", "")),
        description=str(doc.get("description", "")),
        cg=cg,
        gauss=gauss,
        reference=bool(ref_doc.get("enabled", False)),
        dense_factor=dense_factor,
        pin_initial_derivative=bool(pin),
    )


def _loads(text, source):
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ProblemFileError(f"{source}: {exc}") from None
    return parse_problem(doc)


def load_problem(path) -> Problem:
    path = Path(path)
    return _loads(path.read_text(encoding="utf-8"), str(path))


def _preset_files():
    root = resources.files(__package__) / "presets"
    return sorted((p for p in root.iterdir() if p.name.endswith(".toml")), key=lambda p: p.name)


def list_presets() -> list[tuple[str, str]]:
    """``(name, description)`` for every bundled preset, sorted by name."""
    out = []
    for p in _preset_files():
        problem = _loads(p.read_text(encoding="utf-8"), p.name)
        out.append((p.name[: -len(".toml")], problem.description))
    return out


def load_preset(name: str) -> Problem:
    for p in _preset_files():
        if p.name == f"{name}.toml":
            problem = _loads(p.read_text(encoding="utf-8"), p.name)
            problem.name = problem.name or name
            return problem
    names = ", ".join(n for n, _ in list_presets())
    raise ProblemFileError(f"unknown preset {name!r} (available: {names})")
