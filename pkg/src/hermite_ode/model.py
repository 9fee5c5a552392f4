"""Linear ODE systems ``x' = A(t) x + q(t)`` and their endpoint constraints."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .expression import (
    BinOp,
    Call,
    Const,
    EvaluationError,
    Expression,
    Neg,
    Pow,
    Var,
    eval_expression,
    is_constant,
    parse_expression,
)

__all__ = [
    "TimeMatrix",
    "TimeVector",
    "LinearOdeSystem",
    "Endpoint",
    "Constraint",
    "BoundaryConditions",
    "BoundaryConditionError",
    "eval_system",
]

_NODES = (Const, Var, Neg, BinOp, Pow, Call)


def _as_expression(entry) -> Expression:
    if isinstance(entry, str):
        return parse_expression(entry)
    if isinstance(entry, (int, float, np.floating, np.integer)) and not isinstance(entry, bool):
        return Const(float(entry))
    if isinstance(entry, _NODES):
        return entry
    raise TypeError(f"cannot build an expression from {entry!r}")


class TimeMatrix:
    """Grid of expressions in ``t``.

    Entries may be given as expression trees, source strings or numbers.
    When no entry mentions ``t`` the matrix is flagged constant and its value
    is computed once.
    """

    def __init__(self, entries: Sequence[Sequence], label: str = "A", _vector: bool = False):
        self.label = label
        self._vector = _vector
        rows = tuple(tuple(_as_expression(e) for e in row) for row in entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows) or not rows[0]:
            raise ValueError("TimeMatrix needs a non-empty rectangular grid")
        self.entries = rows
        self.shape = (len(rows), len(rows[0]))
        self.is_constant = all(is_constant(e) for r in rows for e in r)
        self._value = self._evaluate(0.0) if self.is_constant else None

    def _evaluate(self, t):
        out = np.empty(self.shape)
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                try:
                    out[i, j] = eval_expression(e, t)
                except EvaluationError as exc:
                    at = f"{i + 1}" if self._vector else f"{i + 1},{j + 1}"
                    raise EvaluationError(f"{self.label}[{at}]: {exc}") from None
        return out

    def __call__(self, t: float) -> np.ndarray:
        if self._value is not None:
            return self._value.copy()
        return self._evaluate(t)


class TimeVector:
    """Column of expressions in ``t``; see :class:`TimeMatrix`."""

    def __init__(self, entries: Sequence):
        self._matrix = TimeMatrix([[e] for e in entries], label="q", _vector=True)
        self.entries = tuple(r[0] for r in self._matrix.entries)
        self.size = len(self.entries)
        self.is_constant = self._matrix.is_constant

    def __call__(self, t: float) -> np.ndarray:
        return self._matrix(t)[:, 0]


@dataclass(frozen=True)
class LinearOdeSystem:
    """The system ``x'(t) = A(t) x(t) + q(t)`` on ``[t0, tm]``."""

    a_matrix: TimeMatrix
    q_vector: TimeVector
    interval: tuple[float, float]

    def __post_init__(self):
        n = self.a_matrix.shape[0]
        if self.a_matrix.shape != (n, n):
            raise ValueError(f"A must be square, got shape {self.a_matrix.shape}")
        if self.q_vector.size != n:
            raise ValueError(f"q has {self.q_vector.size} entries, expected {n}")
        t0, tm = (float(v) for v in self.interval)
        if not t0 < tm:
            raise ValueError(f"interval must satisfy t0 < tm, got {self.interval}")
        object.__setattr__(self, "interval", (t0, tm))

    @classmethod
    def from_entries(cls, a, q, interval) -> "LinearOdeSystem":
        """Build from nested sequences of strings, numbers or expressions."""
        return cls(TimeMatrix(a), TimeVector(q), tuple(interval))

    @property
    def n(self) -> int:
        return self.a_matrix.shape[0]

    @property
    def constant_a(self) -> bool:
        return self.a_matrix.is_constant

    def A(self, t: float) -> np.ndarray:
        return self.a_matrix(t)

    def q(self, t: float) -> np.ndarray:
        return self.q_vector(t)


def eval_system(sys: LinearOdeSystem, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A(t), q(t))``."""
    t0, tm = sys.interval
    if not t0 <= t <= tm:
        raise ValueError(f"t={float(t)!r} outside the system interval [{t0}, {tm}]")
    return sys.A(t), sys.q(t)


class Endpoint(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


class BoundaryConditionError(ValueError):
    pass


@dataclass(frozen=True)
class Constraint:
    endpoint: Endpoint
    component: int  # 0-based
    value: float


@dataclass(frozen=True)
class BoundaryConditions:
    """Value constraints on individual state components at ``t0`` or ``tm``."""

    constraints: tuple[Constraint, ...] = field(default_factory=tuple)

    def __post_init__(self):
        cons = tuple(self.constraints)
        object.__setattr__(self, "constraints", cons)
        if not cons:
            raise BoundaryConditionError("at least one constraint is required")
        seen = set()
        for c in cons:
            key = (c.endpoint, c.component)
            if key in seen:
                raise BoundaryConditionError(
                    f"duplicate constraint on component {c.component} at {c.endpoint.value}"
                )
            seen.add(key)

    @classmethod
    def initial(cls, x0) -> "BoundaryConditions":
        """All components fixed at the left endpoint (an IVP)."""
        return cls(tuple(Constraint(Endpoint.LEFT, j, float(v)) for j, v in enumerate(x0)))

    def validate(self, n: int) -> None:
        if len(self.constraints) > 2 * n:
            raise BoundaryConditionError(f"{len(self.constraints)} constraints exceed 2n = {2 * n}")
        for c in self.constraints:
            if not 0 <= c.component < n:
                raise BoundaryConditionError(
                    f"component index {c.component} out of range for n={n}"
                )

    def is_initial_value(self, n: int) -> bool:
        return (
            len(self.constraints) == n
            and all(c.endpoint is Endpoint.LEFT for c in self.constraints)
        )

    def initial_state(self, n: int) -> np.ndarray:
        """x(t0) for an IVP; raises if the constraints are not an IVP."""
        if not self.is_initial_value(n):
            raise BoundaryConditionError("constraints do not fix every component at the left end")
        x0 = np.empty(n)
        for c in self.constraints:
            x0[c.component] = c.value
        return x0
