"""Logical matrices and the consequence relations they define."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .algebra import FiniteAlgebra, Verdict, assignment_grid, evaluate_vector
from .errors import PreconditionError, SignatureError
from .syntax import Formula, Var, check_formula, fresh_var, vars_of


class LogicalMatrix:
    """An algebra together with a designated subset (the filter)."""

    __slots__ = ("name", "algebra", "filter", "_desig")

    def __init__(self, algebra: FiniteAlgebra, filter: Iterable[str], name: str = None):
        filt = frozenset(filter)
        stray = filt - set(algebra.carrier)
        if stray:
            raise ValueError(f"filter elements {sorted(stray)} are not in {algebra.name}")
        self.name = name or algebra.name
        self.algebra = algebra
        self.filter = filt
        self._desig = np.array([a in filt for a in algebra.carrier], dtype=bool)

    def __repr__(self):
        return f"LogicalMatrix({self.name!r}, {self.algebra.name}, {sorted(self.filter)})"

    def __eq__(self, other):
        if not isinstance(other, LogicalMatrix):
            return NotImplemented
        return self.algebra == other.algebra and self.filter == other.filter

    def __hash__(self):
        return hash((self.algebra, self.filter))

    @property
    def signature(self):
        return self.algebra.signature

    @property
    def designated(self) -> np.ndarray:
        return self._desig

    def filter_in_order(self) -> list:
        return [a for a in self.algebra.carrier if a in self.filter]

    def same_structure(self, other: "LogicalMatrix") -> bool:
        return self.filter == other.filter and self.algebra.same_structure(other.algebra)

    def renamed(self, mapping, name=None) -> "LogicalMatrix":
        return LogicalMatrix(
            self.algebra.renamed(mapping), {mapping.get(a, a) for a in self.filter}, name or self.name
        )

    def reordered(self, order, name=None) -> "LogicalMatrix":
        return LogicalMatrix(self.algebra.reordered(order), self.filter, name or self.name)


@dataclass(frozen=True)
class MatrixFamily:
    name: str
    matrices: tuple

    def __post_init__(self):
        if not self.matrices:
            raise ValueError("a matrix family must be nonempty")
        sig = self.matrices[0].signature
        for m in self.matrices[1:]:
            if not m.signature.same_symbols(sig):
                raise SignatureError(f"family {self.name}: {m.name} has a different signature")

    @classmethod
    def of(cls, *matrices: LogicalMatrix, name: str = None) -> "MatrixFamily":
        return cls(name or "+".join(m.name for m in matrices), tuple(matrices))

    @property
    def signature(self):
        return self.matrices[0].signature

    def __iter__(self):
        return iter(self.matrices)


def as_family(M) -> MatrixFamily:
    if isinstance(M, MatrixFamily):
        return M
    if isinstance(M, LogicalMatrix):
        return MatrixFamily(M.name, (M,))
    return MatrixFamily.of(*M)


@dataclass(frozen=True)
class Countermodel:
    matrix: str
    assignment: dict

    def render(self) -> str:
        return ", ".join(f"{k}={v}" for k, v in self.assignment.items())


def _check_signature(formulas, M: MatrixFamily):
    for f in formulas:
        check_formula(f, M.signature)


def _first_failure(m: LogicalMatrix, premises, conclusion, names) -> Optional[dict]:
    A = m.algebra
    grid = assignment_grid(len(A), len(names))
    cols = dict(zip(names, grid))
    memo = {}
    width = grid.shape[1]
    ok = np.ones(width, dtype=bool)
    for g in premises:
        ok &= m.designated[np.broadcast_to(evaluate_vector(A, g, cols, memo), (width,))]
        if not ok.any():
            return None
    ok &= ~m.designated[np.broadcast_to(evaluate_vector(A, conclusion, cols, memo), (width,))]
    hit = np.flatnonzero(ok)
    if hit.size == 0:
        return None
    k = hit[0]
    return {v: A.carrier[grid[i, k]] for i, v in enumerate(names)}


def find_countermodel(M, gamma: Iterable[Formula], phi: Formula) -> Optional[Countermodel]:
    """First countermodel in (matrix order, lexicographic assignment) order.

    Only the variables of ``gamma`` and ``phi`` are assigned; they are sorted
    by name and enumerated with values in carrier order.
    """
    M = as_family(M)
    gamma = list(dict.fromkeys(gamma))
    _check_signature(gamma + [phi], M)
    names = sorted(vars_of(gamma) | vars_of(phi))
    for m in M.matrices:
        asg = _first_failure(m, gamma, phi, names)
        if asg is not None:
            return Countermodel(m.name, asg)
    return None


def entails(M, gamma: Iterable[Formula], phi: Formula) -> bool:
    """``gamma |-_M phi`` for a finite premise set, by exhaustive evaluation."""
    return find_countermodel(M, gamma, phi) is None


def is_antitheorem(M, sigma: Iterable[Formula]) -> bool:
    """Is the one-variable set ``sigma`` an antitheorem of the logic of ``M``?"""
    sigma = list(sigma)
    vs = vars_of(sigma)
    if len(vs) != 1:
        raise PreconditionError(f"an antitheorem here must be in exactly one variable, got {sorted(vs)}")
    y = Var(fresh_var(vs))
    return entails(M, sigma, y)


def is_trivial_matrix(m: LogicalMatrix) -> bool:
    return m.filter == frozenset(m.algebra.carrier)


def is_model_of(m: LogicalMatrix, rules) -> Verdict:
    """Does ``m`` satisfy every rule (closed under all assignments)?

    ``rules`` may hold :class:`~plonkalog.syntax.Sequent` or
    :class:`~plonkalog.hilbert.Rule` objects, anything with ``premises`` and
    ``conclusion``.
    """
    for r in rules:
        cm = find_countermodel(m, list(r.premises), r.conclusion)
        if cm is not None:
            return Verdict(False, getattr(r, "name", "rule"), {"rule": r, "assignment": cm.assignment})
    return Verdict(True)
