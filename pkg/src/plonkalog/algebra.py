"""Finite algebras given by operation tables.

Also: homomorphism and identity checking, partition functions (P1-P5) and
finite join-semilattices.  Elements are named by strings; the carrier order
fixes iteration order, so every counterexample reported here is the first
one in lexicographic order (variables sorted by name, values in carrier
order).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional

import numpy as np

from .errors import EvaluationError, PartitionFunctionError, SignatureError
from .syntax import App, Formula, Signature, Var, substitute, var, vars_of


@dataclass
class Verdict:
    """Outcome of a check: truthy iff ``ok``; on failure carries a witness."""

    ok: bool
    reason: str = ""
    witness: Optional[dict] = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Violation:
    law: str
    detail: str
    witness: tuple = ()


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def add(self, law, detail, witness=()):
        self.violations.append(Violation(law, detail, tuple(witness)))

    def laws(self) -> set:
        return {v.law for v in self.violations}

    def extend(self, other: "ValidationReport"):
        self.violations.extend(other.violations)

    def render(self) -> str:
        if self.ok:
            return "valid"
        return "\n".join(f"{v.law}: {v.detail}" for v in self.violations)


class FiniteAlgebra:
    """A finite algebra: a named carrier plus one total table per symbol.

    Tables are stored as read-only integer arrays indexed by carrier
    positions, so ``tables["and"][i, j]`` is the index of ``a_i and a_j``.
    """

    __slots__ = ("name", "signature", "carrier", "tables", "_index")

    def __init__(self, name: str, signature: Signature, carrier, tables: Mapping[str, np.ndarray]):
        carrier = tuple(carrier)
        if not carrier:
            raise ValueError(f"algebra {name}: carrier must be nonempty")
        if len(set(carrier)) != len(carrier):
            raise ValueError(f"algebra {name}: duplicate elements in carrier")
        n = len(carrier)
        fixed = {}
        for sym in signature.symbols:
            if sym not in tables:
                raise SignatureError(f"algebra {name}: no table for {sym!r}")
            t = np.asarray(tables[sym], dtype=np.intp)
            k = signature.arity(sym)
            if t.shape != (n,) * k:
                raise ValueError(f"algebra {name}: table {sym!r} has shape {t.shape}, expected {(n,) * k}")
            if t.size and (t.min() < 0 or t.max() >= n):
                raise ValueError(f"algebra {name}: table {sym!r} leaves the carrier")
            t = t.copy()
            t.flags.writeable = False
            fixed[sym] = t
        extra = set(tables) - set(signature.symbols)
        if extra:
            raise SignatureError(f"algebra {name}: tables for undeclared symbols {sorted(extra)}")
        self.name = name
        self.signature = signature
        self.carrier = carrier
        self.tables = fixed
        self._index = {a: i for i, a in enumerate(carrier)}

    @classmethod
    def from_functions(cls, name: str, signature: Signature, carrier, ops: Mapping[str, Callable]):
        """Build tables by calling ``ops[sym](*elements)`` on every tuple."""
        carrier = tuple(carrier)
        idx = {a: i for i, a in enumerate(carrier)}
        tables = {}
        for sym in signature.symbols:
            k = signature.arity(sym)
            t = np.empty((len(carrier),) * k, dtype=np.intp)
            for tup in itertools.product(range(len(carrier)), repeat=k):
                t[tup] = idx[ops[sym](*(carrier[i] for i in tup))]
            tables[sym] = t
        return cls(name, signature, carrier, tables)

    @classmethod
    def from_maps(cls, name: str, signature: Signature, carrier, maps: Mapping[str, Mapping]):
        """Build from ``{sym: {tuple_of_elements: element}}`` (unary keys may be bare)."""

        def lookup(sym):
            m = maps[sym]

            def f(*args):
                key = args if len(args) > 1 else args[0]
                return m[key] if key in m else m[args]

            return f

        return cls.from_functions(name, signature, carrier, {s: lookup(s) for s in signature.symbols})

    def __repr__(self):
        return f"FiniteAlgebra({self.name!r}, {list(self.carrier)})"

    def __eq__(self, other):
        if not isinstance(other, FiniteAlgebra):
            return NotImplemented
        return (
            self.carrier == other.carrier
            and self.signature.same_symbols(other.signature)
            and all(np.array_equal(self.tables[s], other.tables[s]) for s in self.signature.symbols)
        )

    def __hash__(self):
        return hash((self.carrier, tuple(sorted(self.tables))))

    def __len__(self):
        return len(self.carrier)

    def index(self, element: str) -> int:
        try:
            return self._index[element]
        except KeyError:
            raise EvaluationError(f"{element!r} is not an element of {self.name}") from None

    def op(self, symbol: str, *elements: str) -> str:
        if symbol not in self.tables:
            raise EvaluationError(f"symbol {symbol!r} is not interpreted in {self.name}")
        return self.carrier[self.tables[symbol][tuple(self.index(e) for e in elements)]]

    def same_structure(self, other: "FiniteAlgebra") -> bool:
        """Equal up to carrier order (same element names, same operations)."""
        if set(self.carrier) != set(other.carrier):
            return False
        return self == other.reordered(self.carrier)

    def renamed(self, mapping: Mapping[str, str], name: str = None) -> "FiniteAlgebra":
        carrier = tuple(mapping.get(a, a) for a in self.carrier)
        return FiniteAlgebra(name or self.name, self.signature, carrier, self.tables)

    def reordered(self, order, name: str = None) -> "FiniteAlgebra":
        order = tuple(order)
        if sorted(order) != sorted(self.carrier):
            raise ValueError("reorder needs a permutation of the carrier")
        perm = np.array([self.index(a) for a in order], dtype=np.intp)
        inv = np.empty_like(perm)
        inv[perm] = np.arange(len(perm))
        tables = {}
        for sym, t in self.tables.items():
            k = t.ndim
            tables[sym] = inv[t[np.ix_(*([perm] * k))]] if k else t
        return FiniteAlgebra(name or self.name, self.signature, order, tables)

    def subalgebra(self, elements, name: str = None) -> "FiniteAlgebra":
        elements = tuple(e for e in self.carrier if e in set(elements))
        pos = np.array([self.index(e) for e in elements], dtype=np.intp)
        back = {int(p): i for i, p in enumerate(pos)}
        tables = {}
        for sym, t in self.tables.items():
            sub = t[np.ix_(*([pos] * t.ndim))]
            try:
                tables[sym] = np.vectorize(back.__getitem__, otypes=[np.intp])(sub)
            except KeyError:
                raise ValueError(f"{sorted(elements)} is not closed under {sym!r}") from None
        return FiniteAlgebra(name or self.name, self.signature, elements, tables)

    def with_signature(self, signature: Signature) -> "FiniteAlgebra":
        return FiniteAlgebra(self.name, signature, self.carrier, {s: self.tables[s] for s in signature.symbols})


def trivial_algebra(signature: Signature, element: str = "e", name: str = "ONE") -> FiniteAlgebra:
    return FiniteAlgebra(
        name, signature, (element,), {s: np.zeros((1,) * signature.arity(s), dtype=np.intp) for s in signature.symbols}
    )


# ---------------------------------------------------------------------------
# evaluation


def evaluate_term(A: FiniteAlgebra, phi: Formula, asg: Mapping[str, str]) -> str:
    """Value of ``phi`` in ``A`` under the assignment ``asg`` (element names)."""
    return A.carrier[_eval_index(A, phi, {k: A.index(v) for k, v in asg.items()})]


def _eval_index(A, phi, asg) -> int:
    if isinstance(phi, Var):
        try:
            return asg[phi.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {phi.name!r}") from None
    table = A.tables.get(phi.symbol)
    if table is None:
        raise EvaluationError(f"symbol {phi.symbol!r} is not interpreted in {A.name}")
    return int(table[tuple(_eval_index(A, a, asg) for a in phi.args)])


def assignment_grid(n: int, k: int) -> np.ndarray:
    """All ``n**k`` assignments of ``k`` variables as a ``(k, n**k)`` index array.

    Row ``v`` holds the value of the ``v``-th variable; columns run in
    lexicographic order with the first variable varying slowest.
    """
    if k == 0:
        return np.zeros((0, 1), dtype=np.intp)
    return np.stack(np.unravel_index(np.arange(n**k, dtype=np.intp), (n,) * k)).astype(np.intp)


def evaluate_vector(A: FiniteAlgebra, phi: Formula, columns: Mapping[str, np.ndarray], memo: dict = None) -> np.ndarray:
    """Vectorised evaluation: ``columns`` maps each variable to an index array."""
    if memo is None:
        memo = {}
    hit = memo.get(phi)
    if hit is not None:
        return hit
    if isinstance(phi, Var):
        try:
            out = columns[phi.name]
        except KeyError:
            raise EvaluationError(f"unbound variable {phi.name!r}") from None
    else:
        table = A.tables.get(phi.symbol)
        if table is None:
            raise EvaluationError(f"symbol {phi.symbol!r} is not interpreted in {A.name}")
        out = table[tuple(evaluate_vector(A, a, columns, memo) for a in phi.args)]
    memo[phi] = out
    return out


# ---------------------------------------------------------------------------
# homomorphisms and identities


@dataclass(frozen=True)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: Mapping[str, str]

    def __call__(self, a: str) -> str:
        return self.mapping[a]


def check_homomorphism(h: Homomorphism) -> Verdict:
    """Exhaustively check that ``h`` commutes with every operation."""
    S, T = h.source, h.target
    if not S.signature.same_symbols(T.signature):
        raise SignatureError(f"{S.name} and {T.name} have different signatures")
    missing = [a for a in S.carrier if a not in h.mapping]
    if missing:
        return Verdict(False, "map is not total", {"unmapped": missing[0]})
    for a in S.carrier:
        if h.mapping[a] not in T._index:
            return Verdict(False, "map leaves the target carrier", {"element": a})
    for sym in S.signature.symbols:
        for tup in itertools.product(S.carrier, repeat=S.signature.arity(sym)):
            lhs = h.mapping[S.op(sym, *tup)]
            rhs = T.op(sym, *(h.mapping[a] for a in tup))
            if lhs != rhs:
                return Verdict(False, f"fails on {sym}", {"symbol": sym, "args": tup, "h(g(a))": lhs, "g(h(a))": rhs})
    return Verdict(True)


@dataclass(frozen=True)
class Identity:
    lhs: Formula
    rhs: Formula

    @property
    def variables(self) -> frozenset:
        return vars_of(self.lhs) | vars_of(self.rhs)


def is_regular_identity(e: Identity) -> bool:
    return vars_of(e.lhs) == vars_of(e.rhs)


def check_identity(A: FiniteAlgebra, e: Identity) -> Verdict:
    """Does ``A`` satisfy ``e``?  On failure the witness is the first bad assignment."""
    names = sorted(e.variables)
    grid = assignment_grid(len(A), len(names))
    cols = dict(zip(names, grid))
    memo = {}
    lv = np.broadcast_to(evaluate_vector(A, e.lhs, cols, memo), grid.shape[1:])
    rv = np.broadcast_to(evaluate_vector(A, e.rhs, cols, memo), grid.shape[1:])
    bad = np.flatnonzero(lv != rv)
    if bad.size == 0:
        return Verdict(True)
    k = bad[0]
    asg = {v: A.carrier[grid[i, k]] for i, v in enumerate(names)}
    return Verdict(False, "identity fails", {"assignment": asg, "lhs": A.carrier[lv[k]], "rhs": A.carrier[rv[k]]})


# ---------------------------------------------------------------------------
# partition functions


def star_apply(star: Formula, left: Formula, right: Formula) -> Formula:
    return substitute(star, {"x": left, "y": right})


def check_star_shape(star: Formula) -> None:
    if vars_of(star) != {"x", "y"}:
        raise PartitionFunctionError(
            f"a partition function must be a formula in exactly the variables x and y, got {sorted(vars_of(star))}"
        )


def partition_equations(star: Formula, signature: Signature) -> list:
    """The P1-P5 identity schemas for ``star``, P4/P5 once per symbol.

    Returns ``[(label, Identity), ...]`` with labels ``P1``, ``P2``, ``P3``,
    ``P4[g]``, ``P5[g]``.
    """
    check_star_shape(star)

    def s(a, b):
        return star_apply(star, a, b)

    a, b, c = var("a"), var("b"), var("c")
    out = [
        ("P1", Identity(s(a, a), a)),
        ("P2", Identity(s(a, s(b, c)), s(s(a, b), c))),
        ("P3", Identity(s(a, s(b, c)), s(a, s(c, b)))),
    ]
    for g in signature.symbols:
        n = signature.arity(g)
        args = [var(f"a{i}") for i in range(1, n + 1)]
        out.append((f"P4[{g}]", Identity(s(App(g, tuple(args)), b), App(g, tuple(s(x, b) for x in args)))))
        rhs = b
        for x in args:
            rhs = s(rhs, x)
        out.append((f"P5[{g}]", Identity(s(b, App(g, tuple(args))), rhs)))
    return out


def check_partition_function(A: FiniteAlgebra, star: Formula) -> Verdict:
    """Check P1-P5 for the term operation of ``star`` exhaustively in ``A``."""
    for label, e in partition_equations(star, A.signature):
        v = check_identity(A, e)
        if not v:
            return Verdict(False, label, v.witness)
    return Verdict(True)


def star_table(A: FiniteAlgebra, star: Formula) -> np.ndarray:
    """The binary term operation of ``star`` as an index table."""
    check_star_shape(star)
    grid = assignment_grid(len(A), 2)
    vec = evaluate_vector(A, star, {"x": grid[0], "y": grid[1]})
    return np.asarray(vec).reshape(len(A), len(A))


# ---------------------------------------------------------------------------
# semilattices


class Semilattice:
    """A finite join-semilattice given by its join table."""

    def __init__(self, name: str, elements, join: Mapping[tuple, str]):
        self.name = name
        self.elements = tuple(elements)
        self.join_table = dict(join)

    @classmethod
    def from_pairs(cls, name: str, elements, pairs: Mapping[tuple, str]) -> "Semilattice":
        """Complete a partial join table with idempotence and commutativity."""
        table = {(i, i): i for i in elements}
        for (i, j), k in pairs.items():
            table[(i, j)] = k
            table.setdefault((j, i), k)
        return cls(name, elements, table)

    @classmethod
    def from_order(cls, name: str, elements, leq: Callable[[str, str], bool]) -> "Semilattice":
        """Build the join table from an order; raises if some join is missing."""
        table = {}
        for i in elements:
            for j in elements:
                ubs = [k for k in elements if leq(i, k) and leq(j, k)]
                least = [k for k in ubs if all(leq(k, u) for u in ubs)]
                if len(least) != 1:
                    raise ValueError(f"{i} and {j} have no least upper bound")
                table[(i, j)] = least[0]
        return cls(name, elements, table)

    @classmethod
    def chain(cls, name: str, elements) -> "Semilattice":
        pos = {e: k for k, e in enumerate(elements)}
        return cls.from_order(name, elements, lambda i, j: pos[i] <= pos[j])

    def __repr__(self):
        return f"Semilattice({self.name!r}, {list(self.elements)})"

    def __eq__(self, other):
        return (
            isinstance(other, Semilattice)
            and self.elements == other.elements
            and self.join_table == other.join_table
        )

    def join(self, *xs: str) -> str:
        if not xs:
            raise ValueError("join of an empty family is undefined")
        out = xs[0]
        for x in xs[1:]:
            out = self.join_table[(out, x)]
        return out

    def leq(self, i: str, j: str) -> bool:
        return self.join_table[(i, j)] == j

    def pairs_below(self):
        """All ``(i, j)`` with ``i <= j`` in declaration order."""
        return [(i, j) for i in self.elements for j in self.elements if self.leq(i, j)]


def validate_semilattice(S: Semilattice) -> ValidationReport:
    rep = ValidationReport()
    E = S.elements
    if len(set(E)) != len(E):
        rep.add("distinct", "duplicate index names")
    for i in E:
        for j in E:
            k = S.join_table.get((i, j))
            if k is None:
                rep.add("total", f"{i} v {j} undefined", (i, j))
            elif k not in E:
                rep.add("closed", f"{i} v {j} = {k} is not an index", (i, j))
    if not rep.ok:
        return rep
    for i in E:
        if S.join_table[(i, i)] != i:
            rep.add("idempotence", f"{i} v {i} = {S.join_table[(i, i)]}", (i,))
    for i in E:
        for j in E:
            if S.join_table[(i, j)] != S.join_table[(j, i)]:
                rep.add("commutativity", f"{i} v {j} = {S.join_table[(i, j)]} but {j} v {i} = {S.join_table[(j, i)]}", (i, j))
    for i in E:
        for j in E:
            for k in E:
                l = S.join_table[(S.join_table[(i, j)], k)]
                r = S.join_table[(i, S.join_table[(j, k)])]
                if l != r:
                    rep.add("associativity", f"({i} v {j}) v {k} = {l} but {i} v ({j} v {k}) = {r}", (i, j, k))
    return rep
