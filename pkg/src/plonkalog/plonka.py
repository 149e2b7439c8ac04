"""Direct systems, r-direct systems of matrices and their Płonka sums.

A Płonka sum glues a semilattice-indexed family of algebras along transition
homomorphisms: an operation on elements from fibers ``i1, ..., in`` pushes
every argument to the join ``i1 v ... v in`` and is computed there.
:func:`decompose` runs the converse construction from a partition function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .algebra import (
    FiniteAlgebra,
    Homomorphism,
    Identity,
    Semilattice,
    ValidationReport,
    Verdict,
    check_homomorphism,
    check_identity,
    check_partition_function,
    is_regular_identity,
    star_table,
    validate_semilattice,
)
from .errors import InvalidSystemError, PartitionFunctionError, PlonkalogError, PreconditionError
from .matrix import LogicalMatrix
from .syntax import Formula, vars_of


@dataclass
class DirectSystem:
    """Semilattice index, one algebra per index, homs ``f_ij`` for ``i <= j``.

    ``homs`` maps ``(i, j)`` to an element map; identities on the diagonal
    may be omitted.
    """

    index: Semilattice
    fibers: dict
    homs: dict = field(default_factory=dict)

    def algebra(self, i) -> FiniteAlgebra:
        return self.fibers[i]

    def hom(self, i, j) -> dict:
        if (i, j) in self.homs:
            return self.homs[(i, j)]
        if i == j:
            return {a: a for a in self.algebra(i).carrier}
        raise KeyError((i, j))


@dataclass
class RDirectSystem:
    """A direct system whose fibers are logical matrices."""

    index: Semilattice
    fibers: dict  # index -> LogicalMatrix
    homs: dict = field(default_factory=dict)

    def algebra(self, i) -> FiniteAlgebra:
        return self.fibers[i].algebra

    def hom(self, i, j) -> dict:
        return DirectSystem.hom(self, i, j)

    @property
    def algebra_system(self) -> DirectSystem:
        return DirectSystem(self.index, {i: m.algebra for i, m in self.fibers.items()}, dict(self.homs))

    @property
    def positive_indices(self) -> list:
        return [i for i in self.index.elements if self.fibers[i].filter]


def validate_direct_system(X) -> ValidationReport:
    """Check every clause of the direct-system definition, reporting all violations."""
    rep = validate_semilattice(X.index)
    if not rep.ok:
        return rep
    I = X.index.elements
    missing = [i for i in I if i not in X.fibers]
    for i in missing:
        rep.add("fiber", f"no fiber for index {i}", (i,))
    extra = [i for i in X.fibers if i not in I]
    for i in extra:
        rep.add("fiber", f"fiber {i} is not an index", (i,))
    if missing:
        return rep
    sig = X.algebra(I[0]).signature
    for i in I:
        if not X.algebra(i).signature.same_symbols(sig):
            rep.add("similarity", f"fiber {i} has a different signature", (i,))
    if not rep.ok:
        return rep
    for (i, j) in X.homs:
        if i not in I or j not in I or not X.index.leq(i, j):
            rep.add("hom", f"hom ({i},{j}) given but {i} <= {j} does not hold", (i, j))
    good = {}
    for i, j in X.index.pairs_below():
        if (i, j) not in X.homs:
            if i != j:
                rep.add("hom", f"missing hom ({i},{j})", (i, j))
            continue
        f = X.homs[(i, j)]
        A, B = X.algebra(i), X.algebra(j)
        if i == j and any(f.get(a) != a for a in A.carrier):
            rep.add("identity", f"f_{i}{i} is not the identity", (i,))
            continue
        v = check_homomorphism(Homomorphism(A, B, f))
        if not v:
            rep.add("homomorphism", f"f_({i},{j}) {v.reason}", (i, j, v.witness))
            continue
        good[(i, j)] = f
    for i, j, k in itertools.product(I, repeat=3):
        if X.index.leq(i, j) and X.index.leq(j, k):
            try:
                fij, fjk, fik = X.hom(i, j), X.hom(j, k), X.hom(i, k)
            except KeyError:
                continue
            for a in X.algebra(i).carrier:
                if fjk.get(fij.get(a)) != fik.get(a):
                    rep.add(
                        "composition",
                        f"f_({i},{k})({a}) = {fik.get(a)} but f_({j},{k})(f_({i},{j})({a})) = {fjk.get(fij.get(a))}",
                        (i, j, k, a),
                    )
                    break
    return rep


def validate_r_direct_system(X: RDirectSystem) -> ValidationReport:
    """Direct-system checks plus the two filter conditions of r-direct systems."""
    rep = validate_direct_system(X)
    if not rep.ok and (rep.laws() & {"total", "closed", "fiber", "similarity", "distinct"}):
        return rep
    S = X.index
    pos = set(X.positive_indices)
    for i in pos:
        for j in pos:
            k = S.join(i, j)
            if k not in pos:
                rep.add("positive-join", f"F_{i}, F_{j} nonempty but F_{k} = {i} v {j} is empty", (i, j, k))
    for i, j in S.pairs_below():
        Fj = X.fibers[j].filter
        if not Fj:
            continue
        try:
            f = X.hom(i, j)
        except KeyError:
            continue
        pre = {a for a in X.algebra(i).carrier if f.get(a) in Fj}
        if pre != set(X.fibers[i].filter):
            rep.add(
                "preimage",
                f"f_({i},{j})^-1[F_{j}] = {sorted(pre)} but F_{i} = {sorted(X.fibers[i].filter)}",
                (i, j),
            )
    return rep


@dataclass
class PlonkaSum:
    """A Płonka sum with provenance: which fiber (and fiber element) each element came from."""

    algebra: FiniteAlgebra
    fiber_of: dict  # sum element -> index
    origin: dict  # sum element -> (index, fiber element)
    system: object


@dataclass
class FiberedMatrix:
    sum: LogicalMatrix
    fiber_of: dict
    origin: dict
    system: RDirectSystem

    @property
    def algebra(self):
        return self.sum.algebra


def _sum_names(X, namespace: Optional[bool]) -> dict:
    I = X.index.elements
    carriers = [X.algebra(i).carrier for i in I]
    if namespace is None:
        flat = [a for c in carriers for a in c]
        namespace = len(set(flat)) != len(flat)
    names = {}
    for i in I:
        for a in X.algebra(i).carrier:
            names[(i, a)] = f"{i}.{a}" if namespace else a
    return names


def plonka_sum_algebras(X, name: str = "Pl", namespace: Optional[bool] = None, check: bool = True) -> PlonkaSum:
    """Płonka sum of a direct system.

    Fiber carriers are treated as disjoint: when two fibers share element
    names, every sum element is renamed ``index.element`` (``namespace``
    forces the choice).
    """
    if check:
        rep = validate_direct_system(X)
        if not rep.ok:
            raise InvalidSystemError(f"invalid direct system:\n{rep.render()}", rep)
    I = X.index.elements
    names = _sum_names(X, namespace)
    carrier = [names[(i, a)] for i in I for a in X.algebra(i).carrier]
    origin = {names[(i, a)]: (i, a) for i in I for a in X.algebra(i).carrier}
    pos = {s: k for k, s in enumerate(carrier)}
    sig = X.algebra(I[0]).signature
    tables = {}
    for sym in sig.symbols:
        n = sig.arity(sym)
        t = np.empty((len(carrier),) * n, dtype=np.intp)
        for tup in itertools.product(range(len(carrier)), repeat=n):
            src = [origin[carrier[k]] for k in tup]
            j = X.index.join(*(i for i, _ in src))
            pushed = [X.hom(i, j)[a] for i, a in src]
            t[tup] = pos[names[(j, X.algebra(j).op(sym, *pushed))]]
        tables[sym] = t
    alg = FiniteAlgebra(name, sig, carrier, tables)
    return PlonkaSum(alg, {s: origin[s][0] for s in carrier}, origin, X)


def plonka_sum_matrices(
    X: RDirectSystem, name: str = "Pl", namespace: Optional[bool] = None, require_r: bool = True
) -> FiberedMatrix:
    """``<Pl(A_i), union of F_i>`` over an r-direct system of matrices.

    With ``require_r=False`` only the direct-system clauses are enforced, so
    systems violating the filter conditions can still be summed.
    """
    rep = validate_r_direct_system(X) if require_r else validate_direct_system(X)
    if not rep.ok:
        raise InvalidSystemError(f"invalid r-direct system:\n{rep.render()}", rep)
    ps = plonka_sum_algebras(X, name=name, namespace=namespace, check=False)
    names = _sum_names(X, namespace)
    filt = {names[(i, a)] for i in X.index.elements for a in X.fibers[i].filter}
    return FiberedMatrix(LogicalMatrix(ps.algebra, filt, name), ps.fiber_of, ps.origin, X)


def fiber_index(F, asg: Mapping[str, str], phi) -> str:
    """Join of the fibers holding the values of the variables of ``phi``.

    ``phi`` may be a formula or a finite collection of formulas.
    """
    names = vars_of(phi)
    if not names:
        raise PreconditionError("fiber index of an empty variable set is undefined")
    S = F.system.index
    return S.join(*(F.fiber_of[asg[v]] for v in sorted(names)))


# ---------------------------------------------------------------------------
# decomposition


def decompose(A: FiniteAlgebra, star: Formula, filter: Iterable[str] = None, name: str = None):
    """Split ``A`` into a direct system along the partition function ``star``.

    Two elements share a fiber iff ``a = a*b`` and ``b = b*a``; fibers are
    named after their first element in carrier order; ``i <= j`` iff
    ``b*a = b`` for some ``a`` in ``A_i`` and ``b`` in ``A_j``; ``f_ij(x) = x*b``
    for the first ``b`` of ``A_j``.  With ``filter`` the fibers become
    matrices with ``F_i = F`` restricted to ``A_i``.
    """
    v = check_partition_function(A, star)
    if not v:
        raise PartitionFunctionError(f"{star} is not a partition function on {A.name}: {v.reason} fails", v)
    T = star_table(A, star)
    n = len(A)
    block_of = [None] * n
    blocks = []
    for a in range(n):
        if block_of[a] is not None:
            continue
        members = [b for b in range(n) if T[a, b] == a and T[b, a] == b]
        for b in members:
            if block_of[b] is not None:
                raise PlonkalogError("internal: fiber relation is not an equivalence")
            block_of[b] = len(blocks)
        blocks.append(members)
    idx_names = [A.carrier[bl[0]] for bl in blocks]

    def leq(i, j):
        bi, bj = blocks[idx_names.index(i)], blocks[idx_names.index(j)]
        return any(T[b, a] == b for a in bi for b in bj)

    try:
        S = Semilattice.from_order(f"{name or A.name}-index", idx_names, leq)
    except ValueError as e:
        raise PlonkalogError(f"internal: induced order is not a join-semilattice ({e})") from None
    fibers = {}
    for nm, bl in zip(idx_names, blocks):
        fibers[nm] = A.subalgebra([A.carrier[k] for k in bl], name=f"{A.name}[{nm}]")
    homs = {}
    for i, j in S.pairs_below():
        if i == j:
            continue
        bi, bj = blocks[idx_names.index(i)], blocks[idx_names.index(j)]
        b0 = bj[0]
        homs[(i, j)] = {A.carrier[a]: A.carrier[T[a, b0]] for a in bi}
        for b in bj[1:]:
            if any(T[a, b] != T[a, b0] for a in bi):
                raise PlonkalogError(f"internal: f_({i},{j}) depends on the choice of b")
    if filter is None:
        return DirectSystem(S, fibers, homs)
    F = set(filter)
    mats = {i: LogicalMatrix(fibers[i], F & set(fibers[i].carrier), name=fibers[i].name) for i in idx_names}
    return RDirectSystem(S, mats, homs)


def hom_independence(A: FiniteAlgebra, star: Formula, X) -> Verdict:
    """Check that ``x*b`` agrees for every choice of ``b`` in the target fiber."""
    T = star_table(A, star)
    for i, j in X.index.pairs_below():
        Ai, Aj = X.algebra(i).carrier, X.algebra(j).carrier
        for a in Ai:
            vals = {A.carrier[T[A.index(a), A.index(b)]] for b in Aj}
            if len(vals) != 1 or X.hom(i, j)[a] not in vals:
                return Verdict(False, f"f_({i},{j})", {"element": a, "values": sorted(vals)})
    return Verdict(True)


def check_regular_identity_preservation(X: DirectSystem, e: Identity) -> Verdict:
    """Regular identities valid in every fiber hold in the Płonka sum."""
    if not is_regular_identity(e):
        raise PreconditionError("identity is not regular")
    for i in X.index.elements:
        if not check_identity(X.algebra(i), e):
            raise PreconditionError(f"identity fails in fiber {i}")
    return check_identity(plonka_sum_algebras(X).algebra, e)


def search_partition_functions(A: FiniteAlgebra, max_depth: int = 2) -> list:
    """Binary terms in ``x``, ``y`` up to ``max_depth`` that are partition functions on ``A``.

    A convenience for exploring new algebras; not exhaustive beyond the bound.
    """
    from .containment import formula_space

    found = []
    for phi in formula_space(A.signature, ["x", "y"], max_depth):
        if vars_of(phi) == {"x", "y"} and check_partition_function(A, phi):
            found.append(phi)
    return found
