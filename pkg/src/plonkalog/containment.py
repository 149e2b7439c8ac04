"""The containment companion of a matrix-defined logic.

``Gamma |-r phi`` holds when ``Gamma |- phi`` and every variable of ``phi``
occurs in ``Gamma``, or when ``Gamma`` contains an antitheorem of ``|-``.
This module evaluates that relation, checks r-partition functions, and
compares the companion against a candidate matrix semantics on a bounded,
exhaustively enumerated space of sequents.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import Verdict, assignment_grid, check_partition_function, check_star_shape, evaluate_vector
from .errors import BoundExceeded, PreconditionError, SignatureError
from .matrix import MatrixFamily, as_family, entails, find_countermodel, is_antitheorem, is_trivial_matrix
from .syntax import App, Formula, Signature, Var, fresh_var, match_formula, substitute, vars_of

READINGS = ("inconsistent", "instance", "literal")


@dataclass(frozen=True)
class BaseLogic:
    """A logic given by a matrix family, optionally with a one-variable antitheorem."""

    family: MatrixFamily
    antitheorem: Optional[tuple] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "family", as_family(self.family))
        if self.antitheorem is not None:
            sigma = tuple(self.antitheorem)
            object.__setattr__(self, "antitheorem", sigma)
            if not is_antitheorem(self.family, sigma):
                raise PreconditionError(f"{self.name or 'base logic'}: given set is not an antitheorem")
        if not self.name:
            object.__setattr__(self, "name", self.family.name)

    @property
    def signature(self) -> Signature:
        return self.family.signature


def _antitheorem_instance_in(sigma: Sequence[Formula], gamma: set) -> bool:
    (x,) = vars_of(sigma)
    for s in sigma:
        for g in gamma:
            m = match_formula(s, g)
            if m is None:
                continue
            inst = {substitute(t, {x: m[x]}) for t in sigma}
            if inst <= gamma:
                return True
    return False


def containment_entails(L: BaseLogic, gamma: Iterable[Formula], phi: Formula, reading: str = "inconsistent") -> bool:
    """Decide ``gamma |-r phi`` over the base logic ``L``.

    ``reading`` selects how the antitheorem clause is read:

    * ``"inconsistent"`` (default): ``gamma`` itself is an antitheorem of the
      base logic, i.e. it entails a fresh variable;
    * ``"instance"``: some instance ``Sigma(psi)`` is a subset of ``gamma``;
    * ``"literal"``: ``Sigma(x)`` is a subset of ``gamma`` verbatim.

    The clause is dropped when ``L`` has no antitheorem.
    """
    if reading not in READINGS:
        raise ValueError(f"unknown reading {reading!r}")
    gamma = list(dict.fromkeys(gamma))
    if vars_of(phi) <= vars_of(gamma) and entails(L.family, gamma, phi):
        return True
    if L.antitheorem is None:
        return False
    if reading == "literal":
        return set(L.antitheorem) <= set(gamma)
    if reading == "instance":
        return _antitheorem_instance_in(L.antitheorem, set(gamma))
    return bool(gamma) and entails(L.family, gamma, Var(fresh_var(vars_of(gamma) | vars_of(phi))))


def verify_r_partition_function(L: BaseLogic, star: Formula) -> Verdict:
    """Check the three clauses making ``star`` an r-partition function of ``L``.

    Clauses (i) ``x, y |- x*y`` and (ii) ``x*y |- x`` are decided over the
    family; clause (iii) is checked as P1-P5 on every algebra of the family,
    which may be a proper subclass of the logic's algebraic counterpart.
    """
    check_star_shape(star)
    x, y = Var("x"), Var("y")
    cm = find_countermodel(L.family, [x, y], star)
    if cm is not None:
        return Verdict(False, "(i)", {"matrix": cm.matrix, "assignment": cm.assignment})
    cm = find_countermodel(L.family, [star], x)
    if cm is not None:
        return Verdict(False, "(ii)", {"matrix": cm.matrix, "assignment": cm.assignment})
    for m in L.family:
        v = check_partition_function(m.algebra, star)
        if not v:
            return Verdict(False, f"(iii) {v.reason}", {"algebra": m.algebra.name, **(v.witness or {})})
    return Verdict(True)


# ---------------------------------------------------------------------------
# bounded formula space


def formula_space(sig: Signature, variables: Sequence[str], max_depth: int) -> list:
    """All formulas over ``variables`` with connective depth at most ``max_depth``.

    Ordered by depth, then symbol declaration order, then argument tuples in
    the order of the previous level.  No duplicates.
    """
    level = [Var(v) for v in variables]
    out = list(level)
    depth_of = {f: 0 for f in out}
    for d in range(1, max_depth + 1):
        prev = list(out)
        new = []
        for sym in sig.symbols:
            n = sig.arity(sym)
            for args in itertools.product(prev, repeat=n):
                if max(depth_of[a] for a in args) != d - 1:
                    continue
                new.append(App(sym, args))
        for f in new:
            depth_of[f] = d
        out.extend(new)
    return out


@dataclass
class Disagreement:
    premises: tuple
    conclusion: Formula
    candidate: bool
    companion: bool
    witness: str
    multiplicity: int = 1


@dataclass
class EquivalenceReport:
    bounds: dict
    sequents_checked: int
    disagreements: list = field(default_factory=list)
    formula_count: int = 0
    class_count: int = 0

    @property
    def ok(self) -> bool:
        return not self.disagreements

    def __bool__(self):
        return self.ok

    @property
    def disagreeing_sequents(self) -> int:
        return sum(d.multiplicity for d in self.disagreements)


def _design_bits(F: MatrixFamily, formulas, variables) -> tuple:
    """Designation of every formula under every assignment of every matrix.

    Returns a bool array ``(len(formulas), total_assignments)`` and a mask of
    the columns that belong to non-trivial matrices.
    """
    blocks, nontriv = [], []
    for m in F.matrices:
        grid = assignment_grid(len(m.algebra), len(variables))
        cols = dict(zip(variables, grid))
        memo = {}
        width = grid.shape[1]
        rows = np.empty((len(formulas), width), dtype=bool)
        for k, f in enumerate(formulas):
            rows[k] = m.designated[np.broadcast_to(evaluate_vector(m.algebra, f, cols, memo), (width,))]
        blocks.append(rows)
        nontriv.append(np.full(width, not is_trivial_matrix(m)))
    return np.concatenate(blocks, axis=1), np.concatenate(nontriv)


def _pack(bits: np.ndarray) -> np.ndarray:
    """Pack a bool matrix row-wise into uint64 words."""
    k, w = bits.shape
    words = max(1, -(-w // 64))
    padded = np.zeros((k, words * 64), dtype=bool)
    padded[:, :w] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return packed.view(np.uint64).reshape(k, words)


def _witness(candidate, L, gamma, phi, cand_ok, comp_ok) -> str:
    if not cand_ok:
        cm = find_countermodel(candidate, gamma, phi)
        return f"candidate countermodel in {cm.matrix}: {cm.render()}"
    missing = sorted(vars_of(phi) - vars_of(gamma))
    if missing:
        return f"companion: variables {', '.join(missing)} do not occur in the premises, and the premises are not an antitheorem"
    cm = find_countermodel(L.family, gamma, phi)
    return f"companion: base countermodel in {cm.matrix}: {cm.render()}"


def check_companion_equivalence(
    candidate,
    L: BaseLogic,
    variables: Sequence[str] = ("p", "q", "r"),
    depth: int = 2,
    max_premises: int = 2,
    reading: str = "inconsistent",
    max_work: int = 5 * 10**10,
    jobs: int = 1,
    naive: bool = False,
) -> EquivalenceReport:
    """Compare ``|-_candidate`` with ``L``'s containment companion on a bounded space.

    The space holds every sequent whose premises are a set of at most
    ``max_premises`` formulas from :func:`formula_space` and whose
    conclusion is any formula of the space.

    Both verdicts depend only on each formula's designation pattern in the
    candidate, its designation pattern in the base family, and its variable
    set, so formulas are first grouped into classes by that key and every
    combination of classes is decided once (``sequents_checked`` still
    counts individual sequents).  ``naive=True`` walks every sequent instead
    and calls :func:`~plonkalog.matrix.entails` and
    :func:`containment_entails` directly; the syntactic readings of the
    antitheorem clause always take that path.
    """
    candidate = as_family(candidate)
    if not candidate.signature.same_symbols(L.signature):
        raise SignatureError("candidate and base logic have different signatures")
    variables = list(variables)
    formulas = formula_space(candidate.signature, variables, depth)
    bounds = {"vars": variables, "depth": depth, "max_premises": max_premises, "reading": reading}
    n = len(formulas)
    premise_sets = sum(math.comb(n, k) for k in range(max_premises + 1))
    total = premise_sets * n
    if naive or reading != "inconsistent":
        if total > max_work:
            raise BoundExceeded(f"{total} sequents exceed the cap of {max_work}")
        return _naive(candidate, L, formulas, max_premises, reading, bounds, total)

    cbits, _ = _design_bits(candidate, formulas, variables)
    bbits, bnontriv = _design_bits(L.family, formulas, variables)
    vmask = np.array([sum(1 << variables.index(v) for v in vars_of(f)) for f in formulas], dtype=np.uint64)

    classes = {}
    members = []
    for k, f in enumerate(formulas):
        key = (cbits[k].tobytes(), bbits[k].tobytes(), int(vmask[k]))
        c = classes.get(key)
        if c is None:
            c = classes[key] = len(members)
            members.append([])
        members[c].append(k)
    K = len(members)
    reps = [m[0] for m in members]

    C = _pack(cbits[reps])
    B = _pack(bbits[reps])
    Bnt = _pack((bbits[reps] & bnontriv[None, :]))
    V = vmask[reps]
    notC, notB = ~C, ~B
    has_anti = L.antitheorem is not None

    combos, mult = _class_combos(members, max_premises)
    work = len(combos) * K
    if work > max_work:
        raise BoundExceeded(f"{work} class combinations exceed the cap of {max_work}")

    validC = _pack(np.ones((1, cbits.shape[1]), dtype=bool))[0]
    validB = _pack(np.ones((1, bbits.shape[1]), dtype=bool))[0]

    def run(chunk):
        lo, hi = chunk
        found = []
        for idx in range(lo, hi):
            combo = combos[idx]
            if combo:
                pc = np.bitwise_and.reduce(C[list(combo)], axis=0)
                pb = np.bitwise_and.reduce(B[list(combo)], axis=0)
                pbn = np.bitwise_and.reduce(Bnt[list(combo)], axis=0)
                pv = np.bitwise_or.reduce(V[list(combo)])
            else:
                pc = validC
                pb = validB
                pbn = None
                pv = np.uint64(0)
            cand = ~np.any(notC & pc, axis=1)
            base = ~np.any(notB & pb, axis=1)
            incl = (V & ~pv) == 0
            comp = incl & base
            if has_anti and combo and not np.any(pbn):
                comp = np.ones_like(comp)
            bad = np.flatnonzero(cand != comp)
            for e in bad:
                found.append((idx, int(e), bool(cand[e]), bool(comp[e])))
        return found

    chunks = [(lo, min(lo + 4096, len(combos))) for lo in range(0, len(combos), 4096)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(run, chunks))
    else:
        results = [run(ch) for ch in chunks]

    report = EquivalenceReport(bounds, total, formula_count=n, class_count=K)
    for part in results:
        for idx, e, cand_ok, comp_ok in part:
            gamma = tuple(formulas[reps[c]] for c in combos[idx])
            phi = formulas[reps[e]]
            report.disagreements.append(
                Disagreement(
                    gamma,
                    phi,
                    cand_ok,
                    comp_ok,
                    _witness(candidate, L, gamma, phi, cand_ok, comp_ok),
                    mult[idx] * len(members[e]),
                )
            )
    return report


def _class_combos(members, max_premises):
    """Distinct class sets of size <= max_premises with their sequent multiplicities.

    The multiplicity of a class set ``S`` counts the premise sets of at most
    ``max_premises`` formulas whose classes are exactly ``S``.
    """
    K = len(members)
    sizes = [len(m) for m in members]
    combos, mult = [()], [1]
    for r in range(1, max_premises + 1):
        for S in itertools.combinations(range(K), r):
            # choose at least one formula from each class in S, at most max_premises total
            count = _surjective_count([sizes[c] for c in S], max_premises)
            if count:
                combos.append(S)
                mult.append(count)
    return combos, mult


def _surjective_count(sizes, cap) -> int:
    # number of sets with >= 1 element from each group and total size <= cap
    ways = {0: 1}
    for s in sizes:
        nxt = {}
        for t, w in ways.items():
            for k in range(1, s + 1):
                if t + k > cap:
                    break
                nxt[t + k] = nxt.get(t + k, 0) + w * math.comb(s, k)
        ways = nxt
    return sum(ways.values())


def _naive(candidate, L, formulas, max_premises, reading, bounds, total) -> EquivalenceReport:
    report = EquivalenceReport(bounds, 0, formula_count=len(formulas), class_count=len(formulas))
    for r in range(max_premises + 1):
        for gamma in itertools.combinations(formulas, r):
            for phi in formulas:
                a = entails(candidate, gamma, phi)
                b = containment_entails(L, gamma, phi, reading)
                report.sequents_checked += 1
                if a != b:
                    report.disagreements.append(
                        Disagreement(gamma, phi, a, b, _witness(candidate, L, gamma, phi, a, b))
                    )
    return report
