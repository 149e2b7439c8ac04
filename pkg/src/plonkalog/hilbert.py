"""Hilbert-style calculi, derivation checking, bounded search and the r-transform.

A calculus holds finite rules plus rule schemas.  The schemas produced by
:func:`transform_to_containment` are

* ``H0[ax]``  ``a*phi |> phi`` for each axiom ``|> phi``;
* ``H3[r,i]`` the premises of ``r`` with the ``i``-th one ``g_i`` replaced by
  ``g_i*psi``, concluding ``psi``;
* ``H4``      ``Sigma(x) |> a`` for the antitheorem;
* ``H5[Pk]``  replace one occurrence of an instance of one side of a
  partition-function identity by the matching instance of the other side.

``H1`` (``x, y |> x*y``) and ``H2`` (``x*y |> x``) are ordinary finite rules.
H0, H3 and H4 reduce to rule patterns; only H5 needs a rewrite position.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .algebra import Verdict, check_star_shape, partition_equations, star_apply
from .errors import PlonkalogError, PreconditionError
from .syntax import (
    Formula,
    Signature,
    Var,
    depth,
    fresh_var,
    match_all,
    match_formula,
    positions,
    replace_at,
    subformulas,
    substitute,
    subterm_at,
    vars_of,
)


@dataclass(frozen=True)
class Rule:
    name: str
    premises: tuple
    conclusion: Formula

    @property
    def is_axiom(self) -> bool:
        return not self.premises


SCHEMA_KINDS = ("axiom-guard", "premise-splice", "antitheorem", "rewrite")


@dataclass(frozen=True)
class RuleSchema:
    """An indexed rule family.

    ``payload`` depends on ``kind``:

    * ``axiom-guard``:    ``(axiom: Rule, guard_variable: str)``
    * ``premise-splice``: ``(rule: Rule, index: int)`` with 1-based index
    * ``antitheorem``:    ``(sigma: tuple, conclusion_variable: str)``
    * ``rewrite``:        ``(label: str, identity: Identity)``
    """

    kind: str
    name: str
    payload: tuple
    star: Formula

    def __post_init__(self):
        if self.kind not in SCHEMA_KINDS:
            raise ValueError(f"unknown schema kind {self.kind!r}")

    def pattern(self) -> Optional[Rule]:
        """The schema as a single rule pattern (``None`` for rewrites)."""
        if self.kind == "axiom-guard":
            ax, g = self.payload
            return Rule(self.name, (star_apply(self.star, Var(g), ax.conclusion),), ax.conclusion)
        if self.kind == "premise-splice":
            r, i = self.payload
            others = tuple(p for k, p in enumerate(r.premises, 1) if k != i)
            spliced = star_apply(self.star, r.premises[i - 1], r.conclusion)
            return Rule(self.name, others + (spliced,), r.conclusion)
        if self.kind == "antitheorem":
            sigma, a = self.payload
            return Rule(self.name, tuple(sigma), Var(a))
        return None


@dataclass(frozen=True)
class Calculus:
    name: str
    signature: Signature
    rules: tuple = ()
    schemas: tuple = ()
    star: Optional[Formula] = None

    def __post_init__(self):
        names = [r.name for r in self.rules] + [s.name for s in self.schemas]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise ValueError(f"calculus {self.name}: duplicate rule names {sorted(dup)}")

    def item(self, name: str):
        for r in self.rules:
            if r.name == name:
                return r
        for s in self.schemas:
            if s.name == name:
                return s
        raise KeyError(name)

    @property
    def axioms(self) -> list:
        return [r for r in self.rules if r.is_axiom]

    def patterns(self) -> list:
        """Finite rules followed by the pattern form of every non-rewrite schema."""
        out = list(self.rules)
        out.extend(s.pattern() for s in self.schemas if s.kind != "rewrite")
        return out

    def rewrites(self) -> list:
        return [s for s in self.schemas if s.kind == "rewrite"]


def transform_to_containment(H: Calculus, star: Formula, antitheorem: Sequence[Formula] = None, name: str = None) -> Calculus:
    """Build the calculus for the containment companion of the logic of ``H``.

    Without an antitheorem the explosion schema H4 is omitted.
    """
    if H.schemas:
        raise PreconditionError(f"calculus {H.name} already contains schemas")
    check_star_shape(star)
    x, y = Var("x"), Var("y")
    schemas = []
    for ax in H.axioms:
        g = fresh_var(vars_of(ax.conclusion), "a")
        schemas.append(RuleSchema("axiom-guard", f"H0[{ax.name}]", (ax, g), star))
    rules = (Rule("H1", (x, y), star), Rule("H2", (star,), x))
    for r in H.rules:
        for i in range(1, len(r.premises) + 1):
            schemas.append(RuleSchema("premise-splice", f"H3[{r.name},{i}]", (r, i), star))
    if antitheorem is not None:
        sigma = tuple(antitheorem)
        if len(vars_of(sigma)) != 1:
            raise PreconditionError("the antitheorem must be in one variable")
        schemas.append(RuleSchema("antitheorem", "H4", (sigma, fresh_var(vars_of(sigma), "a")), star))
    for label, e in partition_equations(star, H.signature):
        schemas.append(RuleSchema("rewrite", f"H5[{label.replace('[', ',').rstrip(']')}]", (label, e), star))
    return Calculus(name or f"{H.name}r", H.signature, rules, tuple(schemas), star)


# ---------------------------------------------------------------------------
# derivations


@dataclass(frozen=True)
class Premise:
    pass


@dataclass(frozen=True)
class By:
    """Justification by a rule or schema.

    ``refs`` are 1-based step numbers, in the order of the rule's premises.
    ``subst`` is optional: when present it must be the substitution used;
    otherwise one is found by matching.  ``position``/``reverse`` are for
    rewrite schemas only.
    """

    rule: str
    refs: tuple = ()
    subst: Optional[tuple] = None  # ((var, Formula), ...) sorted by var
    position: Optional[tuple] = None
    reverse: bool = False

    @property
    def sigma(self) -> Optional[dict]:
        return None if self.subst is None else dict(self.subst)


@dataclass(frozen=True)
class Step:
    formula: Formula
    justification: object


@dataclass(frozen=True)
class Derivation:
    steps: tuple

    @property
    def conclusion(self) -> Formula:
        return self.steps[-1].formula

    def __len__(self):
        return len(self.steps)


def freeze_subst(sigma: dict) -> tuple:
    return tuple(sorted(sigma.items()))


def _fail(k, reason) -> Verdict:
    return Verdict(False, reason, {"step": k})


def check_derivation(C: Calculus, gamma: Iterable[Formula], d: Derivation) -> Verdict:
    """Validate every step; on failure ``witness["step"]`` is the first bad step (1-based)."""
    gamma = set(gamma)
    done = []
    for k, step in enumerate(d.steps, 1):
        j = step.justification
        if isinstance(j, Premise):
            if step.formula not in gamma:
                return _fail(k, "not a premise")
            done.append(step.formula)
            continue
        if not isinstance(j, By):
            return _fail(k, "malformed justification")
        for r in j.refs:
            if not isinstance(r, int) or r < 1 or r >= k:
                return _fail(k, f"reference {r} does not point to an earlier step")
        try:
            item = C.item(j.rule)
        except KeyError:
            return _fail(k, f"unknown rule {j.rule}")
        cited = [done[r - 1] for r in j.refs]
        if isinstance(item, RuleSchema) and item.kind == "rewrite":
            why = _check_rewrite(item, cited, step.formula, j)
        else:
            rule = item if isinstance(item, Rule) else item.pattern()
            why = _check_instance(rule, cited, step.formula, j.sigma)
        if why:
            return _fail(k, f"{j.rule}: {why}")
        done.append(step.formula)
    return Verdict(True)


def _check_instance(rule: Rule, cited, formula, sigma) -> Optional[str]:
    if len(cited) != len(rule.premises):
        return f"needs {len(rule.premises)} premises, {len(cited)} cited"
    if sigma is not None:
        if any(substitute(p, sigma) != c for p, c in zip(rule.premises, cited)):
            return "cited steps are not the premises under the given substitution"
        if substitute(rule.conclusion, sigma) != formula:
            return "formula is not the conclusion under the given substitution"
        missing = vars_of(rule.premises) | vars_of(rule.conclusion)
        if not missing <= set(sigma):
            return "substitution leaves rule variables unbound"
        return None
    if match_all(rule.premises + (rule.conclusion,), tuple(cited) + (formula,)) is None:
        return "not an instance of the rule"
    return None


def _check_rewrite(schema: RuleSchema, cited, formula, j: By) -> Optional[str]:
    if len(cited) != 1:
        return "a rewrite cites exactly one step"
    if j.position is None:
        return "a rewrite needs a position"
    _, e = schema.payload
    src_side, dst_side = (e.rhs, e.lhs) if j.reverse else (e.lhs, e.rhs)
    try:
        sub = subterm_at(cited[0], j.position)
    except IndexError:
        return "position does not exist in the cited formula"
    if j.sigma is not None:
        sigma = j.sigma
        if substitute(src_side, sigma) != sub:
            return "subterm is not the rewritten side under the given substitution"
    else:
        sigma = match_formula(src_side, sub)
        if sigma is None:
            return "subterm at position does not match the identity"
    if not vars_of(dst_side) <= set(sigma):
        return "substitution leaves identity variables unbound"
    if replace_at(cited[0], j.position, substitute(dst_side, sigma)) != formula:
        return "formula is not the rewritten cited step"
    return None


# ---------------------------------------------------------------------------
# bounded proof search


def derive_bounded(
    C: Calculus,
    gamma: Iterable[Formula],
    goal: Formula,
    max_steps: int = 500,
    max_depth: Optional[int] = None,
) -> Optional[Derivation]:
    """Forward-chaining search for a derivation of ``goal`` from ``gamma``.

    Derived formulas are kept only if their depth is at most ``max_depth``
    (default: the deepest of ``gamma``, ``goal`` plus two) and their variables
    occur in ``gamma`` or ``goal``.  Conclusion variables not fixed by the
    premises are instantiated with subformulas of ``goal``.  The search stops
    after ``max_steps`` formulas are known.  ``None`` is not a refutation.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    gamma = list(dict.fromkeys(gamma))
    if max_depth is None:
        max_depth = max(depth(f) for f in gamma + [goal]) + 2
    allowed_vars = vars_of(gamma) | vars_of(goal)
    goal_subs = subformulas(goal)[::-1]

    known = {}  # formula -> (justification sans numbering, cited formulas)
    order = []

    def add(f, just, cited):
        if f in known:
            return False
        known[f] = (just, tuple(cited))
        order.append(f)
        return True

    for g in gamma:
        add(g, Premise(), ())
    if goal in known:
        return _extract(C, gamma, known, goal)

    patterns = C.patterns()
    rewrites = C.rewrites()
    frontier_start = 0
    while len(order) < max_steps:
        snapshot = list(order)
        fresh = set(snapshot[frontier_start:])
        frontier_start = len(snapshot)
        produced = []

        def offer(f, just, cited):
            if depth(f) > max_depth or not vars_of(f) <= allowed_vars or f in known:
                return
            produced.append((f, just, cited))

        for rule in patterns:
            for sigma, cited in _premise_matches(rule, snapshot, fresh):
                free = vars_of(rule.conclusion) - set(sigma)
                if not free:
                    offer(substitute(rule.conclusion, sigma), By(rule.name, subst=freeze_subst(sigma)), cited)
                    continue
                for target in goal_subs:
                    s2 = match_formula(rule.conclusion, target, sigma)
                    if s2 is not None:
                        full = {**s2}
                        offer(target, By(rule.name, subst=freeze_subst(full)), cited)
        for schema in rewrites:
            _, e = schema.payload
            for f in snapshot:
                if f not in fresh:
                    continue
                for pos in positions(f):
                    sub = subterm_at(f, pos)
                    for rev, (a, b) in ((False, (e.lhs, e.rhs)), (True, (e.rhs, e.lhs))):
                        sigma = match_formula(a, sub)
                        if sigma is None or not vars_of(b) <= set(sigma):
                            continue
                        new = replace_at(f, pos, substitute(b, sigma))
                        offer(new, By(schema.name, subst=freeze_subst(sigma), position=pos, reverse=rev), (f,))
        grew = False
        for f, just, cited in produced:
            if add(f, just, cited):
                grew = True
                if f == goal:
                    return _extract(C, gamma, known, goal)
                if len(order) >= max_steps:
                    return None
        if not grew:
            return None
    return None


def _premise_matches(rule: Rule, snapshot, fresh):
    """Substitutions matching all premises into ``snapshot``, at least one premise from ``fresh``."""
    if not rule.premises:
        yield {}, () if fresh else None
        return
    out = []

    def go(k, sigma, cited, used_fresh):
        if k == len(rule.premises):
            if used_fresh:
                out.append((sigma, tuple(cited)))
            return
        p = rule.premises[k]
        ground = vars_of(p) <= set(sigma)
        if ground:
            f = substitute(p, sigma)
            if f in snapshot_set:
                go(k + 1, sigma, cited + [f], used_fresh or f in fresh)
            return
        for f in snapshot:
            s2 = match_formula(p, f, sigma)
            if s2 is not None:
                go(k + 1, s2, cited + [f], used_fresh or f in fresh)

    snapshot_set = set(snapshot)
    go(0, {}, [], False)
    yield from out


def _extract(C, gamma, known, goal) -> Derivation:
    needed = []
    seen = set()

    def visit(f):
        if f in seen:
            return
        seen.add(f)
        just, cited = known[f]
        for c in cited:
            visit(c)
        needed.append(f)

    visit(goal)
    number = {f: k for k, f in enumerate(needed, 1)}
    steps = []
    for f in needed:
        just, cited = known[f]
        if isinstance(just, By):
            just = By(just.rule, tuple(number[c] for c in cited), just.subst, just.position, just.reverse)
        steps.append(Step(f, just))
    d = Derivation(tuple(steps))
    v = check_derivation(C, gamma, d)
    if not v:
        raise PlonkalogError(f"internal: search produced an invalid derivation ({v.reason})")
    return d
