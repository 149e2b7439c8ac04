"""Independent reference implementations used to cross-check the library.

Nothing here calls the library's evaluator, matcher or enumeration code;
only the formula data types are shared.
"""

import itertools

from plonkalog.syntax import App, Var

# Tables transcribed from the published figures, rows and columns in the
# listed element order.  'u' is the infectious / middle value.

WK_ELEMS = ["0", "u", "1"]
WK_NEG = {"0": "1", "u": "u", "1": "0"}
WK_AND = [["0", "u", "0"], ["u", "u", "u"], ["0", "u", "1"]]
WK_OR = [["0", "u", "1"], ["u", "u", "u"], ["1", "u", "1"]]

K4_ELEMS = ["0", "u", "n", "1"]
K4_NEG = {"1": "0", "u": "u", "n": "n", "0": "1"}
K4_AND = [["0", "u", "n", "0"], ["u", "u", "n", "u"], ["n", "n", "n", "n"], ["0", "u", "n", "1"]]
K4_OR = [["0", "u", "n", "1"], ["u", "u", "n", "u"], ["n", "n", "n", "n"], ["1", "u", "n", "1"]]

S4_ELEMS = ["0", "u", "m", "1"]
S4_NEG = {"1": "0", "u": "u", "m": "m", "0": "1"}
S4_AND = [["0", "0", "m", "0"], ["0", "u", "m", "u"], ["m", "m", "m", "m"], ["0", "u", "m", "1"]]
S4_OR = [["0", "u", "m", "1"], ["u", "u", "m", "1"], ["m", "m", "m", "m"], ["1", "1", "m", "1"]]

M4_ELEMS = ["0", "b", "n", "1"]
M4_NEG = {"1": "0", "b": "b", "n": "n", "0": "1"}
# lattice order from the Hasse diagram: 0 < b, n < 1
M4_LEQ = {("0", x) for x in M4_ELEMS} | {(x, "1") for x in M4_ELEMS} | {(x, x) for x in M4_ELEMS}


def m4_meet(a, b):
    lower = [c for c in M4_ELEMS if (c, a) in M4_LEQ and (c, b) in M4_LEQ]
    return [c for c in lower if all((d, c) in M4_LEQ for d in lower)][0]


def m4_join(a, b):
    upper = [c for c in M4_ELEMS if (a, c) in M4_LEQ and (b, c) in M4_LEQ]
    return [c for c in upper if all((c, d) in M4_LEQ for d in upper)][0]


def table_fn(elems, rows):
    pos = {e: i for i, e in enumerate(elems)}
    return lambda a, b: rows[pos[a]][pos[b]]


def bool_ops():
    return {
        "neg": lambda a: "1" if a == "0" else "0",
        "and": lambda a, b: "1" if a == b == "1" else "0",
        "or": lambda a, b: "1" if "1" in (a, b) else "0",
        "imp": lambda a, b: "0" if (a, b) == ("1", "0") else "1",
    }


def wk_ops():
    ops = {"neg": WK_NEG.__getitem__, "and": table_fn(WK_ELEMS, WK_AND), "or": table_fn(WK_ELEMS, WK_OR)}
    ops["imp"] = lambda a, b: ops["or"](ops["neg"](a), b)
    return ops


def ops_of(A):
    """Python callables reading an algebra element by element."""
    return {s: (lambda s: lambda *xs: A.op(s, *xs))(s) for s in A.signature.symbols}


def ev(ops, phi, asg):
    if isinstance(phi, Var):
        return asg[phi.name]
    return ops[phi.symbol](*(ev(ops, a, asg) for a in phi.args))


def variables(*formulas):
    out = set()
    stack = list(formulas)
    while stack:
        f = stack.pop()
        if isinstance(f, Var):
            out.add(f.name)
        else:
            stack.extend(f.args)
    return out


def assignments(names, carrier, reverse=False):
    """All assignments; ``reverse`` enumerates with the last variable slowest."""
    names = sorted(names)
    order = names[::-1] if reverse else names
    for vals in itertools.product(carrier, repeat=len(order)):
        yield dict(zip(order, vals))


def naive_entails(matrices, gamma, phi):
    """matrices: iterable of (carrier, ops, filter)."""
    names = variables(*gamma, phi)
    for carrier, ops, filt in matrices:
        for asg in assignments(names, carrier, reverse=True):
            if all(ev(ops, g, asg) in filt for g in gamma) and ev(ops, phi, asg) not in filt:
                return False
    return True


def naive_countermodels(carrier, ops, filt, gamma, phi):
    names = variables(*gamma, phi)
    return [
        asg
        for asg in assignments(names, carrier, reverse=True)
        if all(ev(ops, g, asg) in filt for g in gamma) and ev(ops, phi, asg) not in filt
    ]


def lex_first(asgs, carrier):
    pos = {e: i for i, e in enumerate(carrier)}
    return min(asgs, key=lambda a: [pos[a[k]] for k in sorted(a)])


def identity_counterexamples(carrier, ops, lhs, rhs):
    names = variables(lhs, rhs)
    return [a for a in assignments(names, carrier, reverse=True) if ev(ops, lhs, a) != ev(ops, rhs, a)]


# -- syntax ------------------------------------------------------------------


def subterms(phi):
    out = [phi]
    if isinstance(phi, App):
        for a in phi.args:
            out.extend(subterms(a))
    return out


def subst(phi, sigma):
    if isinstance(phi, Var):
        return sigma.get(phi.name, phi)
    return App(phi.symbol, tuple(subst(a, sigma) for a in phi.args))


def brute_match(pattern, target):
    """Try every assignment of target subterms to pattern variables."""
    names = sorted(variables(pattern))
    pool = list(dict.fromkeys(subterms(target)))
    for choice in itertools.product(pool, repeat=len(names)):
        sigma = dict(zip(names, choice))
        if subst(pattern, sigma) == target:
            return sigma
    return None


def own_match(p, t, sigma):
    if isinstance(p, Var):
        if p.name in sigma:
            return sigma if sigma[p.name] == t else None
        return {**sigma, p.name: t}
    if not isinstance(t, App) or t.symbol != p.symbol or len(t.args) != len(p.args):
        return None
    for a, b in zip(p.args, t.args):
        sigma = own_match(a, b, sigma)
        if sigma is None:
            return None
    return sigma


def all_positions(phi, here=()):
    yield here, phi
    if isinstance(phi, App):
        for k, a in enumerate(phi.args):
            yield from all_positions(a, here + (k,))


def put(phi, pos, new):
    if not pos:
        return new
    k = pos[0]
    args = list(phi.args)
    args[k] = put(args[k], pos[1:], new)
    return App(phi.symbol, tuple(args))


def reverify(calculus, gamma, steps):
    """Independent derivation checker; returns the first bad step (1-based) or None.

    ``steps`` are ``(formula, kind, name, refs, position, sigma, reverse)``
    tuples with kind ``"premise"`` or ``"by"``.  ``sigma`` (or ``None``)
    pins the substitution.  Rewrites accept any position when none is given
    and either direction when ``reverse`` is ``None``.
    """
    from plonkalog.hilbert import RuleSchema

    gamma = set(gamma)
    seen = []
    for k, (phi, kind, name, refs, pos, sigma, reverse) in enumerate(steps, 1):
        if kind == "premise":
            if phi not in gamma:
                return k
            seen.append(phi)
            continue
        if any(r < 1 or r >= k for r in refs):
            return k
        cited = [seen[r - 1] for r in refs]
        items = {r.name: r for r in calculus.rules}
        items.update({s.name: s for s in calculus.schemas})
        item = items.get(name)
        if item is None:
            return k
        if isinstance(item, RuleSchema) and item.kind == "rewrite":
            if len(cited) != 1:
                return k
            e = item.payload[1]
            ok = False
            for where, sub in all_positions(cited[0]):
                if pos is not None and where != pos:
                    continue
                dirs = [(e.lhs, e.rhs), (e.rhs, e.lhs)]
                if reverse is not None:
                    dirs = [dirs[1] if reverse else dirs[0]]
                for a, b in dirs:
                    s = own_match(a, sub, dict(sigma or {}))
                    if s is not None and variables(b) <= set(s) and put(cited[0], where, subst(b, s)) == phi:
                        ok = True
            if not ok:
                return k
        else:
            rule = item if not isinstance(item, RuleSchema) else item.pattern()
            if len(rule.premises) != len(cited):
                return k
            s = dict(sigma or {})
            for p, c in zip(rule.premises + (rule.conclusion,), cited + [phi]):
                s = own_match(p, c, s)
                if s is None:
                    return k
            if sigma is not None and not variables(*rule.premises, rule.conclusion) <= set(sigma):
                return k
        seen.append(phi)
    return None


def steps_of(derivation):
    """Flatten a library derivation into :func:`reverify` tuples."""
    from plonkalog.hilbert import Premise

    out = []
    for st in derivation.steps:
        j = st.justification
        if isinstance(j, Premise):
            out.append((st.formula, "premise", None, (), None, None, None))
        else:
            rw = j.position is not None
            out.append((st.formula, "by", j.rule, tuple(j.refs), j.position, j.sigma, j.reverse if rw else None))
    return out
