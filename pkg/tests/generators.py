"""Seeded random generators shared by the property and acceptance suites."""

import itertools

import numpy as np

from plonkalog import DirectSystem, FiniteAlgebra, Identity, Semilattice
from plonkalog.syntax import App, Signature, Var

FG = Signature.of("FG", {"f": 1, "g": 2})

SHAPES = {
    "chain2": (["i", "j"], [("i", "j")]),
    "chain3": (["i", "j", "k"], [("i", "j"), ("j", "k")]),
    "vee": (["a", "b", "t"], [("a", "t"), ("b", "t")]),
}


def formula(rng, sig, names, depth):
    if depth == 0 or rng.random() < 0.3:
        return Var(rng.choice(names))
    sym = rng.choice(sig.symbols)
    return App(sym, tuple(formula(rng, sig, names, depth - 1) for _ in range(sig.arity(sym))))


def substitution(rng, sig, names, targets, depth):
    return {v: formula(rng, sig, targets, depth) for v in names}


def algebra(rng, sig, carrier, name):
    n = len(carrier)
    tables = {s: np.array(rng.choices(range(n), k=n ** sig.arity(s))).reshape((n,) * sig.arity(s)) for s in sig.symbols}
    return FiniteAlgebra(name, sig, carrier, tables)


def _closure(A, seed):
    S = set(seed)
    while True:
        new = {A.op(s, *args) for s in A.signature.symbols for args in itertools.product(sorted(S), repeat=A.signature.arity(s))}
        if new <= S:
            return S
        S |= new


def _algebra_over(rng, A, prefix, max_size=3):
    """A random algebra ``B`` with a homomorphism ``h: B -> A``."""
    S = sorted(_closure(A, rng.sample(A.carrier, 1)))
    if len(S) > max_size:
        S = sorted(_closure(A, [A.carrier[0]]))
    size = rng.randint(len(S), max(len(S), max_size))
    carrier = [f"{prefix}{k}" for k in range(size)]
    h = dict(zip(carrier, S + [rng.choice(S) for _ in range(size - len(S))]))
    pre = {a: [b for b in carrier if h[b] == a] for a in S}
    sig = A.signature
    tables = {}
    for s in sig.symbols:
        n = sig.arity(s)
        t = np.empty((size,) * n, dtype=int)
        for tup in itertools.product(range(size), repeat=n):
            target = A.op(s, *(h[carrier[k]] for k in tup))
            t[tup] = carrier.index(rng.choice(pre[target]))
        tables[s] = t
    return FiniteAlgebra(prefix, sig, carrier, tables), h


def system(rng, sig=FG):
    """A valid direct system with 2-3 fibers of 2-3 element algebras."""
    shape = rng.choice(sorted(SHAPES))
    elems, covers = SHAPES[shape]
    top = elems[-1]
    while True:
        # small closed subalgebras are needed below, so retry unlucky tops
        A = algebra(rng, sig, [f"{top}{k}" for k in range(rng.randint(2, 3))], top)
        if all(len(_closure(A, [a])) <= 3 for a in A.carrier):
            break
    fibers, homs = {top: A}, {}
    for lo, hi in reversed(covers):
        B, h = _algebra_over(rng, fibers[hi], lo)
        fibers[lo], homs[(lo, hi)] = B, h
    if shape == "chain3":
        homs[("i", "k")] = {a: homs[("j", "k")][homs[("i", "j")][a]] for a in fibers["i"].carrier}
    leq = {(x, x) for x in elems} | set(covers) | ({("i", "k")} if shape == "chain3" else set())
    S = Semilattice.from_order(shape, elems, lambda x, y: (x, y) in leq)
    return DirectSystem(S, fibers, homs)


def regular_identity(rng, sig, names=("x", "y", "z"), depth=2):
    """Random identity with equal variable sets and distinct sides."""
    while True:
        l, r = formula(rng, sig, list(names), depth), formula(rng, sig, list(names), depth)
        e = Identity(l, r)
        if l != r and _vars(l) == _vars(r):
            return e


def _vars(phi):
    if isinstance(phi, Var):
        return {phi.name}
    return set().union(*(_vars(a) for a in phi.args))


def reference_sum_ops(X):
    """Płonka sum operations on ``(index, element)`` pairs, from the definition."""
    S = X.index
    carrier = [(i, a) for i in S.elements for a in X.algebra(i).carrier]
    sig = X.algebra(S.elements[0]).signature

    def make(sym):
        def op(*args):
            j = S.join(*(i for i, _ in args))
            return (j, X.algebra(j).op(sym, *(X.hom(i, j)[a] for i, a in args)))

        return op

    return carrier, {s: make(s) for s in sig.symbols}


def fiber_valid_regular_identity(rng, X, tries=500):
    """A random regular identity holding in every fiber of ``X`` (or ``None``)."""
    from plonkalog import check_identity

    sig = X.algebra(X.index.elements[0]).signature
    for _ in range(tries):
        e = regular_identity(rng, sig)
        if all(check_identity(X.algebra(i), e) for i in X.index.elements):
            return e
    return None
