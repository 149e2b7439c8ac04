"""Command-line front end.

Exit status: 0 for success (holds, valid, no disagreements), 1 for a
semantic negative (fails, invalid, disagreements found), 2 for usage or
input errors.
"""

from __future__ import annotations

import argparse
import random
import sys

from . import __version__
from .algebra import check_partition_function, validate_semilattice
from .containment import READINGS, BaseLogic, check_companion_equivalence, containment_entails, verify_r_partition_function
from .errors import PlonkalogError
from .hilbert import check_derivation, derive_bounded, transform_to_containment
from .matrix import find_countermodel
from .plonka import (
    decompose,
    plonka_sum_matrices,
    validate_direct_system,
    validate_r_direct_system,
)
from .syntax import format_formula, parse_formula, parse_sequent, vars_of
from .textformat import (
    KINDS,
    Workspace,
    emit_algebra,
    emit_calculus,
    emit_derivation,
    emit_matrix,
    emit_semilattice,
    emit_signature,
    emit_system,
)

OK, NEGATIVE, USAGE = 0, 1, 2


class _Out:
    def __init__(self, porcelain: bool, stream=None):
        self.porcelain = porcelain
        self.stream = stream or sys.stdout

    def human(self, text: str):
        if not self.porcelain:
            print(text, file=self.stream)

    def machine(self, *fields):
        if self.porcelain:
            print("\t".join(str(f) for f in fields), file=self.stream)

    def both(self, text: str, *fields):
        self.human(text)
        self.machine(*fields)

    def block(self, text: str):
        print(text, file=self.stream)


def _global_flags(default_suppress: bool) -> argparse.ArgumentParser:
    d = argparse.SUPPRESS if default_suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--file", action="append", default=d if default_suppress else [], metavar="PATH",
                   help="definition file to load (repeatable)")
    p.add_argument("--porcelain", action="store_true", default=d if default_suppress else False,
                   help="tab-separated machine-readable output")
    p.add_argument("--jobs", type=int, default=d if default_suppress else 1, metavar="N",
                   help="worker threads for bounded checks")
    p.add_argument("--seed", type=int, default=d if default_suppress else 0, metavar="N",
                   help="seed for randomised sampling")
    return p


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="plonkalog",
        description="Finite logical matrices, Płonka sums and containment companions.",
        parents=[_global_flags(False)],
    )
    top.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    g = [_global_flags(True)]
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=g, help="parse and pretty-print a formula")
    p.add_argument("formula")
    p.add_argument("--signature", default="BOOL")

    for name, hlp in (("entail", "decide a sequent in a matrix family"),
                      ("countermodel", "print the first countermodel of a sequent")):
        p = sub.add_parser(name, parents=g, help=hlp)
        p.add_argument("--matrix", required=True, help="matrix name or comma-separated family")
        p.add_argument("sequent")

    p = sub.add_parser("companion", parents=g, help="decide a sequent in the containment companion")
    p.add_argument("--base", required=True, help="matrix name or comma-separated family")
    p.add_argument("--antitheorem", default="none", help="antitheorem block name, or 'none'")
    p.add_argument("--reading", choices=READINGS, default="inconsistent")
    p.add_argument("sequent")

    p = sub.add_parser("plonka", parents=g, help="Płonka sums and decompositions")
    psub = p.add_subparsers(dest="action", required=True)
    q = psub.add_parser("sum", parents=g, help="sum an r-direct system")
    q.add_argument("system")
    q.add_argument("--name", help="name of the resulting matrix and algebra")
    q.add_argument("--rename", action="append", default=[], metavar="OLD=NEW")
    q.add_argument("--order", help="comma-separated carrier order for the result")
    q.add_argument("--direct-only", action="store_true", help="skip the filter conditions")
    q.add_argument("--emit", action="store_true", help="print definition blocks")
    q = psub.add_parser("decompose", parents=g, help="decompose a matrix or algebra along a partition function")
    q.add_argument("target", help="matrix or algebra name")
    q.add_argument("--star", required=True)
    q.add_argument("--name", default=None, help="name of the emitted system")
    q.add_argument("--emit", action="store_true")

    p = sub.add_parser("validate", parents=g, help="validate a system, semilattice or partition function")
    p.add_argument("name")
    p.add_argument("--star", help="check a partition function on an algebra or matrix")
    p.add_argument("--direct-only", action="store_true", help="systems: skip the filter conditions")
    p.add_argument("--antitheorem", default="none", help="with --star on a matrix: base antitheorem")

    p = sub.add_parser("calculus", parents=g, help="Hilbert calculi")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("transform", parents=g, help="build the containment calculus")
    q.add_argument("calculus")
    q.add_argument("--star", required=True)
    q.add_argument("--antitheorem", default="none")
    q.add_argument("--name")
    q.add_argument("--emit", action="store_true")
    q = csub.add_parser("check", parents=g, help="check a derivation block")
    q.add_argument("derivation")
    q = csub.add_parser("search", parents=g, help="bounded forward proof search")
    q.add_argument("calculus")
    q.add_argument("sequent")
    q.add_argument("--star", help="transform the calculus first with this partition function")
    q.add_argument("--antitheorem", default="none")
    q.add_argument("--max-steps", type=int, default=500)
    q.add_argument("--max-depth", type=int)
    q.add_argument("--name", default="found")

    p = sub.add_parser("verify", parents=g, help="run a companion-check block")
    p.add_argument("check")
    p.add_argument("--reading", choices=READINGS, default="inconsistent")
    p.add_argument("--naive", action="store_true", help="walk every sequent individually")
    p.add_argument("--cross-check", type=int, default=0, metavar="K",
                   help="also re-decide K random sequents directly (uses --seed)")
    p.add_argument("--limit", type=int, default=20, help="disagreements to print")

    p = sub.add_parser("builtins", parents=g, help="list fixtures or print one")
    p.add_argument("name", nargs="?")
    p.add_argument("--kind", choices=KINDS)
    return top


# ---------------------------------------------------------------------------


def _family_sig(ws, names):
    fam = ws.family(names)
    return fam, fam.matrices[0].signature


def _antitheorem(ws, name):
    return None if name in (None, "none") else ws.get("antitheorem", name)


def _fmt_asg(asg) -> str:
    return ", ".join(f"{k}={v}" for k, v in asg.items())


def cmd_parse(ws, a, out):
    sig = ws.get("signature", a.signature)
    phi = parse_formula(a.formula, sig)
    out.both(format_formula(phi, sig), "formula", format_formula(phi, sig), "vars", ",".join(sorted(vars_of(phi))))
    return OK


def cmd_entail(ws, a, out):
    fam, sig = _family_sig(ws, a.matrix)
    seq = parse_sequent(a.sequent, sig)
    cm = find_countermodel(fam, sorted(seq.premises, key=repr), seq.conclusion)
    if cm is None:
        out.both("HOLDS", "HOLDS")
        return OK
    out.both(f"FAILS\ncountermodel in {cm.matrix}: {_fmt_asg(cm.assignment)}",
             "FAILS", cm.matrix, *(f"{k}={v}" for k, v in cm.assignment.items()))
    return NEGATIVE


def cmd_countermodel(ws, a, out):
    fam, sig = _family_sig(ws, a.matrix)
    seq = parse_sequent(a.sequent, sig)
    cm = find_countermodel(fam, sorted(seq.premises, key=repr), seq.conclusion)
    if cm is None:
        out.both("none", "none")
        return NEGATIVE
    out.both(f"{cm.matrix}: {_fmt_asg(cm.assignment)}", cm.matrix, *(f"{k}={v}" for k, v in cm.assignment.items()))
    return OK


def cmd_companion(ws, a, out):
    fam, sig = _family_sig(ws, a.base)
    L = BaseLogic(fam, _antitheorem(ws, a.antitheorem))
    seq = parse_sequent(a.sequent, sig)
    ok = containment_entails(L, seq.premises, seq.conclusion, a.reading)
    out.both("HOLDS" if ok else "FAILS", "HOLDS" if ok else "FAILS")
    return OK if ok else NEGATIVE


def cmd_plonka(ws, a, out):
    if a.action == "sum":
        X = ws.get("system", a.system)
        rep = validate_direct_system(X) if a.direct_only else validate_r_direct_system(X)
        if not rep.ok:
            out.both("invalid system\n" + rep.render(), "invalid", *(v.law for v in rep.violations))
            return NEGATIVE
        name = a.name or f"Pl_{a.system}"
        fm = plonka_sum_matrices(X, name=name, require_r=not a.direct_only)
        m = fm.sum
        if a.rename:
            mp = {}
            for r in a.rename:
                old, sep, new = r.partition("=")
                if not sep:
                    raise PlonkalogError(f"--rename expects OLD=NEW, got {r!r}")
                mp[old] = new
            m = m.renamed(mp)
        if a.order:
            m = m.reordered([e.strip() for e in a.order.split(",")])
        if a.emit:
            out.block(emit_matrix(m))
        else:
            out.both(f"sum {name}: {len(m.algebra)} elements, filter {{{', '.join(m.filter_in_order())}}}",
                     "sum", name, ",".join(m.algebra.carrier), ",".join(m.filter_in_order()))
        return OK
    try:
        target = ws.get("matrix", a.target)
        A, F = target.algebra, target.filter
    except PlonkalogError:
        A, F = ws.get("algebra", a.target), None
    star = parse_formula(a.star, A.signature)
    X = decompose(A, star, F)
    name = a.name or f"{a.target}_parts"
    if a.emit:
        if F is None:
            raise PlonkalogError("--emit needs a matrix (systems are emitted as r-direct systems)")
        out.block(emit_system(X, name))
        return OK
    for i in X.index.elements:
        fib = X.fibers[i]
        car = fib.algebra.carrier if F is not None else fib.carrier
        filt = ("  filter {" + ", ".join(fib.filter_in_order()) + "}") if F is not None else ""
        below = [j for j in X.index.elements if j != i and X.index.leq(j, i)]
        out.both(f"fiber {i}: {{{', '.join(car)}}}{filt}" + (f"  above {', '.join(below)}" if below else ""),
                 "fiber", i, ",".join(car), ",".join(fib.filter_in_order()) if F is not None else "-",
                 ",".join(below))
    rep = validate_r_direct_system(X) if F is not None else validate_direct_system(X)
    out.both("validation: " + rep.render(), "validation", "valid" if rep.ok else "invalid")
    return OK


def cmd_validate(ws, a, out):
    if a.star:
        try:
            m = ws.get("matrix", a.name)
        except PlonkalogError:
            m = None
        if m is not None:
            star = parse_formula(a.star, m.signature)
            v = verify_r_partition_function(BaseLogic(m, _antitheorem(ws, a.antitheorem)), star)
        else:
            A = ws.get("algebra", a.name)
            v = check_partition_function(A, parse_formula(a.star, A.signature))
        if v:
            out.both("valid", "valid")
            return OK
        w = v.witness or {}
        asg = w.get("assignment", {})
        out.both(f"invalid: {v.reason} fails" + (f" at {_fmt_asg(asg)}" if asg else ""),
                 "invalid", v.reason, *(f"{k}={x}" for k, x in asg.items()))
        return NEGATIVE
    if a.name in ws.raw["system"]:
        X = ws.get("system", a.name)
        rep = validate_direct_system(X) if a.direct_only else validate_r_direct_system(X)
    elif a.name in ws.raw["semilattice"]:
        rep = validate_semilattice(ws.get("semilattice", a.name))
    else:
        raise PlonkalogError(f"no system or semilattice named {a.name!r} (use --star for partition functions)")
    if rep.ok:
        out.both("valid", "valid")
        return OK
    out.human("invalid")
    for v in rep.violations:
        out.both(f"  {v.law}: {v.detail}", v.law, v.detail)
    return NEGATIVE


def _transformed(ws, name, star_text, anti):
    H = ws.get("calculus", name)
    star = parse_formula(star_text, H.signature)
    return transform_to_containment(H, star, _antitheorem(ws, anti))


def cmd_calculus(ws, a, out):
    if a.action == "transform":
        C = _transformed(ws, a.calculus, a.star, a.antitheorem)
        if a.name:
            C = type(C)(a.name, C.signature, C.rules, C.schemas, C.star)
        if a.emit:
            out.block(emit_calculus(C))
        else:
            for r in C.rules:
                out.both(r.name, "rule", r.name)
            for s in C.schemas:
                out.both(s.name, "schema", s.kind, s.name)
        return OK
    if a.action == "check":
        blk = ws.get("derivation", a.derivation)
        C = ws.get("calculus", blk.calculus)
        v = check_derivation(C, blk.premises, blk.derivation)
        if v:
            out.both(f"valid ({len(blk.derivation)} steps)", "valid", len(blk.derivation))
            return OK
        out.both(f"invalid at step {v.witness['step']}: {v.reason}", "invalid", v.witness["step"], v.reason)
        return NEGATIVE
    C = _transformed(ws, a.calculus, a.star, a.antitheorem) if a.star else ws.get("calculus", a.calculus)
    seq = parse_sequent(a.sequent, C.signature)
    premises = sorted(seq.premises, key=lambda f: format_formula(f, C.signature))
    d = derive_bounded(C, premises, seq.conclusion, max_steps=a.max_steps, max_depth=a.max_depth)
    if d is None:
        out.both("not found within bounds", "not-found")
        return NEGATIVE
    if a.star:
        out.block(emit_calculus(C) + "\n")
    out.block(emit_derivation(a.name, C, premises, d))
    return OK


def cmd_verify(ws, a, out):
    cc = ws.get("companion-check", a.check)
    cand = ws.family(cc.candidate)
    L = BaseLogic(ws.family(cc.base), _antitheorem(ws, cc.antitheorem))
    rep = check_companion_equivalence(
        cand, L, cc.variables, cc.depth, cc.max_premises, reading=a.reading, jobs=a.jobs, naive=a.naive
    )
    sig = cand.signature
    n = rep.disagreeing_sequents
    out.both(f"{n} disagreements / {rep.sequents_checked} sequents", "disagreements", n, "sequents", rep.sequents_checked)
    for d in rep.disagreements[: a.limit]:
        prem = ", ".join(format_formula(f, sig) for f in d.premises)
        line = f"{prem} |- {format_formula(d.conclusion, sig)}"
        out.both(f"  {line}  candidate={d.candidate} companion={d.companion}  {d.witness}",
                 "disagreement", line, d.candidate, d.companion, d.witness)
    bad_samples = 0
    if a.cross_check:
        from .containment import formula_space
        from .matrix import entails

        rng = random.Random(a.seed)
        space = formula_space(sig, list(cc.variables), cc.depth)
        for _ in range(a.cross_check):
            gamma = rng.sample(space, rng.randint(0, cc.max_premises))
            phi = rng.choice(space)
            if entails(cand, gamma, phi) != containment_entails(L, gamma, phi, a.reading):
                bad_samples += 1
        out.both(f"cross-check: {bad_samples} of {a.cross_check} sampled sequents disagree",
                 "cross-check", bad_samples, a.cross_check)
    return OK if rep.ok and not bad_samples else NEGATIVE


_EMIT = {
    "signature": lambda v, n: emit_signature(v),
    "algebra": lambda v, n: emit_algebra(v),
    "semilattice": lambda v, n: emit_semilattice(v),
    "matrix": lambda v, n: emit_matrix(v),
    "system": lambda v, n: emit_system(v, n),
    "calculus": lambda v, n: emit_calculus(v),
}


def cmd_builtins(ws, a, out):
    if a.name is None:
        for kind in KINDS:
            if a.kind and kind != a.kind:
                continue
            for n in ws.names(kind):
                out.both(f"{kind:16} {n}", kind, n)
        return OK
    kinds = [a.kind] if a.kind else [k for k in KINDS if a.name in ws.raw[k]]
    if not kinds:
        raise PlonkalogError(f"nothing named {a.name!r}")
    kind = kinds[0]
    if kind not in _EMIT:
        raise PlonkalogError(f"{kind} blocks cannot be printed")
    out.block(_EMIT[kind](ws.get(kind, a.name), a.name))
    return OK


COMMANDS = {
    "parse": cmd_parse,
    "entail": cmd_entail,
    "countermodel": cmd_countermodel,
    "companion": cmd_companion,
    "plonka": cmd_plonka,
    "validate": cmd_validate,
    "calculus": cmd_calculus,
    "verify": cmd_verify,
    "builtins": cmd_builtins,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    out = _Out(a.porcelain, stdout)
    try:
        ws = Workspace.from_files(a.file)
        return COMMANDS[a.command](ws, a, out)
    except (PlonkalogError, OSError, ValueError) as e:
        print(f"error: {e}", file=stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
