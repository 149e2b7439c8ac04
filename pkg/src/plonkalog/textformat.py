"""The block-structured definition language and its emitters.

A definition file is a sequence of blocks ``kind name { body }``.  Body
entries are separated by newlines or semicolons (derivation bodies only by
newlines) and ``#`` starts a comment.  Kinds:

``signature``, ``algebra``, ``semilattice``, ``matrix``, ``system``,
``calculus``, ``antitheorem``, ``derivation`` and ``companion-check``.

Blocks may reference each other in any order; references are resolved on
first use.  Every ``emit_*`` function produces text that parses back to an
equal value.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .algebra import FiniteAlgebra, Identity, Semilattice
from .errors import ParseError, PlonkalogError, UnknownName
from .hilbert import By, Calculus, Derivation, Premise, Rule, RuleSchema, Step
from .matrix import LogicalMatrix, MatrixFamily
from .plonka import RDirectSystem
from .syntax import (
    Notation,
    Signature,
    format_formula,
    parse_formula,
    parse_formulas,
    split_top_level,
    vars_of,
)

KINDS = (
    "signature",
    "algebra",
    "semilattice",
    "matrix",
    "system",
    "calculus",
    "antitheorem",
    "derivation",
    "companion-check",
)
ELEMENT_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.]*\Z")
_HEADER = re.compile(r"([a-z][a-z-]*)\s+([^\s{}]+)\s*\{")


@dataclass
class RawBlock:
    kind: str
    name: str
    entries: list  # [(line, text)]
    source: str
    line: int


@dataclass(frozen=True)
class CompanionCheck:
    name: str
    candidate: tuple  # matrix names
    base: tuple
    antitheorem: Optional[str]
    variables: tuple
    depth: int
    max_premises: int


@dataclass(frozen=True)
class DerivationBlock:
    name: str
    calculus: str
    premises: tuple
    derivation: Derivation


def _err(block: RawBlock, line: int, msg: str) -> ParseError:
    return ParseError(f"{block.source}:{line}: {block.kind} {block.name}: {msg}", 0, line)


def split_blocks(text: str, source: str = "<text>") -> list:
    """Cut ``text`` into raw blocks without interpreting their bodies."""
    lines = [ln.split("#", 1)[0] for ln in text.splitlines()]
    flat = "\n".join(lines)
    blocks, pos = [], 0
    while True:
        rest = flat[pos:]
        if not rest.strip():
            return blocks
        m = _HEADER.match(flat, pos + (len(rest) - len(rest.lstrip())))
        line = flat.count("\n", 0, pos + len(rest) - len(rest.lstrip())) + 1
        if not m:
            raise ParseError(f"{source}:{line}: expected 'kind name {{'", pos, line)
        kind, name = m.group(1), m.group(2)
        if kind not in KINDS:
            raise ParseError(f"{source}:{line}: unknown block kind {kind!r}", m.start(), line)
        close = flat.find("}", m.end())
        if close < 0:
            raise ParseError(f"{source}:{line}: block {name} is not closed", m.start(), line)
        body = flat[m.end():close]
        first = flat.count("\n", 0, m.end()) + 1
        entries = []
        pending, start = "", 0
        for k, ln in enumerate(body.split("\n")):
            # a line ending in a comma continues on the next one
            if not pending:
                start = first + k
            pending += " " + ln.strip() if pending else ln.strip()
            if pending.endswith(","):
                continue
            parts = [pending] if kind == "derivation" else pending.split(";")
            for p in parts:
                if p.strip():
                    entries.append((start, p.strip()))
            pending = ""
        if pending.strip():
            entries.append((start, pending.strip()))
        blocks.append(RawBlock(kind, name, entries, source, line))
        pos = close + 1


def _fields(block: RawBlock, multi=()) -> dict:
    """``key: value`` entries; keys listed in ``multi`` may repeat."""
    out = {}
    for line, text in block.entries:
        key, sep, val = text.partition(":")
        if not sep:
            raise _err(block, line, f"expected 'key: value', got {text!r}")
        key = key.strip()
        if key in multi or key.split(" ", 1)[0] in multi:
            out.setdefault(key.split(" ", 1)[0], []).append((line, key, val.strip()))
        elif key in out:
            raise _err(block, line, f"duplicate field {key!r}")
        else:
            out[key] = (line, val.strip())
    return out


def _names(text: str) -> list:
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_map_entries(block, line, text):
    """``a->b, (a,b)->c, (a,_)->c`` into ``[(args_tuple, value)]``."""
    out = []
    for part in split_top_level(text):
        part = part.strip()
        if not part:
            continue
        lhs, arrow, rhs = part.rpartition("->")
        if not arrow:
            raise _err(block, line, f"expected 'args->value' in {part!r}")
        lhs, rhs = lhs.strip(), rhs.strip()
        if lhs.startswith("(") and lhs.endswith(")"):
            args = tuple(a.strip() for a in lhs[1:-1].split(","))
        else:
            args = (lhs,)
        out.append((args, rhs))
    return out


class Workspace:
    """Named declarations from definition files, resolved lazily.

    Names are unique per kind within the loaded files.  With
    ``builtins=True`` the fixture library is loaded first; user blocks may
    shadow a built-in of the same kind and name.
    """

    def __init__(self, builtins: bool = True):
        self.raw = {k: {} for k in KINDS}
        self._builtin = {k: set() for k in KINDS}
        self._cache = {}
        self._resolving = set()
        if builtins:
            from .builtins import builtin_dir

            for path in sorted(Path(builtin_dir()).glob("*.plk")):
                self.load_text(path.read_text(encoding="utf-8"), str(path), builtin=True)

    @classmethod
    def from_files(cls, paths, builtins: bool = True) -> "Workspace":
        ws = cls(builtins)
        for p in paths:
            ws.load_file(p)
        return ws

    def load_file(self, path) -> None:
        self.load_text(Path(path).read_text(encoding="utf-8"), str(path))

    def load_text(self, text: str, source: str = "<text>", builtin: bool = False) -> None:
        for b in split_blocks(text, source):
            table = self.raw[b.kind]
            if b.name in table and not (b.name in self._builtin[b.kind] and not builtin):
                raise ParseError(f"{source}:{b.line}: duplicate {b.kind} {b.name!r}", 0, b.line)
            table[b.name] = b
            if builtin:
                self._builtin[b.kind].add(b.name)
            else:
                self._builtin[b.kind].discard(b.name)
            self._cache.clear()

    def names(self, kind: str) -> list:
        return list(self.raw[kind])

    def get(self, kind: str, name: str):
        key = (kind, name)
        if key in self._cache:
            return self._cache[key]
        block = self.raw[kind].get(name)
        if block is None:
            raise UnknownName(f"no {kind} named {name!r}")
        if key in self._resolving:
            raise PlonkalogError(f"cyclic reference through {kind} {name}")
        self._resolving.add(key)
        try:
            value = getattr(self, "_build_" + kind.replace("-", "_"))(block)
        finally:
            self._resolving.discard(key)
        self._cache[key] = value
        return value

    def lookup(self, name: str):
        """First declaration named ``name`` in the order of :data:`KINDS`."""
        for kind in KINDS:
            if name in self.raw[kind]:
                return self.get(kind, name)
        raise UnknownName(f"nothing named {name!r}")

    def family(self, names) -> MatrixFamily:
        if isinstance(names, str):
            names = _names(names)
        mats = [self.get("matrix", n) for n in names]
        return MatrixFamily(",".join(names), tuple(mats))

    # -- builders ---------------------------------------------------------

    def _build_signature(self, b: RawBlock) -> Signature:
        arities, notation = [], []
        for line, text in b.entries:
            m = re.match(r"op\s+([A-Za-z_]\w*)\s*/\s*(\d+)\s*(?::\s*(.*))?\Z", text)
            if not m:
                raise _err(b, line, f"expected 'op name/arity: notation', got {text!r}")
            sym, n, rest = m.group(1), int(m.group(2)), (m.group(3) or "").split()
            arities.append((sym, n))
            if not rest:
                continue
            fixity, spellings, prec, assoc = rest[0], [], 0, None
            if fixity not in ("prefix", "infix", "call"):
                raise _err(b, line, f"unknown fixity {fixity!r}")
            k = 1
            while k < len(rest):
                w = rest[k]
                if w in ("prec", "assoc"):
                    if k + 1 >= len(rest):
                        raise _err(b, line, f"{w} needs a value")
                    if w == "prec":
                        try:
                            prec = int(rest[k + 1])
                        except ValueError:
                            raise _err(b, line, "prec must be an integer") from None
                    else:
                        assoc = rest[k + 1]
                        if assoc not in ("left", "right"):
                            raise _err(b, line, "assoc must be left or right")
                    k += 2
                    continue
                spellings.append(w)
                k += 1
            if fixity != "call" and not spellings:
                raise _err(b, line, f"{fixity} notation needs at least one spelling")
            notation.append((sym, Notation(fixity, tuple(spellings), prec, assoc)))
        try:
            return Signature(b.name, tuple(arities), tuple(notation))
        except PlonkalogError as e:
            raise _err(b, b.line, str(e)) from None

    def _build_algebra(self, b: RawBlock) -> FiniteAlgebra:
        f = _fields(b, multi=("op",))
        if "signature" not in f or "elements" not in f:
            raise _err(b, b.line, "needs 'signature' and 'elements'")
        sig = self.get("signature", f["signature"][1])
        carrier = _names(f["elements"][1])
        for a in carrier:
            if not ELEMENT_RE.match(a):
                raise _err(b, f["elements"][0], f"bad element name {a!r}")
        idx = {a: i for i, a in enumerate(carrier)}
        n = len(carrier)
        tables = {}
        for line, key, val in f.get("op", []):
            m = re.match(r"op\s+([A-Za-z_]\w*)\s*/\s*(\d+)\Z", key)
            if not m:
                raise _err(b, line, f"expected 'op name/arity', got {key!r}")
            sym, k = m.group(1), int(m.group(2))
            if sym not in sig:
                raise _err(b, line, f"{sym!r} is not in signature {sig.name}")
            if sig.arity(sym) != k:
                raise _err(b, line, f"{sym!r} has arity {sig.arity(sym)} in {sig.name}")
            if sym in tables:
                raise _err(b, line, f"duplicate table for {sym!r}")
            t = np.full((n,) * k, -1, dtype=np.intp)
            for args, out in _parse_map_entries(b, line, val):
                if len(args) != k:
                    raise _err(b, line, f"{sym}: entry {args} has {len(args)} arguments, expected {k}")
                if out not in idx:
                    raise _err(b, line, f"{sym}: {out!r} is not an element")
                sel = []
                for a in args:
                    if a == "_":
                        sel.append(slice(None))
                    elif a in idx:
                        sel.append(idx[a])
                    else:
                        raise _err(b, line, f"{sym}: {a!r} is not an element")
                view = t[tuple(sel)]
                clash = (view >= 0) & (view != idx[out])
                if np.any(clash):
                    raise _err(b, line, f"{sym}: entry {args}->{out} contradicts an earlier entry")
                t[tuple(sel)] = idx[out]
            if np.any(t < 0):
                hole = tuple(int(i) for i in np.argwhere(t < 0)[0])
                raise _err(b, line, f"{sym}: no value for ({', '.join(carrier[i] for i in hole)})")
            tables[sym] = t
        missing = [s for s in sig.symbols if s not in tables]
        if missing:
            raise _err(b, b.line, f"no table for {', '.join(missing)}")
        return FiniteAlgebra(b.name, sig, carrier, tables)

    def _build_semilattice(self, b: RawBlock) -> Semilattice:
        f = _fields(b)
        if "elements" not in f:
            raise _err(b, b.line, "needs 'elements'")
        elems = _names(f["elements"][1])
        pairs = {}
        if "join" in f:
            line, val = f["join"]
            for args, out in _parse_map_entries(b, line, val):
                if len(args) != 2:
                    raise _err(b, line, f"join entries are binary, got {args}")
                if args in pairs and pairs[args] != out:
                    raise _err(b, line, f"join {args} given twice")
                pairs[args] = out
        return Semilattice.from_pairs(b.name, elems, pairs)

    def _build_matrix(self, b: RawBlock) -> LogicalMatrix:
        f = _fields(b)
        if "algebra" not in f or "filter" not in f:
            raise _err(b, b.line, "needs 'algebra' and 'filter'")
        A = self.get("algebra", f["algebra"][1])
        if "signature" in f:
            sig = self.get("signature", f["signature"][1])
            missing = [s for s in sig.symbols if s not in A.signature]
            if missing:
                raise _err(b, f["signature"][0], f"{A.name} lacks {', '.join(missing)}")
            A = A.with_signature(sig)
        try:
            return LogicalMatrix(A, _names(f["filter"][1]), b.name)
        except ValueError as e:
            raise _err(b, f["filter"][0], str(e)) from None

    def _build_system(self, b: RawBlock) -> RDirectSystem:
        f = _fields(b, multi=("fiber", "hom"))
        if "index" not in f:
            raise _err(b, b.line, "needs 'index'")
        S = self.get("semilattice", f["index"][1])
        fibers, homs = {}, {}
        for line, key, val in f.get("fiber", []):
            i = key.split(None, 1)[1].strip() if " " in key else ""
            if not i:
                raise _err(b, line, "expected 'fiber <index>: <matrix>'")
            if i in fibers:
                raise _err(b, line, f"duplicate fiber {i}")
            fibers[i] = self.get("matrix", val)
        for line, key, val in f.get("hom", []):
            m = re.match(r"hom\s*\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\)\Z", key)
            if not m:
                raise _err(b, line, "expected 'hom (i,j): a->b, ...'")
            pair = (m.group(1), m.group(2))
            if pair in homs:
                raise _err(b, line, f"duplicate hom {pair}")
            mp = {}
            for args, out in _parse_map_entries(b, line, val):
                if len(args) != 1:
                    raise _err(b, line, "hom entries map single elements")
                mp[args[0]] = out
            homs[pair] = mp
        return RDirectSystem(S, fibers, homs)

    def _build_calculus(self, b: RawBlock) -> Calculus:
        sig, star = None, None
        rules, schemas = [], []
        for line, text in b.entries:
            head, _, rest = text.partition(":")
            words = head.split()
            try:
                if words == ["signature"]:
                    sig = self.get("signature", rest.strip())
                    continue
                if sig is None:
                    raise _err(b, line, "'signature' must come first")
                if words == ["star"]:
                    star = parse_formula(rest, sig)
                elif words and words[0] == "axiom" and len(words) == 2:
                    rules.append(Rule(words[1], (), parse_formula(rest, sig)))
                elif words and words[0] == "rule" and len(words) == 2:
                    prem, concl = _parse_rule_body(rest, sig)
                    rules.append(Rule(words[1], prem, concl))
                elif words and words[0] == "schema":
                    if star is None:
                        raise _err(b, line, "'star' must precede schemas")
                    schemas.append(_parse_schema(words[1:], rest, sig, star))
                else:
                    raise _err(b, line, f"unrecognised entry {text!r}")
            except ParseError as e:
                if e.line is not None:
                    raise
                raise _err(b, line, e.message) from None
        if sig is None:
            raise _err(b, b.line, "needs 'signature'")
        try:
            return Calculus(b.name, sig, tuple(rules), tuple(schemas), star)
        except ValueError as e:
            raise _err(b, b.line, str(e)) from None

    def _build_antitheorem(self, b: RawBlock) -> tuple:
        f = _fields(b)
        if "signature" not in f or "formulas" not in f:
            raise _err(b, b.line, "needs 'signature' and 'formulas'")
        sig = self.get("signature", f["signature"][1])
        try:
            fs = tuple(parse_formulas(f["formulas"][1], sig))
        except ParseError as e:
            raise _err(b, f["formulas"][0], e.message) from None
        if len(vars_of(fs)) != 1:
            raise _err(b, f["formulas"][0], "an antitheorem must be in exactly one variable")
        return fs

    def _build_companion_check(self, b: RawBlock) -> CompanionCheck:
        f = _fields(b)
        for k in ("candidate", "base"):
            if k not in f:
                raise _err(b, b.line, f"needs {k!r}")
        anti = f.get("antitheorem", (0, "none"))[1]
        try:
            depth = int(f.get("depth", (0, "2"))[1])
            maxp = int(f.get("max-premises", (0, "2"))[1])
        except ValueError:
            raise _err(b, b.line, "depth and max-premises must be integers") from None
        return CompanionCheck(
            b.name,
            tuple(_names(f["candidate"][1])),
            tuple(_names(f["base"][1])),
            None if anti == "none" else anti,
            tuple(_names(f.get("vars", (0, "p, q, r"))[1])),
            depth,
            maxp,
        )

    def _build_derivation(self, b: RawBlock) -> DerivationBlock:
        calc, premises, steps = None, (), []
        for line, text in b.entries:
            if re.match(r"\d+\.", text):
                if calc is None:
                    raise _err(b, line, "'calculus' must precede the steps")
                try:
                    steps.append(parse_step(text, calc.signature, len(steps) + 1))
                except ParseError as e:
                    raise _err(b, line, e.message) from None
                continue
            key, _, val = text.partition(":")
            key = key.strip()
            if key == "calculus":
                calc = self.get("calculus", val.strip())
            elif key == "premises":
                if calc is None:
                    raise _err(b, line, "'calculus' must precede 'premises'")
                try:
                    premises = tuple(parse_formulas(val, calc.signature))
                except ParseError as e:
                    raise _err(b, line, e.message) from None
            else:
                raise _err(b, line, f"unrecognised entry {text!r}")
        if calc is None:
            raise _err(b, b.line, "needs 'calculus'")
        return DerivationBlock(b.name, calc.name, premises, Derivation(tuple(steps)))


def _parse_rule_body(text: str, sig: Signature):
    if text.count("|-") != 1:
        raise ParseError("a rule needs exactly one '|-'", 0)
    left, right = text.split("|-")
    return tuple(parse_formulas(left, sig)), parse_formula(right, sig)


def _parse_schema(words, rest, sig, star) -> RuleSchema:
    if len(words) < 2:
        raise ParseError("expected 'schema <kind> <name> ...'", 0)
    kind, name, args = words[0], words[1], words[2:]
    if kind == "axiom-guard" and len(args) == 2:
        prem, concl = _parse_rule_body(rest, sig)
        if prem:
            raise ParseError("axiom-guard payload must be an axiom", 0)
        return RuleSchema(kind, name, (Rule(args[0], (), concl), args[1]), star)
    if kind == "premise-splice" and len(args) == 2:
        prem, concl = _parse_rule_body(rest, sig)
        return RuleSchema(kind, name, (Rule(args[0], prem, concl), int(args[1])), star)
    if kind == "antitheorem" and len(args) == 1:
        return RuleSchema(kind, name, (tuple(parse_formulas(rest, sig)), args[0]), star)
    if kind == "rewrite" and len(args) == 1:
        if rest.count("==") != 1:
            raise ParseError("a rewrite payload is 'lhs == rhs'", 0)
        lhs, rhs = rest.split("==")
        return RuleSchema(kind, name, (args[0], Identity(parse_formula(lhs, sig), parse_formula(rhs, sig))), star)
    raise ParseError(f"malformed schema {kind!r}", 0)


# ---------------------------------------------------------------------------
# derivation steps

_STEP = re.compile(r"(\d+)\.\s+(.*?)\s+(premise|by\s+(\S+)(.*))\s*\Z")


def parse_step(text: str, sig: Signature, expected: int = None) -> Step:
    """Parse ``N. formula  premise`` or ``N. formula  by RULE [from i,j] [at POS] [rev] [with x := f; ...]``."""
    m = _STEP.match(text.strip())
    if not m:
        raise ParseError(f"malformed step {text!r}", 0)
    if expected is not None and int(m.group(1)) != expected:
        raise ParseError(f"step numbered {m.group(1)}, expected {expected}", 0)
    phi = parse_formula(m.group(2), sig)
    if m.group(3) == "premise":
        return Step(phi, Premise())
    rule, tail = m.group(4), m.group(5)
    refs, pos, rev, subst = (), None, False, None
    wm = re.search(r"\bwith\b(.*)\Z", tail)
    if wm:
        subst = {}
        for part in wm.group(1).split(";"):
            if not part.strip():
                continue
            v, sep, f = part.partition(":=")
            if not sep or not v.strip():
                raise ParseError(f"malformed binding {part.strip()!r}", 0)
            subst[v.strip()] = parse_formula(f, sig)
        subst = tuple(sorted(subst.items()))
        tail = tail[: wm.start()]
    words = tail.split()
    k = 0
    while k < len(words):
        w = words[k]
        if w == "from" and k + 1 < len(words):
            try:
                refs = tuple(int(r) for r in words[k + 1].split(","))
            except ValueError:
                raise ParseError(f"bad step references {words[k + 1]!r}", 0) from None
            k += 2
        elif w == "at" and k + 1 < len(words):
            p = words[k + 1]
            try:
                pos = () if p == "root" else tuple(int(s) for s in p.split("."))
            except ValueError:
                raise ParseError(f"bad position {p!r}", 0) from None
            k += 2
        elif w == "rev":
            rev = True
            k += 1
        else:
            raise ParseError(f"unexpected {w!r} in justification", 0)
    return Step(phi, By(rule, refs, subst, pos, rev))


def format_step(k: int, step: Step, sig: Signature) -> str:
    head = f"{k}. {format_formula(step.formula, sig)}"
    j = step.justification
    if isinstance(j, Premise):
        return f"{head}  premise"
    out = f"{head}  by {j.rule}"
    if j.refs:
        out += " from " + ",".join(str(r) for r in j.refs)
    if j.position is not None:
        out += " at " + (".".join(str(p) for p in j.position) if j.position else "root")
    if j.reverse:
        out += " rev"
    if j.subst:
        out += " with " + "; ".join(f"{v} := {format_formula(f, sig)}" for v, f in j.subst)
    return out


# ---------------------------------------------------------------------------
# emitters


def _fmt_elems(xs) -> str:
    return ", ".join(xs)


def emit_signature(sig: Signature) -> str:
    lines = [f"signature {sig.name} {{"]
    for sym, n in sig.arities:
        nt = sig.notation_of(sym)
        line = f"  op {sym}/{n}"
        if nt.fixity != "call" or nt.spellings:
            line += f": {nt.fixity} {' '.join(nt.spellings)}"
            if nt.prec:
                line += f" prec {nt.prec}"
            if nt.assoc:
                line += f" assoc {nt.assoc}"
        lines.append(line)
    lines.append("}")
    return "\n".join(lines)


def emit_algebra(A: FiniteAlgebra) -> str:
    lines = [f"algebra {A.name} {{", f"  signature: {A.signature.name}", f"  elements: {_fmt_elems(A.carrier)}"]
    for sym in A.signature.symbols:
        t = A.tables[sym]
        entries = []
        for tup in np.ndindex(t.shape):
            args = [A.carrier[i] for i in tup]
            lhs = args[0] if len(args) == 1 else f"({','.join(args)})"
            entries.append(f"{lhs}->{A.carrier[t[tup]]}")
        lines.append(f"  op {sym}/{t.ndim}: {', '.join(entries)}")
    lines.append("}")
    return "\n".join(lines)


def emit_semilattice(S: Semilattice) -> str:
    E = S.elements
    pairs = [f"({i},{j})->{S.join_table[(i, j)]}" for a, i in enumerate(E) for j in E[a + 1:]]
    body = f"  elements: {_fmt_elems(E)}"
    if pairs:
        body += f"\n  join: {', '.join(pairs)}"
    return f"semilattice {S.name} {{\n{body}\n}}"


def emit_matrix(m: LogicalMatrix, with_algebra: bool = True) -> str:
    out = []
    if with_algebra:
        out.append(emit_algebra(m.algebra))
    out.append(f"matrix {m.name} {{\n  algebra: {m.algebra.name}\n  filter: {_fmt_elems(m.filter_in_order())}\n}}")
    return "\n\n".join(out)


def emit_system(X: RDirectSystem, name: str) -> str:
    """Semilattice, fiber matrices (with algebras) and the system block."""
    parts = [emit_semilattice(X.index)]
    seen_alg, seen_mat = set(), set()
    for i in X.index.elements:
        m = X.fibers[i]
        if m.name in seen_mat:
            continue
        seen_mat.add(m.name)
        parts.append(emit_matrix(m, with_algebra=m.algebra.name not in seen_alg))
        seen_alg.add(m.algebra.name)
    lines = [f"system {name} {{", f"  index: {X.index.name}"]
    for i in X.index.elements:
        lines.append(f"  fiber {i}: {X.fibers[i].name}")
    for i, j in X.index.pairs_below():
        if i == j:
            continue
        f = X.hom(i, j)
        lines.append(f"  hom ({i},{j}): " + ", ".join(f"{a}->{f[a]}" for a in X.algebra(i).carrier))
    lines.append("}")
    parts.append("\n".join(lines))
    return "\n\n".join(parts)


def _fmt_rule_body(premises, conclusion, sig) -> str:
    prem = ", ".join(format_formula(p, sig) for p in premises)
    return f"{prem} |- {format_formula(conclusion, sig)}" if prem else f"|- {format_formula(conclusion, sig)}"


def emit_calculus(C: Calculus) -> str:
    sig = C.signature
    lines = [f"calculus {C.name} {{", f"  signature: {sig.name}"]
    if C.star is not None:
        lines.append(f"  star: {format_formula(C.star, sig)}")
    for r in C.rules:
        if r.is_axiom:
            lines.append(f"  axiom {r.name}: {format_formula(r.conclusion, sig)}")
        else:
            lines.append(f"  rule {r.name}: {_fmt_rule_body(r.premises, r.conclusion, sig)}")
    for s in C.schemas:
        if s.kind == "axiom-guard":
            ax, g = s.payload
            lines.append(f"  schema {s.kind} {s.name} {ax.name} {g}: |- {format_formula(ax.conclusion, sig)}")
        elif s.kind == "premise-splice":
            r, i = s.payload
            lines.append(f"  schema {s.kind} {s.name} {r.name} {i}: {_fmt_rule_body(r.premises, r.conclusion, sig)}")
        elif s.kind == "antitheorem":
            sigma, a = s.payload
            lines.append(f"  schema {s.kind} {s.name} {a}: {', '.join(format_formula(f, sig) for f in sigma)}")
        else:
            label, e = s.payload
            lines.append(
                f"  schema {s.kind} {s.name} {label}: {format_formula(e.lhs, sig)} == {format_formula(e.rhs, sig)}"
            )
    lines.append("}")
    return "\n".join(lines)


def emit_derivation(name: str, C: Calculus, premises, d: Derivation) -> str:
    sig = C.signature
    lines = [f"derivation {name} {{", f"  calculus: {C.name}"]
    if premises:
        lines.append("  premises: " + ", ".join(format_formula(p, sig) for p in premises))
    for k, s in enumerate(d.steps, 1):
        lines.append("  " + format_step(k, s, sig))
    lines.append("}")
    return "\n".join(lines)
