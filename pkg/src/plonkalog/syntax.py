"""Signatures, formulas, substitutions and the concrete formula syntax.

Formulas are immutable trees built from :class:`Var` and :class:`App`.
Parsing and printing are driven by a :class:`Signature`, which carries the
arity of each symbol together with optional notation (prefix spellings for
unary symbols, infix spellings with precedence for binary ones).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Optional, Union

from .errors import ParseError, SignatureError

NAME_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*\Z")
VAR_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    symbol: str
    args: tuple

    def __str__(self):
        return f"{self.symbol}({', '.join(str(a) for a in self.args)})"


Formula = Union[Var, App]
Substitution = Mapping[str, Formula]


@dataclass(frozen=True)
class Notation:
    """Surface syntax of one symbol.

    ``fixity`` is ``"prefix"`` (unary only), ``"infix"`` (binary only) or
    ``"call"``.  The first spelling is the one used by the printer.
    """

    fixity: str = "call"
    spellings: tuple = ()
    prec: int = 0
    assoc: Optional[str] = None  # "left", "right" or None (parenthesise chains)


@dataclass(frozen=True)
class Signature:
    name: str
    arities: tuple  # ((symbol, arity), ...) in declaration order
    notation: tuple = ()  # ((symbol, Notation), ...)

    def __post_init__(self):
        seen = set()
        for sym, n in self.arities:
            if not NAME_RE.match(sym):
                raise SignatureError(f"bad symbol name {sym!r}")
            if sym in seen:
                raise SignatureError(f"duplicate symbol {sym!r}")
            if not isinstance(n, int) or n < 1:
                raise SignatureError(f"symbol {sym!r}: arity must be >= 1 (no constants)")
            seen.add(sym)
        for sym, nt in self.notation:
            if sym not in seen:
                raise SignatureError(f"notation for undeclared symbol {sym!r}")
            n = self.arity(sym)
            if nt.fixity == "prefix" and n != 1:
                raise SignatureError(f"prefix notation needs a unary symbol, {sym!r} has arity {n}")
            if nt.fixity == "infix" and n != 2:
                raise SignatureError(f"infix notation needs a binary symbol, {sym!r} has arity {n}")

    @classmethod
    def of(cls, name: str, arities: Mapping[str, int], notation: Mapping[str, Notation] = None):
        return cls(name, tuple(arities.items()), tuple((notation or {}).items()))

    @property
    def symbols(self) -> tuple:
        return tuple(s for s, _ in self.arities)

    def arity(self, symbol: str) -> int:
        for s, n in self.arities:
            if s == symbol:
                return n
        raise SignatureError(f"unknown symbol {symbol!r}")

    def __contains__(self, symbol):
        return any(s == symbol for s, _ in self.arities)

    def notation_of(self, symbol: str) -> Notation:
        for s, nt in self.notation:
            if s == symbol:
                return nt
        return Notation()

    def same_symbols(self, other: "Signature") -> bool:
        return dict(self.arities) == dict(other.arities)

    def restrict(self, symbols: Iterable[str], name: str = None) -> "Signature":
        keep = set(symbols)
        return Signature(
            name or self.name,
            tuple((s, n) for s, n in self.arities if s in keep),
            tuple((s, nt) for s, nt in self.notation if s in keep),
        )

    def reserved_words(self) -> set:
        words = set(self.symbols)
        for _, nt in self.notation:
            words.update(w for w in nt.spellings if NAME_RE.match(w))
        return words


# ---------------------------------------------------------------------------
# tree utilities


def var(name: str) -> Var:
    return Var(name)


def app(symbol: str, *args: Formula) -> App:
    return App(symbol, tuple(args))


def vars_of(phi) -> frozenset:
    """Variables occurring in a formula or in any formula of a collection."""
    if isinstance(phi, (Var, App)):
        out = set()
        _collect_vars(phi, out)
        return frozenset(out)
    out = set()
    for f in phi:
        _collect_vars(f, out)
    return frozenset(out)


def _collect_vars(phi, out):
    if isinstance(phi, Var):
        out.add(phi.name)
    else:
        for a in phi.args:
            _collect_vars(a, out)


def ordered_vars(phi) -> list:
    """Variables in order of first occurrence (left to right, depth first)."""
    seen = {}

    def walk(f):
        if isinstance(f, Var):
            seen.setdefault(f.name, None)
        else:
            for a in f.args:
                walk(a)

    if isinstance(phi, (Var, App)):
        walk(phi)
    else:
        for f in phi:
            walk(f)
    return list(seen)


def symbols_of(phi) -> frozenset:
    out = set()

    def walk(f):
        if isinstance(f, App):
            out.add(f.symbol)
            for a in f.args:
                walk(a)

    if isinstance(phi, (Var, App)):
        walk(phi)
    else:
        for f in phi:
            walk(f)
    return frozenset(out)


def depth(phi: Formula) -> int:
    if isinstance(phi, Var):
        return 0
    return 1 + max(depth(a) for a in phi.args)


def size(phi: Formula) -> int:
    if isinstance(phi, Var):
        return 1
    return 1 + sum(size(a) for a in phi.args)


def substitute(phi: Formula, sigma: Substitution) -> Formula:
    """Simultaneous substitution; variables outside ``sigma`` stay fixed."""
    if isinstance(phi, Var):
        return sigma.get(phi.name, phi)
    new_args = tuple(substitute(a, sigma) for a in phi.args)
    if all(n is o for n, o in zip(new_args, phi.args)):
        return phi
    return App(phi.symbol, new_args)


def match_formula(pattern: Formula, target: Formula, sigma: dict = None) -> Optional[dict]:
    """One-sided first-order matching.

    Returns the substitution over ``vars_of(pattern)`` (extending ``sigma`` if
    given) that maps ``pattern`` onto ``target``, or ``None``.  Repeated
    pattern variables must match identical subterms.
    """
    out = dict(sigma) if sigma else {}
    return out if _match(pattern, target, out) else None


def _match(p, t, out) -> bool:
    if isinstance(p, Var):
        bound = out.get(p.name)
        if bound is None:
            out[p.name] = t
            return True
        return bound == t
    if not isinstance(t, App) or t.symbol != p.symbol or len(t.args) != len(p.args):
        return False
    return all(_match(pa, ta, out) for pa, ta in zip(p.args, t.args))


def match_all(patterns, targets, sigma: dict = None) -> Optional[dict]:
    """Match a sequence of patterns against a sequence of targets jointly."""
    if len(patterns) != len(targets):
        return None
    out = dict(sigma) if sigma else {}
    for p, t in zip(patterns, targets):
        if not _match(p, t, out):
            return None
    return out


def positions(phi: Formula, prefix: tuple = ()) -> Iterator[tuple]:
    """All positions (paths of argument indices) in pre-order."""
    yield prefix
    if isinstance(phi, App):
        for i, a in enumerate(phi.args):
            yield from positions(a, prefix + (i,))


def subterm_at(phi: Formula, pos: tuple) -> Formula:
    for i in pos:
        if not isinstance(phi, App) or not 0 <= i < len(phi.args):
            raise IndexError(f"no subterm at position {'.'.join(map(str, pos)) or 'root'}")
        phi = phi.args[i]
    return phi


def replace_at(phi: Formula, pos: tuple, new: Formula) -> Formula:
    if not pos:
        return new
    if not isinstance(phi, App) or not 0 <= pos[0] < len(phi.args):
        raise IndexError("position outside formula")
    args = list(phi.args)
    args[pos[0]] = replace_at(args[pos[0]], pos[1:], new)
    return App(phi.symbol, tuple(args))


def subformulas(phi: Formula) -> list:
    """Distinct subformulas, children before parents."""
    out = {}

    def walk(f):
        if isinstance(f, App):
            for a in f.args:
                walk(a)
        out.setdefault(f, None)

    walk(phi)
    return list(out)


def fresh_var(used: Iterable[str], stem: str = "y") -> str:
    used = set(used)
    if stem not in used:
        return stem
    i = 1
    while f"{stem}{i}" in used:
        i += 1
    return f"{stem}{i}"


def check_formula(phi: Formula, sig: Signature) -> None:
    if isinstance(phi, Var):
        return
    if phi.symbol not in sig:
        raise SignatureError(f"unknown symbol {phi.symbol!r} for signature {sig.name}")
    if sig.arity(phi.symbol) != len(phi.args):
        raise SignatureError(
            f"symbol {phi.symbol!r} expects {sig.arity(phi.symbol)} arguments, got {len(phi.args)}"
        )
    for a in phi.args:
        check_formula(a, sig)


@dataclass(frozen=True)
class Sequent:
    premises: frozenset
    conclusion: Formula

    @classmethod
    def of(cls, premises: Iterable[Formula], conclusion: Formula) -> "Sequent":
        return cls(frozenset(premises), conclusion)


# ---------------------------------------------------------------------------
# lexer / parser

_PUNCT = ("(", ")", ",")


@dataclass
class _Tok:
    kind: str  # "ident", "op", "punct", "end"
    text: str
    pos: int


def _tokenize(text: str, sig: Signature) -> list:
    op_spellings = sorted(
        {w for _, nt in sig.notation for w in nt.spellings if not NAME_RE.match(w)},
        key=len,
        reverse=True,
    )
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if c in _PUNCT:
            toks.append(_Tok("punct", c, i))
            i += 1
            continue
        m = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*").match(text, i)
        if m:
            toks.append(_Tok("ident", m.group(), i))
            i = m.end()
            continue
        for sp in op_spellings:
            if text.startswith(sp, i):
                toks.append(_Tok("op", sp, i))
                i += len(sp)
                break
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.toks = _tokenize(text, sig)
        self.i = 0
        self.prefix = {}
        self.infix = {}
        for sym, nt in sig.notation:
            for w in nt.spellings:
                if nt.fixity == "prefix":
                    self.prefix[w] = sym
                elif nt.fixity == "infix":
                    self.infix[w] = sym
        self.reserved = sig.reserved_words()

    @property
    def tok(self):
        return self.toks[self.i]

    def advance(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text):
        t = self.tok
        if t.text != text or t.kind == "end":
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)
        return self.advance()

    def parse(self) -> Formula:
        f = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return f

    def _infix_here(self):
        t = self.tok
        if t.kind in ("op", "ident") and t.text in self.infix:
            return self.infix[t.text]
        return None

    def expr(self) -> Formula:
        # operator-precedence parse; ambiguity (equal precedence without a
        # declared associativity) is a syntax error.
        operands = [self.unary()]
        ops = []
        while True:
            sym = self._infix_here()
            if sym is None:
                break
            ops.append((sym, self.advance()))
            operands.append(self.unary())
        return self._fold(operands, ops)

    def _fold(self, operands, ops):
        if not ops:
            return operands[0]
        # pick the loosest-binding operator; ties resolved by associativity
        precs = [self.sig.notation_of(s).prec for s, _ in ops]
        low = min(precs)
        idx = [k for k, p in enumerate(precs) if p == low]
        syms = {ops[k][0] for k in idx}
        if len(idx) > 1:
            if len(syms) > 1:
                t = ops[idx[1]][1]
                raise ParseError("ambiguous mix of operators with equal precedence; add parentheses", t.pos)
            assoc = self.sig.notation_of(ops[idx[0]][0]).assoc
            if assoc is None:
                t = ops[idx[1]][1]
                raise ParseError(
                    f"chained non-associative operator {t.text!r}; add parentheses", t.pos
                )
            k = idx[-1] if assoc == "left" else idx[0]
        else:
            k = idx[0]
        left = self._fold(operands[: k + 1], ops[:k])
        right = self._fold(operands[k + 1 :], ops[k + 1 :])
        return App(ops[k][0], (left, right))

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.pos)
        if t.kind in ("op", "ident") and t.text in self.prefix:
            # `neg(p, q)`-style call of a prefix symbol is not valid; `neg (p)` is
            self.advance()
            return App(self.prefix[t.text], (self.unary(),))
        return self.primary()

    def primary(self) -> Formula:
        t = self.tok
        if t.kind == "punct" and t.text == "(":
            self.advance()
            f = self.expr()
            self.expect(")")
            return f
        if t.kind == "ident":
            nxt = self.toks[self.i + 1]
            if nxt.kind == "punct" and nxt.text == "(" and t.text in self.sig:
                return self.call()
            if t.text in self.reserved or t.text in self.sig:
                raise ParseError(f"symbol {t.text!r} used as a variable", t.pos)
            if nxt.kind == "punct" and nxt.text == "(":
                raise ParseError(f"unknown symbol {t.text!r}", t.pos)
            if not VAR_RE.match(t.text):
                raise ParseError(f"bad variable name {t.text!r} (must start lowercase)", t.pos)
            self.advance()
            return Var(t.text)
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)

    def call(self) -> Formula:
        name = self.advance()
        self.expect("(")
        args = [self.expr()]
        while self.tok.text == "," and self.tok.kind == "punct":
            self.advance()
            args.append(self.expr())
        self.expect(")")
        n = self.sig.arity(name.text)
        if len(args) != n:
            raise ParseError(
                f"arity mismatch: {name.text!r} expects {n} arguments, got {len(args)}", name.pos
            )
        return App(name.text, tuple(args))


def parse_formula(text: str, sig: Signature) -> Formula:
    """Parse ``text`` into a formula over ``sig``.

    Raises :class:`ParseError` (with a character offset) on syntax errors,
    unknown symbols and arity mismatches.
    """
    return _Parser(text, sig).parse()


def split_top_level(text: str, sep: str = ",") -> list:
    """Split on ``sep`` outside parentheses (used for premise lists)."""
    parts, depth_, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth_ += 1
        elif ch == ")":
            depth_ -= 1
        if ch == sep and depth_ == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def parse_formulas(text: str, sig: Signature) -> list:
    if not text.strip():
        return []
    out = []
    offset = 0
    for part in split_top_level(text):
        if not part.strip():
            raise ParseError("empty formula in list", offset)
        try:
            out.append(parse_formula(part, sig))
        except ParseError as e:
            raise ParseError(e.message, offset + e.position) from None
        offset += len(part) + 1
    return out


def parse_sequent(text: str, sig: Signature, turnstile: str = "|-") -> Sequent:
    """Parse ``"phi1, ..., phin |- phi"``; the conclusion is mandatory."""
    if text.count(turnstile) != 1:
        raise ParseError(f"a sequent needs exactly one {turnstile!r}", 0)
    left, right = text.split(turnstile)
    if not right.strip():
        raise ParseError("missing conclusion", len(text))
    prem = parse_formulas(left, sig)
    try:
        concl = parse_formula(right, sig)
    except ParseError as e:
        raise ParseError(e.message, len(left) + len(turnstile) + e.position) from None
    return Sequent.of(prem, concl)


# ---------------------------------------------------------------------------
# printer


def format_formula(phi: Formula, sig: Signature) -> str:
    """Deterministic rendering that parses back to ``phi``."""
    return _fmt(phi, sig)


def _fmt(phi, sig) -> str:
    if isinstance(phi, Var):
        return phi.name
    nt = sig.notation_of(phi.symbol) if phi.symbol in sig else Notation()
    if nt.fixity == "prefix":
        arg = phi.args[0]
        inner = _fmt(arg, sig)
        if _is_infix(arg, sig):
            inner = f"({inner})"
        sp = nt.spellings[0]
        if NAME_RE.match(sp) or (inner[0].isalpha() is False and inner[0] not in "(_"):
            # word operators need a separator; symbolic ones do when the
            # operand starts with another operator glyph
            return f"{sp} {inner}"
        return f"{sp}{inner}"
    if nt.fixity == "infix":
        left, right = phi.args
        ls, rs = _fmt(left, sig), _fmt(right, sig)
        if _needs_parens(left, phi.symbol, sig, "left"):
            ls = f"({ls})"
        if _needs_parens(right, phi.symbol, sig, "right"):
            rs = f"({rs})"
        return f"{ls} {nt.spellings[0]} {rs}"
    return f"{phi.symbol}({', '.join(_fmt(a, sig) for a in phi.args)})"


def _is_infix(phi, sig) -> bool:
    return isinstance(phi, App) and phi.symbol in sig and sig.notation_of(phi.symbol).fixity == "infix"


def _needs_parens(child, parent_sym, sig, side) -> bool:
    if not _is_infix(child, sig):
        return False
    pn, cn = sig.notation_of(parent_sym), sig.notation_of(child.symbol)
    if cn.prec > pn.prec:
        return False
    if cn.prec < pn.prec:
        return True
    return not (child.symbol == parent_sym and pn.assoc == side)
