"""Formula representation, parsing, printing, measures, fragment checks.

Formulas are interned: building the same shape twice yields the same object,
so structural equality is identity and sets/dicts over formulas are cheap
even for the large generated benchmark formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional


class FormulaError(Exception):
    pass


class ParseError(FormulaError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UndeclaredAtomError(ParseError):
    pass


@dataclass(frozen=True, eq=False)
class Formula:
    def __str__(self) -> str:
        return fmt(self)


@dataclass(frozen=True, eq=False)
class Atom(Formula):
    name: str


@dataclass(frozen=True, eq=False)
class Bottom(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Top(Formula):
    pass


@dataclass(frozen=True, eq=False)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True, eq=False)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True, eq=False)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Release(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False)
class Eventually(Formula):
    arg: Formula


@dataclass(frozen=True, eq=False)
class Always(Formula):
    arg: Formula


_INTERN: dict = {}


def _mk(cls, *args) -> Formula:
    key = (cls, args)
    node = _INTERN.get(key)
    if node is None:
        node = cls(*args)
        _INTERN[key] = node
    return node


def atom(name: str) -> Formula:
    return _mk(Atom, name)


def bottom() -> Formula:
    return _mk(Bottom)


def top() -> Formula:
    return _mk(Top)


def not_(f: Formula) -> Formula:
    return _mk(Not, f)


def and_(l: Formula, r: Formula) -> Formula:
    return _mk(And, l, r)


def or_(l: Formula, r: Formula) -> Formula:
    return _mk(Or, l, r)


def implies(l: Formula, r: Formula) -> Formula:
    return _mk(Implies, l, r)


def next_(f: Formula) -> Formula:
    return _mk(Next, f)


def until(l: Formula, r: Formula) -> Formula:
    return _mk(Until, l, r)


def release(l: Formula, r: Formula) -> Formula:
    return _mk(Release, l, r)


def eventually(f: Formula) -> Formula:
    return _mk(Eventually, f)


def always(f: Formula) -> Formula:
    return _mk(Always, f)


def conj(fs: Iterable[Formula]) -> Formula:
    """Right-nested conjunction; empty conjunction is `true`."""
    fs = list(fs)
    if not fs:
        return top()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = and_(f, out)
    return out


def disj(fs: Iterable[Formula]) -> Formula:
    """Right-nested disjunction; empty disjunction is `false`."""
    fs = list(fs)
    if not fs:
        return bottom()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = or_(f, out)
    return out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (Atom, Bottom, Top)):
        return ()
    if isinstance(f, (Not, Next, Eventually, Always)):
        return (f.arg,)
    return (f.left, f.right)


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas of f, children before parents."""
    seen: set[int] = set()
    out: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if id(node) in seen:
            continue
        if expanded:
            seen.add(id(node))
            out.append(node)
        else:
            stack.append((node, True))
            for c in children(node):
                if id(c) not in seen:
                    stack.append((c, False))
    return out


def size(f: Formula) -> int:
    """Number of distinct subformulas."""
    return len(subformulas(f))


def atoms_of(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in subformulas(f) if isinstance(g, Atom))


_TEMPORAL = (Next, Until, Release, Eventually, Always)


@dataclass(frozen=True)
class FragmentProfile:
    """Structural measures computed on the surface syntax."""

    modalities: frozenset[str]
    temporal_height: int
    implication_height: int
    next_depth: int
    size: int


def measures(f: Formula) -> FragmentProfile:
    temp: dict[int, int] = {}
    impl: dict[int, int] = {}
    nxt: dict[int, int] = {}
    mods: set[str] = set()
    for g in subformulas(f):
        cs = children(g)
        t = max((temp[id(c)] for c in cs), default=0)
        k = max((impl[id(c)] for c in cs), default=0)
        d = max((nxt[id(c)] for c in cs), default=0)
        if isinstance(g, _TEMPORAL):
            t += 1
        if isinstance(g, (Not, Implies)):
            k += 1
        if isinstance(g, Next):
            d += 1
            mods.add("X")
        elif isinstance(g, Until):
            mods.add("U")
        elif isinstance(g, Release):
            mods.add("R")
        elif isinstance(g, Eventually):
            mods.add("F")
        elif isinstance(g, Always):
            mods.add("G")
        temp[id(g)] = t
        impl[id(g)] = k
        nxt[id(g)] = d
    return FragmentProfile(
        modalities=frozenset(mods),
        temporal_height=temp[id(f)],
        implication_height=impl[id(f)],
        next_depth=nxt[id(f)],
        size=size(f),
    )


@dataclass(frozen=True)
class FragmentSpec:
    """Descriptor for a fragment THT_m^k(O1,...): allowed modalities with
    optional bounds on temporal and implication height (None = unbounded)."""

    modalities: frozenset[str]
    max_temporal: Optional[int] = None
    max_implication: Optional[int] = None

    @staticmethod
    def of(mods: Iterable[str], m: Optional[int] = None, k: Optional[int] = None) -> "FragmentSpec":
        return FragmentSpec(frozenset(mods), m, k)


def in_fragment(f: Formula, spec: FragmentSpec) -> bool:
    p = measures(f)
    if not p.modalities <= spec.modalities:
        return False
    if spec.max_temporal is not None and p.temporal_height > spec.max_temporal:
        return False
    if spec.max_implication is not None and p.implication_height > spec.max_implication:
        return False
    return True


def desugar(f: Formula) -> Formula:
    """Rewrite to the core constructors: ~a = a -> false, true = false -> false,
    F a = true U a, G a = false R a. Idempotent; preserves satisfaction."""
    memo: dict[int, Formula] = {}
    for g in subformulas(f):
        cs = [memo[id(c)] for c in children(g)]
        if isinstance(g, Top):
            out = implies(bottom(), bottom())
        elif isinstance(g, Not):
            out = implies(cs[0], bottom())
        elif isinstance(g, Eventually):
            out = until(implies(bottom(), bottom()), cs[0])
        elif isinstance(g, Always):
            out = release(bottom(), cs[0])
        elif isinstance(g, (Atom, Bottom)):
            out = g
        elif isinstance(g, And):
            out = and_(*cs)
        elif isinstance(g, Or):
            out = or_(*cs)
        elif isinstance(g, Implies):
            out = implies(*cs)
        elif isinstance(g, Next):
            out = next_(cs[0])
        elif isinstance(g, Until):
            out = until(*cs)
        else:
            out = release(*cs)
        memo[id(g)] = out
    return memo[id(f)]


# --- concrete syntax ---------------------------------------------------------
#
# Precedence, tightest first: unary {~, X, F, G}; U, R (right-assoc);
# &; |; -> (right-assoc). Atoms are [A-Za-z_][A-Za-z0-9_]* except the
# reserved words below.

RESERVED = {"X", "U", "R", "F", "G", "true", "false"}

_TOKEN = re.compile(r"\s*(->|[~&|()]|[A-Za-z_][A-Za-z0-9_]*)")


def _tokenize(text: str) -> list[tuple[str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
        toks.append((m.group(1), m.start(1)))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, atoms: Optional[frozenset[str]]):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.atoms = atoms

    def peek(self) -> Optional[str]:
        return self.toks[self.i][0] if self.i < len(self.toks) else None

    def offset(self) -> int:
        return self.toks[self.i][1] if self.i < len(self.toks) else len(self.text)

    def eat(self) -> str:
        tok = self.toks[self.i][0]
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        if self.peek() is not None:
            raise ParseError(f"unexpected token {self.peek()!r}", self.offset())
        return f

    def implication(self) -> Formula:
        lhs = self.disjunction()
        if self.peek() == "->":
            self.eat()
            return implies(lhs, self.implication())
        return lhs

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "|":
            self.eat()
            f = or_(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.until_release()
        while self.peek() == "&":
            self.eat()
            f = and_(f, self.until_release())
        return f

    def until_release(self) -> Formula:
        lhs = self.unary()
        tok = self.peek()
        if tok in ("U", "R"):
            self.eat()
            rhs = self.until_release()
            return until(lhs, rhs) if tok == "U" else release(lhs, rhs)
        return lhs

    def unary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise ParseError("missing operand", self.offset())
        if tok == "~":
            self.eat()
            return not_(self.unary())
        if tok == "X":
            self.eat()
            return next_(self.unary())
        if tok == "F":
            self.eat()
            return eventually(self.unary())
        if tok == "G":
            self.eat()
            return always(self.unary())
        if tok == "(":
            self.eat()
            f = self.implication()
            if self.peek() != ")":
                raise ParseError("missing ')'", self.offset())
            self.eat()
            return f
        if tok == "true":
            self.eat()
            return top()
        if tok == "false":
            self.eat()
            return bottom()
        if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) and tok not in RESERVED:
            off = self.offset()
            self.eat()
            if self.atoms is not None and tok not in self.atoms:
                raise UndeclaredAtomError(f"undeclared atom {tok!r}", off)
            return atom(tok)
        raise ParseError(f"unexpected token {tok!r}", self.offset())


def parse(text: str, atoms: Optional[Iterable[str]] = None) -> Formula:
    """Parse a formula. When `atoms` is given, identifiers outside it are
    rejected; otherwise every non-reserved identifier is accepted as an atom."""
    declared = frozenset(atoms) if atoms is not None else None
    if declared is not None:
        bad = declared & RESERVED
        if bad:
            raise FormulaError(f"reserved words cannot be atoms: {sorted(bad)}")
    return _Parser(text, declared).parse()


_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_UR, _PREC_UNARY = 1, 2, 3, 4, 5


def _prec(f: Formula) -> int:
    if isinstance(f, Implies):
        return _PREC_IMPLIES
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, (Until, Release)):
        return _PREC_UR
    return _PREC_UNARY


def fmt(f: Formula) -> str:
    """Canonical text form; parse(fmt(f)) rebuilds f exactly."""
    memo: dict[int, str] = {}

    def wrap(child: Formula, minimum: int) -> str:
        s = memo[id(child)]
        return f"({s})" if _prec(child) < minimum else s

    for g in subformulas(f):
        if isinstance(g, Atom):
            memo[id(g)] = g.name
        elif isinstance(g, Bottom):
            memo[id(g)] = "false"
        elif isinstance(g, Top):
            memo[id(g)] = "true"
        elif isinstance(g, Not):
            memo[id(g)] = "~" + wrap(g.arg, _PREC_UNARY)
        elif isinstance(g, (Next, Eventually, Always)):
            op = {"Next": "X", "Eventually": "F", "Always": "G"}[type(g).__name__]
            inner = memo[id(g.arg)]
            if _prec(g.arg) < _PREC_UNARY:
                memo[id(g)] = f"{op}({inner})"
            else:
                memo[id(g)] = f"{op} {inner}"
        elif isinstance(g, Until):
            # right-associative: parenthesize a left child at the same level
            memo[id(g)] = f"{wrap(g.left, _PREC_UR + 1)} U {wrap(g.right, _PREC_UR)}"
        elif isinstance(g, Release):
            memo[id(g)] = f"{wrap(g.left, _PREC_UR + 1)} R {wrap(g.right, _PREC_UR)}"
        elif isinstance(g, And):
            memo[id(g)] = f"{wrap(g.left, _PREC_AND)} & {wrap(g.right, _PREC_AND + 1)}"
        elif isinstance(g, Or):
            memo[id(g)] = f"{wrap(g.left, _PREC_OR)} | {wrap(g.right, _PREC_OR + 1)}"
        elif isinstance(g, Implies):
            memo[id(g)] = f"{wrap(g.left, _PREC_IMPLIES + 1)} -> {wrap(g.right, _PREC_IMPLIES)}"
    return memo[id(f)]


MODALITY_ORDER = "XFGUR"


def fragment_name(p: FragmentProfile) -> str:
    """Render a profile in the THT_m^k(O...) fragment notation."""
    mods = ",".join(sorted(p.modalities, key=MODALITY_ORDER.index))
    return f"THT_{p.temporal_height}^{p.implication_height}({mods})" if mods else (
        f"THT_{p.temporal_height}^{p.implication_height}"
    )
