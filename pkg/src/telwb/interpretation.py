"""Ultimately periodic interpretations (lassos), pairs, orders, contraction.

A lasso is a finite stem followed by a nonempty loop repeated forever.
Pairs (H, T) are kept aligned: equal stem length, equal loop length, and
H(i) <= T(i) pointwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

Letter = frozenset


class LassoError(Exception):
    pass


class ContainmentError(LassoError):
    def __init__(self, position: int):
        super().__init__(f"here-letter not contained in there-letter at position {position}")
        self.position = position


def letter(atoms: Iterable[str] = ()) -> Letter:
    return frozenset(atoms)


@dataclass(frozen=True)
class Lasso:
    atoms: frozenset
    stem: tuple
    loop: tuple

    def __post_init__(self):
        if not self.loop:
            raise LassoError("loop must be nonempty")
        for a in self.stem + self.loop:
            if not a <= self.atoms:
                raise LassoError(f"letter {set(a)} uses atoms outside {set(self.atoms)}")

    @staticmethod
    def make(atoms: Iterable[str], stem: Sequence[Iterable[str]], loop: Sequence[Iterable[str]]) -> "Lasso":
        return Lasso(frozenset(atoms), tuple(map(frozenset, stem)), tuple(map(frozenset, loop)))

    @property
    def n_positions(self) -> int:
        return len(self.stem) + len(self.loop)

    @property
    def loop_start(self) -> int:
        return len(self.stem)

    def index(self, i: int) -> int:
        """Table index for position i, reduced by loop periodicity."""
        s = len(self.stem)
        return i if i < s else s + (i - s) % len(self.loop)

    def letter(self, i: int) -> Letter:
        s = len(self.stem)
        return self.stem[i] if i < s else self.loop[(i - s) % len(self.loop)]

    def letters(self) -> tuple:
        return self.stem + self.loop

    def with_shape(self, stem_len: int, loop_len: int) -> "Lasso":
        """Rewrite to a given stem length >= |stem| and loop length that is a
        multiple of the primitive loop; the represented word is unchanged."""
        if stem_len < len(self.stem):
            raise LassoError("cannot shorten the stem")
        if loop_len % len(self.loop) != 0:
            raise LassoError("new loop length must be a multiple of the old one")
        stem = tuple(self.letter(i) for i in range(stem_len))
        loop = tuple(self.letter(stem_len + j) for j in range(loop_len))
        return Lasso(self.atoms, stem, loop)

    def canonical(self) -> "Lasso":
        """Unique minimal representation: primitive loop, shortest stem."""
        loop = list(self.loop)
        n = len(loop)
        for p in range(1, n + 1):
            if n % p == 0 and all(loop[i] == loop[i % p] for i in range(n)):
                loop = loop[:p]
                break
        stem = list(self.stem)
        while stem and stem[-1] == loop[-1]:
            stem.pop()
            loop = [loop[-1]] + loop[:-1]
        return Lasso(self.atoms, tuple(stem), tuple(loop))

    def to_text(self) -> str:
        def block(ls):
            return " ".join("{" + ",".join(sorted(a)) + "}" for a in ls)

        return (
            f"atoms: {' '.join(sorted(self.atoms))}\n"
            f"stem: {block(self.stem)}\n"
            f"loop: {block(self.loop)}\n"
        )

    def to_inline(self) -> str:
        def block(ls):
            return ".".join("{" + ",".join(sorted(a)) + "}" for a in ls)

        return f"{block(self.stem)}/{block(self.loop)}"


def _parse_letter(tok: str) -> Letter:
    if not (tok.startswith("{") and tok.endswith("}")):
        raise LassoError(f"bad letter {tok!r}, expected {{a,b}} or {{}}")
    inner = tok[1:-1].strip()
    return frozenset(x.strip() for x in inner.split(",") if x.strip()) if inner else frozenset()


def _parse_letter_row(text: str) -> tuple:
    return tuple(_parse_letter(tok) for tok in text.split())


def lasso_from_text(text: str) -> Lasso:
    """Parse the three-line lasso block: atoms:, stem:, loop:."""
    fields = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        key = key.strip()
        if key not in ("atoms", "stem", "loop"):
            raise LassoError(f"unexpected line {line!r}")
        if key in fields:
            raise LassoError(f"duplicate {key!r} line")
        fields[key] = rest.strip()
    if "atoms" not in fields or "loop" not in fields:
        raise LassoError("lasso block needs atoms: and loop: lines")
    atoms = frozenset(fields["atoms"].split())
    stem = _parse_letter_row(fields.get("stem", ""))
    loop = _parse_letter_row(fields["loop"])
    return Lasso(atoms, stem, loop)


def lasso_from_inline(text: str, atoms: Iterable[str]) -> Lasso:
    stem_part, sep, loop_part = text.partition("/")
    if not sep:
        raise LassoError("inline lasso must look like {a}.{}/{b}")
    stem = tuple(_parse_letter(t) for t in stem_part.split(".") if t)
    loop = tuple(_parse_letter(t) for t in loop_part.split(".") if t)
    return Lasso(frozenset(atoms), stem, loop)


@dataclass(frozen=True)
class ThtPair:
    here: Lasso
    there: Lasso

    def __post_init__(self):
        h, t = self.here, self.there
        if h.atoms != t.atoms:
            raise LassoError("pair components must share one atom set")
        if len(h.stem) != len(t.stem) or len(h.loop) != len(t.loop):
            raise LassoError("pair components must be aligned")
        for i in range(h.n_positions):
            if not h.letter(i) <= t.letter(i):
                raise ContainmentError(i)

    @property
    def n_positions(self) -> int:
        return self.here.n_positions

    @property
    def loop_start(self) -> int:
        return self.here.loop_start

    def pair_letters(self) -> tuple:
        h, t = self.here, self.there
        return tuple((h.letter(i), t.letter(i)) for i in range(h.n_positions))

    def is_total(self) -> bool:
        return all(h == t for h, t in self.pair_letters())


def total(t: Lasso) -> ThtPair:
    return ThtPair(t, t)


def align(here: Lasso, there: Lasso) -> ThtPair:
    """Rewrite both lassos to a common shape and validate containment."""
    if here.atoms != there.atoms:
        raise LassoError("pair components must share one atom set")
    s = max(len(here.stem), len(there.stem))
    l = math.lcm(len(here.loop), len(there.loop))
    return ThtPair(here.with_shape(s, l), there.with_shape(s, l))


def pair_from_text(text: str) -> ThtPair:
    """Parse a pair file: a block headed `H:` and a block headed `T:`."""
    blocks: dict[str, list[str]] = {}
    current: Optional[str] = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line in ("H:", "T:"):
            current = line[0]
            blocks[current] = []
            continue
        if current is None:
            raise LassoError("pair file must start with an H: or T: header")
        blocks[current].append(line)
    if set(blocks) != {"H", "T"}:
        raise LassoError("pair file needs exactly one H: and one T: block")
    h = lasso_from_text("\n".join(blocks["H"]))
    t = lasso_from_text("\n".join(blocks["T"]))
    return align(h, t)


def pair_to_text(pair: ThtPair) -> str:
    return f"H:\n{pair.here.to_text()}T:\n{pair.there.to_text()}"


def below(h: Lasso, t: Lasso) -> bool:
    """Pointwise containment H(i) <= T(i); decided on one aligned window."""
    try:
        align(h, t)
        return True
    except ContainmentError:
        return False


def strictly_below(h: Lasso, t: Lasso) -> bool:
    """H below T and different somewhere (equality is periodic, so one
    aligned stem+loop window decides it)."""
    try:
        p = align(h, t)
    except ContainmentError:
        return False
    return not p.is_total()


@dataclass(frozen=True)
class SupInfo:
    is_sup: bool
    sup_size: Optional[int]


def _first_constant_position(letters_fn, n: int, loop_constant) -> int:
    j = n
    for i in range(n - 1, -1, -1):
        if letters_fn(i) == loop_constant:
            j = i
        else:
            break
    return j


def sup_info(lasso: Lasso) -> SupInfo:
    """Strong ultimate periodicity: constant from some position on.
    Size is that position + 1."""
    c = lasso.canonical()
    if len(c.loop) != 1:
        return SupInfo(False, None)
    return SupInfo(True, len(c.stem) + 1)


@dataclass(frozen=True)
class AlmostEmptyInfo:
    is_almost_empty: bool
    size: Optional[int]
    non_empty_count: Optional[int]


def almost_empty_info(lasso: Lasso) -> AlmostEmptyInfo:
    """Finitely many non-empty positions; size is h+1 for the first h with
    only empty letters from h on."""
    c = lasso.canonical()
    if c.loop != (frozenset(),):
        return AlmostEmptyInfo(False, None, None)
    return AlmostEmptyInfo(True, len(c.stem) + 1, sum(1 for a in c.stem if a))


def _contract_positions(letters: Sequence, loop_start: int) -> tuple[list[int], int]:
    """Positions kept by contraction (0, 1, first occurrence of each letter),
    plus the position supplying the constant tail letter."""
    n = len(letters)
    first: dict = {}
    for i in range(n):
        first.setdefault(letters[i], i)
    kept = sorted(set(first.values()) | {0, min(1, n - 1)})
    if n > 1 and 1 not in kept:
        kept = sorted(set(kept) | {1})
    recurring = {letters[i] for i in range(loop_start, n)}
    tail_pos = None
    for i in range(kept[-1] + 1, kept[-1] + 1 + n):
        idx = i if i < n else loop_start + (i - loop_start) % (n - loop_start)
        if letters[idx] in recurring:
            tail_pos = idx
            break
    assert tail_pos is not None
    return kept, tail_pos


def contraction(m):
    """Contraction of a lasso or pair: keep positions 0, 1 and the first
    occurrence of every letter, then repeat a recurring letter forever.
    The result is strongly ultimately periodic."""
    if isinstance(m, Lasso):
        letters = m.letters()
        kept, tail = _contract_positions(letters, m.loop_start)
        return Lasso(m.atoms, tuple(letters[i] for i in kept), (letters[tail],)).canonical()
    if isinstance(m, ThtPair):
        letters = m.pair_letters()
        kept, tail = _contract_positions(letters, m.loop_start)
        hs = tuple(letters[i][0] for i in kept)
        ts = tuple(letters[i][1] for i in kept)
        h = Lasso(m.here.atoms, hs, (letters[tail][0],))
        t = Lasso(m.there.atoms, ts, (letters[tail][1],))
        return align(h.canonical(), t.canonical())
    raise TypeError(f"cannot contract {type(m).__name__}")


def _letter_profile(letters: Sequence, loop_start: int):
    """All (current letter, set of letters strictly before) pairs, which are
    exactly realized within two loop unrollings."""
    n = len(letters)
    l = n - loop_start
    seq = list(letters) + [letters[loop_start + (i - loop_start) % l] for i in range(n, n + l)]
    out = set()
    seen: set = set()
    prefix: frozenset = frozenset()
    for i, a in enumerate(seq):
        out.add((a, prefix))
        seen.add(a)
        prefix = frozenset(seen)
    return out


def _simulates(prof_small, prof_big) -> bool:
    return all(any(c2 == c and pre2 <= pre for c2, pre2 in prof_small) for c, pre in prof_big)


def bisimilar(m, m2) -> bool:
    """Mutual simulation; both arguments lassos, or both pairs."""
    if isinstance(m, Lasso) != isinstance(m2, Lasso):
        raise TypeError("cannot compare a lasso with a pair")
    if isinstance(m, Lasso):
        la, lsa = m.letters(), m.loop_start
        lb, lsb = m2.letters(), m2.loop_start
        if m.atoms != m2.atoms:
            return False
    else:
        la, lsa = m.pair_letters(), m.loop_start
        lb, lsb = m2.pair_letters(), m2.loop_start
        if m.here.atoms != m2.here.atoms:
            return False
    if la[0] != lb[0]:
        return False
    a1 = la[min(1, len(la) - 1)] if len(la) > 1 else la[lsa]
    b1 = lb[min(1, len(lb) - 1)] if len(lb) > 1 else lb[lsb]
    if a1 != b1:
        return False
    pa, pb = _letter_profile(la, lsa), _letter_profile(lb, lsb)
    return _simulates(pa, pb) and _simulates(pb, pa)
