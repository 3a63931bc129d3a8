"""Domino tiling instances, a saturating tiling solver, and generators that
emit the hardness-reduction formulas as benchmarks.

Atom naming is fixed so generated corpora are reproducible:
  d_<i>           domino type i
  dollar          row separator
  num_<i>_<b>     column-counter bit i with value b (rows-of-width-2^n grids)
  tag_<i>         marker proposition i
  u               the dominating marker
  r_<i>_<b>, c_<i>_<b>            row/column counter bits (square grids)
  barr_r_<i>_<b>, barr_c_<i>_<b>  marker copies of the counter bits
  cell_<i>_<d>    column i carries domino d (width-n grids)

Counter bits are least-significant-first: bit 1 flips on every increment.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Optional

from .syntax import (
    Formula,
    always,
    and_,
    atom,
    bottom,
    conj,
    disj,
    eventually,
    implies,
    next_,
    not_,
    or_,
    release,
    top,
    until,
)


class TilingError(Exception):
    pass


@dataclass(frozen=True)
class Domino:
    down: str
    left: str
    up: str
    right: str


@dataclass(frozen=True)
class TilingInstance:
    colors: tuple
    dominoes: tuple
    n: int
    d_init: int
    d_final: int

    def __post_init__(self):
        if not self.dominoes:
            raise TilingError("at least one domino type is required")
        if self.n < 1:
            raise TilingError("the width parameter must be positive")
        for d in (self.d_init, self.d_final):
            if not (0 <= d < len(self.dominoes)):
                raise TilingError("initial/final domino indices out of range")
        for d in self.dominoes:
            for c in (d.down, d.left, d.up, d.right):
                if c not in self.colors:
                    raise TilingError(f"color {c!r} not declared")

    @staticmethod
    def make(colors, dominoes, n, d_init, d_final) -> "TilingInstance":
        return TilingInstance(tuple(colors), tuple(Domino(*d) for d in dominoes), n, d_init, d_final)

    def to_text(self) -> str:
        lines = [f"colors: {' '.join(self.colors)}", f"n: {self.n}"]
        for i, d in enumerate(self.dominoes):
            lines.append(f"domino: d_{i} {d.down} {d.left} {d.up} {d.right}")
        lines.append(f"init: d_{self.d_init}")
        lines.append(f"final: d_{self.d_final}")
        return "\n".join(lines) + "\n"


def instance_from_text(text: str) -> TilingInstance:
    colors: list = []
    dominoes: list = []
    names: dict = {}
    n = None
    d_init = d_final = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, rest = line.partition(":")
        key, rest = key.strip(), rest.strip()
        if key == "colors":
            colors = rest.split()
        elif key == "n":
            n = int(rest)
        elif key == "domino":
            parts = rest.split()
            if len(parts) != 5:
                raise TilingError(f"domino line needs a name and four colors: {line!r}")
            names[parts[0]] = len(dominoes)
            dominoes.append(tuple(parts[1:]))
        elif key == "init":
            d_init = rest
        elif key == "final":
            d_final = rest
        else:
            raise TilingError(f"unexpected line {line!r}")
    if n is None or d_init is None or d_final is None or not colors or not dominoes:
        raise TilingError("instance needs colors, n, dominoes, init and final lines")
    if d_init not in names or d_final not in names:
        raise TilingError("init/final must name a declared domino")
    return TilingInstance.make(colors, dominoes, n, names[d_init], names[d_final])


class TilingKind(str, Enum):
    EXPSPACE_ROWS = "expspace-rows-2^n"
    NEXPTIME_SQUARE = "nexptime-square-2^n"
    PSPACE_ROWS = "pspace-rows-n"


@dataclass(frozen=True)
class TilingResult:
    status: str  # tiled | untiled | cap-exhausted
    rows: Optional[tuple]

    @property
    def label(self) -> str:
        return {"tiled": "yes", "untiled": "no", "cap-exhausted": "unknown(cap)"}[self.status]


def _width(inst: TilingInstance, kind: TilingKind) -> int:
    return inst.n if kind == TilingKind.PSPACE_ROWS else 2**inst.n


def _row_candidates(inst: TilingInstance, width: int):
    """Horizontally consistent rows, split by the final-cell normalization:
    every cell differs from the final domino except the very last cell of a
    final row."""
    doms = inst.dominoes
    mids: list = []
    finals: list = []
    for combo in product(range(len(doms)), repeat=width):
        ok = all(doms[combo[j]].right == doms[combo[j + 1]].left for j in range(width - 1))
        if not ok:
            continue
        final_hits = [j for j in range(width) if combo[j] == inst.d_final]
        if not final_hits:
            mids.append(combo)
        elif final_hits == [width - 1]:
            finals.append(combo)
    return mids, finals


def _vertically_ok(inst: TilingInstance, lower, upper) -> bool:
    doms = inst.dominoes
    return all(doms[lower[j]].up == doms[upper[j]].down for j in range(len(lower)))


def solve_tiling(inst: TilingInstance, kind: TilingKind, row_cap: int = 32) -> TilingResult:
    """Search for a tiling: breadth-first over rows with saturation, so
    'untiled' is definitive; 'cap-exhausted' only when the cap cut the
    search before saturation (or before the fixed square height)."""
    width = _width(inst, kind)
    if width > 8:
        raise TilingError(f"width {width} beyond desk scale")
    mids, finals = _row_candidates(inst, width)
    starts_mid = [r for r in mids if r[0] == inst.d_init]
    starts_final = [r for r in finals if r[0] == inst.d_init]
    if kind == TilingKind.NEXPTIME_SQUARE:
        height = 2**inst.n
        if height > row_cap:
            return TilingResult("cap-exhausted", None)
        frontier = {r: (r,) for r in (starts_final if height == 1 else starts_mid)}
        for level in range(1, height):
            last_level = level == height - 1
            nxt: dict = {}
            for row, path in frontier.items():
                for r2 in (finals if last_level else mids):
                    if _vertically_ok(inst, row, r2) and r2 not in nxt:
                        nxt[r2] = path + (r2,)
            frontier = nxt
        if frontier:
            return TilingResult("tiled", next(iter(frontier.values())))
        return TilingResult("untiled", None)

    # unbounded height: saturate over mid rows
    for r in starts_final:
        return TilingResult("tiled", (r,))
    seen = dict.fromkeys(starts_mid)
    for r in starts_mid:
        seen[r] = (r,)
    frontier = list(starts_mid)
    level = 1
    while frontier:
        if level >= row_cap:
            return TilingResult("cap-exhausted", None)
        new: list = []
        for row in frontier:
            path = seen[row]
            for r2 in finals:
                if _vertically_ok(inst, row, r2):
                    return TilingResult("tiled", path + (r2,))
            for r2 in mids:
                if r2 not in seen and _vertically_ok(inst, row, r2):
                    seen[r2] = path + (r2,)
                    new.append(r2)
        frontier = new
        level += 1
    return TilingResult("untiled", None)


# --- shared atom vocabularies ---------------------------------------------------


def _d(i: int) -> Formula:
    return atom(f"d_{i}")


def _num(i: int, b: int) -> Formula:
    return atom(f"num_{i}_{b}")


def _tag(i: int) -> Formula:
    return atom(f"tag_{i}")


_U = atom("u")
_DOLLAR = atom("dollar")


def _rc(tau: str, i: int, b: int) -> Formula:
    return atom(f"{tau}_{i}_{b}")


def _barr(tau: str, i: int, b: int) -> Formula:
    return atom(f"barr_{tau}_{i}_{b}")


def _cell(i: int, d: int) -> Formula:
    return atom(f"cell_{i}_{d}")


# --- rows-of-width-2^n encoding over F,G (nested once, implication once) --------


class _RowsVocab:
    def __init__(self, inst: TilingInstance):
        self.inst = inst
        self.deltas = [f"d_{i}" for i in range(len(inst.dominoes))]
        self.nums = [f"num_{i}_{b}" for i in range(1, inst.n + 1) for b in (0, 1)]
        self.p_main = self.deltas + ["dollar"] + self.nums
        self.tags = [f"tag_{i}" for i in range(1, 10)]
        self.d_final = f"d_{inst.d_final}"
        self.d_init = f"d_{inst.d_init}"
        self.r_main = [p for p in self.p_main if p != self.d_final]
        self.p_cell = [p for p in self.p_main if p != "dollar"]
        self.r_cell = [p for p in self.p_cell if p != self.d_final]
        self.delta_r = [p for p in self.deltas if p != self.d_final]

    @property
    def atoms(self) -> frozenset:
        return frozenset(self.p_main + self.tags + ["u"])


def _exactly_one_main(p_main) -> Formula:
    return disj(
        [and_(atom(p), conj([not_(atom(q)) for q in p_main if q != p])) for p in p_main]
    )


def _pseudo_rows_fg(v: _RowsVocab) -> Formula:
    tag_clash = disj(
        [and_(_tag(i), _tag(j)) for i in range(1, 10) for j in range(1, 10) if i != j]
    )
    return conj(
        [
            always(eventually(_U)),
            _DOLLAR,
            always(_exactly_one_main(v.p_main)),
            eventually(atom(v.d_final)),
            always(disj([atom(t) for t in v.tags])),
            implies(
                or_(_U, eventually(tag_clash)),
                always(and_(_U, conj([atom(t) for t in v.tags]))),
            ),
        ]
    )


def _theta_rows_fg(v: _RowsVocab, entries) -> Formula:
    """Marker formula: the here-word is tagged by the listed markers in
    order, each marker segment carrying only the listed main atoms."""
    psi = conj([always(atom(t)) for t in v.tags])
    used = [i for i, _ in entries]
    others = [t for j, t in enumerate(v.tags, start=1) if j not in used]
    c1 = implies(disj([eventually(atom(t)) for t in others]), psi)
    c2 = conj([eventually(_tag(i)) for i, _ in entries])
    c3 = implies(
        disj(
            [
                eventually(and_(_tag(i), atom(p)))
                for i, allowed in entries
                for p in v.p_main
                if p not in allowed
            ]
        ),
        psi,
    )
    c4 = implies(
        disj(
            [
                eventually(and_(_tag(r), eventually(_tag(s))))
                for ri, (r, _) in enumerate(entries)
                for si, (s, _) in enumerate(entries)
                if si < ri
            ]
        ),
        psi,
    )
    return conj([c1, c2, c3, c4])


def _bad_rows(v: _RowsVocab, theta, pair_hit) -> Formula:
    """The nine violation families over a marked slice. `theta` builds the
    marker formula, `pair_hit(p, tag_index)` states that some slice position
    carries both the main atom p and the marker."""
    inst = v.inst
    n = inst.n
    num = lambda i, b: f"num_{i}_{b}"

    # content of the first cell differs from the initial domino
    bad_in = theta(
        [(1, {"dollar"}), (2, set(v.nums)), (3, {d for d in v.deltas if d != v.d_init}), (4, set(v.p_main))]
    )

    bad_ord = disj(
        [
            theta([(1, set(v.r_main)), (2, {"dollar"}), (3, set(v.deltas)), (4, set(v.p_main))]),
            theta([(2, {"dollar"}), (3, set(v.deltas)), (4, set(v.p_main))]),
            theta([(1, set(v.r_main)), (2, set(v.nums)), (3, {"dollar"}), (4, set(v.p_main))]),
        ]
    )

    bad_acc = disj(
        [
            or_(
                theta([(1, set(v.r_main)), (2, {num(i, 0)}), (3, set(v.nums)), (4, {v.d_final}), (5, set(v.p_main))]),
                theta([(1, set(v.r_main)), (2, {num(i, 0)}), (4, {v.d_final}), (5, set(v.p_main))]),
            )
            for i in range(1, n + 1)
        ]
    )

    cell_two_contents = disj(
        [
            theta([(1, set(v.r_main)), (2, {d}), (3, {d2}), (4, set(v.p_main))])
            for d in v.delta_r
            for d2 in v.deltas
            if d != d2
        ]
    )
    cell_bit_conflict = disj(
        [
            or_(
                theta([(1, set(v.r_main)), (2, {num(i, b)}), (3, {num(i, 1 - b)}), (4, set(v.p_main))]),
                theta([(1, set(v.r_main)), (2, {num(i, b)}), (3, set(v.nums)), (4, {num(i, 1 - b)}), (5, set(v.p_main))]),
            )
            for i in range(1, n + 1)
            for b in (0, 1)
        ]
    )
    cell_bit_order = disj(
        [
            or_(
                theta([(1, set(v.r_main)), (2, {num(i, b)}), (3, {num(j, b2)}), (4, set(v.p_main))]),
                theta([(1, set(v.r_main)), (2, {num(i, b)}), (3, set(v.nums)), (4, {num(j, b2)}), (5, set(v.p_main))]),
            )
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if i > j
            for b in (0, 1)
            for b2 in (0, 1)
        ]
    )
    cell_bit_missing = disj(
        [
            or_(
                theta(
                    [
                        (1, set(v.r_main)),
                        (2, set(v.delta_r) | {"dollar"}),
                        (3, {p for p in v.nums if p not in (num(i, 0), num(i, 1))}),
                        (4, set(v.deltas)),
                        (5, set(v.p_main)),
                    ]
                ),
                theta(
                    [
                        (1, {"dollar"}),
                        (3, {p for p in v.nums if p not in (num(i, 0), num(i, 1))}),
                        (4, set(v.deltas)),
                        (5, set(v.p_main)),
                    ]
                ),
            )
            for i in range(1, n + 1)
        ]
    )
    bad_cell = disj([cell_two_contents, cell_bit_conflict, cell_bit_order, cell_bit_missing])

    bad_first = disj(
        [
            disj(
                [
                    theta([(1, set(v.r_main)), (2, {"dollar"}), (3, set(v.nums)), (4, {num(i, 1)}), (5, set(v.p_main))]),
                    theta([(1, set(v.r_main)), (2, {"dollar"}), (4, {num(i, 1)}), (5, set(v.p_main))]),
                    theta([(2, {"dollar"}), (3, set(v.nums)), (4, {num(i, 1)}), (5, set(v.p_main))]),
                    theta([(2, {"dollar"}), (4, {num(i, 1)}), (5, set(v.p_main))]),
                ]
            )
            for i in range(1, n + 1)
        ]
    )

    bad_last = disj(
        [theta([(1, set(v.r_main)), (2, {num(n, 0)}), (3, set(v.deltas)), (4, {"dollar"}), (5, set(v.p_main))])]
        + [
            theta([(1, set(v.r_main)), (2, {num(i, 0)}), (3, set(v.nums)), (4, set(v.deltas)), (5, {"dollar"}), (6, set(v.p_main))])
            for i in range(1, n + 1)
        ]
    )

    mark_adjacent_in_row = or_(
        theta(
            [
                (1, set(v.r_main)),
                (2, set(v.delta_r) | {"dollar"}),
                (3, set(v.nums)),
                (4, set(v.delta_r)),
                (5, set(v.nums)),
                (6, set(v.deltas)),
                (7, set(v.p_main)),
            ]
        ),
        theta(
            [
                (1, {"dollar"}),
                (3, set(v.nums)),
                (4, set(v.delta_r)),
                (5, set(v.nums)),
                (6, set(v.deltas)),
                (7, set(v.p_main)),
            ]
        ),
    )
    wrap_case = conj(
        [and_(pair_hit(num(i, 1), 3), pair_hit(num(i, 0), 5)) for i in range(1, n + 1)]
    )
    step_cases = disj(
        [
            conj(
                [
                    pair_hit(num(i, 0), 3),
                    pair_hit(num(i, 1), 5),
                    or_(
                        disj(
                            [
                                and_(pair_hit(num(j, 0), 3), pair_hit(num(j, 1), 5))
                                for j in range(1, i)
                            ]
                        ),
                        disj(
                            [
                                and_(pair_hit(num(j, b), 3), pair_hit(num(j, 1 - b), 5))
                                for j in range(i + 1, n + 1)
                                for b in (0, 1)
                            ]
                        ),
                    ),
                ]
            )
            for i in range(1, n + 1)
        ]
    )
    bad_inc = and_(mark_adjacent_in_row, or_(wrap_case, step_cases))

    doms = inst.dominoes
    bad_rr = disj(
        [
            theta([(1, set(v.r_main)), (2, {f"d_{a}"}), (3, set(v.nums)), (4, {f"d_{b}"}), (5, set(v.p_main))])
            for a in range(len(doms))
            for b in range(len(doms))
            if a != inst.d_final and doms[a].right != doms[b].left
        ]
    )

    mark_adjacent_in_column = disj(
        [
            theta(
                [
                    (1, set(v.r_main)),
                    (2, set(v.nums)),
                    (3, set(v.delta_r)),
                    (4, set(v.r_cell)),
                    (5, {"dollar"}),
                    (6, set(v.r_cell)),
                    (7, set(v.nums)),
                    (8, set(v.deltas)),
                    (9, set(v.p_main)),
                ]
            ),
            theta(
                [
                    (1, set(v.r_main)),
                    (2, set(v.nums)),
                    (3, set(v.delta_r)),
                    (4, set(v.r_cell)),
                    (5, {"dollar"}),
                    (7, set(v.nums)),
                    (8, set(v.deltas)),
                    (9, set(v.p_main)),
                ]
            ),
            theta(
                [
                    (1, set(v.r_main)),
                    (2, set(v.nums)),
                    (3, set(v.delta_r)),
                    (5, {"dollar"}),
                    (6, set(v.r_cell)),
                    (7, set(v.nums)),
                    (8, set(v.deltas)),
                    (9, set(v.p_main)),
                ]
            ),
        ]
    )
    same_column = conj(
        [
            disj([and_(pair_hit(num(i, b), 2), pair_hit(num(i, b), 7)) for b in (0, 1)])
            for i in range(1, n + 1)
        ]
    )
    color_clash_vertical = disj(
        [
            and_(pair_hit(f"d_{a}", 3), pair_hit(f"d_{b}", 8))
            for a in range(len(doms))
            for b in range(len(doms))
            if doms[a].up != doms[b].down
        ]
    )
    bad_cr = and_(mark_adjacent_in_column, and_(same_column, color_clash_vertical))

    return disj([bad_in, bad_ord, bad_acc, bad_cell, bad_first, bad_last, bad_inc, bad_rr, bad_cr])


def encode_expspace_fg(inst: TilingInstance) -> Formula:
    """Rows-of-width-2^n reduction over F and G with one implication level
    and two temporal levels."""
    v = _RowsVocab(inst)

    def theta(entries) -> Formula:
        return _theta_rows_fg(v, entries)

    def pair_hit(p: str, tag_index: int) -> Formula:
        return eventually(and_(atom(p), _tag(tag_index)))

    pseudo = _pseudo_rows_fg(v)
    bad = _bad_rows(v, theta, pair_hit)
    return and_(pseudo, or_(_U, bad))


# --- rows-of-width-2^n encodings over G-only and U-only -------------------------


def _pseudo_rows_g(v: _RowsVocab) -> Formula:
    tag_clash = disj(
        [and_(_tag(i), _tag(j)) for i in range(1, 10) for j in range(1, 10) if i != j]
    )
    return conj(
        [
            _DOLLAR,
            always(_exactly_one_main(v.p_main)),
            not_(always(disj([atom(p) for p in v.r_main]))),
            implies(not_(_U), _U),
            always(disj([atom(t) for t in v.tags])),
            always(implies(tag_clash, _U)),
            always(implies(_U, always(and_(_U, conj([atom(t) for t in v.tags]))))),
        ]
    )


def _theta_rows_g(v: _RowsVocab, entries) -> Formula:
    used = [i for i, _ in entries]
    others = [t for j, t in enumerate(v.tags, start=1) if j not in used]
    c1 = conj([always(implies(atom(t), _U)) for t in others])
    c2 = conj([implies(always(implies(_tag(i), _U)), _U) for i, _ in entries])
    c3 = conj(
        [
            always(or_(implies(_tag(i), _U), disj([atom(p) for p in sorted(allowed)])))
            for i, allowed in entries
        ]
    )
    c4 = conj(
        [
            always(implies(_tag(i), always(disj([_tag(j) for j, _ in entries[k:]]))))
            for k, (i, _) in enumerate(entries)
        ]
    )
    return conj([c1, c2, c3, c4])


def _any_p(v: _RowsVocab) -> Formula:
    return disj([atom(p) for p in sorted(v.atoms)])


def _eta_empty(v: _RowsVocab) -> Formula:
    return conj([not_(atom(p)) for p in sorted(v.atoms)])


def _pseudo_rows_u(v: _RowsVocab) -> Formula:
    anyp = _any_p(v)
    eta = _eta_empty(v)
    tag_clash_somewhere = disj(
        [
            until(top(), and_(_tag(i), _tag(j)))
            for i in range(1, 10)
            for j in range(1, 10)
            if i != j
        ]
    )
    return conj(
        [
            _DOLLAR,
            until(_exactly_one_main(v.p_main), eta),
            not_(until(disj([atom(p) for p in v.r_main]), eta)),
            until(disj([atom(t) for t in v.tags]), eta),
            implies(until(anyp, tag_clash_somewhere), _U),
            implies(not_(_U), _U),
            implies(until(anyp, _U), until(and_(_U, conj([atom(t) for t in v.tags])), eta)),
        ]
    )


def _theta_rows_u(v: _RowsVocab, entries) -> Formula:
    anyp = _any_p(v)

    def psi_between(t: Formula, t2: Formula) -> Formula:
        return until(anyp, and_(t, until(anyp, t2)))

    def phi(xi: Formula) -> Formula:
        return until(anyp, xi)

    used = [i for i, _ in entries]
    others = [t for j, t in enumerate(v.tags, start=1) if j not in used]
    order_req = conj(
        [psi_between(_tag(entries[k][0]), _tag(entries[k + 1][0])) for k in range(len(entries) - 1)]
    )
    bad_mark = disj(
        [phi(atom(t)) for t in others]
        + [
            and_(psi_between(_tag(i), _tag(j)), psi_between(_tag(j), _tag(i)))
            for i in range(1, 10)
            for j in range(1, 10)
            if i != j
        ]
        + [
            phi(and_(_tag(i), atom(p)))
            for i, allowed in entries
            for p in v.p_main
            if p not in allowed
        ]
    )
    return and_(order_req, implies(bad_mark, _U))


def encode_rows_variant(inst: TilingInstance, modality: str) -> Formula:
    """Rows-of-width-2^n reduction using only G (implication depth two) or
    only U (implication depth two)."""
    v = _RowsVocab(inst)
    if modality == "G":
        theta = lambda entries: _theta_rows_g(v, entries)

        def pair_hit(p: str, tag_index: int) -> Formula:
            others = disj([atom(q) for q in v.p_main if q != p])
            return implies(always(or_(implies(_tag(tag_index), _U), others)), _U)

        pseudo = _pseudo_rows_g(v)
    elif modality == "U":
        anyp = _any_p(v)
        theta = lambda entries: _theta_rows_u(v, entries)

        def pair_hit(p: str, tag_index: int) -> Formula:
            return until(anyp, and_(atom(p), _tag(tag_index)))

        pseudo = _pseudo_rows_u(v)
    else:
        raise TilingError(f"unsupported rows variant {modality!r}")
    bad = _bad_rows(v, theta, pair_hit)
    return and_(pseudo, or_(_U, bad))


# --- square-2^n encodings (one temporal level) -----------------------------------


class _SquareVocab:
    def __init__(self, inst: TilingInstance):
        self.inst = inst
        self.deltas = [f"d_{i}" for i in range(len(inst.dominoes))]
        self.rc = [(tau, i, b) for tau in ("r", "c") for i in range(1, inst.n + 1) for b in (0, 1)]
        self.tags3 = ["tag_1", "tag_2", "tag_3"]
        self.barrs = [f"barr_{tau}_{i}_{b}" for tau, i, b in self.rc]

    @property
    def atoms(self) -> frozenset:
        return frozenset(
            self.deltas + [f"{tau}_{i}_{b}" for tau, i, b in self.rc] + self.tags3 + self.barrs + ["u"]
        )


def _square_parts(v: _SquareVocab, wrap_g, wrap_f):
    """Shared structure of the square encodings; wrap_g(x) states x on every
    slice position, wrap_f(x) states x on some slice position."""
    inst = v.inst
    n = inst.n
    exactly_one_delta = disj(
        [
            and_(atom(d), conj([not_(atom(d2)) for d2 in v.deltas if d2 != d]))
            for d in v.deltas
        ]
    )
    bit_per_counter = conj(
        [
            wrap_g(disj([and_(_rc(tau, i, b), not_(_rc(tau, i, 1 - b))) for b in (0, 1)]))
            for i in range(1, n + 1)
            for tau in ("r", "c")
        ]
    )
    phi_t = conj(
        [
            wrap_g(exactly_one_delta),
            bit_per_counter,
            wrap_f(and_(_d(inst.d_init), conj([_rc(tau, i, 0) for i in range(1, n + 1) for tau in ("r", "c")]))),
            wrap_f(and_(_d(inst.d_final), conj([_rc(tau, i, 1) for i in range(1, n + 1) for tau in ("r", "c")]))),
        ]
    )
    phi_full = implies(wrap_f(_U), wrap_g(and_(_U, conj([atom(t) for t in v.tags3] + [atom(b) for b in v.barrs]))))
    has_barr_code = conj(
        [
            disj([_barr(tau, i, b) for b in (0, 1)])
            for i in range(1, n + 1)
            for tau in ("r", "c")
        ]
    )
    phi_bad_h = disj(
        [
            and_(
                wrap_f(disj([atom(t) for t in v.tags3])),
                wrap_f(disj([atom(b) for b in v.barrs])),
            ),
            wrap_f(disj([and_(atom(t), atom(t2)) for t in v.tags3 for t2 in v.tags3 if t < t2])),
        ]
        + [
            and_(wrap_f(_barr(tau, i, 0)), wrap_f(_barr(tau, i, 1)))
            for i in range(1, n + 1)
            for tau in ("r", "c")
        ]
    )
    phi_h = and_(
        wrap_g(disj([atom(t) for t in v.tags3] + [has_barr_code])),
        implies(phi_bad_h, _U),
    )
    pseudo = conj([implies(not_(_U), _U), phi_t, phi_full, phi_h])

    def phi_same(t: Formula, t2: Formula, tau: str) -> Formula:
        return implies(
            disj(
                [
                    and_(wrap_f(and_(or_(t, t2), _rc(tau, i, 0))), wrap_f(and_(or_(t, t2), _rc(tau, i, 1))))
                    for i in range(1, n + 1)
                ]
            ),
            _U,
        )

    t1, t2, t3 = (atom(t) for t in v.tags3)
    doms = inst.dominoes

    d1 = and_(
        wrap_f(disj([atom(b) for b in v.barrs])),
        wrap_g(
            disj(
                [
                    and_(_rc(tau, i, b), _barr(tau, i, 1 - b))
                    for tau, i, b in v.rc
                ]
            )
        ),
    )
    d2 = conj(
        [wrap_f(t1), phi_same(t1, t1, "r"), phi_same(t1, t1, "c")]
        + [
            disj(
                [
                    and_(wrap_f(and_(t1, _d(a))), wrap_f(and_(t1, _d(b))))
                    for a in range(len(doms))
                    for b in range(len(doms))
                    if a != b
                ]
            )
        ]
    )

    def consecutive(tau: str) -> Formula:
        return disj(
            [
                conj(
                    [wrap_f(and_(_rc(tau, i, 0), t1)), wrap_f(and_(_rc(tau, i, 1), t2))]
                    + [
                        and_(wrap_f(and_(_rc(tau, j, 1), t1)), wrap_f(and_(_rc(tau, j, 0), t2)))
                        for j in range(1, i)
                    ]
                    + [
                        disj(
                            [
                                and_(wrap_f(and_(_rc(tau, j, b), t1)), wrap_f(and_(_rc(tau, j, b), t2)))
                                for b in (0, 1)
                            ]
                        )
                        for j in range(i + 1, n + 1)
                    ]
                )
                for i in range(1, n + 1)
            ]
        )

    def clash(picker) -> Formula:
        return disj(
            [
                and_(wrap_f(and_(t1, _d(a))), wrap_f(and_(t2, _d(b))))
                for a in range(len(doms))
                for b in range(len(doms))
                if picker(doms[a], doms[b])
            ]
        )

    d3 = conj(
        [
            wrap_f(t1),
            wrap_f(t2),
            phi_same(t1, t1, "c"),
            phi_same(t2, t2, "c"),
            phi_same(t1, t2, "r"),
            consecutive("c"),
            clash(lambda a, b: a.right != b.left),
        ]
    )
    d4 = conj(
        [
            wrap_f(t1),
            wrap_f(t2),
            phi_same(t1, t1, "r"),
            phi_same(t2, t2, "r"),
            phi_same(t1, t2, "c"),
            consecutive("r"),
            clash(lambda a, b: a.up != b.down),
        ]
    )
    bad = disj([d1, d2, d3, d4])
    return and_(pseudo, or_(_U, bad))


def encode_nexptime_fg(inst: TilingInstance) -> Formula:
    """Square-2^n reduction over F and G with one temporal level and two
    implication levels."""
    v = _SquareVocab(inst)
    return _square_parts(v, wrap_g=always, wrap_f=eventually)


def encode_square_variant(inst: TilingInstance, modality: str) -> Formula:
    """Square-2^n reduction using only U or only R at one temporal level."""
    v = _SquareVocab(inst)
    anyp = disj([atom(p) for p in sorted(v.atoms)])
    eta = conj([not_(atom(p)) for p in sorted(v.atoms)])
    if modality == "U":
        wrap_g = lambda x: until(x, eta)
        wrap_f = lambda x: until(anyp, x)
    elif modality == "R":
        wrap_g = lambda x: release(bottom(), or_(eta, x))
        wrap_f = lambda x: release(x, anyp)
    else:
        raise TilingError(f"unsupported square variant {modality!r}")
    body = _square_parts(v, wrap_g=wrap_g, wrap_f=wrap_f)
    if modality == "R":
        finite = not_(release(bottom(), anyp))
        return and_(finite, body)
    return body


# --- width-n positive encoding (no implication) ----------------------------------


def encode_pspace_positive(inst: TilingInstance) -> Formula:
    """Width-n reduction without implication: the word is an unending
    concatenation of tiling encodings unless some position carries two cell
    atoms; minimal classical models correspond to tilings."""
    n = inst.n
    doms = inst.dominoes
    cells = [(i, d) for i in range(1, n + 1) for d in range(len(doms))]
    p_all = [f"cell_{i}_{d}" for i, d in cells]

    def xpow(j: int, f: Formula) -> Formula:
        for _ in range(j):
            f = next_(f)
        return f

    seam = and_(_cell(n, inst.d_final), next_(_cell(1, inst.d_init)))
    row_shape = disj(
        [
            and_(_cell(n, a), next_(_cell(1, b)))
            for a in range(len(doms))
            for b in range(len(doms))
        ]
        + [
            and_(_cell(i, a), next_(_cell(i + 1, b)))
            for i in range(1, n)
            for a in range(len(doms))
            for b in range(len(doms))
        ]
    )
    row_colors = disj(
        [_cell(n, a) for a in range(len(doms))]
        + [
            and_(_cell(i, a), next_(_cell(i + 1, b)))
            for i in range(1, n)
            for a in range(len(doms))
            for b in range(len(doms))
            if doms[a].right == doms[b].left
        ]
    )
    column_colors = or_(
        disj([xpow(j, seam) for j in range(n)]),
        disj(
            [
                and_(_cell(i, a), xpow(n, _cell(i, b)))
                for a in range(len(doms))
                for b in range(len(doms))
                if doms[b].down == doms[a].up
                for i in range(1, n + 1)
            ]
        ),
    )
    psi = and_(
        always(eventually(seam)),
        eventually(always(conj([row_shape, row_colors, column_colors]))),
    )
    no_cell = disj(
        [and_(atom(p), atom(q)) for p in p_all for q in p_all if p < q]
    )
    return and_(
        always(disj([atom(p) for p in p_all])),
        or_(always(eventually(no_cell)), psi),
    )


def pspace_atoms(inst: TilingInstance) -> frozenset:
    return frozenset(
        f"cell_{i}_{d}" for i in range(1, inst.n + 1) for d in range(len(inst.dominoes))
    )


def tiling_word(inst: TilingInstance, rows) -> list:
    """Letters of the width-n encoding of a tiling: one singleton per cell,
    rows in order."""
    out = []
    for row in rows:
        for i, d in enumerate(row, start=1):
            out.append(frozenset({f"cell_{i}_{d}"}))
    return out


VARIANT_TAGS = ("THT_2^2(G)", "THT_2^2(U)", "THT_1^2(U)", "THT_1^2(R)")


def encode_variant(inst: TilingInstance, fragment: str) -> Formula:
    """Reduction variants selected by fragment tag."""
    if fragment == "THT_2^2(G)":
        return encode_rows_variant(inst, "G")
    if fragment == "THT_2^2(U)":
        return encode_rows_variant(inst, "U")
    if fragment == "THT_1^2(U)":
        return encode_square_variant(inst, "U")
    if fragment == "THT_1^2(R)":
        return encode_square_variant(inst, "R")
    raise TilingError(f"unsupported fragment tag {fragment!r}")


def encoding_atoms(inst: TilingInstance, kind: str) -> frozenset:
    if kind in ("expspace-fg", "THT_2^2(G)", "THT_2^2(U)"):
        return _RowsVocab(inst).atoms
    if kind in ("nexptime-fg", "THT_1^2(U)", "THT_1^2(R)"):
        return _SquareVocab(inst).atoms
    if kind == "pspace-positive":
        return pspace_atoms(inst)
    raise TilingError(f"unknown encoding kind {kind!r}")
