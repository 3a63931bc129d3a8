"""Command-line front end: classify, eval, equilibrium, solve, minimal-ltl,
oracle, gen-tiling. One-line machine-readable verdicts; exit codes 2 (parse),
3 (fragment), 4 (cap/bounds)."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .equilibrium import (
    BoundOverflowError,
    FragmentError,
    brute_force_equilibria,
    is_equilibrium,
)
from .interpretation import LassoError, lasso_from_text, pair_from_text
from .semantics import tht_sat
from .solvers import (
    SolveConfig,
    complexity_row,
    dispatch_method,
    minimal_ltl_exists,
    solve_con,
)
from .syntax import FormulaError, ParseError, atoms_of, fragment_name, measures, parse
from .tiling import (
    TilingError,
    TilingKind,
    encode_expspace_fg,
    encode_nexptime_fg,
    encode_pspace_positive,
    encode_variant,
    instance_from_text,
    solve_tiling,
)

EXIT_PARSE = 2
EXIT_FRAGMENT = 3
EXIT_CAP = 4


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}", EXIT_PARSE)


def load_formula(path: str):
    """Formula file: optional `atoms: ...` line, remaining non-comment lines
    form the formula text."""
    declared = None
    body: list[str] = []
    for raw in _read(path).splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("atoms:"):
            declared = frozenset(line.partition(":")[2].split())
            continue
        body.append(line)
    if not body:
        raise CliError(f"{path}: no formula found", EXIT_PARSE)
    try:
        f = parse(" ".join(body), declared)
    except FormulaError as e:
        raise CliError(f"{path}: {e}", EXIT_PARSE)
    atoms = declared if declared is not None else atoms_of(f)
    return f, atoms


def cmd_classify(args) -> int:
    f, _ = load_formula(args.formula)
    p = measures(f)
    row, tag = complexity_row(f)
    mods = ",".join(sorted(p.modalities, key="XFGUR".index)) or "-"
    print(
        f"size={p.size} m={p.temporal_height} k={p.implication_height} "
        f"dX={p.next_depth} modalities={mods} fragment={fragment_name(p)} "
        f"row={row} complexity={tag} dispatch={dispatch_method(f)}"
    )
    return 0


def cmd_eval(args) -> int:
    try:
        pair = pair_from_text(_read(args.pair))
    except LassoError as e:
        raise CliError(f"{args.pair}: {e}", EXIT_PARSE)
    f, _ = load_formula(args.formula)
    missing = atoms_of(f) - pair.here.atoms
    if missing:
        raise CliError(f"formula atoms {sorted(missing)} missing from the pair", EXIT_PARSE)
    verdict = tht_sat(pair, args.pos, f)
    print("true" if verdict else "false")
    return 0 if verdict else 1


def cmd_equilibrium(args) -> int:
    try:
        t = lasso_from_text(_read(args.lasso))
    except LassoError as e:
        raise CliError(f"{args.lasso}: {e}", EXIT_PARSE)
    f, _ = load_formula(args.formula)
    missing = atoms_of(f) - t.atoms
    if missing:
        raise CliError(f"formula atoms {sorted(missing)} missing from the lasso", EXIT_PARSE)
    v = is_equilibrium(t, f)
    if v.yes:
        print("yes")
        return 0
    if not v.satisfied:
        print("no reason=not-a-model")
    else:
        print(f"no counterexample={v.counterexample.to_inline()}")
    return 1


def _config(args) -> SolveConfig:
    kwargs = {}
    if getattr(args, "fallback_stem", None) is not None:
        kwargs["fallback_stem"] = args.fallback_stem
    if getattr(args, "fallback_loop", None) is not None:
        kwargs["fallback_loop"] = args.fallback_loop
    if getattr(args, "sup_cap", None) is not None:
        kwargs["sup_size_cap"] = args.sup_cap
    if getattr(args, "ae_cap", None) is not None:
        kwargs["almost_empty_cap"] = args.ae_cap
    return SolveConfig(**kwargs)


def cmd_solve(args) -> int:
    f, atoms = load_formula(args.formula)
    try:
        v = solve_con(f, atoms, _config(args))
    except FragmentError as e:
        raise CliError(str(e), EXIT_FRAGMENT)
    except BoundOverflowError as e:
        raise CliError(str(e), EXIT_CAP)
    print(v.line())
    return 0


def cmd_minimal_ltl(args) -> int:
    f, atoms = load_formula(args.formula)
    try:
        v = minimal_ltl_exists(f, atoms, args.stem, args.loop)
    except BoundOverflowError as e:
        raise CliError(str(e), EXIT_CAP)
    print(v.line())
    return 0 if v.status == "exists" else 1


def cmd_oracle(args) -> int:
    f, atoms = load_formula(args.formula)
    try:
        models = brute_force_equilibria(atoms, f, args.stem, args.loop)
    except BoundOverflowError as e:
        raise CliError(str(e), EXIT_CAP)
    print(f"count={len(models)} bounds=stem<={args.stem},loop<={args.loop}")
    for t in models:
        print(f"model={t.to_inline()}")
    return 0


_DEFAULT_FRAGMENT = {
    TilingKind.EXPSPACE_ROWS: "THT_2^1(F,G)",
    TilingKind.NEXPTIME_SQUARE: "THT_1^2(F,G)",
    TilingKind.PSPACE_ROWS: "THT^0(X,F,G)",
}


def generate_tiling(inst, kind: TilingKind, fragment: str):
    if fragment == "THT_2^1(F,G)":
        return encode_expspace_fg(inst)
    if fragment == "THT_1^2(F,G)":
        return encode_nexptime_fg(inst)
    if fragment == "THT^0(X,F,G)":
        return encode_pspace_positive(inst)
    return encode_variant(inst, fragment)


def cmd_gen_tiling(args) -> int:
    try:
        inst = instance_from_text(_read(args.instance))
        kind = TilingKind(args.kind)
        fragment = args.fragment or _DEFAULT_FRAGMENT[kind]
        formula = generate_tiling(inst, kind, fragment)
        result = solve_tiling(inst, kind, args.row_cap)
    except TilingError as e:
        raise CliError(str(e), EXIT_FRAGMENT if "fragment" in str(e) else EXIT_PARSE)
    manifest = inst.to_text() + f"kind: {kind.value}\nfragment: {fragment}\nsolvable: {result.label}\n"
    text = f"{formula}\n"
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        stem = Path(args.instance).stem
        (outdir / f"{stem}.manifest").write_text(manifest)
        (outdir / f"{stem}.formula").write_text(text)
        print(f"wrote {outdir / (stem + '.manifest')} and {outdir / (stem + '.formula')}")
    else:
        sys.stdout.write(manifest)
        sys.stdout.write("formula:\n")
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="telwb", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="structural measures and fragment row")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("eval", help="here-and-there satisfaction on a pair")
    p.add_argument("formula")
    p.add_argument("pair")
    p.add_argument("--pos", type=int, default=0)
    p.set_defaults(fn=cmd_eval)

    p = sub.add_parser("equilibrium", help="exact equilibrium check on a lasso")
    p.add_argument("formula")
    p.add_argument("lasso")
    p.set_defaults(fn=cmd_equilibrium)

    p = sub.add_parser("solve", help="consistency via fragment dispatch")
    p.add_argument("formula")
    p.add_argument("--fallback-stem", type=int)
    p.add_argument("--fallback-loop", type=int)
    p.add_argument("--sup-cap", type=int)
    p.add_argument("--ae-cap", type=int)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("minimal-ltl", help="minimal classical model search")
    p.add_argument("formula")
    p.add_argument("--stem", type=int, default=4)
    p.add_argument("--loop", type=int, default=3)
    p.set_defaults(fn=cmd_minimal_ltl)

    p = sub.add_parser("oracle", help="brute-force equilibrium enumeration")
    p.add_argument("formula")
    p.add_argument("--stem", type=int, required=True)
    p.add_argument("--loop", type=int, required=True)
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("gen-tiling", help="emit a tiling-reduction benchmark")
    p.add_argument("instance")
    p.add_argument("--kind", required=True, choices=[k.value for k in TilingKind])
    p.add_argument("--fragment")
    p.add_argument("--row-cap", type=int, default=32)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen_tiling)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except FragmentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FRAGMENT
    except BoundOverflowError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
