"""Command-line interface.

Subcommands::

    oracle     brute-force count table for one sector
    recurse    cut-and-join tables for every sector of a truncation, into a cache
    verify     compare cached tables with the oracle
    pde-check  check exp-consistency and the direct recursion on cached tables

Exit codes: 0 ok, 1 mismatch, 2 bad arguments, 3 internal invariant failure,
4 corrupt cache file.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .cutjoin import connected_to_full, full_to_connected, series_from_tables, solve_connected, solve_full, tables_from_parts, total
from .errors import ChordSpectraError, NonIntegerGenus, NonIntegralCount
from .oracle import count_table, expected_total, untwisted_restriction
from .recursion import check_all
from .series import Truncation, diff
from .spectra import BackboneSpectrum, CountTable, CyclicPolicy, DEFAULT_POLICY, Mode, validate_class
from .store import CacheCorruption, TableCache, atomic_write, dumps, to_csv

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_INVARIANT, EXIT_CACHE = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class InvariantFailure(Exception):
    pass


def parse_backbones(text) -> BackboneSpectrum:
    """``"0,1,0,1"`` (or a JSON list from a config file) to ``b_1 = b_3 = 1``."""
    if isinstance(text, (list, tuple)):
        parts = list(text)
    else:
        parts = [p.strip() for p in str(text).split(",") if p.strip()]
    try:
        counts = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--backbones expects comma-separated integers, got {text!r}") from None
    if any(c < 0 for c in counts):
        raise UsageError("--backbones entries must be nonnegative")
    b = BackboneSpectrum(counts)
    if b.total == 0:
        raise UsageError("--backbones describes no backbone")
    return b


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON file with default values for these flags")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.ORIENTED.value)
    p.add_argument("--policy", choices=[c.value for c in CyclicPolicy], default=DEFAULT_POLICY.value)


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(prog="chordspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("oracle", help="enumerate one sector by brute force")
    _common(p)
    p.add_argument("--backbones", help="b_0,b_1,... e.g. 0,1,0,1 for one 1-vertex and one 3-vertex backbone")
    p.add_argument("--chords", type=int, help="number of chords k")
    p.add_argument("--connected-only", action=argparse.BooleanOptionalAction, default=False)
    p.add_argument("--out", type=Path, help="write the JSON table here instead of stdout")
    p.add_argument("--csv", type=Path, help="also write a CSV export")
    p.add_argument("--workers", type=int, default=1)
    subs["oracle"] = p

    p = sub.add_parser("recurse", help="solve the cut-and-join equation and cache every table")
    _common(p)
    p.add_argument("--kmax", type=int)
    p.add_argument("--bmax", type=int)
    p.add_argument("--vmax", type=int)
    p.add_argument("--vertex-max", type=int, help="optional cap on the total number of vertices")
    p.add_argument("--cache", type=Path)
    p.add_argument("--csv", type=Path, help="also write all tables as one CSV file")
    subs["recurse"] = p

    p = sub.add_parser("verify", help="diff cached tables against the oracle")
    _common(p)
    p.add_argument("--cache", type=Path)
    p.add_argument("--cross-mode", action="store_true",
                   help="compare with the untwisted part of the other orientation mode instead")
    p.add_argument("--workers", type=int, default=1)
    subs["verify"] = p

    p = sub.add_parser("pde-check", help="check exp-consistency and the direct recursion on cached tables")
    _common(p)
    p.add_argument("--cache", type=Path)
    subs["pde-check"] = p
    return parser, subs


def _parse(argv: Sequence[str] | None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config is None:
        return args
    try:
        config = json.loads(args.config.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(config, dict):
        raise UsageError(f"config {args.config} must hold a JSON object")
    sp = subs[args.command]
    known = {a.dest for a in sp._actions}
    defaults = {}
    for key, value in config.items():
        dest = key.lstrip("-").replace("-", "_")
        if dest not in known or dest in ("help", "config"):
            raise UsageError(f"unknown config key {key!r} for {args.command}")
        defaults[dest] = value
    sp.set_defaults(**defaults)
    return parser.parse_args(argv)


def _require(args: argparse.Namespace, *names: str) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _mode_policy(args) -> tuple[Mode, CyclicPolicy]:
    mode, policy = Mode(args.mode), CyclicPolicy(args.policy)
    if mode is Mode.NON_ORIENTED and policy is CyclicPolicy.ROTATION:
        print("warning: non-oriented classes are only well defined up to reflection", file=sys.stderr)
    return mode, policy


def _validate(table: CountTable) -> None:
    for cls, count in table.sorted_entries():
        problems = validate_class(cls)
        if problems or count <= 0:
            raise InvariantFailure(f"class {cls.spectrum} (index {cls.euler_index}): {'; '.join(problems) or 'bad count'}")


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        atomic_write(out, text)


def cmd_oracle(args) -> int:
    _require(args, "backbones", "chords")
    b = parse_backbones(args.backbones)
    mode, policy = _mode_policy(args)
    if args.chords < 0 or args.workers < 1:
        raise UsageError("--chords must be >= 0 and --workers >= 1")
    table = count_table(b, args.chords, mode, args.connected_only, policy, args.workers)
    _validate(table)
    if not args.connected_only and table.total != expected_total(b, args.chords, mode):
        raise InvariantFailure(f"enumerated {table.total} diagrams, expected {expected_total(b, args.chords, mode)}")
    _emit(dumps(table), args.out)
    if args.csv:
        atomic_write(args.csv, to_csv([table]))
    return EXIT_OK


def cmd_recurse(args) -> int:
    _require(args, "kmax", "bmax", "vmax", "cache")
    if min(args.kmax, args.bmax, args.vmax) < 0 or (args.vertex_max is not None and args.vertex_max < 0):
        raise UsageError("truncation bounds must be nonnegative")
    mode, policy = _mode_policy(args)
    trunc = Truncation(args.kmax, args.bmax, args.vmax, args.vertex_max)
    tables = tables_from_parts(solve_connected(trunc, mode, policy), mode)
    cache = TableCache(args.cache)
    for (b, k), table in sorted(tables.items(), key=lambda it: (it[0][1], it[0][0])):
        _validate(table)
        cache.put(table)
    if args.csv:
        atomic_write(args.csv, to_csv([tables[key] for key in sorted(tables, key=lambda it: (it[1], it[0]))]))
    print(f"wrote {len(tables)} {mode.value} tables to {args.cache}")
    return EXIT_OK


def _cached(args, mode: Mode, policy: CyclicPolicy) -> dict[tuple[BackboneSpectrum, int], CountTable]:
    _require(args, "cache")
    tables = {
        (t.backbones, t.k): t for _, t in TableCache(args.cache).scan() if t.mode is mode and t.policy is policy
    }
    if not tables:
        raise UsageError(f"no cached {mode.value}/{policy.value} tables in {args.cache}; run recurse first")
    return tables


def _diff_tables(have: CountTable, want: CountTable) -> list[str]:
    lines = []
    classes = set(have.entries) | set(want.entries)
    for cls in sorted(classes, key=lambda c: c.sort_key()):
        a, b = have.entries.get(cls, 0), want.entries.get(cls, 0)
        if a != b:
            lines.append(f"    index={cls.euler_index} m={cls.spectrum}: cached {a}, oracle {b}")
    return lines


def cmd_verify(args) -> int:
    mode, policy = _mode_policy(args)
    tables = _cached(args, mode, policy)
    bad = 0
    for (b, k), table in sorted(tables.items(), key=lambda it: (it[0][1], it[0][0])):
        label = f"b={b} k={k}"
        if args.cross_mode:
            other = Mode.NON_ORIENTED if mode is Mode.ORIENTED else Mode.ORIENTED
            other_total = count_table(b, k, other, True, policy, args.workers).total
            factor = 2 ** k
            lines = []
            if mode is Mode.ORIENTED:
                lines = _diff_tables(table, untwisted_restriction(b, k, policy))
                if other_total != factor * table.total:
                    lines.append(f"    non-oriented total {other_total} != 2^{k} * {table.total}")
            elif table.total != factor * other_total:
                lines.append(f"    total {table.total} != 2^{k} * oriented total {other_total}")
        else:
            lines = _diff_tables(table, count_table(b, k, mode, True, policy, args.workers))
        if lines:
            bad += 1
            print(f"MISMATCH {label}")
            print("\n".join(lines))
        else:
            print(f"ok       {label} ({table.total} diagrams, {len(table)} classes)")
    print(f"{len(tables) - bad}/{len(tables)} tables agree")
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_pde_check(args) -> int:
    mode, policy = _mode_policy(args)
    tables = _cached(args, mode, policy)
    keys = list(tables)
    trunc = Truncation(
        k_max=max(k for _, k in keys),
        b_max=max(b.total for b, _ in keys),
        v_max=max(len(b.counts) - 1 for b, _ in keys),
        vertex_max=max(b.vertices for b, _ in keys),
    )
    H = series_from_tables(tables.values(), trunc, policy)
    Z = total(solve_full(trunc, mode, policy))
    failed = False

    wrong_h = diff(H, full_to_connected(Z))
    for mono, have, want in wrong_h:
        print(f"exp-consistency: coefficient of {mono.text()} in H is {have}, log Z gives {want}")
    wrong_z = diff(connected_to_full(H), Z)
    if wrong_h or wrong_z:
        failed = True
        print(f"exp-consistency FAILED: {len(wrong_h)} H terms, {len(wrong_z)} Z terms differ")
    else:
        print(f"exp-consistency ok through y^{trunc.k_max} ({len(Z)} Z terms)")

    failures = check_all(tables)
    for (b, k), bad in sorted(failures.items(), key=lambda it: (it[0][1], it[0][0])):
        failed = True
        for m in bad:
            print(f"recursion b={b} k={k}: {m}")
    if not failures:
        print(f"recursion ok on {sum(1 for _, k in keys if k)} tables")
    return EXIT_MISMATCH if failed else EXIT_OK


COMMANDS = {"oracle": cmd_oracle, "recurse": cmd_recurse, "verify": cmd_verify, "pde-check": cmd_pde_check}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _parse(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # argparse reports usage errors this way
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except CacheCorruption as exc:
        print(f"error: corrupt cache file {exc}", file=sys.stderr)
        return EXIT_CACHE
    except (InvariantFailure, NonIntegralCount, NonIntegerGenus) as exc:
        print(f"error: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (UsageError, ChordSpectraError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
