"""Command-line interface for configuration-space Betti numbers."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .basis import format_monomial
from .differential import assemble_matrix, cell_images
from .engine import betti_odd_closed, betti_table, engine_for, stable_betti
from .oracles import run_all
from .rings import GradedRing, RingError, euler_characteristic, parse_ring
from .spaces import REGISTRY, resolve_space


@dataclass
class RunConfig:
    ring: GradedRing
    space: str
    n_min: int
    n_max: int
    i_max: int
    reduced: bool
    fmt: str
    workers: int
    exact_only: bool
    dump_dir: Path | None


def _parse_n_range(text: str) -> tuple[int, int]:
    if ".." in text:
        lo, _, hi = text.partition("..")
        n_min, n_max = int(lo), int(hi)
    else:
        n_min = n_max = int(text)
    if not 1 <= n_min <= n_max:
        raise ValueError(f"bad point-count range {text!r}: need 1 <= A <= B")
    return n_min, n_max


def _load_ring(args) -> tuple[GradedRing, str]:
    if args.ring_file:
        ring = parse_ring(Path(args.ring_file).read_text())
        return ring, ring.name
    ring = resolve_space(args.space)
    return ring, args.space


def _fail_usage(message: str) -> int:
    print(message, file=sys.stderr)
    return 2


def _grid_rows(config: RunConfig, rows: dict[int, list[int]]) -> str:
    header = ["n"] + [f"b_{i}" for i in range(config.i_max + 1)]
    if config.fmt == "csv":
        lines = [",".join(header)]
        for n in range(config.n_min, config.n_max + 1):
            lines.append(",".join([str(n)] + [str(v) for v in rows[n]]))
        return "\n".join(lines) + "\n"
    if config.fmt == "md":
        lines = ["| " + " | ".join(header) + " |"]
        lines.append("|" + "---|" * len(header))
        for n in range(config.n_min, config.n_max + 1):
            lines.append("| " + " | ".join([str(n)] + [str(v) for v in rows[n]]) + " |")
        return "\n".join(lines) + "\n"
    # json
    cells = [
        {"n": n, "i": i, "betti": rows[n][i]}
        for n in range(config.n_min, config.n_max + 1)
        for i in range(config.i_max + 1)
    ]
    onsets: dict[str, int] = {}
    for i in range(config.i_max + 1):
        onset = config.n_max
        while onset > config.n_min and rows[onset - 1][i] == rows[config.n_max][i]:
            onset -= 1
        onsets[str(i)] = onset
    payload = {
        "metadata": {
            "space": config.space,
            "dimension": config.ring.dimension,
            "euler": euler_characteristic(config.ring),
            "stable_onsets": onsets,
        },
        "cells": cells,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _dump_matrices(config: RunConfig) -> None:
    engine = engine_for(config.ring, config.reduced, config.exact_only)
    config.dump_dir.mkdir(parents=True, exist_ok=True)
    tasks = engine.required_ranks(config.n_min, config.n_max, config.i_max)
    for p, q, n_eff in tasks:
        matrix = assemble_matrix(config.ring, p, q, n_eff, config.reduced)
        lines = [matrix.dump_triplets(), ""]
        for monomial, image in cell_images(config.ring, p, q, n_eff, config.reduced):
            terms = (
                " + ".join(
                    f"({coeff})*{format_monomial(config.ring, m)}"
                    for m, coeff in image.terms
                )
                if image.terms
                else "0"
            )
            lines.append(f"{format_monomial(config.ring, monomial)} -> {terms}")
        path = config.dump_dir / f"d_p{p}_q{q}_n{n_eff}.txt"
        path.write_text("\n".join(lines) + "\n")


def cmd_spaces(args) -> int:
    for name in sorted(REGISTRY):
        ring = REGISTRY[name]
        print(f"{name}  dimension={ring.dimension}  basis={ring.size}")
    print(
        "dynamic families: cpK (complex projective), sigmaG (orientable surface), "
        "sK (sphere), and x-joined products such as cp1xs4"
    )
    return 0


def _make_config(args, ring: GradedRing, space: str, i_max: int) -> RunConfig:
    return RunConfig(
        ring=ring,
        space=space,
        n_min=args.n_range[0],
        n_max=args.n_range[1],
        i_max=i_max,
        reduced=not args.no_reduction,
        fmt=args.format,
        workers=1 if args.dump_matrices else args.workers,
        exact_only=args.exact_only,
        dump_dir=Path(args.dump_matrices) if args.dump_matrices else None,
    )


def cmd_compute(args) -> int:
    try:
        ring, space = _load_ring(args)
    except (KeyError, RingError, OSError) as err:
        return _fail_usage(str(err))
    if ring.dimension % 2:
        return _fail_usage(
            f"space {space!r} is odd-dimensional; use the betti-odd command, "
            "which evaluates the closed formula"
        )
    config = _make_config(args, ring, space, args.i_max)
    table = betti_table(
        ring,
        config.n_min,
        config.n_max,
        config.i_max,
        reduced=config.reduced,
        exact_only=config.exact_only,
        workers=config.workers,
    )
    if config.dump_dir is not None:
        _dump_matrices(config)
    rows = {n: table.row(n) for n in range(config.n_min, config.n_max + 1)}
    sys.stdout.write(_grid_rows(config, rows))
    return 0


def cmd_betti_odd(args) -> int:
    try:
        ring, space = _load_ring(args)
    except (KeyError, RingError, OSError) as err:
        return _fail_usage(str(err))
    if ring.dimension % 2 == 0:
        return _fail_usage(
            f"space {space!r} is even-dimensional; use the compute command, "
            "which runs the spectral sequence"
        )
    i_max = args.i_max if args.i_max is not None else args.n_range[1] * ring.dimension
    config = _make_config(args, ring, space, i_max)
    rows = {}
    for n in range(config.n_min, config.n_max + 1):
        values = betti_odd_closed(ring, n)
        padded = values[: i_max + 1] + [0] * (i_max + 1 - len(values))
        rows[n] = padded
    sys.stdout.write(_grid_rows(config, rows))
    return 0


def cmd_stable(args) -> int:
    try:
        ring, space = _load_ring(args)
    except (KeyError, RingError, OSError) as err:
        return _fail_usage(str(err))
    if ring.dimension % 2:
        values = [betti_odd_closed(ring, i + 1)[i] for i in range(args.i_max + 1)]
    else:
        values = [stable_betti(ring, i) for i in range(args.i_max + 1)]
    print(",".join(str(v) for v in values))
    return 0


def cmd_verify(args) -> int:
    try:
        ring, space = _load_ring(args)
    except (KeyError, RingError, OSError) as err:
        return _fail_usage(str(err))
    if ring.dimension % 2:
        return _fail_usage(
            f"space {space!r} is odd-dimensional; the oracle suite applies to the "
            "spectral-sequence path (use betti-odd for the closed formula)"
        )
    report = run_all(ring, args.n_range[0], args.n_range[1], args.i_max)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def _add_ring_options(sub) -> None:
    group = sub.add_mutually_exclusive_group(required=True)
    group.add_argument("--space", help="registry or dynamic space name")
    group.add_argument("--ring-file", help="path to a JSON ring description")


def _add_common_options(sub, *, n_default=None, i_required=False, i_default=None) -> None:
    _add_ring_options(sub)
    sub.add_argument(
        "--n",
        dest="n_range",
        type=_parse_n_range,
        required=n_default is None,
        default=n_default,
        help="point-count range A..B (or a single N)",
    )
    sub.add_argument(
        "--i-max",
        type=int,
        required=i_required,
        default=i_default,
        help="largest cohomological degree to report",
    )
    sub.add_argument("--format", choices=("csv", "md", "json"), default="csv")
    sub.add_argument("--no-reduction", action="store_true", help="keep top-class monomials")
    sub.add_argument("--exact-only", action="store_true", help="skip modular arithmetic")
    sub.add_argument("--workers", type=int, default=1, help="parallel rank processes")
    sub.add_argument(
        "--dump-matrices",
        metavar="DIR",
        help="write every differential matrix and generator image to DIR (serial mode)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confbetti",
        description=(
            "Rational Betti numbers of unordered configuration spaces of closed, "
            "oriented, even-dimensional manifolds"
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("spaces", help="list the built-in spaces")
    sub.set_defaults(func=cmd_spaces)

    sub = subs.add_parser("compute", help="Betti-number table over an n range")
    _add_common_options(sub, i_required=True)
    sub.set_defaults(func=cmd_compute)

    sub = subs.add_parser("verify", help="run the oracle suite; one line per check")
    _add_common_options(sub, n_default=(1, 6), i_default=14)
    sub.set_defaults(func=cmd_verify)

    sub = subs.add_parser("stable", help="stable Betti numbers b_0..b_imax")
    _add_ring_options(sub)
    sub.add_argument("--i-max", type=int, required=True)
    sub.set_defaults(func=cmd_stable)

    sub = subs.add_parser(
        "betti-odd", help="closed-formula table for odd-dimensional manifolds"
    )
    _add_common_options(sub)
    sub.set_defaults(func=cmd_betti_odd)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
