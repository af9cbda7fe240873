"""Command-line front end.

Every subcommand writes CSV or JSON to stdout or ``--output``.  Exit status
is 0 on success and 2 on any usage, validation or I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from contextlib import contextmanager

import numpy as np

from .errors import DomainError, RangeError
from .immanant import immanant, load_matrix, normalized_immanant
from .inequalities import dominance_campaign
from .partitions import Partition, character_table
from .scattering import (
    arrangement_probability,
    distinguishable_probability,
    indistinguishable_probability,
    transition_sweep,
    validate_distinguishability,
    write_sweep_csv,
)
from .states import partial_pauli_check

log = logging.getLogger("immanons")


def _num(value: float) -> float:
    return float(f"{value:.12g}")


def parse_partition(text: str, n: int | None = None) -> Partition:
    """Parse ``"3.1.1"``; out-of-order parts are re-sorted with a warning."""
    try:
        parts = [int(p) for p in text.strip().split(".")]
    except ValueError:
        raise DomainError(f"malformed partition {text!r}; expected dot-joined parts like 2.1") from None
    ordered = sorted(parts, reverse=True)
    if ordered != parts:
        log.warning("partition %s re-sorted to %s", text, ".".join(map(str, ordered)))
    lam = Partition(ordered)
    if n is not None and lam.size != n:
        raise DomainError(f"partition {lam.label} has size {lam.size}, expected {n}")
    return lam


def parse_occupation(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(k) for k in text.split(","))
    except ValueError:
        raise DomainError(f"malformed occupation {text!r}; expected comma-separated counts") from None


@contextmanager
def _output(path: str | None):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_json(obj: dict, path: str | None) -> None:
    with _output(path) as fh:
        fh.write(json.dumps(obj, sort_keys=True) + "\n")


def cmd_chartable(args) -> None:
    with _output(args.output) as fh:
        fh.write(character_table(args.n).to_csv())


def cmd_immanant(args) -> None:
    M = load_matrix(args.matrix)
    lam = parse_partition(args.lam, args.n)
    if lam.size != M.shape[0]:
        raise DomainError(f"partition {lam.label} does not match a {M.shape[0]}x{M.shape[0]} matrix")
    value = immanant(lam, M)
    norm = normalized_immanant(lam, M)
    _emit_json(
        {
            "lambda": lam.label,
            "re": _num(value.real),
            "im": _num(value.imag),
            "normalized_re": _num(norm.real),
            "normalized_im": _num(norm.imag),
        },
        args.output,
    )


def cmd_scatter(args) -> None:
    M = load_matrix(args.matrix)
    S = validate_distinguishability(load_matrix(args.smatrix))
    lam = parse_partition(args.lam, args.n)
    n = lam.size
    s = parse_occupation(args.occupation) if args.occupation else (1,) * n
    _emit_json(
        {
            "lambda": lam.label,
            "occupation": list(s),
            "probability": _num(arrangement_probability(lam, M, S, s)),
            "distinguishable": _num(distinguishable_probability(M, s)),
            "indistinguishable": _num(indistinguishable_probability(lam, M, s)),
        },
        args.output,
    )


def cmd_sweep(args) -> None:
    if args.x_steps < 1:
        raise DomainError("--x-steps must be at least 1")
    if not 0.0 <= args.x_min <= args.x_max <= 1.0:
        raise RangeError("grid must satisfy 0 <= x-min <= x-max <= 1")
    grid = np.linspace(args.x_min, args.x_max, args.x_steps)
    rows = transition_sweep(args.n, grid.tolist(), jobs=args.jobs)
    with _output(args.output) as fh:
        write_sweep_csv(rows, fh)


def cmd_dominance(args) -> None:
    summary = dominance_campaign(args.n, args.trials, args.seed, jobs=args.jobs, timed=not args.deterministic)
    if summary.violated:
        log.warning("inequality violations recorded: schur=%d dominance=%d",
                    summary.schur_violations, summary.dominance_violations)
    _emit_json(summary.to_json(), args.output)


def cmd_pauli(args) -> None:
    lam = parse_partition(args.lam, args.n)
    eta = parse_partition(args.eta, lam.size)
    check = partial_pauli_check(lam, eta)
    _emit_json(
        {
            "lambda": lam.label,
            "eta": eta.label,
            "projection_norm": _num(check.projection_norm),
            "majorization_allows": check.majorization_allows,
        },
        args.output,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="immanons", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", metavar="FILE", help="write to FILE instead of stdout")
    common.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    common.add_argument("--deterministic", action="store_true", help="omit run-dependent fields")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("chartable", parents=[common], help="character table of S_n as CSV")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_chartable)

    p = sub.add_parser("immanant", parents=[common], help="immanant of a matrix")
    p.add_argument("--lambda", dest="lam", required=True, help="partition, e.g. 2.1")
    p.add_argument("--matrix", required=True, metavar="FILE")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_immanant)

    p = sub.add_parser("scatter", parents=[common], help="output-arrangement probability")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--matrix", required=True, metavar="FILE", help="scattering matrix M")
    p.add_argument("--smatrix", required=True, metavar="FILE", help="distinguishability matrix S")
    p.add_argument("--occupation", help="output counts per mode, e.g. 2,1,0 (default: one per mode)")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_scatter)

    p = sub.add_parser("sweep", parents=[common], help="bunching factors on the transition matrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=1.0)
    p.add_argument("--x-steps", type=int, default=101)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("dominance", parents=[common], help="random permanental-dominance campaign")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_dominance)

    p = sub.add_parser("pauli", parents=[common], help="partial Pauli projection test")
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--eta", required=True, help="occupation multiplicities, e.g. 2.2")
    p.add_argument("--n", type=int)
    p.set_defaults(func=cmd_pauli)
    return parser


def main(argv=None) -> int:
    level = logging.getLevelName(os.environ.get("IMMANON_LOG", "WARNING").upper())
    if not isinstance(level, int):
        level = logging.WARNING
    logging.basicConfig(level=level, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (DomainError, RangeError, ArithmeticError, OSError, RuntimeError) as exc:
        print(f"immanons {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
