"""Argument parser for the ``macdonald-yb`` command line."""

from __future__ import annotations

import argparse

from services.denom import A_RULES, ALGOS
from services.hecke import RELATION_IDS

from . import commands


def _common(suppress: bool) -> argparse.ArgumentParser:
    """Flags accepted both before and after the subcommand."""
    default = argparse.SUPPRESS if suppress else None
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="Print JSON instead of text.")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="Log at DEBUG level.")
    common.add_argument("--seed", type=int, default=default, help="Seed for randomized checks.")
    common.add_argument("--max-grid", type=int, default=default, help="Largest n*k of the staircase grid.")
    common.add_argument("--cache-dir", default=default, help="Directory of the on-disk M_v cache.")
    common.add_argument("--remember-cache-dir", action="store_true", default=argparse.SUPPRESS if suppress else False,
                        help="Save --cache-dir as the default for later runs.")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="macdonald-yb",
        description="Exact nonsymmetric Macdonald polynomials via the Yang-Baxter graph.",
        parents=[_common(False)],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    p = sub.add_parser("mac", parents=[common], help="Print M_v.")
    p.add_argument("vector", help='Composition, e.g. "102" or "1,0,2".')
    p.set_defaults(handler=commands.cmd_mac)

    p = sub.add_parser("den", parents=[common], help="Factored denominator of M_v, optionally with a path certificate.")
    p.add_argument("vector")
    p.add_argument("--path", help='Path ending at the vector, e.g. "022330 jump(2;2,2)".')
    p.add_argument("--algo", choices=ALGOS, default="triv")
    p.add_argument("--a-rule", choices=A_RULES, default="printed", help="q-power charged per affine step by triv.")
    p.add_argument("--points", action="store_true", help="List the points q^a t^b = 1 where M_v degenerates.")
    p.set_defaults(handler=commands.cmd_den)

    p = sub.add_parser("spectre", parents=[common], help="std(v) and the spectral vectors of v.")
    p.add_argument("vector")
    p.set_defaults(handler=commands.cmd_spectre)

    p = sub.add_parser("path", parents=[common], help="Canonical Yang-Baxter path from 0^N to v.")
    p.add_argument("vector")
    p.add_argument("--random", action="store_true", help="Also walk a random path and compare the results.")
    p.set_defaults(handler=commands.cmd_path)

    p = sub.add_parser("jump-check", parents=[common], help="Check a block jump against the stepwise path and its bound.")
    p.add_argument("vector")
    p.add_argument("--pos", type=int, required=True, help="1-based start of the a-block.")
    p.add_argument("--k", type=int, required=True, help="Length of the a-block.")
    p.add_argument("--ell", type=int, required=True, help="Length of the b-block.")
    p.set_defaults(handler=commands.cmd_jumpcheck)

    p = sub.add_parser("staircase-verify", parents=[common], help="Verify 1 - q^a t^(k+1) never divides Den(staircase).")
    p.add_argument("k", type=int, nargs="?")
    p.add_argument("a", type=int, nargs="?")
    p.add_argument("n", type=int, nargs="?")
    p.add_argument("--grid", action="store_true", help="Run the configured grid instead of one cell.")
    p.add_argument("--max-a", type=int, help="Largest step height a of the grid.")
    p.add_argument("--max-size", type=int, help="Largest |staircase| of the grid.")
    p.add_argument("--check-segments", action="store_true", default=None,
                   help="Also check every jump bound against the brute-force numerator of its segment.")
    p.set_defaults(handler=commands.cmd_staircase)

    p = sub.add_parser("specialize", parents=[common], help="Specialize M_v at q^a t^b = 1 or check an identity file.")
    p.add_argument("vector", nargs="?")
    p.add_argument("point", nargs="?", help='e.g. "q*t^2=1" or "q^3*t^3=1 omega=1".')
    p.add_argument("--omega", type=int, help="Use omega = zeta_a^k.")
    p.add_argument("--identity", help="Identity file to check.")
    p.set_defaults(handler=commands.cmd_specialize)

    p = sub.add_parser("relations", parents=[common], help="Run the operator relation catalog on random polynomials.")
    p.add_argument("--trials", type=int)
    p.add_argument("--n", type=int, help="Number of variables.")
    p.add_argument("--degree", type=int)
    p.add_argument("--only", nargs="+", choices=RELATION_IDS, help="Restrict to these relation ids.")
    p.set_defaults(handler=commands.cmd_relations)

    return parser
