"""Subcommand handlers. Each returns (exit code, text, JSON-ready data)."""

from __future__ import annotations

import argparse
import logging
import random
from typing import Any, Dict, List, Tuple

from models import JumpSegment, parse_composition, parse_path, render_composition
from services import denom, jumps, specialize, staircase
from services.errors import ParseError
from services.hecke import RELATION_IDS, run_relation_suite
from services.polyarith import factor_qt, mac_to_json, render_mac, render_qt_poly
from services.settings import section
from services.spectral import render_spectrum, spectre_hat, spectre_y, spectrum_to_json, std
from services.ybgraph import (
    canonical_path,
    mac,
    mac_along,
    path_to_json,
    random_path,
    render_path,
    replay,
    step_apply,
)

logger = logging.getLogger(__name__)

Outcome = Tuple[int, str, Dict[str, Any]]

OK = 0
FAILED = 1


def cmd_mac(args: argparse.Namespace) -> Outcome:
    v = parse_composition(args.vector)
    p = mac(v)
    return OK, render_mac(p), mac_to_json(p)


def cmd_den(args: argparse.Namespace) -> Outcome:
    v = parse_composition(args.vector)
    den = denom.den_of(v)
    data: Dict[str, Any] = {"vector": list(v), "den": den.to_json(), "text": den.render()}
    lines = [f"Den({render_composition(v)}) = {den.render()}"]
    code = OK

    if args.path:
        path = parse_path(args.path)
        if replay(path) != v:
            lines.append(f"path ends at {render_composition(replay(path))}, not {render_composition(v)}")
            data["certificate"] = None
            return FAILED, "\n".join(lines), data
        cert = denom.certificate(path, args.algo, args.a_rule)
        sound = denom.certificate_sound(cert)
        data["certificate"] = cert.to_json()
        data["sound"] = sound
        lines.append(f"{cert.algo}({render_path(path)}) = {cert.bound.render()}")
        lines.append("sound" if sound else "UNSOUND: num(Den end / Den start) does not divide the bound")
        code = OK if sound else FAILED

    if args.points:
        points = denom.degeneracy_points(v)
        data["degeneracy_points"] = [list(p) for p in points]
        lines.append("degenerates at: " + (", ".join(f"q^{a} t^{b} = 1" for a, b in points) or "nowhere"))
    return code, "\n".join(lines), data


def cmd_spectre(args: argparse.Namespace) -> Outcome:
    v = parse_composition(args.vector)
    hat, plain = spectre_hat(v), spectre_y(v)
    text = "\n".join(
        [
            f"std     = {''.join(str(i) for i in std(v))}",
            f"zeta^   = {render_spectrum(hat)}",
            f"zeta    = {render_spectrum(plain)}",
        ]
    )
    return OK, text, {"vector": list(v), "std": list(std(v)), "spectre_hat": spectrum_to_json(hat), "spectre": spectrum_to_json(plain)}


def cmd_path(args: argparse.Namespace) -> Outcome:
    v = parse_composition(args.vector)
    path = canonical_path(v)
    data: Dict[str, Any] = {"canonical": path_to_json(path)}
    lines = [render_path(path)]
    code = OK
    if args.random:
        other = random_path(v, random.Random(args.seed))
        same = mac_along(other) == mac(v)
        data["random"] = path_to_json(other)
        data["confluent"] = same
        lines.append(render_path(other))
        lines.append("confluent" if same else "NOT CONFLUENT")
        code = OK if same else FAILED
    return code, "\n".join(lines), data


def cmd_jumpcheck(args: argparse.Namespace) -> Outcome:
    v = parse_composition(args.vector)
    spec = jumps.jump_spec(v, args.pos, args.k, args.ell)
    p = mac(v)
    via_j = jumps.block_jump(p, v, spec)
    via_dual = jumps.block_jump_dual(p, v, spec)
    end = step_apply(v, JumpSegment(args.pos, args.k, args.ell))
    stepwise = mac(end)
    bound = jumps.block_divisor_bound(spec)
    num = denom.ratio_numerator(v, end)
    divides = denom.bound_divides(num, bound)
    checks = {
        "j_route": via_j == stepwise,
        "dual_route": via_dual == stepwise,
        "bound_divides": divides,
    }
    ok = all(checks.values())
    width = max(len(name) for name in checks) + 1
    text = "\n".join(
        [
            f"{render_composition(v)} -jump({args.pos};{args.k},{args.ell})-> {render_composition(end)}",
            f"bound       = {bound.render()}",
            f"num(ratio)  = {render_qt_poly(num)}",
        ]
        + [f"{name:<{width}}{'ok' if passed else 'FAIL'}" for name, passed in checks.items()]
    )
    data = {
        "start": list(v),
        "end": list(end),
        "spec": {"pos": spec.pos, "k": spec.k, "ell": spec.ell, "a": spec.a, "b": spec.b,
                 "alpha": spec.alpha_exp, "beta": spec.beta_exp},
        "bound": bound.to_json(),
        "ratio_numerator": factor_qt(num).to_json(),
        "checks": checks,
    }
    return OK if ok else FAILED, text, data


def _render_report(report: Dict[str, Any]) -> str:
    head = f"staircase({report['k']},{report['a']},{report['n']})"
    if "error" in report:
        return f"{head}: ERROR {report['error']}"
    a, b = report["target_factor"]
    status = "absent" if report["absent"] and report["consistent"] else "PRESENT OR INCONSISTENT"
    return f"{head} = {render_composition(report['staircase'])}: Den = {report['den_text']}; 1-q^{a} t^{b} {status}"


def cmd_staircase(args: argparse.Namespace) -> Outcome:
    if args.grid:
        cells = staircase.grid_cells(max_nk=args.max_grid, max_a=args.max_a, max_size=args.max_size)
    else:
        if None in (args.k, args.a, args.n):
            raise ParseError("staircase-verify needs k a n unless --grid is given")
        cells = [(args.k, args.a, args.n)]
    reports = staircase.verify_grid(
        cells,
        progress=lambda cell: logger.info("verifying %s", cell),
        check_segments=args.check_segments,
    )
    ok = all(r.get("absent") and r.get("consistent") for r in reports)
    data: Dict[str, Any] = {"reports": reports, "ok": ok} if args.grid else reports[0]
    return OK if ok else FAILED, "\n".join(_render_report(r) for r in reports), data


def cmd_specialize(args: argparse.Namespace) -> Outcome:
    if args.identity:
        result = specialize.check_identity(specialize.load_identity(args.identity))
        text = f"{result.name}: {'holds' if result.holds else 'FAILS (' + result.reason + ')'}"
        return OK if result.holds else FAILED, text, result.to_json()

    if not args.vector or not args.point:
        raise ParseError("specialize needs a vector and a point, or --identity FILE")
    v = parse_composition(args.vector)
    point = specialize.parse_point(args.point, args.omega)
    spec = specialize.specialize_mac(v, point)
    return OK, spec.render(), spec.to_json()


def cmd_relations(args: argparse.Namespace) -> Outcome:
    conf = section("relations")
    trials = args.trials if args.trials is not None else int(conf.get("trials", 50))
    nvars = args.n if args.n is not None else int(conf.get("nvars", 3))
    degree = args.degree if args.degree is not None else int(conf.get("degree", 3))
    seed = args.seed if args.seed is not None else int(conf.get("seed", 0))
    tags: List[str] = args.only or list(RELATION_IDS)
    failures = run_relation_suite(nvars, trials, degree, seed, tags)
    ok = not any(failures.values())
    lines = [f"{tag:<10}{'ok' if not failed else f'{len(failed)} failure(s)'}" for tag, failed in failures.items()]
    data = {"nvars": nvars, "trials": trials, "degree": degree, "seed": seed, "failures": failures, "ok": ok}
    return OK if ok else FAILED, "\n".join(lines), data
