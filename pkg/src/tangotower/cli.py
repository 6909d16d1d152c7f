"""Command-line front end.

Exit codes: 0 success, 1 a claim or self-check did not reproduce, 2 bad
input or a failed precondition.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import cover, curve, cysearch, tower
from .divclass import TowerClass, pullback, scale

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _no_float(s):
    raise InputError(f"floating-point number {s} rejected; write rationals as 'p/q' strings")


def load_json_arg(arg: str):
    """Inline JSON (starting with ``{``) or a path to a JSON file."""
    text = arg
    if not arg.lstrip().startswith("{"):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc.strerror}") from None
    try:
        return json.loads(text, parse_float=_no_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None


def _emit(report: dict, fmt: str, text_lines: list[str], out) -> None:
    if fmt == "json":
        out.write(cysearch.dumps(report))
    else:
        out.write("\n".join(text_lines) + "\n")


# --- curve analyze ---------------------------------------------------------

def curve_analyze(obj: dict, ds: list[int], weight_bound: int | None) -> dict:
    C = curve.ArtinSchreierCurve.from_json(obj)
    wb = weight_bound if weight_bound is not None else 3 * C.p * C.m
    rep = {
        "curve": C.to_json(),
        "genus": C.genus,
        "canonical_degree": C.canonical_degree,
        "dx": curve.differential_report(C, curve.CurveFunction.x(C)).to_json(),
        "weight_bound": wb,
        "structures": {},
    }
    for d in ds:
        t = curve.is_tango(C, d)
        pt = curve.pre_tango_search(C, d, wb)
        rep["structures"][str(d)] = {
            "tango": t is not None,
            "tango_witness": None if t is None else str(t),
            "pre_tango": pt is not None,
            "pre_tango_witness": None if pt is None else str(pt),
        }
    if C.genus >= 2:
        b = curve.tango_invariant_bounds(C, wb)
        rep["tango_invariant"] = b.to_json()
        rep["n_bounds"] = [b.lower, str(b.upper)]
    else:
        rep["tango_invariant"] = None
        rep["n_bounds"] = None
    return rep


def _curve_text(rep: dict) -> list[str]:
    c = curve.ArtinSchreierCurve.from_json(rep["curve"])
    lines = [str(c), f"genus {rep['genus']}, 2g-2 = {rep['canonical_degree']}"]
    for d, s in rep["structures"].items():
        lines.append(f"d={d}: tango={str(s['tango']).lower()} (witness {s['tango_witness']}), "
                     f"pre-tango={str(s['pre_tango']).lower()} (witness {s['pre_tango_witness']})")
    if rep["n_bounds"] is not None:
        lines.append(f"Tango invariant bounds: {rep['n_bounds'][0]} <= n(C) <= {rep['n_bounds'][1]}")
    return lines


# --- tower build / cover check --------------------------------------------

def cover_report(p: int, k: int, m: int | None, d_prime: TowerClass) -> dict:
    if m is None:
        m = cover.least_m(p, k)
    summands = cover.cyclic_cover_summands(p, k, m, d_prime)
    rel = cover.verify_mk_relation(p, k, m, d_prime)
    rep = {
        "p": p, "k": k, "m": m,
        "d_prime": d_prime.to_json(),
        "M": cover.m_line_bundle(p, k, m, d_prime).to_json(),
        "summands": [s.to_json() for s in summands],
        "mk_relation": {"ok": rel.ok, "residual": rel.residual.to_json()},
    }
    try:
        push = cover.pushforward_structure(summands)
        rep["pushforward"] = [c.to_json() for c in push]
        rep["pushforward_is_structure_sheaf"] = len(push) == 1 and push[0].is_zero
    except cover.UnsupportedPushforward as exc:
        rep["pushforward"] = None
        rep["pushforward_error"] = str(exc)
    return rep


def tower_build(script: dict) -> dict:
    states = tower.build_tower(script)
    levels = []
    for s in states:
        entry = s.to_json()
        entry["classification"] = tower.classify_canonical(s).to_json()
        entry["canonical_text"] = str(s.canonical)
        entry["polarization_text"] = str(s.polarization)
        if s.differential is not None:
            entry["slack"] = s.slack().to_json()
        levels.append(entry)
    rep = {"p": states[0].p, "levels": levels}
    if script.get("cover_check"):
        checks = []
        for prev, st in zip(states, states[1:]):
            rec = st.steps[-1]
            if rec.kind == "I":
                checks.append(cover_report(st.p, rec.k, None, rec.d_prime))
        rep["cover_checks"] = checks
    return rep


def _tower_text(rep: dict) -> list[str]:
    lines = []
    for i, lv in enumerate(rep["levels"]):
        lines.append(f"level {i} (dim {lv['dim']}, {lv['tango']}): K = {lv['canonical_text']}; "
                     f"D = {lv['polarization_text']}; {lv['classification']['verdict']}")
    for c in rep.get("cover_checks", []):
        lines.append(f"cover k={c['k']} m={c['m']}: M^k relation {'ok' if c['mk_relation']['ok'] else 'FAILS'}, "
                     f"pushforward = O_X: {c.get('pushforward_is_structure_sheaf')}")
    return lines


# --- selftest ---------------------------------------------------------------

def selftest(seed: int, rounds: int = 50) -> dict:
    """Randomized consistency battery; deterministic for a given seed."""
    rng = random.Random(seed)
    failures = []
    n_steps = 0
    for _ in range(rounds):
        p = rng.choice([2, 3, 5, 7, 11])
        states = tower.random_tango_tower(rng, p)
        for prev, st in zip(states, states[1:]):
            n_steps += 1
            rec = st.steps[-1]
            slack = prev.slack()
            if st.differential - scale(p, st.polarization) != pullback(slack):
                failures.append(f"differential relation, p={p}, k={rec.k}")
            if cover.ramification_canonical(p, prev.canonical, rec.k, rec.d_prime) != st.canonical:
                failures.append(f"canonical class vs ramification, p={p}, k={rec.k}")
    n_eta = 0
    for _ in range(rounds // 5 or 1):
        p = rng.choice([2, 3, 5])
        m = rng.choice([m for m in range(2, 8) if m % p])
        C = curve.ArtinSchreierCurve(p, (0,) * m + (1,))
        eta = curve.random_eta(C, 3 * p * m, rng)
        h = curve.differential_of(C, eta)
        v = curve.infinity_valuation(C, h, as_differential=True)
        pc = curve.brute_force_divisor_degree(C, h, 2)
        n_eta += 1
        if v + pc.certified_degree != C.canonical_degree:
            failures.append(f"degree conservation, p={p}, m={m}, eta={eta}")
    certs = [cysearch.surface_k3_search(13, 50), cysearch.construction_ii_search(13, 3, 10)]
    for c in certs:
        failures.extend(cysearch.replay(c))
    return {"seed": seed, "tower_steps": n_steps, "curve_differentials": n_eta,
            "certificates": len(certs), "failures": failures, "ok": not failures}


# --- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tangotower", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", choices=["text", "json"], default="text")

    cp = sub.add_parser("curve", help="Artin-Schreier curve tools")
    csub = cp.add_subparsers(dest="action", required=True)
    ca = csub.add_parser("analyze", help="genus, Tango structures and invariant bounds")
    ca.add_argument("input", help='curve JSON (inline or path), e.g. \'{"p": 3, "f": [0,0,0,0,0,1]}\'')
    ca.add_argument("--d", type=int, action="append", help="degree of D to test (repeatable)")
    ca.add_argument("--weight-bound", type=int, default=None)
    fmt(ca)

    tp = sub.add_parser("tower", help="tower construction")
    tsub = tp.add_subparsers(dest="action", required=True)
    tb = tsub.add_parser("build", help="run a tower build script")
    tb.add_argument("input", help="tower script JSON (inline or path)")
    fmt(tb)

    vp = sub.add_parser("cover", help="cyclic cover algebra")
    vsub = vp.add_subparsers(dest="action", required=True)
    vc = vsub.add_parser("check", help="summands, pushforward and M^k relation")
    vc.add_argument("--p", type=int, required=True)
    vc.add_argument("--k", type=int, required=True)
    vc.add_argument("--m", type=int, default=None, help="default: least m > 0 with k | p+m")
    vc.add_argument("--d-prime", default="1", help="D' as a rational degree or TowerClass JSON")
    fmt(vc)

    yp = sub.add_parser("verify-corollaries", help="re-run the four (im)possibility searches")
    yp.add_argument("--p-max", type=int, default=97)
    yp.add_argument("--k-max", type=int, default=10**4)
    yp.add_argument("--l-max", type=int, default=6)
    yp.add_argument("--r-max", type=int, default=100)
    yp.add_argument("--workers", type=int, default=1)
    yp.add_argument("--json", dest="json_out", default=None, help="write certificates to this file")
    fmt(yp)

    sp = sub.add_parser("selftest", help="randomized consistency checks")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--rounds", type=int, default=50)
    fmt(sp)
    return ap


def _d_prime_arg(s: str) -> TowerClass:
    s = s.strip()
    if s.startswith("{"):
        return TowerClass.from_json(load_json_arg(s))
    try:
        return TowerClass.base(Fraction(s))
    except (ValueError, ZeroDivisionError):
        raise InputError(f"bad D' value {s!r}") from None


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "curve":
            rep = curve_analyze(load_json_arg(args.input), args.d or [], args.weight_bound)
            _emit(rep, args.format, _curve_text(rep), out)
            return EXIT_OK
        if args.command == "tower":
            script = load_json_arg(args.input)
            if not isinstance(script, dict):
                raise InputError("tower script must be a JSON object")
            rep = tower_build(script)
            _emit(rep, args.format, _tower_text(rep), out)
            return EXIT_OK
        if args.command == "cover":
            rep = cover_report(args.p, args.k, args.m, _d_prime_arg(args.d_prime))
            lines = [f"M = {cover.PBundleClass.from_json(rep['M'])}",
                     *(f"summand {i}: {cover.PBundleClass.from_json(s)}" for i, s in enumerate(rep["summands"])),
                     f"M^k relation: {'ok' if rep['mk_relation']['ok'] else 'FAILS'}",
                     f"pushforward: {rep.get('pushforward_error') or rep['pushforward']}"]
            _emit(rep, args.format, lines, out)
            return EXIT_OK if rep["mk_relation"]["ok"] else EXIT_MISMATCH
        if args.command == "verify-corollaries":
            results = cysearch.verify_corollaries(args.p_max, args.k_max, args.l_max, args.r_max, args.workers)
            rep = {
                "bounds": {"p_max": args.p_max, "k_max": args.k_max, "l_max": args.l_max, "r_max": args.r_max},
                "reproduced": sum(r.reproduced for r in results),
                "claims": [{"claim": r.claim, "reproduced": r.reproduced, "problems": list(r.problems),
                            "certificate": r.certificate.to_json()} for r in results],
            }
            if args.json_out:
                Path(args.json_out).write_text(cysearch.dumps(rep))
            lines = [f"{r.claim}: {r.certificate.verdict} "
                     f"{'reproduced' if r.reproduced else 'MISMATCH ' + '; '.join(r.problems)}"
                     for r in results]
            lines.append(f"{rep['reproduced']}/{len(results)} reproduced")
            _emit(rep, args.format, lines, out)
            return EXIT_OK if rep["reproduced"] == len(results) else EXIT_MISMATCH
        if args.command == "selftest":
            rep = selftest(args.seed, args.rounds)
            lines = [f"seed {rep['seed']}: {rep['tower_steps']} tower steps, "
                     f"{rep['curve_differentials']} curve differentials, {rep['certificates']} certificates",
                     *rep["failures"], "ok" if rep["ok"] else "FAILED"]
            _emit(rep, args.format, lines, out)
            return EXIT_OK if rep["ok"] else EXIT_MISMATCH
    except tower.StepError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (InputError, curve.CurveError, cover.CoverPreconditionError, ValueError, KeyError, TypeError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT
    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(run())
