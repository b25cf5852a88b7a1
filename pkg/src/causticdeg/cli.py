"""Command line front end: parse a curve and a source, run the pipeline, report."""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .caustic import build_phi, mdeg_routes, reflected_line, reflection_law, verify_key_identity
from .errors import CausticError, RouteDisagreement
from .invariants import profile
from .numera import resolve
from .oracle import mdeg_oracle
from .parsing import format_point, parse_point, parse_poly

IRREDUCIBILITY_NOTE = (
    "note: irreducibility of the curve is assumed, not checked; "
    "results are undefined for reducible input (pass --assert-irreducible to silence)"
)


@dataclass
class JobSpec:
    curve: str
    source: str = ""
    truncation: Fraction | None = None
    oracle: bool = True
    seed: int = 0
    timings: bool = False
    expected: int | None = None
    options: dict = field(default_factory=dict)


def _invariants_section(F, truncation, seed) -> dict:
    prof = profile(F, truncation, check=True, seed=seed)
    return {
        "degree": prof.degree,
        "class": prof.class_dual,
        "flex_count": prof.flex_total,
        "polar_seed": prof.polar_seed,
    }


def _run_job(spec: JobSpec) -> dict:
    started = time.perf_counter()
    F = parse_poly(spec.curve)
    S = parse_point(spec.source)
    inv = _invariants_section(F, spec.truncation, spec.seed)
    after_profile = time.perf_counter()
    cm = build_phi(F, S)
    oracle = None
    if spec.oracle:
        def oracle(cm_, recs):
            return mdeg_oracle(cm_, recs, seed=spec.seed)
    try:
        report = mdeg_routes(cm, spec.truncation, oracle, spec.curve, [spec.source])
        out = report.to_json()
        out["status"] = "ok"
        out["mdeg_value"] = report.mdeg
    except RouteDisagreement as exc:
        out = exc.report.to_json() if exc.report is not None else {}
        out["status"] = "routes disagree"
        out["mdeg_value"] = None
    out["flex_count"] = inv["flex_count"]
    out["seeds"] = dict(out.get("seeds") or {}, profile=inv["polar_seed"], requested=spec.seed)
    if spec.timings:
        done = time.perf_counter()
        out["timings"] = {
            "invariants_s": round(after_profile - started, 3),
            "caustic_s": round(done - after_profile, 3),
        }
    if spec.expected is not None:
        out["expected"] = spec.expected
        out["matches_expected"] = out["mdeg_value"] == spec.expected
    return out


def run_job(spec: JobSpec) -> dict:
    """Full report for one curve and source, as a JSON-ready dict."""
    return resolve(_run_job, spec)


def invariants_only(curve: str, truncation=None, seed: int = 0) -> dict:
    def go():
        F = parse_poly(curve)
        from .caustic import singular_summary

        _, sing = singular_summary(F, truncation)
        out = {"input": {"curve": curve}}
        out.update(_invariants_section(F, truncation, seed))
        out["singular_points"] = sing
        return out

    return resolve(go)


# ---------------------------------------------------------------------------
# Corpus files
# ---------------------------------------------------------------------------


def read_corpus(path: str | Path) -> list[JobSpec]:
    jobs = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) not in (2, 3):
            raise ValueError(f"{path}:{lineno}: expected '<curve> ; <source> ; <expected>'")
        expected = int(parts[2]) if len(parts) == 3 and parts[2] else None
        jobs.append(JobSpec(parts[0], parts[1], expected=expected))
    return jobs


def _safe_job(spec: JobSpec) -> dict:
    try:
        return run_job(spec)
    except CausticError as exc:
        return {
            "input": {"curve": spec.curve, "source": [spec.source]},
            "status": f"error: {type(exc).__name__}: {exc}",
            "mdeg_value": None,
            "expected": spec.expected,
            "matches_expected": False,
        }


def run_corpus(jobs: list[JobSpec], workers: int = 1) -> list[dict]:
    """Reports in input order; jobs run in parallel when ``workers`` > 1."""
    if workers <= 1:
        return [_safe_job(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_safe_job, jobs))


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def _fraction(text: str) -> Fraction:
    return Fraction(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causticdeg",
        description="Degree of the caustic by reflection of a plane algebraic curve.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--curve", help="homogeneous polynomial in x, y, z, e.g. 'y^2*z^3 - x^5'")
    common.add_argument("--source", help="light source, e.g. '[1:2:1]' or '[t:0:1] @ t^2-2'")
    common.add_argument("--assert-irreducible", action="store_true", help="assert the curve is irreducible")
    common.add_argument("--no-oracle", action="store_true", help="skip the direct valuation check")
    common.add_argument("--seed", type=int, default=0, help="seed for generic choices")
    common.add_argument("--json", action="store_true", help="print the machine-readable report")
    common.add_argument("--truncation", type=_fraction, default=None, help="Puiseux truncation order")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings in reports")
    sub = parser.add_subparsers(dest="verb", required=True)
    sub.add_parser("mdeg", parents=[common], help="degree with multiplicity of the caustic")
    sub.add_parser("invariants", parents=[common], help="class, flexes and singular points")
    reflect = sub.add_parser("reflect", parents=[common], help="reflected line at a point of the curve")
    reflect.add_argument("--point", required=True, help="affine point of the curve, e.g. '[1:0:1]'")
    sub.add_parser("verify-identity", parents=[common], help="check the moving-frame identity on the curve")
    corpus = sub.add_parser("corpus", parents=[common], help="run a corpus file")
    corpus.add_argument("path", help="file with lines '<curve> ; <source> ; <expected mdeg>'")
    corpus.add_argument("--workers", type=int, default=1, help="parallel jobs")
    return parser


def _need(args, *names):
    missing = [n for n in names if not getattr(args, n)]
    if missing:
        raise SystemExit(f"error: --{missing[0]} is required for '{args.verb}'")


def _emit(obj: dict, as_json: bool, summary: str) -> None:
    if as_json:
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(summary)


def _mdeg_summary(rep: dict) -> str:
    m = rep.get("mdeg", {})
    lines = [
        f"curve   {rep['input']['curve']}",
        f"source  {rep['input']['source'][0]}",
        f"degree {rep.get('degree')}  class {rep.get('class')}  flexes {rep.get('flex_count')}",
    ]
    if rep.get("constant_image"):
        lines.append(f"source at cyclic point {rep['constant_image']}: caustic is the point {rep['image_point']}")
    for bp in rep.get("base_points", []):
        tags = ", ".join(f"{c['case_tag']}:{c['alpha']}" for c in bp["cases"])
        lines.append(f"  base point {'[' + ' : '.join(bp['point']['coords']) + ']'} x{bp['count']}  {tags}")
    routes = ", ".join(f"{k}={v}" for k, v in m.items() if k != "agreed" and v is not None)
    lines.append(f"routes  {routes}")
    lines.append(f"mdeg    {rep.get('mdeg_value')}  ({rep.get('status')})")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if not args.assert_irreducible and args.verb != "corpus":
        print(IRREDUCIBILITY_NOTE, file=sys.stderr)
    try:
        if args.verb == "mdeg":
            _need(args, "curve", "source")
            spec = JobSpec(args.curve, args.source, args.truncation, not args.no_oracle, args.seed, args.timings)
            rep = run_job(spec)
            _emit(rep, args.json, _mdeg_summary(rep))
            return 0 if rep["status"] == "ok" else 1
        if args.verb == "invariants":
            _need(args, "curve")
            rep = invariants_only(args.curve, args.truncation, args.seed)
            summary = f"degree {rep['degree']}  class {rep['class']}  flexes {rep['flex_count']}"
            for sp in rep["singular_points"]:
                summary += f"\n  singular {'[' + ' : '.join(sp['point']['coords']) + ']'}  V={sp['V']} I={sp['I']}"
            _emit(rep, args.json, summary)
            return 0
        if args.verb == "reflect":
            _need(args, "curve", "source")
            F, S, m = parse_poly(args.curve), parse_point(args.source), parse_point(args.point)

            def go():
                line = reflected_line(F, S, m)
                before, after, _ = reflection_law(F, S, m)
                return line, before, after

            line, before, after = resolve(go)
            rep = {
                "input": {"curve": args.curve, "source": args.source, "point": args.point},
                "reflected_line": line.to_json(),
                "law_holds": None if before is None or after is None else bool(before == after),
            }
            _emit(rep, args.json, f"reflected line {format_point(line.coeffs)}  (law holds: {rep['law_holds']})")
            return 0
        if args.verb == "verify-identity":
            _need(args, "curve", "source")
            ok = resolve(verify_key_identity, parse_poly(args.curve), parse_point(args.source))
            _emit({"identity_holds": ok}, args.json, f"identity holds: {ok}")
            return 0 if ok else 1
        if args.verb == "corpus":
            jobs = read_corpus(args.path)
            for j in jobs:
                j.oracle = not args.no_oracle
                j.seed = args.seed
                j.truncation = args.truncation
                j.timings = args.timings
            reports = run_corpus(jobs, args.workers)
            good = all(r["status"] == "ok" and r.get("matches_expected", True) for r in reports)
            lines = []
            for r in reports:
                exp = r.get("expected")
                tag = "" if exp is None else f" expected {exp}: {'PASS' if r.get('matches_expected') else 'FAIL'}"
                lines.append(f"{r['input']['curve']} ; {r['input']['source'][0]} -> {r.get('mdeg_value')} [{r['status']}]{tag}")
            _emit({"jobs": reports, "all_ok": good}, args.json, "\n".join(lines))
            return 0 if good else 1
    except CausticError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
