"""One test per acceptance criterion; each records a PASS/FAIL line for the summary."""

from __future__ import annotations

import random
from collections import Counter
from fractions import Fraction
from pathlib import Path

from causticdeg.caustic import build_phi, classify, mdeg_routes, verify_key_identity
from causticdeg.cli import read_corpus, run_corpus
from causticdeg.invariants import (
    bezout_hessian,
    bezout_polar,
    generic_point,
    intersect_hessian,
    intersect_polar,
    profile,
)
from causticdeg.locus import ProjLine, ProjPoint, line_through, points_on_line, same_point, singular_points
from causticdeg.numera import IMAG, GaussianRational, gauss, resolve
from causticdeg.oracle import mdeg_oracle
from causticdeg.parsing import parse_point, parse_poly
from causticdeg.polyring import HomoPoly
from causticdeg.puiseux import local_data, tangent_cone_form

from conftest import record_criterion

CORPUS = Path(__file__).parent / "data" / "corpus.txt"
QUINTIC_TEXT = "y^2*z^3 - x^5"
QUINTIC = parse_poly(QUINTIC_TEXT)
I_POINT = (gauss(1), IMAG, gauss(0))
J_POINT = (gauss(1), -IMAG, gauss(0))
ORIGIN = ProjPoint((0, 0, 1))
A2 = ProjPoint((0, 1, 0))
LINE_AT_INFINITY = ProjLine((0, 0, 1))
FIRST_SINGULAR_TANGENT = ProjLine((0, 1, 0))

_CORPUS_REPORTS: list[dict] | None = None


def corpus_reports() -> list[dict]:
    global _CORPUS_REPORTS
    if _CORPUS_REPORTS is None:
        _CORPUS_REPORTS = run_corpus(read_corpus(CORPUS), workers=4)
    return _CORPUS_REPORTS


# -- 1 ---------------------------------------------------------------------


def _isotropic_tangencies(F, S) -> int:
    """How many of the lines (SI), (SJ) touch the curve at a smooth point other than S."""
    sing = singular_points(F)
    touching = 0
    for cyclic in (I_POINT, J_POINT):
        if same_point(S, cyclic):
            continue
        line = line_through(cyclic, S)
        for _, p, mult in points_on_line(F, line):
            if mult >= 2 and not sing.contains(p) and not same_point(p.coords, S):
                touching += 1
                break
    return touching


def _position(S) -> dict:
    def go():
        return {
            "on_curve": QUINTIC.evaluate(S).is_zero(),
            "on_singular_tangent": FIRST_SINGULAR_TANGENT.contains(S),
            "at_infinity": LINE_AT_INFINITY.contains(S),
            "singular": same_point(S, ORIGIN.coords) or same_point(S, A2.coords),
            "cyclic": same_point(S, I_POINT) or same_point(S, J_POINT),
            "isotropic_tangents": _isotropic_tangencies(QUINTIC, S),
        }

    return resolve(go)


GENERIC = dict(on_curve=False, on_singular_tangent=False, at_infinity=False, singular=False, cyclic=False, isotropic_tangents=0)

QUINTIC_ROWS = [
    ("generic source", "[1:2:1]", 16, GENERIC),
    ("generic source on the curve", "[1:1:1]", 14, dict(GENERIC, on_curve=True)),
    ("generic source on the tangent at A1", "[1:0:1]", 15, dict(GENERIC, on_singular_tangent=True)),
    ("generic source at infinity", "[1:2:0]", 9, dict(GENERIC, at_infinity=True)),
    ("source on both singular tangents", "[1:0:0]", 8, dict(GENERIC, on_singular_tangent=True, at_infinity=True)),
    ("source at A1", "[0:0:1]", 11, None),
    ("source at A2", "[0:1:0]", 6, None),
    (
        "generic source on one isotropic tangent",
        "[t + 2 : -5/2*i*t^4 + 2*i : 1] @ t^3+4/25",
        13,
        dict(GENERIC, isotropic_tangents=1),
    ),
    (
        "source on two isotropic tangents",
        "[t + (t*u - t + 5/2*t^4*(u+1))/2 : -5/2*i*t^4 + i*(t*u - t + 5/2*t^4*(u+1))/2 : 1]"
        " @ t^3+4/25, u^2+u+1",
        10,
        dict(GENERIC, isotropic_tangents=2),
    ),
    ("source at I", "[1:i:0]", 0, None),
    ("source at J", "[1:-i:0]", 0, None),
]


def test_criterion_1_quintic_table():
    failures = []
    for label, source, expected, position in QUINTIC_ROWS:
        S = parse_point(source)
        if position is not None and _position(S) != position:
            failures.append(f"{label}: position {_position(S)}")
            continue
        rep = resolve(lambda: mdeg_routes(build_phi(QUINTIC, S), None, mdeg_oracle))
        if not rep.agreed or rep.mdeg != expected:
            failures.append(f"{label}: {rep.values} expected {expected}")
    record_criterion(1, not failures, "; ".join(failures) or f"{len(QUINTIC_ROWS)} rows reproduced")
    assert not failures


# -- 2 ---------------------------------------------------------------------


def test_criterion_2_quintic_invariants():
    prof = profile(QUINTIC)
    by_point = {repr(p.point): p.local for p in prof.singular}
    tangential = {
        name: sum((b.weight * b.tangential_number for b in by_point[repr(pt)].branches), Fraction(0))
        for name, pt in (("A1", ORIGIN), ("A2", A2))
    }
    mults = sorted(e for L in by_point.values() for e, n in L.multiplicities().items() for _ in range(int(n)))
    got = (prof.class_dual, prof.flex_total, int(tangential["A1"]), int(tangential["A2"]), mults)
    ok = got == (5, 0, 5, 5, [2, 3])
    record_criterion(2, ok, f"class, flexes, i_A1, i_A2, multiplicities = {got}")
    assert ok


# -- 3 ---------------------------------------------------------------------

LOCAL_TABLE = [
    # curve, Hessian value, polar values for P generic, P on a tangent, P at the point
    ("node", "y^2*z - x^3 - x^2*z", 6, ((2, 5, 1), (1, 1, 0), (0, 0, 1)), (2, 3, 5)),
    ("cusp", "y^2*z - x^3", 8, ((2, 5, 1), (1, 0, 0), (0, 0, 1)), (3, 4, 6)),
]


def test_criterion_3_local_intersection_table():
    failures = []
    for name, curve, hessian, points, polar in LOCAL_TABLE:
        F = parse_poly(curve)
        L = local_data(F, ORIGIN)
        got_h = int(intersect_hessian(F, L))
        got_p = tuple(int(intersect_polar(F, L, P)) for P in points)
        if got_h != hessian or got_p != polar:
            failures.append(f"{name}: Hessian {got_h} (table {hessian}), polar {got_p} (table {polar})")
    record_criterion(3, not failures, "; ".join(failures) or "node and cusp match")
    assert not failures


# -- 4 ---------------------------------------------------------------------


def _random_curve(rng: random.Random, d: int) -> HomoPoly:
    while True:
        terms = {}
        for a in range(d + 1):
            for b in range(d + 1 - a):
                if rng.random() < 0.5:
                    c = GaussianRational(rng.randint(-4, 4), rng.randint(-1, 1))
                    if c:
                        terms[(a, b, d - a - b)] = c
        if terms:
            F = HomoPoly(terms, d)
            if F.binary_form(2):
                return F


def test_criterion_4_key_identity():
    rng = random.Random(2024)
    cases = []
    for k in range(24):
        d = 2 + k % 3
        F = _random_curve(rng, d)
        if k % 2:
            S = (gauss(rng.randint(-5, 5)), gauss(rng.randint(-5, 5)), gauss(rng.randint(1, 5)))
        else:
            S = (gauss(rng.randint(1, 5)), gauss(rng.randint(-5, 5)), gauss(0))
        cases.append((F, S))
    failures = [f"{F.to_str()} from {S}" for F, S in cases if not verify_key_identity(F, S)]
    forms = Counter("affine" if not S[2].is_zero() else "infinite" for _, S in cases)
    record_criterion(4, not failures, "; ".join(failures) or f"{len(cases)} random pairs, sources {dict(forms)}")
    assert not failures


# -- 5 ---------------------------------------------------------------------

ALL_CASES = {f"S{k}" for k in range(1, 15)}


def test_criterion_5_route_agreement():
    reports = corpus_reports()
    failures = []
    tags: set[str] = set()
    for r in reports:
        label = f"{r['input']['curve']} ; {r['input']['source'][0]}"
        if r["status"] != "ok":
            failures.append(f"{label}: {r['status']}")
            continue
        m = r["mdeg"]
        if not m["agreed"] or None in (m["route_a"], m["oracle"]):
            failures.append(f"{label}: {m}")
        if m["route_b"] is None and not r["constant_image"]:
            failures.append(f"{label}: no closed-form value")
        if r.get("matches_expected") is False:
            failures.append(f"{label}: expected {r['expected']}, got {r['mdeg_value']}")
        for bp in r["base_points"]:
            tags.update(c["case_tag"].rstrip("'") for c in bp["cases"])
    missing = sorted(ALL_CASES - tags, key=lambda t: int(t[1:]))
    if missing:
        failures.append(f"cases never fired: {missing}")
    if len(reports) < 25:
        failures.append(f"only {len(reports)} corpus pairs")
    record_criterion(
        5, not failures, "; ".join(failures) or f"{len(reports)} pairs agree, cases S1-S14 all fire"
    )
    assert not failures


# -- 6 ---------------------------------------------------------------------


def _corpus_curves() -> list[str]:
    seen: list[str] = []
    for job in read_corpus(CORPUS):
        if job.curve not in seen:
            seen.append(job.curve)
    return seen


def test_criterion_6_bezout_ledgers():
    failures = []
    curves = _corpus_curves()
    for text in curves:
        F = parse_poly(text)
        lines = [b.tangent for e in singular_points(F) for b in local_data(F, e.point).pro_branches]
        P, _ = generic_point(11, [e.point.coords for e in singular_points(F)], lines)
        h_total, h_expected = resolve(bezout_hessian, F)
        p_total, p_expected = resolve(bezout_polar, F, P)
        if h_total != h_expected or p_total != p_expected:
            failures.append(f"{text}: Hessian {h_total}/{h_expected}, polar {p_total}/{p_expected}")
    record_criterion(6, not failures, "; ".join(failures) or f"{len(curves)} curves balance")
    assert not failures


# -- 7 ---------------------------------------------------------------------


def _chart_signature(F, point, offset, cm=None):
    L = local_data(F, point, offset=offset)
    tangents = Counter(repr(b.tangent) for b in L.pro_branches for _ in range(b.count))
    signature = [L.branch_count, L.multiplicities(), tangents, tangent_cone_form(L), L.V, L.I]
    if cm is not None:
        signature.append(Counter(c.alpha for c in classify(cm, point, L) for _ in range(c.count)))
    return L.chart, signature


def test_criterion_7_chart_invariance():
    failures = []
    checked = 0
    for job in read_corpus(CORPUS):
        F, S = parse_poly(job.curve), parse_point(job.source)

        def compare():
            cm = build_phi(F, S)
            cm = None if cm.constant_image else cm
            out = []
            local_F = F if cm is None else cm.F
            for e in singular_points(F):
                chart0, sig0 = _chart_signature(local_F, e.point, 0, cm)
                chart1, sig1 = _chart_signature(local_F, e.point, 1, cm)
                out.append((e.point, chart0 != chart1, sig0 == sig1, sig0, sig1))
            return out

        for point, distinct, same, sig0, sig1 in resolve(compare):
            checked += 1
            if not distinct:
                failures.append(f"{job.curve} at {point}: charts coincide")
            elif not same:
                failures.append(f"{job.curve} ; {job.source} at {point}: {sig0} vs {sig1}")
    record_criterion(7, not failures, "; ".join(failures) or f"{checked} (point, source) pairs chart-invariant")
    assert not failures


# -- 8 ---------------------------------------------------------------------


def test_criterion_8_degenerate_conventions():
    failures = []
    for curve in (QUINTIC_TEXT, "x^2 + y^2 - z^2", "y^2*z - x^3"):
        F = parse_poly(curve)
        for name, S in (("I", I_POINT), ("J", J_POINT)):
            cm = build_phi(F, S)
            rep = mdeg_routes(cm, None, mdeg_oracle)
            if cm.constant_image != name or rep.mdeg != 0:
                failures.append(f"{curve} from {name}: flag {cm.constant_image}, mdeg {rep.values}")
    circle = build_phi(parse_poly("x^2 + y^2 - z^2"), (0, 0, 1))
    rep = mdeg_routes(circle, None, mdeg_oracle)
    if rep.oracle != 0 or rep.mdeg != 0:
        failures.append(f"circle from its center: {rep.values}")
    record_criterion(8, not failures, "; ".join(failures) or "cyclic sources and circle center give 0")
    assert not failures
