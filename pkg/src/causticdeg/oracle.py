"""Degree of the caustic from raw valuations of a generic polar of the map.

The caustic map is pulled back along every pro-branch at every base point by
plain series substitution; no case analysis is involved.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import GenericityExhausted, TruncationTooSmall, ZeroVector
from .numera import ZERO, GaussianRational
from .polyring import HomoPoly
from .puiseux import ProBranch, branch_coordinates, eval_homopoly_series, ser_add, ser_scale, ser_val


def phi_polar(cm, a: Sequence) -> HomoPoly:
    """sum_j a_j Phi_j."""
    if all(not c or c.is_zero() for c in (_gauss(c) for c in a)):
        raise ZeroVector("the polar needs a nonzero point")
    out = HomoPoly.zero(cm.components[0].degree)
    for c, comp in zip(a, cm.components):
        c = _gauss(c)
        if c:
            out = out + comp.scale(c)
    return out


def _gauss(c):
    return GaussianRational(c) if isinstance(c, (int, Fraction)) else c


def draw_direction(rng: random.Random) -> tuple:
    while True:
        a = tuple(rng.randint(-9, 9) for _ in range(3))
        if any(a):
            return a


@dataclass
class BranchCheck:
    point: str
    pro_branch: int
    count: int
    valuation: Fraction
    component_valuations: list
    witness: str  # leading coefficient of the combination

    def to_json(self) -> dict:
        return {
            "point": self.point,
            "pro_branch": self.pro_branch,
            "count": self.count,
            "valuation": _num(self.valuation),
            "component_valuations": [_num(v) for v in self.component_valuations],
            "witness": self.witness,
        }


@dataclass
class GenericityCertificate:
    a: tuple
    seed: int
    attempts: int
    checks: list[BranchCheck] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "a": list(self.a),
            "seed": self.seed,
            "attempts": self.attempts,
            "checks": [c.to_json() for c in self.checks],
        }


def _num(q):
    if q is None:
        return None
    q = Fraction(q)
    return int(q) if q.denominator == 1 else str(q)


class _Cancellation(Exception):
    pass


def component_series(cm, branch: ProBranch, prec: int) -> list[list]:
    """The three components of the map along the branch, to ``prec`` t-terms."""
    xs, ys, zs, ram, full = branch_coordinates(branch)
    if prec > full:
        raise TruncationTooSmall("branch expansion is shorter than requested")
    xs, ys, zs = xs[:prec], ys[:prec], zs[:prec]
    return [eval_homopoly_series(c, xs, ys, zs, prec) for c in cm.components]


def branch_valuation(cm, branch: ProBranch, a: Sequence, cap: Fraction) -> tuple[Fraction, list, object]:
    """Certified valuation of sum a_j Phi_j along the branch.

    Raises _Cancellation when the combination vanishes to a higher order than
    some component, which means ``a`` is not generic for this branch.
    """
    prec_x = Fraction(8)
    while True:
        if branch.series.truncation < prec_x:
            branch.extend(prec_x)
        ram = branch.series.ramification
        prec = int(prec_x * ram)
        comps = component_series(cm, branch, prec)
        vals = [ser_val(s) for s in comps]
        combo: list = [ZERO] * prec
        for c, s in zip(a, comps):
            combo = ser_add(combo, ser_scale(s, _gauss(c)))
        v = ser_val(combo)
        known = [x for x in vals if x is not None]
        if known and (v is None or v > min(known)):
            raise _Cancellation(branch.index)
        if v is not None:
            return Fraction(v, ram), [None if x is None else Fraction(x, ram) for x in vals], combo[v]
        if prec_x >= cap:
            raise TruncationTooSmall(f"valuation exceeds {cap}")
        prec_x = min(2 * prec_x, cap)


def mdeg_oracle(cm, records, seed: int = 0, retries: int = 20) -> tuple[int, dict]:
    """3d(d-1) minus the generic-polar valuations over every base-point pro-branch."""
    d = cm.degree
    total_budget = Fraction(3 * d * (d - 1))
    cap = total_budget + 1
    rng = random.Random(seed)
    last = None
    for attempt in range(retries):
        a = draw_direction(rng)
        checks: list[BranchCheck] = []
        try:
            for r in records:
                for b in r.local.pro_branches:
                    v, comp_vals, lead = branch_valuation(cm, b, a, cap)
                    checks.append(BranchCheck(repr(r.point), b.index, r.count * b.count, v, comp_vals, _text(lead)))
        except _Cancellation as exc:
            last = (a, exc.args[0])
            continue
        total = sum((c.count * c.valuation for c in checks), Fraction(0))
        value = total_budget - total
        if value.denominator != 1:
            raise RuntimeError(f"oracle degree is not an integer: {value}")
        cert = GenericityCertificate(a, seed, attempt + 1, checks)
        detail = cert.to_json()
        detail["mdeg"] = int(value)
        return int(value), detail
    raise GenericityExhausted(f"every direction cancelled; last {last[0]} on pro-branch {last[1]}")


def _text(c) -> str:
    base = c.as_base() if hasattr(c, "as_base") else c
    return str(base) if base is not None else c.to_str()


def per_branch_consistency(cm, records, detail: dict) -> list[tuple]:
    """(point, pro-branch, oracle valuation, alpha + 3 * pairwise) for every pro-branch."""
    out = []
    lookup = {(c["point"], c["pro_branch"]): Fraction(c["valuation"]) for c in detail["checks"]}
    for r in records:
        for case in r.cases:
            v = lookup[(repr(r.point), case.index)]
            out.append((repr(r.point), case.index, v, case.alpha + 3 * case.pairwise))
    return out


def psi_lower_bound(cm, branch: ProBranch, cap: Fraction) -> Fraction | None:
    """Minimum valuation of the four auxiliary products along the branch."""
    ram = branch.series.ramification
    if branch.series.truncation < cap:
        branch.extend(cap)
    xs, ys, zs, _, full = branch_coordinates(branch)
    prec = min(full, int(cap * ram))
    vals = []
    for p in cm.psi:
        s = eval_homopoly_series(p, xs[:prec], ys[:prec], zs[:prec], prec)
        v = ser_val(s)
        if v is not None:
            vals.append(Fraction(v, ram))
    return min(vals) if vals else None
