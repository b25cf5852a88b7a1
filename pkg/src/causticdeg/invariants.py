"""Global invariants of a plane curve from its local expansions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import NegativeClass
from .locus import (
    PointEntry,
    ProjPoint,
    locus_on_curve,
    same_point,
    singular_points,
)
from .numera import GaussianRational
from .polyring import HomoPoly
from .puiseux import LocalData, composed_valuation, local_data


def _zero(c) -> bool:
    return not c or c.is_zero()


def _as_int(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise RuntimeError(f"{what} is not an integer: {q}")
    return int(q)


def polar_closed_form(L: LocalData, P: Sequence) -> Fraction:
    """Intersection number of the curve with the polar of P at L.point (closed form)."""
    at_point = same_point(P, L.point.coords)
    total = L.V
    for b in L.pro_branches:
        on_tangent = b.tangent.contains(P)
        total += b.count * ((b.tangential - 1) * on_tangent + at_point)
    return total


def intersect_polar(F: HomoPoly, L: LocalData, P: Sequence, check: bool = True) -> Fraction:
    """i(C, V(polar of P)) at the point of L; 0 when the polar misses the point."""
    polar = F.polar(P)
    if not _zero(polar.evaluate(L.point.coords)):
        return Fraction(0)
    value = polar_closed_form(L, P)
    if check:
        direct = sum(
            (b.count * composed_valuation(polar, b) for b in L.pro_branches), Fraction(0)
        )
        if direct != value:
            raise RuntimeError(f"polar intersection mismatch: {value} vs {direct}")
    return value


def intersect_hessian(F: HomoPoly, L: LocalData, check: bool = True) -> Fraction:
    """i(C, V(H_F)) at the point of L, as 3V + I."""
    value = 3 * L.V + L.I
    if check:
        H = F.hessian()
        direct = sum((b.count * composed_valuation(H, b) for b in L.pro_branches), Fraction(0))
        if direct != value:
            raise RuntimeError(f"Hessian intersection mismatch: {value} vs {direct}")
    return value


@dataclass
class PointData:
    entry: PointEntry
    local: LocalData

    @property
    def point(self) -> ProjPoint:
        return self.entry.point

    @property
    def count(self) -> int:
        return self.entry.count


@dataclass
class CurveProfile:
    F: HomoPoly
    degree: int
    singular: list[PointData]
    class_dual: int
    flex_total: int
    flex_points: list[tuple[PointData, int]] = field(default_factory=list)
    hessian_checks: list[tuple[ProjPoint, Fraction]] = field(default_factory=list)
    polar_seed: int | None = None


def curve_class(F: HomoPoly, singular: Sequence[PointData]) -> int:
    d = F.degree
    value = d * (d - 1) - sum((p.count * p.local.V for p in singular), Fraction(0))
    value = _as_int(value, "class")
    if value < 0:
        raise NegativeClass("negative class: the input is reducible or invalid")
    return value


def generic_point(
    seed: int, avoid_points: Sequence, avoid_lines: Sequence, tries: int = 200
) -> tuple[tuple, int]:
    """Small Gaussian-integer point off the given points and lines."""
    rng = random.Random(seed)
    for attempt in range(tries):
        p = tuple(GaussianRational(rng.randint(-9, 9), rng.randint(-3, 3)) for _ in range(3))
        if all(_zero(c) for c in p):
            continue
        if any(same_point(p, q) for q in avoid_points):
            continue
        if any(line.contains(p) for line in avoid_lines):
            continue
        return p, attempt
    raise RuntimeError("could not find a generic point")


def profile(F: HomoPoly, truncation=None, check: bool = True, seed: int = 0) -> CurveProfile:
    """Class, flexes and singular data of V(F)."""
    sing = singular_points(F)
    singular = [PointData(e, local_data(F, e.point, truncation)) for e in sing]
    dual = curve_class(F, singular)
    d = F.degree
    hess_sing = sum(
        (p.count * intersect_hessian(F, p.local, check) for p in singular), Fraction(0)
    )
    flex_total = _as_int(3 * d * (d - 2) - hess_sing, "flex count")
    prof = CurveProfile(F, d, singular, dual, flex_total)
    prof.hessian_checks = [(p.point, 3 * p.local.V + p.local.I) for p in singular]
    if d >= 3 or flex_total:
        flex_points(prof, truncation)
    if check:
        _check_class_by_polar(prof, seed)
    return prof


def flex_points(prof: CurveProfile, truncation=None) -> list[tuple[PointData, int]]:
    F = prof.F
    H = F.hessian()
    if H.is_zero():
        raise NegativeClass("vanishing Hessian: the curve contains a line")
    if H.degree == 0:
        prof.flex_points = []
        return prof.flex_points
    pts = locus_on_curve(F, H)
    out = []
    for e in pts:
        if all(_zero(g.evaluate(e.point.coords)) for g in F.partials()):
            continue
        L = local_data(F, e.point, truncation)
        weight = _as_int(L.I, "flex weight")
        out.append((PointData(e, L), weight))
    prof.flex_points = out
    total = sum(p.count * w for p, w in out)
    if total != prof.flex_total:
        raise RuntimeError(f"flex points give {total}, formula gives {prof.flex_total}")
    return out


def _check_class_by_polar(prof: CurveProfile, seed: int) -> None:
    F = prof.F
    lines = [b.tangent for p in prof.singular for b in p.local.pro_branches]
    avoid = [p.point.coords for p in prof.singular]
    P, _ = generic_point(seed, avoid, lines)
    total = Fraction(0)
    for p in prof.singular:
        total += p.count * intersect_polar(F, p.local, P, check=True)
    d = F.degree
    if d * (d - 1) - total != prof.class_dual:
        raise RuntimeError("class by polar disagrees with the class by valuations")
    prof.polar_seed = seed


def bezout_hessian(F: HomoPoly, truncation=None) -> tuple[int, int]:
    """(sum over C and V(H_F) of intersection numbers, 3d(d-2))."""
    d = F.degree
    H = F.hessian()
    if H.degree == 0:
        return 0, 3 * d * (d - 2)
    total = Fraction(0)
    for e in locus_on_curve(F, H):
        L = local_data(F, e.point, truncation)
        total += e.count * intersect_hessian(F, L)
    return _as_int(total, "Hessian total"), 3 * d * (d - 2)


def bezout_polar(F: HomoPoly, P: Sequence, truncation=None) -> tuple[int, int]:
    """(sum over C and the polar of P of intersection numbers, d(d-1))."""
    d = F.degree
    total = Fraction(0)
    for e in locus_on_curve(F, F.polar(P)):
        L = local_data(F, e.point, truncation)
        total += e.count * intersect_polar(F, L, P)
    return _as_int(total, "polar total"), d * (d - 1)


def tangency_balance(prof: CurveProfile) -> tuple[int, int]:
    """Both sides of 3 d_dual - sum_sing (i(B,T) - 2e) = 3d + sum_flex (i - 2)."""
    lhs = Fraction(3 * prof.class_dual)
    for p in prof.singular:
        for b in p.local.pro_branches:
            lhs -= b.branch_weight * (b.ramification * b.tangential - 2 * b.ramification)
    rhs = 3 * prof.degree + sum(p.count * w for p, w in prof.flex_points)
    return _as_int(lhs, "ledger"), rhs
