"""The caustic map, its base points, and the degree of the caustic by several routes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .errors import (
    DegreeTooLow,
    RouteDisagreement,
    UndefinedReflection,
    UnmatchedCase,
    ZeroVector,
)
from .invariants import PointData, curve_class
from .locus import (
    I_POINT,
    J_POINT,
    LINE_AT_INFINITY,
    PointEntry,
    ProjLine,
    ProjPoint,
    cross,
    dot,
    line_through,
    locus_on_curve,
    points_on_line,
    same_point,
    singular_points,
)
from .numera import ONE, ZERO, Tower, common_tower
from .polyring import HomoPoly, vanishes_on_curve
from .puiseux import LocalData, ProBranch, local_data


def _zero(c) -> bool:
    return not c or (hasattr(c, "is_zero") and c.is_zero())


def _var(k: int) -> HomoPoly:
    return HomoPoly.var("xyz"[k])


def _lift(coords: Sequence) -> tuple:
    """Coordinates as numbers of one tower; plain ints and fractions are accepted."""
    coords = tuple(coords.coords if isinstance(coords, ProjPoint) else coords)
    t = common_tower(*coords)
    return tuple(t.embed(c) for c in coords)


# ---------------------------------------------------------------------------
# The map
# ---------------------------------------------------------------------------


@dataclass
class CausticMap:
    F: HomoPoly
    S: tuple
    components: tuple[HomoPoly, HomoPoly, HomoPoly]
    psi: tuple[HomoPoly, HomoPoly, HomoPoly, HomoPoly]
    tower: Tower
    constant_image: str | None = None  # "I" or "J" when S is a cyclic point

    @property
    def degree(self) -> int:
        return self.F.degree

    @property
    def source_at_infinity(self) -> bool:
        return _zero(self.S[2])


def cyclic_source(S: Sequence) -> str | None:
    if same_point(S, I_POINT):
        return "I"
    if same_point(S, J_POINT):
        return "J"
    return None


def line_form(p: Sequence, q: Sequence) -> HomoPoly:
    """The linear form C -> det(p | q | C)."""
    return HomoPoly.linear(cross(p, q))


def build_phi(F: HomoPoly, S: Sequence, check: bool = True) -> CausticMap:
    d = F.degree
    if d < 2:
        raise DegreeTooLow("lines and constants have no caustic to compute (degree must be >= 2)")
    if all(_zero(c) for c in S):
        raise ZeroVector("the source must be a nonzero vector")
    S = _lift(S)
    tower = common_tower(*F.terms.values(), *S)
    F = F.map_coeffs(tower.embed)
    S = tuple(tower.embed(c) for c in S)
    x0, y0, z0 = S
    x, y, z = (_var(k) for k in range(3))
    fx, fy, fz = F.partials()
    H = F.hessian()
    norm_s = (x.scale(z0) - z.scale(x0)) ** 2 + (y.scale(z0) - z.scale(y0)) ** 2
    dS = F.polar(S)
    scale = tower.embed(Fraction(-2, (d - 1) ** 2))
    radial = (H * norm_s).scale(scale)
    fx2, fy2, fxy = fx * fx, fy * fy, fx * fy
    bracket = (
        fy2.scale(x0) - fx2.scale(x0) - fxy.scale(2 * y0) - (fx * fz).scale(2 * z0),
        fx2.scale(y0) - fy2.scale(y0) - fxy.scale(2 * x0) - (fy * fz).scale(2 * z0),
        (fx2 + fy2).scale(z0),
    )
    comps = tuple(radial * v + dS * b for v, b in zip((x, y, z), bracket))
    dI, dJ = F.polar(I_POINT), F.polar(J_POINT)
    fIS, fJS = line_form(I_POINT, S), line_form(J_POINT, S)
    psi = (
        (H * fIS * fJS).scale(scale),
        dI * dJ * dS,
        dS * dS * dI,
        dS * dS * dJ,
    )
    cm = CausticMap(F, S, comps, psi, tower, cyclic_source(S))
    if check:
        if not all(c.degree == 3 * (d - 1) or c.is_zero() for c in comps):
            raise RuntimeError("caustic map components have the wrong degree")
        if alternative_components(cm) != list(comps):
            raise RuntimeError("the two expressions of the caustic map disagree")
        if cm.constant_image:
            target = J_POINT if cm.constant_image == "I" else I_POINT
            if not all(
                (comps[a].scale(target[b]) - comps[b].scale(target[a])).is_zero()
                for a, b in ((0, 1), (0, 2), (1, 2))
            ):
                raise RuntimeError("caustic map from a cyclic point is not constant")
    return cm


def alternative_components(cm: CausticMap) -> list[HomoPoly]:
    """Components rebuilt from the auxiliary products psi."""
    psi1, psi2, psi3, psi4 = cm.psi
    out = []
    for k in range(3):
        term = psi1 * _var(k) + psi2.scale(cm.S[k])
        term = term - psi3.scale(J_POINT[k]) - psi4.scale(I_POINT[k])
        out.append(term)
    return out


def norm_form_s(S: Sequence) -> HomoPoly:
    x0, y0, z0 = S
    x, y, z = (_var(k) for k in range(3))
    return (x.scale(z0) - z.scale(x0)) ** 2 + (y.scale(z0) - z.scale(y0)) ** 2


# ---------------------------------------------------------------------------
# Reflected lines
# ---------------------------------------------------------------------------


def reflection_vector(F: HomoPoly, S: Sequence) -> tuple[HomoPoly, HomoPoly, HomoPoly]:
    """Coefficients of the reflected line as forms in the point of the curve."""
    S = _lift(S)
    x0, y0, z0 = S
    x, y, z = (_var(k) for k in range(3))
    fx, fy, _ = F.partials()
    A = fx * fx - fy * fy
    B = (fx * fy).scale(2)
    if not _zero(z0):
        r1 = z * (y.scale(z0) - z.scale(y0)) * A + z * (z.scale(x0) - x.scale(z0)) * B
        r2 = z * (x.scale(z0) - z.scale(x0)) * A + z * (y.scale(z0) - z.scale(y0)) * B
        r3 = (x * z).scale(y0) + (y * z).scale(x0) - (x * y).scale(2 * z0)
        r3b = (y * z).scale(y0) - (x * z).scale(x0) + (x * x).scale(z0) - (y * y).scale(z0)
        return r1, r2, r3 * A + r3b * B
    r1 = z.scale(-y0) * A + z.scale(x0) * B
    r2 = z.scale(-x0) * A + z.scale(-y0) * B
    r3 = (x.scale(y0) + y.scale(x0)) * A + (y.scale(y0) - x.scale(x0)) * B
    return r1, r2, r3


def reflected_line(F: HomoPoly, S: Sequence, m: Sequence | ProjPoint) -> ProjLine:
    S = _lift(S)
    coords = m.coords if isinstance(m, ProjPoint) else _lift(m)
    if _zero(coords[2]):
        raise UndefinedReflection("the point lies on the line at infinity")
    if not _zero(F.evaluate(coords)):
        raise ValueError("the point is not on the curve")
    if all(_zero(g.evaluate(coords)) for g in F.partials()):
        raise UndefinedReflection("the point is singular")
    if same_point(coords, S):
        raise UndefinedReflection("the point is the source")
    rho = [g.evaluate(coords) for g in reflection_vector(F, S)]
    if all(_zero(c) for c in rho):
        raise UndefinedReflection("the reflection vector vanishes at this point")
    line = ProjLine(rho)
    if not line.contains(coords):
        raise RuntimeError("reflected line misses its point")
    return line


def cross_ratio(p1, p2, p3, p4):
    """Cross-ratio of four points at infinity, or None if undefined."""
    (a1, b1), (a2, b2), (a3, b3), (a4, b4) = ((p[0], p[1]) for p in (p1, p2, p3, p4))
    num = (b3 * a1 - b1 * a3) * (b4 * a2 - b2 * a4)
    den = (b3 * a2 - b2 * a3) * (b4 * a1 - b1 * a4)
    if _zero(den):
        return None
    return num * den.inverse()


def reflection_law(F: HomoPoly, S: Sequence, m: Sequence | ProjPoint) -> tuple:
    """(incident ratio, reflected ratio, reflected direction) at a regular affine point."""
    S = _lift(S)
    coords = m.coords if isinstance(m, ProjPoint) else _lift(m)
    x, y, z = coords
    x0, y0, z0 = S
    fx, fy, _ = (g.evaluate(coords) for g in F.partials())
    tangent_dir = (fy, -fx, ZERO * fx)
    if _zero(z0):
        sx, sy = x0, y0
    else:
        sx, sy = x0 * z - z0 * x, y0 * z - z0 * y
    A = fx * fx - fy * fy
    B = fx * fy * 2
    reflected_dir = (sx * A + sy * B, -sy * A + sx * B, ZERO * fx)
    incident_dir = (sx, sy, ZERO * fx)
    before = cross_ratio(incident_dir, tangent_dir, I_POINT, J_POINT)
    after = cross_ratio(tangent_dir, reflected_dir, I_POINT, J_POINT)
    return before, after, reflected_dir


# ---------------------------------------------------------------------------
# The key identity
# ---------------------------------------------------------------------------


def _moving_vector(F: HomoPoly, S: Sequence):
    """Reflection vector and its companion built from explicit chart derivatives.

    Both are homogenised so that setting z = 1 gives the affine expressions.
    """
    a, b, c = S
    x, y, z = (_var(k) for k in range(3))
    fx, fy, _ = F.partials()
    fxx, fxy, fyy = fx.partial(0), fx.partial(1), fy.partial(1)
    A = fx * fx - fy * fy
    B = fx * fy
    u = y.scale(c) - z.scale(b)  # c y - z b
    v = z.scale(a) - x.scale(c)  # z a - c x
    rho1 = z * u * A + (z * v * B).scale(2)
    rho2 = -(z * v) * A + (z * u * B).scale(2)
    rho3 = (
        ((x * z).scale(b) + (y * z).scale(a) - (x * y).scale(2 * c)) * A
        + ((y * z).scale(b) - (x * z).scale(a) + (x * x).scale(c) - (y * y).scale(c)) * B.scale(2)
    )
    # the affine derivatives, homogenised to degree 2d - 2
    zz = z * z
    r1x = (u * (fx * fxx - fy * fxy)).scale(2) - B.scale(2 * c) + (v * (fx * fxy + fxx * fy)).scale(2)
    r1y = A.scale(c) + (u * (fx * fxy - fy * fyy)).scale(2) + (v * (fxy * fy + fx * fyy)).scale(2)
    r2x = A.scale(c) - (v * (fx * fxx - fy * fxy)).scale(2) + (u * (fx * fxy + fxx * fy)).scale(2)
    r2y = -(v * (fx * fxy - fy * fyy)).scale(2) + B.scale(2 * c) + (u * (fx * fyy + fxy * fy)).scale(2)
    w1 = -(r1x * fy) + r1y * fx
    w2 = -(r2x * fy) + r2y * fx
    w3 = -(z * x * w1) - (z * y * w2) + rho1 * fy - rho2 * fx
    return (rho1, rho2, rho3), (zz * w1, zz * w2, w3)


def verify_key_identity(F: HomoPoly, S: Sequence) -> bool:
    """rho ^ W = (F_x^2 + F_y^2) * Phi on the curve, checked by exact division."""
    cm = build_phi(F, S, check=False)
    F0, S0 = cm.F, cm.S
    rho, w = _moving_vector(F0, S0)
    lhs = cross(rho, w)
    fx, fy, _ = F0.partials()
    factor = fx * fx + fy * fy
    z4 = _var(2) ** 4
    for k in range(3):
        diff = lhs[k] - z4 * factor * cm.components[k]
        if not vanishes_on_curve(diff, F0):
            return False
    return True


def verify_orthogonality(F: HomoPoly, S: Sequence) -> bool:
    """Phi is orthogonal to the reflection vector and to its companion on the curve."""
    cm = build_phi(F, S, check=False)
    rho, w = _moving_vector(cm.F, cm.S)
    return vanishes_on_curve(dot(cm.components, rho), cm.F) and vanishes_on_curve(
        dot(cm.components, w), cm.F
    )


# ---------------------------------------------------------------------------
# Case table
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Flags:
    """Incidences at one pro-branch; D is its tangent line and m its point."""

    m_is_I: bool
    m_is_J: bool
    m_is_S: bool
    I_on_D: bool
    J_on_D: bool
    S_on_D: bool
    m_on_IS: bool
    m_on_JS: bool

    def mirrored(self) -> "Flags":
        return Flags(
            self.m_is_J, self.m_is_I, self.m_is_S, self.J_on_D, self.I_on_D,
            self.S_on_D, self.m_on_JS, self.m_on_IS,
        )

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


Guard = Callable[[Flags, Fraction], bool]
Value = Callable[[Fraction, "Fraction | None", "Fraction | None"], Fraction]


def _min_cap(value, cap):
    return cap if value is None else min(cap, value)


def _s5(i, b1, b2):
    return 2 * (i - 1) if i != 2 else _min_cap(b1, Fraction(3))


def _s14(i, b1, b2):
    return 3 * i - 2 if i != 2 else _min_cap(None if b2 is None else b2 + 2, Fraction(6))


# S1 overlaps S6 and S11 with equal values; it is tried last so the
# more specific tag is reported.
CASES: list[tuple[str, Guard, Value]] = [
    (
        "S2",
        lambda f, i: i >= 2 and not f.I_on_D and not f.J_on_D and not f.S_on_D,
        lambda i, b1, b2: Fraction(0),
    ),
    (
        "S3",
        lambda f, i: i < 2
        and (f.m_on_IS or f.m_on_JS)
        and not f.I_on_D
        and not f.J_on_D
        and not f.S_on_D,
        lambda i, b1, b2: Fraction(0),
    ),
    (
        "S4",
        lambda f, i: f.I_on_D and not f.m_is_I and i >= 2 and not f.J_on_D and not f.S_on_D,
        lambda i, b1, b2: Fraction(0),
    ),
    ("S5", lambda f, i: f.S_on_D and not f.m_is_S and f.I_on_D and not f.J_on_D, _s5),
    (
        "S6",
        lambda f, i: f.I_on_D and not f.m_is_I and f.J_on_D and not f.m_is_J and not f.S_on_D,
        lambda i, b1, b2: i - 2,
    ),
    (
        "S7",
        lambda f, i: f.I_on_D
        and f.J_on_D
        and f.S_on_D
        and not (f.m_is_I or f.m_is_J or f.m_is_S),
        lambda i, b1, b2: 3 * i - 3,
    ),
    ("S8", lambda f, i: f.m_is_I and not f.J_on_D and not f.S_on_D, lambda i, b1, b2: Fraction(0)),
    ("S9", lambda f, i: f.m_is_I and f.J_on_D and not f.S_on_D, lambda i, b1, b2: i - 1),
    ("S10", lambda f, i: f.m_is_I and f.S_on_D and f.J_on_D, lambda i, b1, b2: 3 * i - 3),
    (
        "S11",
        lambda f, i: f.S_on_D and not f.m_is_S and not f.I_on_D and not f.J_on_D,
        lambda i, b1, b2: i - 2,
    ),
    ("S12", lambda f, i: f.m_is_S and not f.I_on_D and not f.J_on_D, lambda i, b1, b2: i),
    ("S13", lambda f, i: f.m_is_S and f.I_on_D and not f.J_on_D, lambda i, b1, b2: 2 * i - 1),
    ("S14", lambda f, i: f.m_is_S and f.I_on_D and f.J_on_D, _s14),
    ("S1", lambda f, i: i < 2 and not f.m_on_IS and not f.m_on_JS, lambda i, b1, b2: i - 2),
]


def matching_cases(flags: Flags, tangential: Fraction, beta1=None, beta2=None):
    """Every (tag, mirrored, alpha) whose guard accepts the flags."""
    tangential = Fraction(tangential)
    out = []
    for mirrored, f in ((False, flags), (True, flags.mirrored())):
        for tag, guard, value in CASES:
            if guard(f, tangential):
                out.append((tag, mirrored, Fraction(value(tangential, beta1, beta2))))
    return out


def alpha_dispatch(flags: Flags, tangential, beta1=None, beta2=None) -> tuple[str, Fraction]:
    """Case tag and alpha for one pro-branch."""
    found = matching_cases(flags, tangential, beta1, beta2)
    if not found:
        raise UnmatchedCase(f"no case applies to {flags.as_dict()} with tangential order {tangential}")
    values = {a for _, _, a in found}
    if len(values) > 1:
        raise UnmatchedCase(f"overlapping cases disagree: {found}")
    tag, mirrored, alpha = found[0]
    return (tag + "'" if mirrored else tag), alpha


def consistent_flags(f: Flags, source_at_infinity: bool, point_at_infinity: bool) -> bool:
    """Whether the incidence pattern can occur for a point with a tangent line."""
    s_inf, m_inf = source_at_infinity, point_at_infinity
    if f.m_is_I + f.m_is_J + f.m_is_S > 1:
        return False
    if (f.m_is_I and not f.I_on_D) or (f.m_is_J and not f.J_on_D) or (f.m_is_S and not f.S_on_D):
        return False
    if (f.m_is_I or f.m_is_J) and not m_inf:
        return False
    if f.m_is_S and m_inf != s_inf:
        return False
    if f.I_on_D and f.J_on_D and not m_inf:
        return False
    if m_inf and not f.m_is_I and f.I_on_D and not f.J_on_D:
        return False
    if m_inf and not f.m_is_J and f.J_on_D and not f.I_on_D:
        return False
    if f.I_on_D and f.J_on_D and f.S_on_D and not s_inf:
        return False
    if s_inf:
        if f.m_on_IS != m_inf or f.m_on_JS != m_inf:
            return False
        if m_inf and f.S_on_D and not f.m_is_S and not (f.I_on_D and f.J_on_D):
            return False
        if m_inf and (f.I_on_D or f.J_on_D) and not (f.I_on_D and f.J_on_D) and not (f.m_is_I or f.m_is_J):
            return False
    else:
        if f.m_on_IS and f.m_on_JS and not f.m_is_S:
            return False
        if f.m_is_S and not (f.m_on_IS and f.m_on_JS):
            return False
        if f.m_is_I and (not f.m_on_IS or f.m_on_JS):
            return False
        if f.m_is_J and (not f.m_on_JS or f.m_on_IS):
            return False
        if m_inf and not f.m_is_I and not f.m_is_J and (f.m_on_IS or f.m_on_JS):
            return False
        if m_inf and f.S_on_D and not f.m_is_S:
            # D joins m and S, so it meets the line at infinity only at m
            if f.I_on_D and not f.m_is_I or f.J_on_D and not f.m_is_J:
                return False
    for on_X, m_is_X, m_on_XS in (
        (f.I_on_D, f.m_is_I, f.m_on_IS),
        (f.J_on_D, f.m_is_J, f.m_on_JS),
    ):
        # D = line(m, X); S on D forces m on the line XS and conversely
        if on_X and not m_is_X:
            if f.S_on_D and not m_on_XS:
                return False
            if m_on_XS and not f.m_is_S and not f.S_on_D and not (s_inf and m_inf):
                return False
        if on_X and m_is_X and f.S_on_D and not m_on_XS:
            return False
    return True


def flag_lattice():
    """Every consistent (flags, tangential class, source at infinity, point at infinity)."""
    for bits in itertools.product((False, True), repeat=8):
        f = Flags(*bits)
        for s_inf, m_inf in itertools.product((False, True), repeat=2):
            if not consistent_flags(f, s_inf, m_inf):
                continue
            for tangential in (Fraction(3, 2), Fraction(2), Fraction(3)):
                yield f, tangential, s_inf, m_inf


def case_table_gaps() -> list[tuple[Flags, Fraction]]:
    """Consistent incidence patterns that no case (or its mirror) covers."""
    gaps = []
    seen = set()
    for f, t, _, _ in flag_lattice():
        if (f, t) in seen:
            continue
        seen.add((f, t))
        if not matching_cases(f, t):
            gaps.append((f, t))
    return gaps


def case_table_conflicts() -> list[tuple[Flags, Fraction, list]]:
    """Consistent patterns where two matching cases give different values."""
    out = []
    for f, t, _, _ in flag_lattice():
        for b1, b2 in ((Fraction(5, 2), Fraction(5, 2)), (Fraction(3), Fraction(4)), (None, None)):
            found = matching_cases(f, t, b1, b2)
            if len({a for _, _, a in found}) > 1:
                out.append((f, t, found))
    return out


# ---------------------------------------------------------------------------
# Base points
# ---------------------------------------------------------------------------


@dataclass
class BranchCase:
    index: int
    count: int
    ramification: int
    tangential: Fraction
    beta1: Fraction | None
    beta2: Fraction | None
    pairwise: Fraction
    flags: Flags
    tangent_at_infinity: bool
    case_tag: str
    alpha: Fraction

    @property
    def branch_tangential(self) -> Fraction:
        """i(B, T_B) of the branch containing this pro-branch."""
        return self.ramification * self.tangential


@dataclass
class BasePointRecord:
    point: ProjPoint
    count: int
    local: LocalData
    is_base: bool
    singular: bool
    cases: list[BranchCase] = field(default_factory=list)

    @property
    def alpha(self) -> Fraction:
        return sum((c.count * c.alpha for c in self.cases), Fraction(0))

    def to_json(self) -> dict:
        return {
            "point": self.point.to_json(),
            "count": self.count,
            "base_point": self.is_base,
            "singular": self.singular,
            "cases": [
                {
                    "pro_branch": c.index,
                    "count": c.count,
                    "ramification": c.ramification,
                    "tangential_order": _num_json(c.tangential),
                    "beta1": _num_json(c.beta1),
                    "beta2": _num_json(c.beta2),
                    "case_tag": c.case_tag,
                    "alpha": _num_json(c.alpha),
                }
                for c in self.cases
            ],
        }


def _num_json(q):
    if q is None:
        return None
    q = Fraction(q)
    return int(q) if q.denominator == 1 else str(q)


def is_base_point(cm: CausticMap, m: Sequence) -> bool:
    """Exact base-point criterion on a point of the curve."""
    F, S = cm.F, cm.S
    dS = F.polar(S).evaluate(m)
    if cm.source_at_infinity:
        return _zero(F.h_affine().evaluate(m)) and _zero(dS)
    H = F.hessian().evaluate(m)
    n = norm_form_s(S).evaluate(m)
    fx, fy, _ = F.partials()
    first = _zero(H) or _zero(n)
    second = _zero(dS) or (_zero(m[2]) and _zero(fx.evaluate(m)) and _zero(fy.evaluate(m)))
    return first and second


def special_points(cm: CausticMap) -> list[PointEntry]:
    """Points of the curve where the local data can matter, without repeats.

    These are the points of C on the Hessian curve, on the line at infinity,
    the tangency points of the lines joining S to the cyclic points, and S.
    Every base point is among them.
    """
    F, S, tower = cm.F, cm.S, cm.tower
    H = F.hessian()
    out: list[PointEntry] = []
    if H.degree > 0:
        out.extend(locus_on_curve(F, H, base=tower).entries)

    def off_hessian(p: ProjPoint) -> bool:
        return H.degree == 0 or not _zero(H.evaluate(p.coords))

    for t, p, _ in points_on_line(F, LINE_AT_INFINITY, base=tower):
        if off_hessian(p):
            out.append(PointEntry(p, t.degree_over(tower)))
    if cm.source_at_infinity:
        return out
    seen_source = False
    for cyclic in (I_POINT, J_POINT):
        for t, p, mult in points_on_line(F, line_through(S, cyclic), base=tower):
            if mult < 2 or p.at_infinity() or not off_hessian(p):
                continue
            if same_point(p.coords, S):
                if seen_source:
                    continue
                seen_source = True
            out.append(PointEntry(p, t.degree_over(tower)))
    if not seen_source and _zero(F.evaluate(S)):
        src = ProjPoint(S)
        if off_hessian(src):
            out.append(PointEntry(src, 1))
    return out


def point_flags(cm: CausticMap, m: ProjPoint, branch: ProBranch) -> Flags:
    S = cm.S
    D = branch.tangent
    return Flags(
        m_is_I=same_point(m.coords, I_POINT),
        m_is_J=same_point(m.coords, J_POINT),
        m_is_S=same_point(m.coords, S),
        I_on_D=D.contains(I_POINT),
        J_on_D=D.contains(J_POINT),
        S_on_D=D.contains(S),
        m_on_IS=_zero(line_form(I_POINT, S).evaluate(m.coords)),
        m_on_JS=_zero(line_form(J_POINT, S).evaluate(m.coords)),
    )


def classify(cm: CausticMap, point: ProjPoint, L: LocalData) -> list[BranchCase]:
    out = []
    for b in L.pro_branches:
        flags = point_flags(cm, point, b)
        tag, alpha = alpha_dispatch(flags, b.tangential, b.beta1, b.beta2)
        out.append(
            BranchCase(
                index=b.index,
                count=b.count,
                ramification=b.ramification,
                tangential=b.tangential,
                beta1=b.beta1,
                beta2=b.beta2,
                pairwise=b.pairwise_sum,
                flags=flags,
                tangent_at_infinity=b.tangent == LINE_AT_INFINITY,
                case_tag=tag,
                alpha=alpha,
            )
        )
    return out


def base_points(cm: CausticMap, truncation=None, include_all: bool = False) -> list[BasePointRecord]:
    """Base points of the map restricted to the curve, with local data and cases.

    With ``include_all`` the other special points are returned too (flagged
    as not base); their alpha values must vanish.
    """
    if cm.constant_image:
        raise ValueError("the map from a cyclic point is constant; there is nothing to classify")
    F = cm.F
    partials = F.partials()
    recs = []
    for e in special_points(cm):
        p = e.point
        base = is_base_point(cm, p.coords)
        if not base and not include_all:
            continue
        L = local_data(F, p, truncation)
        singular = all(_zero(g.evaluate(p.coords)) for g in partials)
        rec = BasePointRecord(p, e.count, L, base, singular, classify(cm, p, L))
        if not base and rec.alpha != 0:
            raise RuntimeError(f"non-base point {p} has nonzero alpha")
        recs.append(rec)
    return recs


# ---------------------------------------------------------------------------
# Degree routes
# ---------------------------------------------------------------------------


def route_a(class_dual: int, recs: Sequence[BasePointRecord]) -> int:
    """3 d_dual minus the alpha total over base points."""
    total = sum((r.count * r.alpha for r in recs if r.is_base), Fraction(0))
    return _integer(3 * class_dual - total)


def _integer(q) -> int:
    q = Fraction(q)
    if q.denominator != 1:
        raise RuntimeError(f"degree is not an integer: {q}")
    return int(q)


def _gamma1(c: BranchCase) -> Fraction:
    return c.ramification * _min_cap(c.beta1, Fraction(3))


def _gamma2(c: BranchCase) -> Fraction:
    e = c.ramification
    if c.beta1 is not None and c.beta1 < 3:
        return e * (c.beta1 - 2)
    return e * _min_cap(None if c.beta2 is None else c.beta2 - 2, Fraction(2))


def route_b_terms(cm: CausticMap, recs: Sequence[BasePointRecord]) -> dict[str, Fraction]:
    """The six sums of the general closed form, per branch, from pro-branch data."""
    v = {k: Fraction(0) for k in ("v1", "v2", "v2'", "v3", "v3'", "v4")}
    for r in recs:
        for c in r.cases:
            f = c.flags
            e = c.ramification
            weight = Fraction(r.count * c.count, e)
            ib = c.branch_tangential
            n_iso = f.I_on_D + f.J_on_D
            both = f.I_on_D and f.J_on_D
            if r.singular and not (f.m_on_IS or f.m_on_JS) and not f.S_on_D and not c.tangent_at_infinity:
                v["v1"] += weight * min(ib - 2 * e, 0)
            if not f.m_is_S and f.S_on_D:
                if ib != 2 * e:
                    v["v2"] += weight * (ib * (1 + n_iso) - (2 + both) * e)
                else:
                    v["v2'"] += weight * (_gamma1(c) * (n_iso == 1) + 3 * e * c.tangent_at_infinity)
            if f.m_is_S:
                if ib != 2 * e:
                    v["v3"] += weight * (ib + (ib - e) * n_iso)
                else:
                    v["v3'"] += weight * ((2 + n_iso) * e + _gamma2(c) * both)
            if c.tangent_at_infinity:
                v["v4"] += weight * (ib + ((f.m_is_I or f.m_is_J) - 2) * e)
    return v


def route_b(cm: CausticMap, class_dual: int, recs: Sequence[BasePointRecord]) -> tuple[int, dict]:
    v = route_b_terms(cm, recs)
    on_curve = _zero(cm.F.evaluate(cm.S))
    value = 3 * class_dual - v["v1"] - v["v2"] - v["v2'"]
    if on_curve:
        value -= v["v3"] + v["v3'"]
    if not cm.source_at_infinity:
        value -= v["v4"]
    return _integer(value), {k: _num_json(x) for k, x in v.items()}


def _singular_tangent_conditions(cm: CausticMap, recs: Sequence[BasePointRecord]) -> tuple[bool, bool]:
    """(S on a singular tangent, line at infinity is a singular tangent)."""
    s_on = inf = False
    for r in recs:
        if r.singular:
            for c in r.cases:
                s_on |= c.flags.S_on_D
                inf |= c.tangent_at_infinity
    return s_on, inf


def simple_formula_applies(cm: CausticMap, recs: Sequence[BasePointRecord]) -> bool:
    s_on, inf = _singular_tangent_conditions(cm, recs)
    return cm.constant_image is None and not s_on and not inf


def route_simple_formula(cm: CausticMap, class_dual: int, recs: Sequence[BasePointRecord]) -> int | None:
    """Closed form valid when S and the line at infinity avoid the singular tangents."""
    if not simple_formula_applies(cm, recs):
        return None
    v1 = v2 = v2p = v3 = v4 = Fraction(0)
    on_curve = _zero(cm.F.evaluate(cm.S))
    for r in recs:
        if r.singular:
            if r.cases and not (r.cases[0].flags.m_on_IS or r.cases[0].flags.m_on_JS):
                for c in r.cases:
                    weight = Fraction(r.count * c.count, c.ramification)
                    v1 += weight * min(c.branch_tangential - 2 * c.ramification, 0)
            continue
        (c,) = r.cases
        f, i = c.flags, c.tangential
        n_iso = f.I_on_D + f.J_on_D
        both = f.I_on_D and f.J_on_D
        if not f.m_is_S and f.S_on_D:
            if i != 2:
                v2 += r.count * (i * (1 + n_iso) - 2 - both)
            else:
                v2p += r.count * 3 * (n_iso > 0)
        if f.m_is_S:
            v3 = i + (i - 1) * n_iso if i != 2 else 2 + n_iso + 2 * both
        if c.tangent_at_infinity:
            v4 += r.count * (i - 2 + (f.m_is_I or f.m_is_J))
    value = 3 * class_dual - v1 - v2 - v2p
    if on_curve:
        value -= v3
    if not cm.source_at_infinity:
        value -= v4
    return _integer(value)


def flex_formula_applies(cm: CausticMap, recs: Sequence[BasePointRecord]) -> bool:
    if not simple_formula_applies(cm, recs):
        return False
    for r in recs:
        if not r.singular:
            continue
        for c in r.cases:
            if c.flags.m_on_IS or c.flags.m_on_JS:
                return False
            if c.branch_tangential > 2 * c.ramification:
                return False
    return True


def route_flex_formula(cm: CausticMap, recs: Sequence[BasePointRecord]) -> int | None:
    """Count of flexes and isotropic tangencies, under the strongest hypotheses."""
    if not flex_formula_applies(cm, recs):
        return None
    d = cm.degree
    on_curve = _zero(cm.F.evaluate(cm.S))
    regular = [(r, r.cases[0]) for r in recs if not r.singular]
    source_case = next((c for r, c in regular if c.flags.m_is_S), None)
    if not cm.source_at_infinity:
        line_is = line_through(cm.S, I_POINT)
        line_js = line_through(cm.S, J_POINT)
        i0 = t0 = n0 = Fraction(0)
        cyclic_at_infinity = 0
        for r, c in regular:
            f, i = c.flags, c.tangential
            tangent = r.local.pro_branches[0].tangent
            if i > 2 and not f.S_on_D and not c.tangent_at_infinity:
                i0 += r.count * (i - 2)
            isotropic = tangent == line_is or tangent == line_js
            if isotropic:
                t0 += r.count * i
                if i == 2 and not f.m_is_S:
                    n0 += r.count
            if (f.m_is_I or f.m_is_J) and c.tangent_at_infinity:
                cyclic_at_infinity += 1
        value = 3 * d + i0 - t0 - n0 - cyclic_at_infinity
        if on_curve:
            value -= 2
            if source_case is not None and (source_case.flags.I_on_D or source_case.flags.J_on_D):
                value += 1
        return _integer(value)
    i0p = t0p = Fraction(0)
    for r, c in regular:
        f, i = c.flags, c.tangential
        if i > 2 and not f.S_on_D:
            i0p += r.count * (i - 2)
        if c.tangent_at_infinity:
            t0p += r.count * (2 * i - 1)
    value = 3 * d + i0p - t0p
    if on_curve:
        value -= 3
        if source_case is not None and source_case.tangent_at_infinity and source_case.tangential != 2:
            value += 2
    return _integer(value)


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------


@dataclass
class CausticReport:
    curve: str
    source: list
    degree: int
    class_dual: int
    flex_count: int | None
    singular: list[dict]
    records: list[BasePointRecord]
    route_a: int | None
    route_b: int | None
    route_c: int | None
    simple_formula: int | None
    oracle: int | None
    route_b_terms: dict | None = None
    constant_image: str | None = None
    image_point: str | None = None
    oracle_detail: dict | None = None
    seeds: dict = field(default_factory=dict)
    timings: dict | None = None

    @property
    def values(self) -> dict[str, int]:
        named = {
            "route_a": self.route_a,
            "route_b": self.route_b,
            "route_c": self.route_c,
            "theorem_1_2": self.simple_formula,
            "oracle": self.oracle,
        }
        return {k: v for k, v in named.items() if v is not None}

    @property
    def agreed(self) -> bool:
        return len(set(self.values.values())) == 1

    @property
    def mdeg(self) -> int:
        vals = set(self.values.values())
        if len(vals) != 1:
            raise RouteDisagreement(f"routes disagree: {self.values}", self)
        return vals.pop()

    @property
    def case_tags(self) -> set[str]:
        return {c.case_tag.rstrip("'") for r in self.records if r.is_base for c in r.cases}

    def to_json(self) -> dict:
        return {
            "input": {"curve": self.curve, "source": self.source},
            "degree": self.degree,
            "class": self.class_dual,
            "flex_count": self.flex_count,
            "singular_points": self.singular,
            "constant_image": self.constant_image,
            "image_point": self.image_point,
            "base_points": [r.to_json() for r in self.records if r.is_base],
            "mdeg": {
                "route_a": self.route_a,
                "route_b": self.route_b,
                "route_c": self.route_c,
                "theorem_1_2": self.simple_formula,
                "oracle": self.oracle,
                "agreed": self.agreed,
            },
            "route_b_terms": self.route_b_terms,
            "oracle": self.oracle_detail,
            "seeds": self.seeds,
            "timings": self.timings,
        }


def singular_summary(F: HomoPoly, truncation=None) -> tuple[list[PointData], list[dict]]:
    data = [PointData(e, local_data(F, e.point, truncation)) for e in singular_points(F)]
    out = []
    for p in data:
        out.append(
            {
                "point": p.point.to_json(),
                "count": p.count,
                "branches": [
                    {
                        "multiplicity": b.multiplicity,
                        "tangent": b.tangent.to_json(),
                        "tangential_number": _num_json(b.tangential_number),
                        "weight": _num_json(b.weight),
                    }
                    for b in p.local.branches
                ],
                "V": _num_json(p.local.V),
                "I": _num_json(p.local.I),
            }
        )
    return data, out


def mdeg_routes(
    cm: CausticMap,
    truncation=None,
    oracle: Callable | None = None,
    curve_text: str = "",
    source_text: Sequence = (),
) -> CausticReport:
    """Run every applicable degree computation and check that they agree."""
    sing, sing_json = singular_summary(cm.F, truncation)
    dual = curve_class(cm.F, sing)
    report = CausticReport(
        curve=curve_text or cm.F.to_str(),
        source=list(source_text) or [str(c) for c in cm.S],
        degree=cm.degree,
        class_dual=dual,
        flex_count=None,
        singular=sing_json,
        records=[],
        route_a=None,
        route_b=None,
        route_c=None,
        simple_formula=None,
        oracle=None,
    )
    if cm.constant_image:
        report.constant_image = cm.constant_image
        report.image_point = "J" if cm.constant_image == "I" else "I"
        report.route_a = 0
        report.oracle = 0 if oracle is not None else None
        return report
    recs = base_points(cm, truncation, include_all=True)
    report.records = recs
    report.route_a = route_a(dual, recs)
    report.route_b, report.route_b_terms = route_b(cm, dual, recs)
    report.simple_formula = route_simple_formula(cm, dual, recs)
    report.route_c = route_flex_formula(cm, recs)
    if oracle is not None:
        value, detail = oracle(cm, [r for r in recs if r.is_base])
        report.oracle = value
        report.oracle_detail = detail
        report.seeds["oracle"] = detail.get("seed")
    if not report.agreed:
        raise RouteDisagreement(f"routes disagree: {report.values}", report)
    if report.mdeg < 0:
        raise RouteDisagreement("negative degree", report)
    return report
