"""Exact projective points and lines, and zero-dimensional solving on a curve."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import CurveContained, EqualPoints, NonSquarefreeInput, ZeroVector
from .numera import (
    BASE,
    ONE,
    IMAG,
    ZERO,
    Tower,
    adjoin_root,
    common_tower,
    up_gcd,
    up_strip,
)
from .polyring import (
    HomoPoly,
    bv_deg,
    bv_specialize,
    resultant_y,
    vanishes_on_curve,
)


def _num(c):
    return BASE.embed(c) if isinstance(c, int) else c


def _zero(c) -> bool:
    return not c or c.is_zero()


def cross(u: Sequence, v: Sequence) -> tuple:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: Sequence, v: Sequence):
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def _normalize(v: Sequence) -> tuple:
    v = [_num(c) for c in v]
    t = common_tower(*v)
    v = [t.embed(c) for c in v]
    for k in (2, 1, 0):
        if not _zero(v[k]):
            inv = v[k].inverse()
            return tuple(t.one() if j == k else c * inv for j, c in enumerate(v))
    raise ZeroVector("all coordinates vanish")


class ProjPoint:
    """Point of the projective plane, scaled so the last nonzero coordinate is 1."""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence):
        self.coords = _normalize(coords)

    @property
    def tower(self) -> Tower:
        return common_tower(*self.coords)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint):
            return NotImplemented
        return all(_zero(c) for c in cross(self.coords, other.coords))

    __hash__ = None

    def at_infinity(self) -> bool:
        return _zero(self.coords[2])

    def __iter__(self) -> Iterator:
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __repr__(self):
        return "[" + " : ".join(_text(c) for c in self.coords) + "]"

    def to_json(self) -> dict:
        return {
            "tower": self.tower.minpolys(),
            "coords": [_text(c) for c in self.coords],
        }


class ProjLine:
    """Line aX + bY + cZ = 0, scaled like a point."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        self.coeffs = _normalize(coeffs)

    def __eq__(self, other):
        if not isinstance(other, ProjLine):
            return NotImplemented
        return all(_zero(c) for c in cross(self.coeffs, other.coeffs))

    __hash__ = None

    def contains(self, p: "ProjPoint | Sequence") -> bool:
        coords = p.coords if isinstance(p, ProjPoint) else [_num(c) for c in p]
        return _zero(dot(self.coeffs, coords))

    def as_poly(self) -> HomoPoly:
        return HomoPoly.linear(self.coeffs)

    def __repr__(self):
        return "<" + " : ".join(_text(c) for c in self.coeffs) + ">"

    def to_json(self) -> dict:
        t = common_tower(*self.coeffs)
        return {"tower": t.minpolys(), "coeffs": [_text(c) for c in self.coeffs]}


def _text(c) -> str:
    base = c.as_base()
    return str(base) if base is not None else c.to_str()


I_POINT = (ONE, IMAG, ZERO)
J_POINT = (ONE, -IMAG, ZERO)
LINE_AT_INFINITY = ProjLine((0, 0, 1))


def line_through(p: "ProjPoint | Sequence", q: "ProjPoint | Sequence") -> ProjLine:
    u = p.coords if isinstance(p, ProjPoint) else [_num(c) for c in p]
    v = q.coords if isinstance(q, ProjPoint) else [_num(c) for c in q]
    w = cross(u, v)
    if all(_zero(c) for c in w):
        raise EqualPoints("a line needs two distinct points")
    return ProjLine(w)


def incidence(p: "ProjPoint | Sequence", line: ProjLine) -> bool:
    return line.contains(p)


def same_point(u: Sequence, v: Sequence) -> bool:
    return all(_zero(c) for c in cross([_num(c) for c in u], [_num(c) for c in v]))


# ---------------------------------------------------------------------------
# Point sets
# ---------------------------------------------------------------------------


@dataclass
class PointEntry:
    point: ProjPoint
    count: int  # number of conjugate points this entry stands for


@dataclass
class AlgebraicPointSet:
    entries: list[PointEntry] = field(default_factory=list)
    base: Tower = BASE
    eliminants: list = field(default_factory=list)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def points(self) -> list[ProjPoint]:
        return [e.point for e in self.entries]

    @property
    def total(self) -> int:
        return sum(e.count for e in self.entries)

    def contains(self, p: ProjPoint) -> bool:
        return any(e.point == p for e in self.entries)

    def without(self, other: "AlgebraicPointSet") -> "AlgebraicPointSet":
        keep = [e for e in self.entries if not other.contains(e.point)]
        return AlgebraicPointSet(keep, self.base, self.eliminants)


def _count(t: Tower, base: Tower) -> int:
    return t.degree_over(base)


def _affine_solutions(f: dict, g: dict, base: Tower, data: list):
    """Common zeros of two affine polynomials, as (tower, x, y)."""
    dx = bv_deg(f, 0) + bv_deg(g, 0)
    dy = bv_deg(f, 1) + bv_deg(g, 1)
    elim = 0 if dx <= dy else 1
    keep = 1 - elim
    r = resultant_y(f, g, var=elim)
    data.append({"eliminated": "xy"[elim], "resultant_degree": len(r) - 1})
    if not r:
        return None
    if len(r) == 1:
        return []
    out = []
    for t, root in adjoin_root(base, r):
        pf = bv_specialize(f, keep, root)
        pg = bv_specialize(g, keep, root)
        h = up_gcd(pf, pg)
        if len(h) < 2:
            continue
        for t2, other in adjoin_root(t, h):
            x, y = (other, root) if keep == 1 else (root, other)
            out.append((t2, t2.embed(x), t2.embed(y)))
    return out


def locus_on_curve(F: HomoPoly, G: HomoPoly, base: Tower | None = None) -> AlgebraicPointSet:
    """All points of V(F) and V(G) in common, as conjugacy classes."""
    if base is None:
        base = common_tower(*F.terms.values(), *G.terms.values())
    if G.is_zero() or (G.degree >= F.degree and vanishes_on_curve(G, F)):
        raise CurveContained("the curve lies inside the second locus")
    data: list = []
    entries: list[PointEntry] = []
    sols = _affine_solutions(F.dehomogenize(2), G.dehomogenize(2), base, data)
    if sols is None:
        raise CurveContained("the two loci share a component")
    for t, x, y in sols:
        entries.append(PointEntry(ProjPoint((x, y, t.one())), _count(t, base)))
    # line at infinity: [t : 1 : 0] and [1 : 0 : 0]
    ff, gg = F.binary_form(2), G.binary_form(2)
    if not ff and not gg:
        raise CurveContained("both loci contain the line at infinity")
    h = up_gcd(ff, gg) if ff or gg else []
    if len(h) >= 2:
        for t, root in adjoin_root(base, h):
            entries.append(PointEntry(ProjPoint((root, t.one(), t.zero())), _count(t, base)))
    e100 = (ONE, ZERO, ZERO)
    if _zero(F.evaluate(e100)) and _zero(G.evaluate(e100)):
        entries.append(PointEntry(ProjPoint(e100), 1))
    return AlgebraicPointSet(entries, base, data)


def singular_points(F: HomoPoly, base: Tower | None = None) -> AlgebraicPointSet:
    """Points where all three partial derivatives vanish."""
    partials = [g for g in F.partials() if not g.is_zero()]
    if not partials:
        raise NonSquarefreeInput("constant polynomial")
    partials.sort(key=lambda g: len(g.terms))
    try:
        cand = locus_on_curve(F, partials[0], base)
    except CurveContained as exc:
        raise NonSquarefreeInput("the curve shares a component with a polar") from exc
    keep = []
    for e in cand.entries:
        if all(_zero(g.evaluate(e.point.coords)) for g in partials[1:]):
            keep.append(e)
    return AlgebraicPointSet(keep, cand.base, cand.eliminants)


def points_on_line(F: HomoPoly, line: ProjLine, base: Tower | None = None):
    """Intersection of V(F) with a line, as (tower, point, multiplicity) triples."""
    a, b, c = line.coeffs
    # parametrise the line by two points on it
    p, q = _line_basis(line)
    t0 = common_tower(*F.terms.values(), *p, *q)
    if base is None:
        base = t0
    # F(s*p + q) as polynomial in s (plus the point p itself)
    poly = _restrict(F, p, q)
    out = []
    if not poly:
        raise CurveContained("the line is a component of the curve")
    from .numera import up_squarefree_decomposition

    for factor, mult in up_squarefree_decomposition(poly):
        for t, s in adjoin_root(t0, factor):
            pt = ProjPoint(tuple(s * t.embed(pc) + t.embed(qc) for pc, qc in zip(p, q)))
            out.append((t, pt, mult))
    deficit = F.degree - (len(poly) - 1)
    if deficit > 0:
        out.append((t0, ProjPoint(p), deficit))
    return out


def _line_basis(line: ProjLine) -> tuple[tuple, tuple]:
    a, b, c = line.coeffs
    cands = [(ZERO, c, -b), (c, ZERO, -a), (b, -a, ZERO)]
    pts = [v for v in cands if not all(_zero(x) for x in v)]
    p = pts[0]
    for q in pts[1:]:
        if not all(_zero(x) for x in cross(p, q)):
            return p, q
    raise ZeroVector("degenerate line")


def _restrict(F: HomoPoly, p: Sequence, q: Sequence) -> list:
    """Coefficients in s of F(s*p + q)."""
    from .numera import up_add, up_mul

    lin = [[q[k], p[k]] for k in range(3)]
    pows = [[[ONE]] for _ in range(3)]
    for k in range(3):
        for _ in range(F.degree):
            pows[k].append(up_mul(pows[k][-1], lin[k]))
    out: list = []
    for (i, j, l), c in F.terms.items():
        term = up_mul(up_mul(pows[0][i], pows[1][j]), pows[2][l])
        out = up_add(out, [c * x for x in term])
    return up_strip([x for x in out]) if out else []
