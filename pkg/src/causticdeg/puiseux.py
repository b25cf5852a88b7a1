"""Newton-Puiseux expansions at a point of a plane curve.

The curve is moved by a linear chart so the point sits at [0:0:1] and the
vertical direction is not tangent.  Roots y = g(x) of F(x, y, 1) are then
found with Newton polygons until they separate, after which each separated
root is a simple root of an auxiliary equation and is computed by power-series
Newton iteration to any requested precision.

Roots are grouped into classes: one class stands for ``count`` conjugate
roots which share every valuation statistic used downstream.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Sequence

from .errors import NonSquarefreeInput, TruncationTooSmall
from .locus import LINE_AT_INFINITY, ProjLine, ProjPoint, line_through
from .numera import (
    BASE,
    ONE,
    ZERO,
    Tower,
    adjoin_root,
    common_tower,
    up_squarefree_decomposition,
)
from .polyring import HomoPoly, LinearChart

INF = None  # exponent of an exact (finite) root


def _zero(c) -> bool:
    return not c or c.is_zero()


# ---------------------------------------------------------------------------
# Truncated power series in t = x^(1/N)
# ---------------------------------------------------------------------------


def ser_add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return out


def ser_sub(a: list, b: list) -> list:
    return ser_add(a, [-c for c in b])


def ser_mul(a: list, b: list, prec: int) -> list:
    n = min(prec, len(a) + len(b) - 1) if a and b else 0
    out = [None] * n
    for i, x in enumerate(a[:n]):
        if not x:
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if not y:
                continue
            t = x * y
            out[i + j] = t if out[i + j] is None else out[i + j] + t
    zero = ZERO
    return [zero if c is None else c for c in out]


def ser_inv(a: list, prec: int) -> list:
    if not a or _zero(a[0]):
        raise ZeroDivisionError("series with zero constant term")
    inv0 = a[0].inverse()
    out = [inv0]
    for k in range(1, prec):
        acc = None
        for j in range(1, min(k, len(a) - 1) + 1):
            if a[j] and out[k - j]:
                t = a[j] * out[k - j]
                acc = t if acc is None else acc + t
        out.append(ZERO if acc is None else -(acc * inv0))
    return out


def ser_scale(a: list, c) -> list:
    return [x * c for x in a]


def ser_val(a: list) -> int | None:
    for i, c in enumerate(a):
        if not _zero(c):
            return i
    return None


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------


@dataclass
class PuiseuxSeries:
    """Sum of coeff * x^(k/ramification); exact for every exponent below ``truncation``."""

    ramification: int
    terms: dict[int, object]
    truncation: Fraction

    def exponents(self) -> list[Fraction]:
        return sorted(Fraction(k, self.ramification) for k, c in self.terms.items() if not _zero(c))

    def coeff(self, exponent: Fraction):
        k = exponent * self.ramification
        if k.denominator != 1:
            return ZERO
        return self.terms.get(int(k), ZERO)

    def as_list(self, n: int) -> list:
        """Coefficients of t^0..t^(n-1) with t = x^(1/ramification)."""
        return [self.terms.get(k, ZERO) for k in range(n)]

    def to_str(self, var: str = "x") -> str:
        parts = []
        for e in self.exponents():
            c = self.coeff(e)
            base = c.as_base()
            cs = str(base) if base is not None else f"({c.to_str()})"
            parts.append(f"{cs}*{var}^{e}")
        return " + ".join(parts) if parts else "0"


@dataclass
class _Leaf:
    """Simple root w(t) of R(t, w) = 0 with w(0) = 0, so that g = prefix + x^rho w."""

    rows: list[list]  # R as a polynomial in w with t-series coefficients
    ram: int
    rho: Fraction
    prefix: list[tuple[Fraction, object]]
    w: list
    exact: bool = False


@dataclass
class ProBranch:
    """A conjugacy class of pro-branches y = g(x) in a chart.

    ``count`` is the number of pro-branches the class stands for; all of them
    share the valuation data stored here.
    """

    series: PuiseuxSeries
    tower: Tower
    count: int
    ramification: int
    tangent_slope: object
    tangent: ProjLine
    pairwise_sum: Fraction
    tangential: Fraction
    beta1: Fraction | None
    beta2: Fraction | None
    chart: LinearChart
    index: int = 0
    _leaf: _Leaf | None = field(default=None, repr=False)

    @property
    def branch_weight(self) -> Fraction:
        """Number of branches this class accounts for (may be fractional per class)."""
        return Fraction(self.count, self.ramification)

    def extend(self, truncation: Fraction) -> None:
        """Recompute the series so it is exact below ``truncation``."""
        truncation = Fraction(truncation)
        if truncation <= self.series.truncation:
            return
        leaf = self._leaf
        self.series = _leaf_series(leaf, truncation)
        self._refresh()

    def _refresh(self) -> None:
        self.tangential, self.beta1, self.beta2 = _exponent_data(self.series)


@dataclass
class BranchData:
    """Branch summary: multiplicity, tangent and tangential intersection number."""

    point: ProjPoint
    multiplicity: int
    tangent: ProjLine
    tangential_number: Fraction
    weight: Fraction  # how many branches these data stand for
    classes: list[int]


@dataclass
class LocalData:
    point: ProjPoint
    chart: LinearChart
    multiplicity: int
    pro_branches: list[ProBranch]
    branches: list[BranchData]
    truncation: Fraction

    @property
    def V(self) -> Fraction:
        return sum((b.count * b.pairwise_sum for b in self.pro_branches), Fraction(0))

    @property
    def I(self) -> Fraction:
        return sum((b.count * (b.tangential - 2) for b in self.pro_branches), Fraction(0))

    @property
    def pairwise_val(self) -> list[Fraction]:
        """Row sums of the pairwise valuation matrix, one per class."""
        return [b.pairwise_sum for b in self.pro_branches]

    @property
    def tangential(self) -> list[Fraction]:
        return [b.tangential for b in self.pro_branches]

    @property
    def branch_count(self) -> Fraction:
        return sum((b.branch_weight for b in self.pro_branches), Fraction(0))

    def multiplicities(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for b in self.pro_branches:
            out[b.ramification] = out.get(b.ramification, Fraction(0)) + b.branch_weight
        return out

    def extend(self, truncation: Fraction) -> None:
        for b in self.pro_branches:
            b.extend(truncation)
        self.truncation = max(self.truncation, Fraction(truncation))

    def dump(self) -> str:
        lines = []
        for k, b in enumerate(self.pro_branches):
            lines.append(f"g_{k} = {b.series.to_str()}  (count {b.count}, e {b.ramification})")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Chart selection
# ---------------------------------------------------------------------------


def _unit(k: int) -> list:
    v = [ZERO, ZERO, ZERO]
    v[k] = ONE
    return v


def _affine(F: HomoPoly, chart: LinearChart) -> dict:
    return F.compose_chart(chart).dehomogenize(2)


def _lowest_form(f: dict) -> tuple[int, dict]:
    live = {k: c for k, c in f.items() if not _zero(c)}
    q = min(a + b for a, b in live)
    return q, {k: c for k, c in live.items() if sum(k) == q}


def choose_chart(F: HomoPoly, m1: ProjPoint, offset: int = 0) -> LinearChart:
    """Chart sending [0:0:1] to m1 with the vertical direction not tangent.

    ``offset`` selects a different (still valid) chart; used to test that
    downstream data do not depend on the chart.
    """
    p = m1.coords
    if not _zero(p[2]):
        c1, c2 = _unit(0), _unit(1)
    elif not _zero(p[1]):
        c1, c2 = _unit(0), _unit(2)
    else:
        c1, c2 = _unit(1), _unit(2)
    ks = [0, 1, -1, 2, -2, 3, -3, 4, -4, 5, -5, 6, -6, 7, -7, 8, -8]
    col0 = [a + offset * b for a, b in zip(c1, c2)]
    for k in ks[offset:] + ks[:offset]:
        if offset and k * offset == 1:
            continue
        col1 = [k * a + b for a, b in zip(c1, c2)]
        rows = [[col0[i], col1[i], p[i]] for i in range(3)]
        chart = LinearChart.of(rows)
        q, low = _lowest_form(_affine(F, chart))
        if (0, q) in low:
            return chart
    raise RuntimeError("no admissible chart found")


# ---------------------------------------------------------------------------
# Newton polygon recursion
# ---------------------------------------------------------------------------


def _substitute(P: dict, c, s: Fraction) -> dict:
    """P(x, c x^s + y)."""
    out: dict = {}
    cpow = {0: ONE}
    for (a, b), coef in P.items():
        for k in range(b + 1):
            j = b - k
            if j not in cpow:
                cpow[j] = c**j
            key = (a + s * j, k)
            t = coef * cpow[j] * comb(b, k)
            out[key] = out[key] + t if key in out else t
    return {k: v for k, v in out.items() if v}


def _lower_edges(amin: dict[int, Fraction], top: int):
    """Edges of the lower hull from b = top down to the lowest b present."""
    edges = []
    bv = top
    while True:
        cands = [b for b in amin if b < bv]
        if not cands:
            return edges, bv
        av = amin[bv]
        best = None
        for b in sorted(cands):
            s = (amin[b] - av) / (bv - b)
            if best is None or s < best[0]:
                best = (s, b)
        s, b = best
        edges.append((bv, b, s))
        bv = b


@dataclass
class _Child:
    slope: Fraction | None
    count: int  # conjugate roots in the piece, relative to the node
    mult: int


def _expand(P, mu, prefix, tower, count, acc, rho, out):
    live = {}
    for k, c in P.items():
        if not _zero(c):
            live[k] = c
    P = live
    if mu == 1:
        out.append((P, rho, list(prefix), tower, count, acc))
        return
    amin: dict[int, Fraction] = {}
    for (a, b) in P:
        if b <= mu and (b not in amin or a < amin[b]):
            amin[b] = a
    edges, bottom = _lower_edges(amin, mu)
    plan = []  # (child descriptor, data to recurse)
    for bv, b, s in edges:
        av = amin[bv]
        level = av + s * bv
        phi = [P.get((level - s * j, j), ZERO) for j in range(b, bv + 1)]
        for factor, mult in up_squarefree_decomposition(phi):
            for t2, c in adjoin_root(tower, factor):
                n = t2.degree_over(tower)
                plan.append((_Child(s, n, mult), (t2, c, s, mult)))
    if bottom > 0:
        if bottom > 1:
            raise NonSquarefreeInput("repeated branch: the polynomial has a multiple factor")
        plan.append((_Child(INF, 1, 1), None))
    for idx, (child, data) in enumerate(plan):
        extra = Fraction(0)
        for jdx, (other, _) in enumerate(plan):
            if jdx == idx:
                continue
            extra += other.count * other.mult * _min_slope(child.slope, other.slope)
        if child.slope is not INF:
            extra += (child.count - 1) * child.mult * child.slope
        if data is None:
            out.append((None, INF, list(prefix), tower, count, acc + extra))
            continue
        t2, c, s, mult = data
        P2 = _substitute({k: t2.embed(v) for k, v in P.items()}, t2.embed(c), s)
        _expand(
            P2,
            mult,
            prefix + [(s, c)],
            t2,
            count * child.count,
            acc + extra,
            s,
            out,
        )


def _min_slope(a, b):
    if a is INF:
        return b
    if b is INF:
        return a
    return min(a, b)


# ---------------------------------------------------------------------------
# Leaves: power-series Newton iteration
# ---------------------------------------------------------------------------


def _make_leaf(P, rho, prefix, tower) -> _Leaf:
    prefix = [(s, tower.embed(c)) for s, c in prefix]
    if P is None:
        return _Leaf([], 1, Fraction(0), prefix, [], exact=True)
    shifted = {(a + rho * b, b): c for (a, b), c in P.items()}
    r = min(a for a, _ in shifted)
    den = 1
    for a, _ in shifted:
        den = lcm(den, (a - r).denominator)
    for s, _ in prefix:
        den = lcm(den, s.denominator)
    den = lcm(den, rho.denominator)
    top = max(b for _, b in shifted)
    rows: list[dict[int, object]] = [dict() for _ in range(top + 1)]
    for (a, b), c in shifted.items():
        i = int((a - r) * den)
        rows[b][i] = rows[b][i] + c if i in rows[b] else c
    dense = []
    for row in rows:
        n = max(row, default=-1) + 1
        dense.append([row.get(i, ZERO) for i in range(n)])
    if len(dense) < 2 or not dense[1] or _zero(dense[1][0]):
        raise RuntimeError("leaf equation is not regular in w")
    return _Leaf(dense, den, rho, prefix, [ZERO])


def _newton(leaf: _Leaf, prec: int) -> None:
    w = leaf.w
    have = len(w)
    rows = leaf.rows
    while have < prec:
        have = min(2 * have, prec)
        wt = (w + [ZERO] * have)[:have]
        val: list = []
        der: list = []
        for b in range(len(rows) - 1, -1, -1):
            rb = rows[b][:have]
            val = ser_add(ser_mul(val, wt, have), rb) if val else list(rb)
            if b >= 1:
                term = ser_scale(rows[b][:have], b)
                der = ser_add(ser_mul(der, wt, have), term) if der else term
        if not val:
            val = [ZERO]
        corr = ser_mul(val, ser_inv(der, have), have)
        w = ser_sub(wt, corr)[:have]
    leaf.w = w


def _leaf_series(leaf: _Leaf, truncation: Fraction) -> PuiseuxSeries:
    ram = leaf.ram
    for s, _ in leaf.prefix:
        ram = lcm(ram, s.denominator)
    terms: dict[int, object] = {}
    for s, c in leaf.prefix:
        terms[int(s * ram)] = c
    if not leaf.exact:
        need = (truncation - leaf.rho) * leaf.ram
        prec = max(1, int(need) + (0 if need.denominator == 1 else 1))
        _newton(leaf, prec)
        step = ram // leaf.ram
        base = int(leaf.rho * ram)
        for k, c in enumerate(leaf.w[:prec]):
            if c:
                key = base + k * step
                terms[key] = terms[key] + c if key in terms else c
    terms = {k: v for k, v in terms.items() if v and Fraction(k, ram) < truncation}
    return PuiseuxSeries(ram, terms, Fraction(truncation))


def _exponent_data(series: PuiseuxSeries):
    exps = series.exponents()
    above_one = [e for e in exps if e != 1]
    if not above_one:
        raise TruncationTooSmall("no non-linear term below the truncation order")
    tangential = min(above_one)
    b1 = [e for e in exps if e > 2]
    b2 = [e for e in exps if e not in (1, 2, 3)]
    return tangential, (min(b1) if b1 else None), (min(b2) if b2 else None)


def _ramification(leaf: _Leaf) -> int:
    den = 1
    for s, _ in leaf.prefix:
        den = lcm(den, s.denominator)
    return den


# ---------------------------------------------------------------------------
# Public entry points
# ---------------------------------------------------------------------------


def default_truncation(degree: int) -> Fraction:
    return Fraction(degree * (degree - 1) + 5)


def newton_puiseux(F: HomoPoly, chart: LinearChart, truncation=None) -> LocalData:
    """Pro-branches of V(F o chart) at [0:0:1]."""
    if truncation is None:
        truncation = default_truncation(F.degree)
    truncation = Fraction(truncation)
    f = _affine(F, chart)
    q, low = _lowest_form(f)
    if (0, q) not in low:
        raise ValueError("chart condition fails: x = 0 lies in the tangent cone")
    P = {(Fraction(a), b): c for (a, b), c in f.items() if not _zero(c)}
    tower = common_tower(*P.values(), *(c for row in chart.matrix for c in row))
    P = {k: tower.embed(v) for k, v in P.items()}
    raw: list = []
    _expand(P, q, [], tower, 1, Fraction(0), Fraction(0), raw)
    m1 = ProjPoint(chart.column(2))
    pros: list[ProBranch] = []
    for P_leaf, rho, prefix, t, count, acc in raw:
        leaf = _make_leaf(P_leaf, rho, prefix, t)
        series = _leaf_series(leaf, truncation)
        try:
            tangential, b1, b2 = _exponent_data(series)
        except TruncationTooSmall:
            series = _leaf_series(leaf, 2 * truncation)
            tangential, b1, b2 = _exponent_data(series)
        c1 = series.coeff(Fraction(1))
        c1 = t.embed(c1)
        direction = chart.apply((ONE, c1, ZERO))
        tangent = line_through(chart.column(2), direction)
        pros.append(
            ProBranch(
                series=series,
                tower=t,
                count=count,
                ramification=_ramification(leaf),
                tangent_slope=c1,
                tangent=tangent,
                pairwise_sum=acc,
                tangential=tangential,
                beta1=b1,
                beta2=b2,
                chart=chart,
                index=len(pros),
                _leaf=leaf,
            )
        )
    if sum(p.count for p in pros) != q:
        raise RuntimeError("pro-branch count does not match the multiplicity")
    branches = _group_branches(m1, pros)
    return LocalData(m1, chart, q, pros, branches, truncation)


def _group_branches(m1: ProjPoint, pros: list[ProBranch]) -> list[BranchData]:
    out = []
    for p in pros:
        out.append(
            BranchData(
                point=m1,
                multiplicity=p.ramification,
                tangent=p.tangent,
                tangential_number=p.ramification * p.tangential,
                weight=p.branch_weight,
                classes=[p.index],
            )
        )
    return out


def local_data(F: HomoPoly, m1: ProjPoint, truncation=None, offset: int = 0) -> LocalData:
    return newton_puiseux(F, choose_chart(F, m1, offset), truncation)


def local_invariants(L: LocalData) -> tuple[Fraction, Fraction, list[Fraction]]:
    V, I = L.V, L.I
    if V.denominator != 1 or I.denominator != 1:
        raise RuntimeError("local sums must be integers")
    return V, I, [b.tangential_number for b in L.branches]


# ---------------------------------------------------------------------------
# Composition of a polynomial with a pro-branch
# ---------------------------------------------------------------------------


@dataclass
class SeriesValue:
    """Series in t = x^(1/ramification) known exactly below ``precision`` t-terms."""

    coeffs: list
    ramification: int
    precision: int

    def valuation(self) -> Fraction | None:
        """Exact valuation in x, or None when every known term vanishes."""
        v = ser_val(self.coeffs[: self.precision])
        return None if v is None else Fraction(v, self.ramification)

    @property
    def cap(self) -> Fraction:
        return Fraction(self.precision, self.ramification)


def branch_coordinates(branch: ProBranch) -> tuple[list, list, list, int, int]:
    """Series of the three coordinates M(x, g(x), 1) in t, and their precision."""
    s = branch.series
    ram = s.ramification
    need = s.truncation * ram
    prec = int(need) + (0 if need.denominator == 1 else 1)
    g = s.terms
    gl = [g.get(k, ZERO) for k in range(prec)]
    xl = [ZERO] * prec
    if ram < prec:
        xl[ram] = ONE
    m = branch.chart.matrix
    coords = []
    for i in range(3):
        row = [ser_scale(xl, m[i][0]), ser_scale(gl, m[i][1])]
        const = [m[i][2]] + [ZERO] * (prec - 1)
        coords.append(ser_add(ser_add(row[0], row[1]), const))
    return coords[0], coords[1], coords[2], ram, prec


def eval_homopoly_series(G: HomoPoly, xs: list, ys: list, zs: list, prec: int) -> list:
    pows = []
    for s in (xs, ys, zs):
        p = [[ONE] + [ZERO] * (prec - 1)]
        pows.append(p)
    for k, s in enumerate((xs, ys, zs)):
        for _ in range(G.degree):
            pows[k].append(ser_mul(pows[k][-1], s, prec))
    acc: list = [ZERO] * prec
    for (a, b, c), coef in G.terms.items():
        term = ser_mul(ser_mul(pows[0][a], pows[1][b], prec), pows[2][c], prec)
        acc = ser_add(acc, ser_scale(term, coef))
    return acc[:prec]


def series_compose(G: HomoPoly, branch: ProBranch) -> SeriesValue:
    """G(M(x, g(x), 1)) as a series, exact below the branch truncation."""
    xs, ys, zs, ram, prec = branch_coordinates(branch)
    return SeriesValue(eval_homopoly_series(G, xs, ys, zs, prec), ram, prec)


def composed_valuation(G: HomoPoly, branch: ProBranch, cap=None) -> Fraction:
    """Certified valuation of G along the branch, extending the expansion if needed."""
    cap = Fraction(cap) if cap is not None else None
    while True:
        sv = series_compose(G, branch)
        v = sv.valuation()
        if v is not None:
            return v
        if cap is not None and sv.cap >= cap:
            raise TruncationTooSmall(f"valuation is at least {sv.cap}")
        branch.extend(2 * branch.series.truncation)


def tangent_cone_form(L: LocalData) -> HomoPoly:
    """Product of the pro-branch tangents, normed down to the point's tower."""
    base = L.point.tower
    out = HomoPoly.constant(ONE)
    for b in L.pro_branches:
        out = out * norm_form(b.tangent.as_poly(), base)
    return out


def norm_form(G: HomoPoly, base: Tower) -> HomoPoly:
    """Norm of a form with tower coefficients down to a prefix tower."""
    while True:
        t = G.tower
        if t.height <= base.height:
            return G.map_coeffs(base.embed)
        G = _norm_one_level(G.map_coeffs(t.embed), t)


def _norm_one_level(G: HomoPoly, t: Tower) -> HomoPoly:
    n = t.degree
    gen = t.gen()
    # matrix of multiplication by G on the basis 1, gen, ..., gen^(n-1)
    cols = []
    for j in range(n):
        shifted = G.scale(gen**j)
        col = [dict() for _ in range(n)]
        for e, c in shifted.terms.items():
            for i, ci in enumerate(c.coeffs):
                if ci:
                    col[i][e] = ci
        cols.append([HomoPoly(col[i], G.degree) for i in range(n)])
    mat = [[cols[j][i] for j in range(n)] for i in range(n)]
    return _det(mat)


def _det(mat: list[list[HomoPoly]]) -> HomoPoly:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    out = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in mat[1:]]
        term = mat[0][j] * _det(minor)
        if j % 2:
            term = -term
        out = term if out is None else out + term
    return out
