"""Homogeneous polynomials in x, y, z over the coefficient towers.

A :class:`HomoPoly` is a sparse map from exponent triples to coefficients.
Affine pieces (``z = 1``) are plain dicts ``{(a, b): c}`` and are handled by
the ``bv_*`` helpers; univariate polynomials reuse the list helpers of
:mod:`causticdeg.numera`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import DegreeTooLow, NotHomogeneous, ZeroPolynomial, ZeroVector
from .numera import (
    BASE,
    ONE,
    ZERO,
    Tower,
    common_tower,
    up_exact_div,
    up_strip,
)

Exp = tuple[int, int, int]
VARS = ("x", "y", "z")


def _is_exactly_zero(c) -> bool:
    return not c or c.is_zero()


class HomoPoly:
    """Homogeneous polynomial of a fixed degree in x, y, z."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: Mapping[Exp, object], degree: int | None = None):
        clean: dict[Exp, object] = {}
        for e, c in terms.items():
            if isinstance(c, int):
                c = BASE.embed(c)
            if c:
                clean[tuple(e)] = c
        degrees = {sum(e) for e in clean}
        if len(degrees) > 1:
            raise NotHomogeneous(degrees)
        if degree is None:
            if not degrees:
                raise ValueError("the zero polynomial needs an explicit degree")
            degree = degrees.pop()
        elif degrees and degrees.pop() != degree:
            raise NotHomogeneous({degree} | {sum(e) for e in clean})
        self.terms = clean
        self.degree = degree

    # -- construction -------------------------------------------------------

    @staticmethod
    def zero(degree: int) -> "HomoPoly":
        return HomoPoly({}, degree)

    @staticmethod
    def constant(c) -> "HomoPoly":
        return HomoPoly({(0, 0, 0): c}, 0)

    @staticmethod
    def var(name: str) -> "HomoPoly":
        e = [0, 0, 0]
        e[VARS.index(name)] = 1
        return HomoPoly({tuple(e): ONE}, 1)

    @staticmethod
    def linear(coeffs: Sequence) -> "HomoPoly":
        return HomoPoly({(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]}, 1)

    # -- basic queries -------------------------------------------------------

    @property
    def tower(self) -> Tower:
        return common_tower(*self.terms.values())

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.terms.values())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, e: Exp):
        return self.terms.get(tuple(e), ZERO)

    def __eq__(self, other):
        if not isinstance(other, HomoPoly):
            return NotImplemented
        if self.degree != other.degree:
            return self.is_zero() and other.is_zero()
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        return f"HomoPoly({self.to_str()!r})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(VARS, e) if k
            )
            cs = _coeff_text(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = to_str

    # -- ring operations -----------------------------------------------------

    def __neg__(self):
        return HomoPoly({e: -c for e, c in self.terms.items()}, self.degree)

    def __add__(self, other: "HomoPoly") -> "HomoPoly":
        if not self.terms:
            return other
        if not other.terms:
            return self
        if self.degree != other.degree:
            raise NotHomogeneous({self.degree, other.degree})
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return HomoPoly(out, self.degree)

    def __sub__(self, other: "HomoPoly") -> "HomoPoly":
        return self + (-other)

    def __mul__(self, other) -> "HomoPoly":
        if not isinstance(other, HomoPoly):
            return self.scale(other)
        out: dict[Exp, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                t = c1 * c2
                out[e] = out[e] + t if e in out else t
        return HomoPoly(out, self.degree + other.degree)

    def __rmul__(self, other) -> "HomoPoly":
        return self.scale(other)

    def scale(self, c) -> "HomoPoly":
        return HomoPoly({e: c * v for e, v in self.terms.items()}, self.degree)

    def __pow__(self, n: int) -> "HomoPoly":
        result = HomoPoly.constant(ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- calculus ------------------------------------------------------------

    def partial(self, var: int | str) -> "HomoPoly":
        k = VARS.index(var) if isinstance(var, str) else var
        out = {}
        for e, c in self.terms.items():
            if e[k]:
                f = list(e)
                f[k] -= 1
                out[tuple(f)] = c * e[k]
        return HomoPoly(out, max(self.degree - 1, 0))

    def partials(self) -> tuple["HomoPoly", "HomoPoly", "HomoPoly"]:
        return self.partial(0), self.partial(1), self.partial(2)

    def second_partials(self) -> list[list["HomoPoly"]]:
        first = self.partials()
        return [[first[i].partial(j) for j in range(3)] for i in range(3)]

    def hessian(self) -> "HomoPoly":
        """Determinant of the matrix of second partial derivatives."""
        if self.degree < 2:
            raise DegreeTooLow("the Hessian needs degree >= 2")
        h = self.second_partials()
        fxx, fxy, fxz = h[0]
        fyy, fyz = h[1][1], h[1][2]
        fzz = h[2][2]
        return (
            fxx * fyy * fzz
            - fxx * fyz * fyz
            + (fxy * fyz * fxz).scale(2)
            - fxy * fxy * fzz
            - fyy * fxz * fxz
        )

    def polar(self, point: Sequence) -> "HomoPoly":
        """x_P F_x + y_P F_y + z_P F_z."""
        if all(_is_exactly_zero(_num(c)) for c in point):
            raise ZeroVector("the polar needs a nonzero point")
        fx, fy, fz = self.partials()
        out = HomoPoly.zero(max(self.degree - 1, 0))
        for c, g in zip(point, (fx, fy, fz)):
            c = _num(c)
            if c:
                out = out + g.scale(c)
        return out

    def h_affine(self) -> "HomoPoly":
        """2 F_xy F_x F_y - F_xx F_y^2 - F_yy F_x^2."""
        if self.degree < 2:
            raise DegreeTooLow("needs degree >= 2")
        fx, fy, _ = self.partials()
        fxx, fxy, fyy = fx.partial(0), fx.partial(1), fy.partial(1)
        return (fxy * fx * fy).scale(2) - fxx * fy * fy - fyy * fx * fx

    def euler_holds(self) -> bool:
        if self.degree == 0:
            return True
        fx, fy, fz = self.partials()
        x, y, z = (HomoPoly.var(v) for v in VARS)
        return x * fx + y * fy + z * fz == self.scale(self.degree)

    # -- evaluation and substitution ----------------------------------------

    def evaluate(self, point: Sequence):
        p = [_num(c) for c in point]
        pows = [_powers(v, self.degree) for v in p]
        acc = None
        for (a, b, c), coef in self.terms.items():
            t = coef * pows[0][a] * pows[1][b] * pows[2][c]
            acc = t if acc is None else acc + t
        if acc is None:
            return common_tower(*p).zero()
        return acc

    def compose_chart(self, chart: "LinearChart | Sequence[Sequence]") -> "HomoPoly":
        """The polynomial v -> F(M v)."""
        m = chart.matrix if isinstance(chart, LinearChart) else chart
        forms = [HomoPoly.linear([_num(c) for c in row]) for row in m]
        cache: list[dict[int, HomoPoly]] = [{0: HomoPoly.constant(ONE)} for _ in range(3)]

        def power(k: int, n: int) -> HomoPoly:
            memo = cache[k]
            if n not in memo:
                memo[n] = power(k, n - 1) * forms[k]
            return memo[n]

        out = HomoPoly.zero(self.degree)
        for (a, b, c), coef in self.terms.items():
            out = out + (power(0, a) * power(1, b) * power(2, c)).scale(coef)
        return out

    def dehomogenize(self, var: int = 2) -> dict[tuple[int, int], object]:
        """Affine piece obtained by setting the given variable to 1."""
        keep = [k for k in range(3) if k != var]
        out: dict[tuple[int, int], object] = {}
        for e, c in self.terms.items():
            key = (e[keep[0]], e[keep[1]])
            out[key] = out[key] + c if key in out else c
        return {k: v for k, v in out.items() if v}

    def binary_form(self, var: int = 2) -> list:
        """Coefficients of F(t, 1, 0) (for var=2), lowest power of t first."""
        out: dict[int, object] = {}
        for e, c in self.terms.items():
            if e[var] == 0:
                k = e[0] if var != 0 else e[1]
                out[k] = c
        if not out:
            return []
        top = max(out)
        return up_strip([out.get(k, ZERO) for k in range(top + 1)])

    def map_coeffs(self, fn) -> "HomoPoly":
        return HomoPoly({e: fn(c) for e, c in self.terms.items()}, self.degree)


def _num(c):
    if isinstance(c, int):
        return BASE.embed(c)
    return c


def _powers(v, n: int) -> list:
    out = [v.tower.one()]
    for _ in range(n):
        out.append(out[-1] * v)
    return out


def _coeff_text(c) -> str:
    from .numera import GaussianRational

    if isinstance(c, GaussianRational):
        return str(c)
    base = c.as_base()
    if base is not None:
        return str(base)
    return f"({c.to_str()})"


# ---------------------------------------------------------------------------
# Linear charts
# ---------------------------------------------------------------------------


def det3(m: Sequence[Sequence]):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


@dataclass(frozen=True)
class LinearChart:
    """Invertible 3x3 matrix acting on coordinate vectors."""

    matrix: tuple[tuple, tuple, tuple]
    det: object

    @staticmethod
    def of(rows: Iterable[Iterable]) -> "LinearChart":
        m = tuple(tuple(_num(c) for c in row) for row in rows)
        d = det3(m)
        if _is_exactly_zero(d):
            raise ZeroVector("chart matrix is singular")
        return LinearChart(m, d)

    @staticmethod
    def identity() -> "LinearChart":
        return LinearChart.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def apply(self, v: Sequence) -> tuple:
        return tuple(
            sum((self.matrix[i][j] * _num(v[j]) for j in range(3)), ZERO) for i in range(3)
        )

    def column(self, j: int) -> tuple:
        return tuple(self.matrix[i][j] for i in range(3))

    def inverse(self) -> "LinearChart":
        m = self.matrix
        inv_det = self.det.inverse()
        cof = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                r = [k for k in range(3) if k != i]
                c = [k for k in range(3) if k != j]
                minor = m[r[0]][c[0]] * m[r[1]][c[1]] - m[r[0]][c[1]] * m[r[1]][c[0]]
                cof[i][j] = minor if (i + j) % 2 == 0 else -minor
        return LinearChart.of([[cof[j][i] * inv_det for j in range(3)] for i in range(3)])

    def __matmul__(self, other: "LinearChart") -> "LinearChart":
        a, b = self.matrix, other.matrix
        return LinearChart.of(
            [[sum((a[i][k] * b[k][j] for k in range(3)), ZERO) for j in range(3)] for i in range(3)]
        )

    def transpose_apply(self, v: Sequence) -> tuple:
        """M^T v, the action on line coordinates."""
        return tuple(
            sum((self.matrix[j][i] * _num(v[j]) for j in range(3)), ZERO) for i in range(3)
        )


# ---------------------------------------------------------------------------
# Bivariate affine polynomials {(a, b): c}, a the x-exponent, b the y-exponent
# ---------------------------------------------------------------------------

Bivariate = dict


def bv_clean(p: Mapping) -> dict:
    return {k: v for k, v in p.items() if v}


def bv_add(p: Mapping, q: Mapping) -> dict:
    out = dict(p)
    for k, v in q.items():
        out[k] = out[k] + v if k in out else v
    return bv_clean(out)


def bv_sub(p: Mapping, q: Mapping) -> dict:
    return bv_add(p, {k: -v for k, v in q.items()})


def bv_mul(p: Mapping, q: Mapping) -> dict:
    out: dict = {}
    for (a, b), c in p.items():
        for (a2, b2), c2 in q.items():
            k = (a + a2, b + b2)
            t = c * c2
            out[k] = out[k] + t if k in out else t
    return bv_clean(out)


def bv_partial(p: Mapping, var: int) -> dict:
    out = {}
    for (a, b), c in p.items():
        e = (a, b)[var]
        if e:
            k = (a - 1, b) if var == 0 else (a, b - 1)
            out[k] = c * e
    return bv_clean(out)


def bv_deg(p: Mapping, var: int) -> int:
    return max((k[var] for k in p), default=-1)


def bv_total_degree(p: Mapping) -> int:
    return max((a + b for a, b in p), default=-1)


def bv_in_var(p: Mapping, var: int) -> list[list]:
    """View p as a polynomial in ``var`` with univariate coefficients in the other."""
    other = 1 - var
    n = bv_deg(p, var)
    rows: list[dict[int, object]] = [dict() for _ in range(n + 1)]
    for k, c in p.items():
        rows[k[var]][k[other]] = c
    out = []
    for row in rows:
        top = max(row, default=-1)
        out.append(up_strip([row.get(i, ZERO) for i in range(top + 1)]))
    return out


def bv_specialize(p: Mapping, var: int, value) -> list:
    """Substitute ``value`` for ``var``; return a univariate list in the other variable."""
    other = 1 - var
    out: dict[int, object] = {}
    pows: dict[int, object] = {}
    for k, c in p.items():
        e = k[var]
        if e not in pows:
            pows[e] = value**e
        t = c * pows[e]
        j = k[other]
        out[j] = out[j] + t if j in out else t
    top = max(out, default=-1)
    return up_strip([out.get(i, ZERO) for i in range(top + 1)])


def bv_shear(p: Mapping, k) -> dict:
    """p(x + k*y, y)."""
    out: dict = {}
    from math import comb

    for (a, b), c in p.items():
        for j in range(a + 1):
            coef = c * comb(a, j) * (k ** (a - j) if a - j else ONE)
            key = (j, b + a - j)
            out[key] = out[key] + coef if key in out else coef
    return bv_clean(out)


def bv_remainder(g: Mapping, f: Mapping) -> dict:
    """Remainder of g by f as polynomials in y, when f has a constant leading coefficient."""
    n = bv_deg(f, 1)
    lead = {a: c for (a, b), c in f.items() if b == n}
    if set(lead) != {0}:
        raise ValueError("divisor must have a constant leading coefficient in y")
    inv = lead[0].inverse()
    r = dict(g)
    while True:
        r = {k: v for k, v in r.items() if v and not v.is_zero()}
        top = bv_deg(r, 1)
        if top < n:
            return r
        shift = top - n
        quot = {(a, shift): c * inv for (a, b), c in r.items() if b == top}
        r = bv_sub(r, bv_mul(quot, f))


def vanishes_on_curve(G: HomoPoly, F: HomoPoly) -> bool:
    """Exact test that G(x, y, 1) lies in the ideal generated by F(x, y, 1)."""
    f = F.dehomogenize(2)
    g = G.dehomogenize(2)
    if not g:
        return True
    top = F.binary_form(2)
    if not top:
        raise ZeroPolynomial("F is divisible by z")
    # F(x + k y, y, 1) has y-leading coefficient F(k, 1, 0), a constant
    for k in _shear_candidates():
        kk = BASE.embed(k)
        lead = sum((c * kk**i for i, c in enumerate(top)), ZERO)
        if not _is_exactly_zero(lead):
            return not bv_remainder(bv_shear(g, kk), bv_shear(f, kk))


def _shear_candidates():
    yield 0
    k = 1
    while True:
        yield k
        yield -k
        k += 1


# ---------------------------------------------------------------------------
# Resultants
# ---------------------------------------------------------------------------


def _sem_strip(p: Sequence) -> list:
    p = [_num(c) for c in p]
    while p and _is_exactly_zero(p[-1]):
        p.pop()
    return p


def sylvester(p: Sequence, q: Sequence, zero) -> list[list]:
    m, n = len(p) - 1, len(q) - 1
    size = m + n
    rows = []
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(p)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for j, c in enumerate(reversed(q)):
            row[i + j] = c
        rows.append(row)
    return rows


def _bareiss(mat: list[list], is_zero, mul, sub, exact_div, one):
    n = len(mat)
    if n == 0:
        return 1, one
    a = [list(r) for r in mat]
    sign = 1
    prev = one
    for k in range(n - 1):
        if is_zero(a[k][k]):
            for r in range(k + 1, n):
                if not is_zero(a[r][k]):
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return None
        piv = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                t = sub(mul(a[i][j], piv), mul(aik, a[k][j]))
                a[i][j] = exact_div(t, prev)
        prev = piv
    return sign, a[n - 1][n - 1]


def resultant(p: Sequence, q: Sequence):
    """Sylvester resultant of two univariate polynomials (lists, lowest first)."""
    p, q = _sem_strip(p), _sem_strip(q)
    if not p or not q:
        raise ZeroPolynomial("resultant of a zero polynomial")
    t = common_tower(*p, *q)
    zero, one = t.zero(), t.one()
    if len(p) == 1 and len(q) == 1:
        return one
    if len(p) == 1:
        return t.embed(p[0]) ** (len(q) - 1)
    if len(q) == 1:
        return t.embed(q[0]) ** (len(p) - 1)
    mat = sylvester([t.embed(c) for c in p], [t.embed(c) for c in q], zero)
    det = _bareiss(
        mat,
        _is_exactly_zero,
        lambda a, b: a * b,
        lambda a, b: a - b,
        lambda a, b: a / b,
        one,
    )
    if det is None:
        return zero
    sign, value = det
    return value if sign > 0 else -value


def _up_sub(a, b):
    from .numera import up_sub

    return up_sub(a, b)


def _up_mul(a, b):
    from .numera import up_mul

    return up_mul(a, b)


def resultant_y(P: Mapping, Q: Mapping, var: int = 1) -> list:
    """Resultant in ``var`` of two bivariate polynomials: a univariate list in the other."""
    p = [_sem_strip(c) for c in bv_in_var(P, var)]
    q = [_sem_strip(c) for c in bv_in_var(Q, var)]
    p, q = _strip_poly_list(p), _strip_poly_list(q)
    if not p or not q:
        raise ZeroPolynomial("resultant of a zero polynomial")
    if len(p) == 1 and len(q) == 1:
        return [ONE]
    if len(p) == 1:
        return _poly_pow(p[0], len(q) - 1)
    if len(q) == 1:
        return _poly_pow(q[0], len(p) - 1)
    mat = sylvester(p, q, [])
    det = _bareiss(
        mat,
        lambda a: not _sem_strip(a),
        _up_mul,
        _up_sub,
        lambda a, b: up_exact_div(a, b) if b != [ONE] else a,
        [ONE],
    )
    if det is None:
        return []
    sign, value = det
    return _sem_strip(value if sign > 0 else [-c for c in value])


def _strip_poly_list(p: list[list]) -> list[list]:
    while p and not p[-1]:
        p.pop()
    return p


def _poly_pow(p: list, n: int) -> list:
    out = [ONE]
    for _ in range(n):
        out = _up_mul(out, p)
    return out
