"""Exact coefficient arithmetic.

Three layers live here:

* rationals (``gmpy2.mpq``),
* Gaussian rationals, the field Q(i) that hosts the cyclic points,
* towers of simple extensions over Q(i), evaluated dynamically: a level is
  only required to be squarefree, and the first time a computation meets a
  non-invertible non-zero element the level is split along the gcd witness.

Splitting is handled by restarting.  :func:`resolve` runs a computation,
catches :class:`ZeroDivisorEncountered`, records the factorisation in a
process-wide registry and reruns.  :func:`adjoin_root` consults that registry,
so the rerun builds the split towers directly.

Univariate polynomials over a tower are plain lists of coefficients, lowest
degree first, without trailing (syntactic) zeros.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence, TypeVar

from gmpy2 import mpq

from .errors import (
    CausticError,
    ConstantPolynomial,
    DivisionByZero,
    IncompatibleTowers,
    ZeroDivisorEncountered,
)

Rational = type(mpq(0))
_T = TypeVar("_T")


def to_rational(value) -> Rational:
    """Convert an int, Fraction, mpq or ``"p/q"`` string to an exact rational."""
    if isinstance(value, Rational):
        return value
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, (int, str)):
        return mpq(value)
    raise TypeError(f"cannot convert {value!r} to a rational")


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------


class GaussianRational:
    """Element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = to_rational(re)
        self.im = to_rational(im)

    @staticmethod
    def _raw(re, im) -> "GaussianRational":
        g = object.__new__(GaussianRational)
        g.re = re
        g.im = im
        return g

    @property
    def tower(self) -> "Tower":
        return BASE

    # syntactic and semantic zero coincide in a field
    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_zero(self) -> bool:
        return not self.re and not self.im

    def key(self):
        return (self.re, self.im)

    def as_base(self) -> "GaussianRational":
        return self

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.re * self.re + self.im * self.im
        if not n:
            raise DivisionByZero("inverse of zero")
        return GaussianRational._raw(self.re / n, -self.im / n)

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __add__(self, other):
        o = _as_gauss(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_gauss(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = _as_gauss(other)
        if o is None:
            return NotImplemented
        return GaussianRational._raw(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = _as_gauss(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return GaussianRational._raw(self.re * o.re, self.im)
        return GaussianRational._raw(
            self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_gauss(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_gauss(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        return _power(self, n, GaussianRational._raw(mpq(1), mpq(0)))

    def __eq__(self, other):
        o = _as_gauss(other)
        if o is None:
            if isinstance(other, AlgebraicNumber):
                return other == self
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if self.im == 1:
            imag = "i"
        elif self.im == -1:
            imag = "-i"
        else:
            imag = f"{self.im}*i"
        if not self.re:
            return imag
        sign = "-" if self.im < 0 else "+"
        mag = -self.im if self.im < 0 else self.im
        imag = "i" if mag == 1 else f"{mag}*i"
        return f"({self.re}{sign}{imag})"


def _as_gauss(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Rational)):
        return GaussianRational._raw(mpq(x), mpq(0))
    if isinstance(x, Fraction):
        return GaussianRational._raw(to_rational(x), mpq(0))
    return None


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
IMAG = GaussianRational(0, 1)


def gauss(re=0, im=0) -> GaussianRational:
    return GaussianRational(re, im)


def _power(x, n: int, one):
    if n < 0:
        return _power(x.inverse(), -n, one)
    result = one
    base = x
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


# ---------------------------------------------------------------------------
# Extension towers
# ---------------------------------------------------------------------------


class Tower:
    """Immutable chain of simple extensions over Q(i).

    Each level is ``parent[t]/(poly)`` with ``poly`` monic and squarefree over
    the parent.  Towers are interned, so two requests for the same level
    return the same object and identity can be used for compatibility checks.
    """

    __slots__ = ("parent", "poly", "height", "irreducible", "degree", "_key")
    _registry: dict = {}

    def __init__(self, parent, poly, irreducible):
        self.parent = parent
        self.poly = tuple(poly)
        self.height = 0 if parent is None else parent.height + 1
        self.irreducible = irreducible
        self.degree = 1 if parent is None else len(self.poly) - 1
        self._key = None if parent is None else tuple(c.key() for c in self.poly)

    @classmethod
    def extend(cls, parent: "Tower", poly: Sequence, irreducible: bool = False) -> "Tower":
        poly = [parent.embed(c) for c in poly]
        poly = _strip(poly)
        if len(poly) < 3:
            raise ValueError("a tower level needs a defining polynomial of degree >= 2")
        lead = poly[-1]
        if not (lead - parent.one()).is_zero():
            inv = lead.inverse()
            poly = [c * inv for c in poly]
        key = (parent, tuple(c.key() for c in poly))
        found = cls._registry.get(key)
        if found is None:
            found = cls(parent, poly, irreducible)
            cls._registry[key] = found
        return found

    @property
    def name(self) -> str:
        return f"t{self.height}"

    def levels(self) -> list["Tower"]:
        out = []
        t = self
        while t.parent is not None:
            out.append(t)
            t = t.parent
        return out[::-1]

    def prefix(self, height: int) -> "Tower":
        t = self
        while t.height > height:
            t = t.parent
        return t

    def extends(self, other: "Tower") -> bool:
        """True when ``other`` is a prefix of this tower."""
        return other.height <= self.height and self.prefix(other.height) is other

    def degree_over(self, base: "Tower") -> int:
        if not self.extends(base):
            raise IncompatibleTowers("base is not a prefix of this tower")
        n = 1
        t = self
        while t is not base:
            n *= t.degree
            t = t.parent
        return n

    def zero(self):
        return ZERO if self.parent is None else AlgebraicNumber._make(self, ())

    def one(self):
        if self.parent is None:
            return ONE
        return AlgebraicNumber._make(self, (self.parent.one(),))

    def gen(self) -> "AlgebraicNumber":
        if self.parent is None:
            raise ValueError("the base field has no generator")
        return AlgebraicNumber._make(self, (self.parent.zero(), self.parent.one()))

    def embed(self, x):
        """Lift ``x`` (a number in a prefix of this tower) into this tower."""
        if isinstance(x, (int, Rational, Fraction)):
            x = _as_gauss(x)
        src = x.tower
        if src is self:
            return x
        if src.height >= self.height:
            raise IncompatibleTowers("cannot embed into a shorter or different tower")
        inner = self.parent.embed(x)
        if not inner:
            return AlgebraicNumber._make(self, ())
        return AlgebraicNumber._make(self, (inner,))

    def minpolys(self) -> list[str]:
        return [up_str(level.poly, level.name) for level in self.levels()]

    def __repr__(self):
        if self.parent is None:
            return "Tower(Q(i))"
        return f"Tower({'; '.join(self.minpolys())})"


BASE = Tower(None, (), True)


def common_tower(*xs) -> Tower:
    best = BASE
    for x in xs:
        t = x.tower if hasattr(x, "tower") else BASE
        if t.height > best.height:
            if not t.extends(best):
                raise IncompatibleTowers("numbers live in unrelated towers")
            best = t
        elif not best.extends(t):
            raise IncompatibleTowers("numbers live in unrelated towers")
    return best


class AlgebraicNumber:
    """Element of a tower level, stored reduced modulo the defining polynomial."""

    __slots__ = ("tower", "coeffs")

    def __init__(self, tower: Tower, coeffs: Iterable):
        if tower.parent is None:
            raise ValueError("use GaussianRational for base field elements")
        cs = [tower.parent.embed(c) for c in coeffs]
        n = tower.degree
        if len(cs) > n:
            cs = _reduce(cs, tower.poly)
        self.tower = tower
        self.coeffs = tuple(_strip(cs))

    @staticmethod
    def _make(tower: Tower, coeffs: tuple) -> "AlgebraicNumber":
        a = object.__new__(AlgebraicNumber)
        a.tower = tower
        a.coeffs = coeffs
        return a

    def __bool__(self) -> bool:
        """Syntactic non-zeroness of the reduced representation."""
        return bool(self.coeffs)

    def key(self):
        return tuple(c.key() for c in self.coeffs)

    def as_base(self):
        """The Q(i) value if this number is a lifted base constant, else None."""
        if not self.coeffs:
            return ZERO
        if len(self.coeffs) > 1:
            return None
        return self.coeffs[0].as_base()

    def is_zero(self) -> bool:
        """Exact zero test.

        Raises :class:`ZeroDivisorEncountered` when the number vanishes at some
        but not all roots of a lazily unsplit level.
        """
        cs = self.coeffs
        if not cs:
            return True
        if len(cs) == 1:
            return cs[0].is_zero()
        if self.tower.irreducible:
            return False
        g = up_gcd(list(cs), list(self.tower.poly))
        if len(g) == 1:
            return False
        raise ZeroDivisorEncountered(self.tower, g)

    def inverse(self) -> "AlgebraicNumber":
        cs = self.coeffs
        if not cs:
            raise DivisionByZero("inverse of zero")
        if len(cs) == 1:
            return AlgebraicNumber._make(self.tower, (cs[0].inverse(),))
        g, s, _ = up_xgcd(list(cs), list(self.tower.poly))
        if len(g) > 1:
            raise ZeroDivisorEncountered(self.tower, g)
        return AlgebraicNumber._make(self.tower, tuple(_strip(list(s))))

    def _coerce(self, other):
        if isinstance(other, AlgebraicNumber):
            if other.tower is self.tower:
                return self, other
            t = common_tower(self, other)
            return t.embed(self), t.embed(other)
        g = _as_gauss(other)
        if g is None:
            return None, None
        return self, self.tower.embed(g)

    def __neg__(self):
        return AlgebraicNumber._make(self.tower, tuple(-c for c in self.coeffs))

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return AlgebraicNumber._make(a.tower, tuple(_strip(_add(a.coeffs, b.coeffs))))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return AlgebraicNumber._make(a.tower, tuple(_strip(_sub(a.coeffs, b.coeffs))))

    def __rsub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return AlgebraicNumber._make(a.tower, tuple(_strip(_sub(b.coeffs, a.coeffs))))

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        ac, bc = a.coeffs, b.coeffs
        if not ac or not bc:
            return AlgebraicNumber._make(a.tower, ())
        if len(bc) == 1:
            c = bc[0]
            return AlgebraicNumber._make(a.tower, tuple(_strip([x * c for x in ac])))
        if len(ac) == 1:
            c = ac[0]
            return AlgebraicNumber._make(a.tower, tuple(_strip([c * x for x in bc])))
        prod = _mul(ac, bc)
        return AlgebraicNumber._make(a.tower, tuple(_strip(_reduce(prod, a.tower.poly))))

    __rmul__ = __mul__

    def __truediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, n: int):
        return _power(self, n, self.tower.one())

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.coeffs == b.coeffs:
            return True
        return (a - b).is_zero()

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.as_base() if self.coeffs else ZERO)
        return hash(self.key())

    def to_str(self) -> str:
        return up_str(list(self.coeffs), self.tower.name)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"AlgebraicNumber({self.to_str()} in {self.tower!r})"


Number = GaussianRational | AlgebraicNumber


def embed_all(xs: Iterable, tower: Tower | None = None) -> list:
    xs = list(xs)
    t = tower if tower is not None else common_tower(*xs)
    return [t.embed(x) for x in xs]


# ---------------------------------------------------------------------------
# Dense univariate polynomials over a tower (lists, lowest degree first)
# ---------------------------------------------------------------------------


def _strip(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _add(a: Sequence, b: Sequence) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return out


def _sub(a: Sequence, b: Sequence) -> list:
    out = list(a) + [None] * max(0, len(b) - len(a))
    for i in range(len(out)):
        if out[i] is None:
            out[i] = -b[i]
        elif i < len(b):
            out[i] = out[i] - b[i]
    return out


def _mul(a: Sequence, b: Sequence) -> list:
    out = [None] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if not y:
                continue
            t = x * y
            k = i + j
            out[k] = t if out[k] is None else out[k] + t
    zero = (a[0] * 0) if a else ZERO
    return [zero if c is None else c for c in out]


def _reduce(r: list, poly: Sequence) -> list:
    """Remainder of ``r`` modulo the monic ``poly``."""
    n = len(poly) - 1
    r = list(r)
    for k in range(len(r) - 1, n - 1, -1):
        c = r[k]
        if not c:
            continue
        base = k - n
        for i in range(n):
            if poly[i]:
                r[base + i] = r[base + i] - c * poly[i]
    return r[:n]


def up_strip(p: Sequence) -> list:
    return _strip(list(p))


def up_deg(p: Sequence) -> int:
    return len(p) - 1


def up_add(a, b) -> list:
    return _strip(_add(a, b))


def up_sub(a, b) -> list:
    return _strip(_sub(a, b))


def up_mul(a, b) -> list:
    if not a or not b:
        return []
    return _strip(_mul(a, b))


def up_scale(p, c) -> list:
    return _strip([x * c for x in p])


def up_monic(p) -> list:
    p = _strip(list(p))
    if not p:
        raise DivisionByZero("zero polynomial has no monic form")
    lead = p[-1]
    inv = lead.inverse()
    return [x * inv for x in p[:-1]] + [lead.tower.one()]


def up_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    b = _strip(list(b))
    if not b:
        raise DivisionByZero("polynomial division by zero")
    r = _strip(list(a))
    n = len(b) - 1
    if len(r) <= n:
        return [], r
    inv = b[-1].inverse()
    q = [None] * (len(r) - n)
    for k in range(len(r) - 1, n - 1, -1):
        c = r[k]
        if not c:
            q[k - n] = c
            continue
        f = c * inv
        q[k - n] = f
        base = k - n
        for i in range(n):
            if b[i]:
                r[base + i] = r[base + i] - f * b[i]
        r[k] = r[k] - r[k]
    return _strip(q), _strip(r[:n])


def up_rem(a, b) -> list:
    return up_divmod(a, b)[1]


def up_exact_div(a, b) -> list:
    q, r = up_divmod(a, b)
    if r:
        raise CausticError("inexact polynomial division")
    return q


def up_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd.  Over an unsplit level this may raise a zero-divisor signal."""
    a = _strip(list(a))
    b = _strip(list(b))
    while b:
        a, b = b, up_divmod(a, b)[1]
    if not a:
        return []
    return up_monic(a)


def up_xgcd(a: Sequence, b: Sequence) -> tuple[list, list, list]:
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    r0, r1 = _strip(list(a)), _strip(list(b))
    s0, s1 = [ONE] if r0 else [], []
    t0, t1 = [], [ONE] if r1 else []
    if r0:
        s0 = [r0[-1].tower.one()]
    if r1:
        t1 = [r1[-1].tower.one()]
    while r1:
        q, r = up_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, up_sub(s0, up_mul(q, s1))
        t0, t1 = t1, up_sub(t0, up_mul(q, t1))
    if not r0:
        return [], [], []
    inv = r0[-1].inverse()
    return up_scale(r0, inv), up_scale(s0, inv), up_scale(t0, inv)


def up_deriv(p: Sequence) -> list:
    return _strip([c * k for k, c in enumerate(p)][1:])


def up_eval(p: Sequence, x):
    acc = None
    for c in reversed(p):
        acc = c if acc is None else acc * x + c
    if acc is None:
        return x * 0
    return acc


def up_sqfree(p: Sequence) -> list:
    """Monic squarefree part."""
    p = _strip(list(p))
    if len(p) <= 1:
        return up_monic(p) if p else []
    g = up_gcd(p, up_deriv(p))
    return up_monic(up_exact_div(p, g))


def up_squarefree_decomposition(p: Sequence) -> list[tuple[list, int]]:
    """Yun's algorithm: monic ``(factor, multiplicity)`` pairs, factors coprime."""
    p = up_monic(p)
    if len(p) <= 1:
        return []
    out = []
    dp = up_deriv(p)
    a = up_gcd(p, dp)
    b = up_exact_div(p, a)
    c = up_exact_div(dp, a)
    d = up_sub(c, up_deriv(b))
    k = 1
    while len(b) > 1:
        a = up_gcd(b, d)
        if len(a) > 1:
            out.append((a, k))
        b = up_exact_div(b, a)
        c = up_exact_div(d, a)
        d = up_sub(c, up_deriv(b))
        k += 1
    return out


def up_compose_linear(p: Sequence, a, b) -> list:
    """p(a*t + b)."""
    out: list = []
    for c in reversed(p):
        out = up_add(up_mul(out, [b, a]) if out else [], [c])
    return out


def up_str(p: Sequence, var: str = "t") -> str:
    p = list(p)
    if not _strip(list(p)):
        return "0"
    parts = []
    for k in range(len(p) - 1, -1, -1):
        c = p[k]
        if not c:
            continue
        cs = _coeff_str(c)
        if k == 0:
            parts.append(cs)
            continue
        mono = var if k == 1 else f"{var}^{k}"
        if cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append(f"-{mono}")
        else:
            parts.append(f"{cs}*{mono}")
    text = " + ".join(parts)
    return text.replace("+ -", "- ")


def _coeff_str(c) -> str:
    if isinstance(c, GaussianRational):
        return str(c)
    s = c.to_str()
    if len(c.coeffs) > 1 or " " in s:
        return f"({s})"
    return s


# ---------------------------------------------------------------------------
# Root adjunction with lazy splitting
# ---------------------------------------------------------------------------

_SPLITS: dict = {}


def _poly_key(p: Sequence):
    return tuple(c.key() for c in p)


def register_split(exc: ZeroDivisorEncountered) -> None:
    tower = exc.tower
    poly = list(tower.poly)
    g = up_monic([tower.parent.embed(c) for c in exc.witness])
    if not 1 < len(g) < len(poly):
        raise CausticError("zero-divisor witness is not a proper factor")
    h = up_monic(up_exact_div(poly, g))
    key = (tower.parent, _poly_key(poly))
    if key in _SPLITS:
        raise CausticError("tower level split twice; a computation bypassed adjoin_root")
    _SPLITS[key] = (g, h)


def resolve(fn: Callable[..., _T], *args, max_splits: int = 200, **kwargs) -> _T:
    """Run ``fn`` until it completes without meeting an unsplit zero divisor."""
    for _ in range(max_splits + 1):
        try:
            return fn(*args, **kwargs)
        except ZeroDivisorEncountered as exc:
            register_split(exc)
    raise CausticError("too many tower splits")


def _rational_to_sympy(q):
    import sympy

    return sympy.Rational(int(q.numerator), int(q.denominator))


@lru_cache(maxsize=4096)
def _factor_base_cached(key: tuple) -> tuple:
    import sympy
    from sympy.polys.domains import QQ_I

    t = sympy.Symbol("t")
    expr = sum(
        (_rational_to_sympy(re) + sympy.I * _rational_to_sympy(im)) * t**k
        for k, (re, im) in enumerate(key)
    )
    _, factors = sympy.Poly(expr, t, domain=QQ_I).factor_list()
    out = []
    for f, _mult in factors:
        cs = []
        for c in reversed(f.all_coeffs()):
            c = sympy.nsimplify(c) if not c.is_number else c
            re, im = sympy.re(c), sympy.im(c)
            cs.append(
                GaussianRational(
                    mpq(int(re.p), int(re.q)), mpq(int(im.p), int(im.q))
                )
            )
        out.append(tuple(up_monic(cs)))
    out.sort(key=lambda f: (len(f), _poly_key(f)))
    return tuple(out)


def factor_base(p: Sequence[GaussianRational]) -> list[list[GaussianRational]]:
    """Monic irreducible factors over Q(i) of a squarefree polynomial."""
    return [list(f) for f in _factor_base_cached(_poly_key(up_monic(p)))]


def adjoin_root(tower: Tower, p: Sequence) -> list[tuple[Tower, Number]]:
    """Adjoin a root of ``p`` over ``tower``.

    Returns ``(tower', root)`` pairs, one per known factor of the squarefree
    part of ``p``.  The pieces' degrees add up to that squarefree degree, and a
    root in a new level stands for all roots of its defining polynomial.
    """
    p = [tower.embed(c) for c in p]
    p = _strip(p)
    if len(p) < 2:
        raise ConstantPolynomial("cannot adjoin a root of a constant polynomial")
    p = up_sqfree(p)
    base_coeffs = [c.as_base() for c in p]
    if all(c is not None for c in base_coeffs):
        pieces = [[tower.embed(c) for c in f] for f in factor_base(base_coeffs)]
        known_irreducible = tower.parent is None
    else:
        pieces = [p]
        known_irreducible = False
    out: list[tuple[Tower, Number]] = []
    for piece in pieces:
        out.extend(_adjoin_piece(tower, piece, known_irreducible))
    return out


def _adjoin_piece(tower: Tower, f: list, irreducible: bool) -> list:
    if len(f) == 2:
        return [(tower, -f[0] / f[1])]
    split = _SPLITS.get((tower, _poly_key(f)))
    if split is not None:
        out = []
        for g in split:
            out.extend(_adjoin_piece(tower, list(g), False))
        return out
    level = Tower.extend(tower, f, irreducible=irreducible)
    return [(level, level.gen())]


def roots_count(pieces: Sequence[tuple[Tower, Number]], base: Tower) -> int:
    return sum(t.degree_over(base) for t, _ in pieces)


# ---------------------------------------------------------------------------
# Coordinates over Q(i), used to compare numbers living in different towers
# ---------------------------------------------------------------------------


def basis_exponents(tower: Tower) -> list[tuple[int, ...]]:
    exps: list[tuple[int, ...]] = [()]
    for level in tower.levels():
        exps = [e + (k,) for e in exps for k in range(level.degree)]
    return exps


def coordinates(x, tower: Tower | None = None) -> dict[tuple[int, ...], GaussianRational]:
    """Q(i)-coordinates of ``x`` on the monomial basis of its tower."""
    tower = tower or x.tower
    x = tower.embed(x)
    out: dict = {}

    def walk(v, t: Tower, suffix: tuple):
        if t.parent is None:
            if v:
                out[suffix] = v
            return
        for k, c in enumerate(v.coeffs):
            walk(c, t.parent, (k,) + suffix)

    walk(x, tower, ())
    return out


def from_coordinates(coords: dict, tower: Tower):
    acc = tower.zero()
    gens = [level.gen() for level in tower.levels()]
    for exps, c in coords.items():
        term = tower.embed(c)
        for g, k in zip(gens, exps):
            if k:
                term = term * (tower.embed(g) ** k)
        acc = acc + term
    return acc


def multiplication_matrix(x) -> list[list[GaussianRational]]:
    """Matrix over Q(i) of multiplication by ``x`` on its tower algebra."""
    tower = x.tower
    basis = basis_exponents(tower)
    index = {e: i for i, e in enumerate(basis)}
    cols = []
    for e in basis:
        b = from_coordinates({e: ONE}, tower)
        coords = coordinates(x * b, tower)
        col = [ZERO] * len(basis)
        for ex, c in coords.items():
            col[index[ex]] = c
        cols.append(col)
    return [[cols[j][i] for j in range(len(basis))] for i in range(len(basis))]
