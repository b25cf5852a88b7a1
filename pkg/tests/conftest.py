from __future__ import annotations

from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from causticdeg.numera import BASE, GaussianRational, Tower, gauss

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
gaussians = st.builds(GaussianRational, small_rationals, small_rationals)
small_gaussian_ints = st.builds(GaussianRational, st.integers(-4, 4), st.integers(-2, 2))

CUBE_ROOT_LEVEL = Tower.extend(BASE, [gauss(1), gauss(1), gauss(1)], irreducible=True)


@st.composite
def tower_elements(draw):
    """a + b*w with w a primitive cube root of unity."""
    w = CUBE_ROOT_LEVEL.gen()
    a, b = draw(gaussians), draw(gaussians)
    return CUBE_ROOT_LEVEL.embed(a) + w * b


def frac(p, q=1) -> Fraction:
    return Fraction(p, q)


@st.composite
def homogeneous_polys(draw, min_degree=2, max_degree=4):
    """Random homogeneous forms in x, y, z with small Gaussian integer coefficients."""
    from causticdeg.polyring import HomoPoly

    d = draw(st.integers(min_degree, max_degree))
    monomials = [(a, b, d - a - b) for a in range(d + 1) for b in range(d + 1 - a)]
    chosen = draw(st.lists(st.sampled_from(monomials), min_size=1, max_size=5, unique=True))
    terms = {}
    for e in chosen:
        c = draw(small_gaussian_ints)
        if c:
            terms[e] = c
    if not terms:
        terms[chosen[0]] = GaussianRational(1)
    return HomoPoly(terms, d)


@st.composite
def charts(draw):
    """Invertible integer matrices, built as lower unitriangular times upper triangular."""
    from causticdeg.polyring import LinearChart

    ints = st.integers(-2, 2)
    lower = [[1, 0, 0], [draw(ints), 1, 0], [draw(ints), draw(ints), 1]]
    diag = [draw(st.sampled_from([-2, -1, 1, 2])) for _ in range(3)]
    upper = [[diag[0], draw(ints), draw(ints)], [0, diag[1], draw(ints)], [0, 0, diag[2]]]
    rows = [[sum(lower[i][k] * upper[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    return LinearChart.of(rows)


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE[number] = (ok, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
