from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from causticdeg.numera import IMAG, gauss, up_gcd, up_mul
from causticdeg.parsing import parse_poly
from causticdeg.polyring import HomoPoly, LinearChart, resultant, vanishes_on_curve

from conftest import charts, homogeneous_polys, small_gaussian_ints

I_POINT = (gauss(1), IMAG, gauss(0))


def test_partials_of_circle():
    F = parse_poly("x^2 + y^2 - z^2")
    assert F.partials() == (parse_poly("2*x", 1), parse_poly("2*y", 1), parse_poly("-2*z", 1))


def test_partials_of_quintic():
    F = parse_poly("y^2*z^3 - x^5")
    fx, fy, fz = F.partials()
    assert fx == parse_poly("-5*x^4", 1)
    assert fy == parse_poly("2*y*z^3", 1)
    assert fz == parse_poly("3*y^2*z^2", 1)


def test_hessian_of_circle_is_constant():
    assert parse_poly("x^2 + y^2 - z^2").hessian() == HomoPoly.constant(gauss(-8))


def test_polar_of_quintic_at_cyclic_point():
    F = parse_poly("y^2*z^3 - x^5")
    assert F.polar(I_POINT) == parse_poly("-5*x^4 + 2*i*y*z^3", 1)


def test_affine_hessian_of_circle():
    F = parse_poly("x^2 + y^2 - z^2")
    assert F.h_affine() == parse_poly("-8*x^2 - 8*y^2")


@given(homogeneous_polys())
def test_affine_hessian_relation_on_curve(F):
    d = F.degree
    z = HomoPoly.var("z")
    G = z * z * F.hessian() - F.h_affine().scale(gauss((d - 1) ** 2))
    if F.binary_form(2):
        assert vanishes_on_curve(G, F)


def test_swap_chart():
    F = parse_poly("y^2*z^3 - x^5")
    swap = LinearChart.of([[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    assert F.compose_chart(swap) == parse_poly("x^2*z^3 - y^5")


def test_resultant_examples():
    one = gauss(1)
    # t^2 - 1 and t - 1 share a root
    assert resultant([-one, gauss(0), one], [-one, one]).is_zero()
    # t^2 + 1 and t - 2: value of the first at 2
    assert resultant([one, gauss(0), one], [gauss(-2), one]) == gauss(5)


@given(homogeneous_polys())
def test_euler_identity(F):
    assert F.euler_holds()


@settings(max_examples=40)
@given(homogeneous_polys(), charts())
def test_hessian_covariance(F, A):
    left = F.compose_chart(A).hessian()
    right = F.hessian().compose_chart(A).scale(A.det * A.det)
    assert left == right


@settings(max_examples=40)
@given(homogeneous_polys(), charts(), st.tuples(small_gaussian_ints, small_gaussian_ints, small_gaussian_ints))
def test_polar_covariance(F, A, P):
    if all(c.is_zero() for c in P) or all(c.is_zero() for c in A.apply(P)):
        return
    assert F.compose_chart(A).polar(P) == F.polar(A.apply(P)).compose_chart(A)


@given(
    st.lists(small_gaussian_ints, min_size=1, max_size=3),
    st.lists(small_gaussian_ints, min_size=1, max_size=3),
    st.lists(small_gaussian_ints, min_size=1, max_size=3),
)
def test_resultant_vanishes_iff_common_factor(a, b, c):
    one = gauss(1)
    p = up_mul(a + [one], c)
    q = b + [one]
    if not any(not x.is_zero() for x in c):
        return
    common = up_gcd(p, q)
    assert resultant(p, q).is_zero() == (len(common) > 1)
