from __future__ import annotations

from hypothesis import given, settings

from causticdeg.locus import (
    ProjLine,
    ProjPoint,
    incidence,
    line_through,
    locus_on_curve,
    points_on_line,
    same_point,
    singular_points,
)
from causticdeg.numera import IMAG, gauss
from causticdeg.parsing import parse_poly

from conftest import homogeneous_polys

QUINTIC = parse_poly("y^2*z^3 - x^5")
CIRCLE = parse_poly("x^2 + y^2 - z^2")
LINE_AT_INFINITY = ProjLine((0, 0, 1))
I_POINT = (gauss(1), IMAG, gauss(0))
J_POINT = (gauss(1), -IMAG, gauss(0))


def test_quintic_singular_points():
    sing = singular_points(QUINTIC)
    assert sing.total == 2
    assert sing.contains(ProjPoint((0, 0, 1)))
    assert sing.contains(ProjPoint((0, 1, 0)))


def test_smooth_curve_has_no_singular_points():
    assert singular_points(parse_poly("x^3 + y^3 - z^3")).total == 0
    assert singular_points(CIRCLE).total == 0


def test_circle_meets_infinity_at_cyclic_points():
    pts = locus_on_curve(CIRCLE, LINE_AT_INFINITY.as_poly())
    assert pts.total == 2
    assert pts.contains(ProjPoint(I_POINT)) and pts.contains(ProjPoint(J_POINT))


def test_quintic_meets_infinity_only_at_second_singular_point():
    pts = locus_on_curve(QUINTIC, LINE_AT_INFINITY.as_poly())
    assert pts.points == [ProjPoint((0, 1, 0))]
    ((_, point, mult),) = points_on_line(QUINTIC, LINE_AT_INFINITY)
    assert point == ProjPoint((0, 1, 0)) and mult == 5


def test_two_conics_meet_in_four_points():
    pts = locus_on_curve(CIRCLE, parse_poly("x^2 + 2*y^2 - 3*z^2"))
    assert pts.total == 4


def test_incidences():
    line = line_through(I_POINT, (0, 0, 1))
    assert incidence(I_POINT, line) and incidence((0, 0, 1), line)
    assert not incidence(J_POINT, line)
    assert line.contains((1, IMAG, 0))
    assert line == ProjLine((-IMAG, 1, 0))
    assert same_point((2, 4, 6), (1, 2, 3))


@settings(max_examples=25)
@given(homogeneous_polys(2, 3), homogeneous_polys(1, 2))
def test_intersection_points_lie_on_both_curves(F, G):
    if not F.binary_form(2):
        return
    try:
        pts = locus_on_curve(F, G)
    except Exception as exc:  # common components are outside the contract
        assert type(exc).__name__ in {"CurveContained", "ZeroPolynomial", "NonSquarefreeInput"}
        return
    assert pts.total <= F.degree * G.degree
    for p in pts.points:
        assert F.evaluate(p.coords).is_zero()
        assert G.evaluate(p.coords).is_zero()
