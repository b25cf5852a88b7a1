from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causticdeg.caustic import (
    Flags,
    alpha_dispatch,
    alternative_components,
    base_points,
    build_phi,
    case_table_conflicts,
    case_table_gaps,
    is_base_point,
    mdeg_routes,
    reflected_line,
    reflection_law,
    verify_key_identity,
    verify_orthogonality,
)
from causticdeg.errors import DegreeTooLow, UndefinedReflection, UnmatchedCase
from causticdeg.locus import ProjLine, ProjPoint, line_through, points_on_line
from causticdeg.numera import IMAG, gauss, resolve
from causticdeg.oracle import mdeg_oracle
from causticdeg.parsing import parse_point, parse_poly

from conftest import homogeneous_polys, small_gaussian_ints

QUINTIC = parse_poly("y^2*z^3 - x^5")
ELLIPSE = parse_poly("x^2 + 2*y^2 - z^2")
CIRCLE = parse_poly("x^2 + y^2 - z^2")
A1 = ProjPoint((0, 0, 1))
A2 = ProjPoint((0, 1, 0))


def report(curve: str, source: str, oracle: bool = True):
    F, S = parse_poly(curve), parse_point(source)

    def go():
        cm = build_phi(F, S)
        return mdeg_routes(cm, None, mdeg_oracle if oracle else None)

    return resolve(go)


# -- the caustic map -------------------------------------------------------


def test_cyclic_source_is_flagged():
    cm = build_phi(QUINTIC, (1, IMAG, 0))
    assert cm.constant_image == "I"
    rep = mdeg_routes(cm, None, mdeg_oracle)
    assert rep.mdeg == 0 and rep.image_point == "J"
    assert build_phi(QUINTIC, (1, -IMAG, 0)).constant_image == "J"


def test_lines_are_rejected():
    with pytest.raises(DegreeTooLow):
        build_phi(parse_poly("x + y", 1), (0, 0, 1))


def test_components_of_a_conic_have_degree_three():
    cm = build_phi(ELLIPSE, (0, 0, 1))
    assert all(c.degree == 3 for c in cm.components)
    assert all(c.euler_holds() for c in cm.components)


@settings(max_examples=25)
@given(homogeneous_polys(2, 3), st.tuples(small_gaussian_ints, small_gaussian_ints, small_gaussian_ints))
def test_two_expressions_of_the_map_agree(F, S):
    if all(c.is_zero() for c in S):
        return
    cm = build_phi(F, S, check=False)
    assert alternative_components(cm) == list(cm.components)


# -- reflected lines -------------------------------------------------------


def test_axis_ray_reflects_to_itself():
    line = reflected_line(ELLIPSE, (0, 0, 1), (1, 0, 1))
    assert line == ProjLine((0, 1, 0))
    assert line.contains((0, 0, 1))


def test_tangential_source_reflects_along_the_tangent():
    S, m = (1, 5, 1), (1, 0, 1)
    assert reflected_line(CIRCLE, S, m) == line_through(S, m)


def test_reflection_is_undefined_at_the_source():
    with pytest.raises(UndefinedReflection):
        reflected_line(CIRCLE, (1, 0, 1), (1, 0, 1))


def test_cross_ratio_law_on_a_random_conic():
    rng = random.Random(7)
    F = parse_poly("3*x^2 + x*y - 2*y^2 + 5*x*z - z^2")
    S = (gauss(2), gauss(-1), gauss(1))
    checked = 0
    while checked < 5:
        coeffs = tuple(gauss(rng.randint(-5, 5)) for _ in range(3))
        if all(c.is_zero() for c in coeffs):
            continue
        line = ProjLine(coeffs)
        for _, m, _ in points_on_line(F, line):
            if m.at_infinity() or any(not g.evaluate(m.coords) for g in F.partials()[:2]):
                continue

            def law():
                reflected_line(F, S, m)
                return reflection_law(F, S, m)

            before, after, _ = resolve(law)
            if before is None or after is None:
                continue
            assert before == after
            checked += 1


# -- the key identity ------------------------------------------------------


def test_key_identity_for_quintic():
    assert verify_key_identity(QUINTIC, (1, 2, 1))


def test_key_identity_source_at_infinity():
    assert verify_key_identity(parse_poly("x^3 + 2*x*y*z - y^2*z + z^3"), (1, 1, 0))


@settings(max_examples=10)
@given(homogeneous_polys(2, 3), st.tuples(small_gaussian_ints, small_gaussian_ints, small_gaussian_ints))
def test_caustic_point_lies_on_reflected_line(F, S):
    if all(c.is_zero() for c in S) or not F.binary_form(2):
        return
    assert verify_orthogonality(F, S)


# -- base points -----------------------------------------------------------


def test_quintic_base_points_contain_singular_points():
    for S in ((1, 2, 1), (0, 0, 1)):
        cm = build_phi(QUINTIC, S)
        found = [r.point for r in base_points(cm) if r.is_base]
        assert A1 in found and A2 in found
        assert is_base_point(cm, A1.coords) and is_base_point(cm, A2.coords)


def test_ellipse_from_center_has_no_base_points():
    # the isotropic tangents through the center touch the conic off the affine
    # Hessian and polar loci, so nothing is removed from 3 * class = 6
    cm = build_phi(ELLIPSE, (0, 0, 1))
    assert [r for r in base_points(cm) if r.is_base] == []
    assert report("x^2 + 2*y^2 - z^2", "[0:0:1]").mdeg == 6


# -- the case table --------------------------------------------------------


def _flags(**on) -> Flags:
    names = ["m_is_I", "m_is_J", "m_is_S", "I_on_D", "J_on_D", "S_on_D", "m_on_IS", "m_on_JS"]
    return Flags(**{n: on.get(n, False) for n in names})


def test_alpha_tangent_through_source():
    tag, alpha = alpha_dispatch(_flags(S_on_D=True), Fraction(2))
    assert (tag, alpha) == ("S11", 0)


def test_alpha_at_the_source():
    tag, alpha = alpha_dispatch(_flags(m_is_S=True, S_on_D=True), Fraction(3))
    assert (tag, alpha) == ("S12", 3)


def test_alpha_source_on_isotropic_tangent():
    tag, alpha = alpha_dispatch(_flags(S_on_D=True, I_on_D=True, m_on_IS=True), Fraction(2), Fraction(3))
    assert (tag, alpha) == ("S5", 3)
    _, capped = alpha_dispatch(_flags(S_on_D=True, I_on_D=True, m_on_IS=True), Fraction(2), Fraction(5, 2))
    assert capped == Fraction(5, 2)


def test_mirror_cases_are_tagged():
    tag, alpha = alpha_dispatch(_flags(S_on_D=True, J_on_D=True, m_on_JS=True), Fraction(2), Fraction(4))
    assert (tag, alpha) == ("S5'", 3)


def test_case_table_has_only_the_known_gap():
    gaps = case_table_gaps()
    assert len(gaps) == 2
    for flags, tangential in gaps:
        assert tangential < 2
        assert (flags.m_on_IS and flags.J_on_D) or (flags.m_on_JS and flags.I_on_D)
        with pytest.raises(UnmatchedCase):
            alpha_dispatch(flags, tangential)
    assert case_table_conflicts() == []


# -- degree routes ---------------------------------------------------------


@pytest.mark.parametrize("source,expected", [("[1:2:1]", 16), ("[0:1:0]", 6), ("[1:2:0]", 9)])
def test_quintic_degrees(source, expected):
    rep = report("y^2*z^3 - x^5", source)
    assert rep.mdeg == expected
    assert rep.route_a == rep.route_b == rep.oracle == expected


def test_quintic_route_b_ledger():
    generic = report("y^2*z^3 - x^5", "[1:2:1]", oracle=False).route_b_terms
    assert generic["v1"] == 0 and generic["v4"] == -1
    on_tangent = report("y^2*z^3 - x^5", "[1:0:1]", oracle=False).route_b_terms
    assert on_tangent["v2"] == 5 - 2 * 2
    at_infinity = report("y^2*z^3 - x^5", "[1:2:0]", oracle=False).route_b_terms
    assert at_infinity["v2"] == 3 * 5 - 3 * 3


def test_simple_and_flex_formulas_agree_when_they_apply():
    rep = report("y^2*z - x^3 - x^2*z", "[1:3:1]")
    assert rep.simple_formula == rep.route_c == rep.mdeg == 11
