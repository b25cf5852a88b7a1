from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings

from causticdeg.locus import ProjLine, ProjPoint
from causticdeg.parsing import parse_poly
from causticdeg.puiseux import (
    branch_coordinates,
    composed_valuation,
    eval_homopoly_series,
    local_data,
    ser_val,
    tangent_cone_form,
)

from conftest import charts

QUINTIC = parse_poly("y^2*z^3 - x^5")
NODE = parse_poly("y^2*z - x^3 - x^2*z")
CUSP = parse_poly("y^2*z - x^3")
ORIGIN = ProjPoint((0, 0, 1))
AT_INFINITY = ProjPoint((0, 1, 0))


def test_first_quintic_singularity():
    L = local_data(QUINTIC, ORIGIN)
    assert L.multiplicity == 2
    assert (L.V, L.I) == (5, 1)
    assert L.branch_count == 1
    assert L.multiplicities() == {2: 1}
    for b in L.pro_branches:
        assert b.ramification == 2 and b.count == 1
        assert b.tangential == Fraction(5, 2)
        assert b.tangent == ProjLine((0, 1, 0))
    assert tangent_cone_form(L) == parse_poly("y^2")


def test_second_quintic_singularity():
    L = local_data(QUINTIC, AT_INFINITY)
    assert L.multiplicity == 3
    assert (L.V, L.I) == (10, -1)
    assert L.branch_count == 1
    assert L.multiplicities() == {3: 1}
    assert sum(b.count for b in L.pro_branches) == 3
    assert all(b.ramification == 3 and b.tangential == Fraction(5, 3) for b in L.pro_branches)
    assert all(b.tangent == ProjLine((0, 0, 1)) for b in L.pro_branches)
    assert tangent_cone_form(L) == parse_poly("z^3")


def test_node():
    L = local_data(NODE, ORIGIN)
    assert (L.V, L.I) == (2, 0)
    assert L.multiplicities() == {1: 2}
    assert tangent_cone_form(L) == parse_poly("y^2 - x^2")


def test_cusp():
    L = local_data(CUSP, ORIGIN)
    assert (L.V, L.I) == (3, -1)
    assert L.multiplicities() == {2: 1}
    assert tangent_cone_form(L) == parse_poly("y^2")


def test_branches_lie_on_the_curve():
    for F, p in ((QUINTIC, ORIGIN), (QUINTIC, AT_INFINITY), (NODE, ORIGIN), (CUSP, ORIGIN)):
        L = local_data(F, p)
        for b in L.pro_branches:
            xs, ys, zs, _, full = branch_coordinates(b)
            prec = min(full, 40)
            assert ser_val(eval_homopoly_series(F, xs[:prec], ys[:prec], zs[:prec], prec)) is None


def test_tangential_order_is_valuation_along_tangent():
    for F, p in ((QUINTIC, ORIGIN), (QUINTIC, AT_INFINITY), (NODE, ORIGIN), (CUSP, ORIGIN)):
        for b in local_data(F, p).pro_branches:
            assert composed_valuation(b.tangent.as_poly(), b) == b.tangential


def _local_signature(F, p, offset=0):
    L = local_data(F, p, offset=offset)
    tangents = sorted(repr(b.tangent) for b in L.pro_branches for _ in range(b.count))
    return L.V, L.I, L.multiplicities(), tangents, tangent_cone_form(L)


def test_two_charts_agree():
    for F, p in ((QUINTIC, ORIGIN), (QUINTIC, AT_INFINITY), (NODE, ORIGIN), (CUSP, ORIGIN)):
        assert _local_signature(F, p, 0) == _local_signature(F, p, 1)


@settings(max_examples=20)
@given(charts())
def test_invariants_survive_coordinate_change(A):
    inverse = A.inverse()
    for F in (NODE, CUSP):
        moved = F.compose_chart(A)
        p = ProjPoint(inverse.apply(ORIGIN.coords))
        L0 = local_data(F, ORIGIN)
        L1 = local_data(moved, p)
        assert (L0.V, L0.I, L0.multiplicities()) == (L1.V, L1.I, L1.multiplicities())
