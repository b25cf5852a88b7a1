from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from causticdeg.errors import DivisionByZero, ZeroDivisorEncountered
from causticdeg.numera import (
    BASE,
    IMAG,
    Tower,
    adjoin_root,
    common_tower,
    gauss,
    resolve,
    up_eval,
    up_gcd,
)

from conftest import gaussians, tower_elements


def test_gaussian_product_and_inverse():
    a = gauss(Fraction(1, 2), 1)
    b = gauss(Fraction(1, 2), -1)
    assert a * b == gauss(Fraction(5, 4))
    assert IMAG * IMAG == gauss(-1)
    assert a.inverse() * a == gauss(1)


def test_division_by_zero_raises():
    with pytest.raises(DivisionByZero):
        gauss(0).inverse()


def test_cube_root_of_unity_level():
    (tower, w), = adjoin_root(BASE, [gauss(1), gauss(1), gauss(1)])
    assert tower.degree == 2
    assert (w * w + w + 1).is_zero()
    assert (w - 1).inverse() == (-w - 2) / 3


def test_adjoin_root_splits_over_gaussians():
    roots = adjoin_root(BASE, [gauss(1), gauss(0), gauss(1)])
    values = {r for _, r in roots}
    assert values == {IMAG, -IMAG}
    assert all(t is BASE for t, _ in roots)


def test_adjoin_root_irreducible_quadratic_gives_new_level():
    (tower, r), = adjoin_root(BASE, [gauss(-2), gauss(0), gauss(1)])
    assert tower.parent is BASE and tower.degree == 2
    assert r * r == tower.embed(gauss(2))


def test_adjoin_root_cubic_splits_into_linear_and_quadratic():
    roots = adjoin_root(BASE, [gauss(-1), gauss(0), gauss(0), gauss(1)])
    degrees = sorted(t.degree for t, _ in roots)
    assert degrees == [1, 2]
    for t, r in roots:
        assert (r ** 3 - 1).is_zero()


def test_towers_are_interned():
    a = Tower.extend(BASE, [gauss(-3), gauss(0), gauss(1)])
    b = Tower.extend(BASE, [gauss(-3), gauss(0), gauss(1)])
    assert a is b
    assert common_tower(gauss(1), a.gen()) is a


def test_zero_divisor_witness_is_proper_factor():
    tower = Tower.extend(BASE, [gauss(-1), gauss(0), gauss(0), gauss(1)])
    t = tower.gen()
    with pytest.raises(ZeroDivisorEncountered) as info:
        (t - 1).inverse()
    witness = list(info.value.witness)
    assert 0 < len(witness) - 1 < 3
    rem = up_gcd(list(tower.poly), [tower.parent.embed(c) for c in witness])
    assert len(rem) == len(witness)


def test_resolve_splits_a_reducible_level():
    (root2_level, s), = adjoin_root(BASE, [gauss(-2), gauss(0), gauss(1)])
    attempts = []

    def roots_off_s():
        # (y - s)(y + 1) has non-base coefficients, so it is adjoined unfactored
        roots = adjoin_root(root2_level, [-s, 1 - s, root2_level.one()])
        attempts.append(len(roots))
        for _, r in roots:
            diff = r - r.tower.embed(s)
            if not diff.is_zero():
                diff.inverse()
        return len(roots)

    assert resolve(roots_off_s) == 2
    assert attempts == [1, 2]


@given(gaussians, gaussians, gaussians)
def test_gaussian_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    if not a.is_zero():
        assert a * a.inverse() == gauss(1)


@given(tower_elements(), tower_elements(), tower_elements())
def test_tower_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == a.tower.zero()
    if not a.is_zero():
        assert a * a.inverse() == a.tower.one()


@settings(max_examples=30)
@given(st.lists(gaussians, min_size=2, max_size=4))
def test_adjoined_roots_are_roots(coeffs):
    poly = coeffs + [gauss(1)]
    for tower, r in adjoin_root(BASE, poly):
        assert up_eval([tower.embed(c) for c in poly], r).is_zero()
