import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from discrete_gaussian.errors import DomainError
from discrete_gaussian.trig import (TrigSumSpec, cheb_poly, generating_coeffs, sin4_identity,
                                    trig_sum_direct)


def test_direct_examples():
    assert trig_sum_direct(TrigSumSpec(1, 0, 0.5, 1)) == pytest.approx(1, abs=1e-15)
    assert trig_sum_direct(TrigSumSpec(2, 0, 0.5, 1)) == pytest.approx(2, abs=1e-15)
    # the m = 3, cos(2 pi j / 3) twist with j = 0 dropped; the sum itself carries 1/m
    c = trig_sum_direct(TrigSumSpec(3, 1, 0, 2, exclude_singular=True))
    assert 3 * c.real == pytest.approx(-16 / 9, abs=1e-15)
    assert c.imag == pytest.approx(0, abs=1e-15)


def test_direct_singular():
    with pytest.raises(DomainError):
        trig_sum_direct(TrigSumSpec(4, 1, 2, 1))
    assert TrigSumSpec(4, 1, 2, 1).singular_index == 2


def test_spec_validation():
    for args in [(0, 0, 0.3, 1), (3, 3, 0.3, 1), (3, 0, 0.3, 0), (3, 0, math.inf, 1)]:
        with pytest.raises(DomainError):
            TrigSumSpec(*args)


def test_cheb_poly():
    assert cheb_poly("T", 0).coeffs == (1,)
    assert cheb_poly("T", 1).coeffs == (0, 1)
    assert cheb_poly("T", 2).coeffs == (-1, 0, 2)
    assert cheb_poly("U", 2).coeffs == (-1, 0, 4)
    assert cheb_poly("U", -1).coeffs == ()
    assert abs(cheb_poly("T", 5)(math.cos(0.37)) - math.cos(5 * 0.37)) < 1e-14
    with pytest.raises(DomainError):
        cheb_poly("T", -1)


@pytest.mark.parametrize("n", range(0, 15))
def test_cheb_normalization(n):
    assert cheb_poly("T", n)(1) == 1
    assert cheb_poly("U", n)(1) == n + 1
    th = 0.41
    assert cheb_poly("U", n)(math.cos(th)) == pytest.approx(math.sin((n + 1) * th) / math.sin(th), abs=1e-11)


def test_substitution_is_exact():
    t3 = cheb_poly("T", 3)
    coeffs = t3.substitute_affine(1, -2)
    for s in (Fraction(1, 3), Fraction(-2, 7)):
        assert sum(c * s**k for k, c in enumerate(coeffs)) == t3(1 - 2 * s)


def test_generating_examples():
    c = generating_coeffs(1, 0, 0.25, 1)
    assert abs(c[0] - trig_sum_direct(TrigSumSpec(1, 0, 0.25, 1))) < 1e-10
    c = generating_coeffs(5, 2, 1 / 3, 4)
    for n in range(1, 5):
        assert abs(c[n - 1] - trig_sum_direct(TrigSumSpec(5, 2, 1 / 3, n))) < 1e-9
    c = generating_coeffs(3, 0, 0.5, 2)
    assert all(abs(v.imag) < 1e-12 for v in c)
    with pytest.raises(DomainError):
        generating_coeffs(3, 0, 1.0, 2)
    with pytest.raises(DomainError):
        generating_coeffs(3, 0, 0.3, 65)


@pytest.mark.parametrize("m", range(1, 13))
def test_generating_vs_direct(m):
    for r in range(m):
        for beta in (0.25, 1 / 3, 0.4142):
            coeffs = generating_coeffs(m, r, beta, 6)
            for n in range(1, 7):
                d = trig_sum_direct(TrigSumSpec(m, r, beta, n))
                assert abs(coeffs[n - 1] - d) <= 1e-9 * (1 + abs(d))


@pytest.mark.parametrize("m", [1, 2, 5, 9])
@pytest.mark.parametrize("beta", [0.25, 1 / 3, 0.4142])
def test_denominator_roots_are_the_spectrum(m, beta):
    t = cheb_poly("T", m)
    for j in range(m):
        s = math.sin((j + beta) * math.pi / m) ** 2
        assert abs(t(1 - 2 * s) - math.cos(2 * math.pi * beta)) < 1e-12


@pytest.mark.parametrize("m", [1, 2, 3, 7])
def test_untwisted_half_coefficients_positive(m):
    for v in generating_coeffs(m, 0, 0.5, 10):
        assert v.imag == 0 and v.real > 0


@given(st.integers(1, 9), st.data(), st.floats(0.01, 0.99), st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_generating_vs_direct_random(m, data, beta, n):
    r = data.draw(st.integers(0, m - 1))
    d = trig_sum_direct(TrigSumSpec(m, r, beta, n))
    g = generating_coeffs(m, r, beta, n)[n - 1]
    assert abs(g - d) <= 1e-9 * (1 + abs(d))


@pytest.mark.parametrize("k", range(1, 7))
def test_sin4_identity(k):
    lhs, rhs = sin4_identity(k)
    assert abs(lhs - rhs) < 1e-8
    # the same sum through the twisted-sum definition with r = k, m = 3k
    via_sum = 3 * k * trig_sum_direct(TrigSumSpec(3 * k, k, 0, 2, exclude_singular=True)).real
    assert abs(via_sum - lhs) < 1e-9 * abs(lhs)


def test_sin4_values():
    assert sin4_identity(1) == (-16 / 9, -16 / 9)
    assert sin4_identity(2)[1] == pytest.approx(-755 / 45, rel=1e-15)
    with pytest.raises(DomainError):
        sin4_identity(0)
