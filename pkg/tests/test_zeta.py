import cmath
import math
import random

import mpmath
import numpy as np
import pytest

from discrete_gaussian.errors import DomainError, PoleError
from discrete_gaussian.heat import TreeParams, kernel_tree, kernel_Z
from discrete_gaussian.zeta import (ZetaMethod, evaluate_zeta, gauss_2f1, mellin_zeta_oracle,
                                    tree_det, tree_det_spectral, tree_zeta_prime_zero, xi_Z,
                                    zeta_tree, zeta_tree_neg_int, zeta_Z)


def test_zeta_Z_special_values():
    assert zeta_Z(0) == 1
    assert [zeta_Z(-m) for m in (1, 2, 3)] == [2, 6, 20]
    for m in range(11):
        assert zeta_Z(-m) == math.comb(2 * m, m)


def test_zeta_Z_against_mpmath():
    for s in (0.25, -0.7, 0.9, 2.3, 0.3 + 2j, -1.5 - 0.5j):
        ref = complex(mpmath.binomial(-2 * s, -s))
        assert abs(zeta_Z(s) - ref) <= 1e-13 * abs(ref)


def test_zeta_Z_poles():
    for s in (0.5, 1.5, 2.5):
        with pytest.raises(PoleError):
            zeta_Z(s)
    assert zeta_Z(1) == 0 and zeta_Z(3) == 0


def test_zeta_Z_mellin():
    assert abs(zeta_Z(0.25) - mellin_zeta_oracle(lambda t: kernel_Z(t, 0), 0.25)) < 1e-8


def test_mellin_oracle_complex_and_strip():
    s = 0.2 + 0.3j
    assert abs(zeta_Z(s) - mellin_zeta_oracle(lambda t: kernel_Z(t, 0), s)) < 1e-7
    for bad in (0.0, 0.5, -0.1, 0.7):
        with pytest.raises(DomainError):
            mellin_zeta_oracle(lambda t: kernel_Z(t, 0), bad)


def test_functional_equation_examples():
    assert abs(xi_Z(0.3) - xi_Z(0.7)) < 1e-12
    assert abs(xi_Z(-1.2) - xi_Z(2.2)) < 1e-12
    assert math.isfinite(xi_Z(0.5))
    # removable points at odd integers
    assert abs(xi_Z(1) - xi_Z(0)) < 1e-14
    assert abs(xi_Z(3) - xi_Z(-2)) < 1e-14


def strip_points(count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        s = complex(rng.uniform(-2, 3), rng.uniform(-2, 2))
        # zeta_Z(s/2) is singular at s = 1, 3, 5 and xi at no point; keep away anyway
        if min(abs(s - k) for k in (1, 3)) > 0.1 and min(abs(1 - s - k) for k in (1, 3)) > 0.1:
            out.append(s)
    return out


def test_functional_equation_strip():
    worst = max(abs(xi_Z(s) - xi_Z(1 - s)) for s in strip_points(50, 12345))
    assert worst < 1e-11


def test_gauss_2f1():
    assert gauss_2f1(0.3, 1.7, 2.2, 0) == 1
    for q in (2, 3, 7):
        assert gauss_2f1(-2, -2, 1, 1 / q) == pytest.approx(sum(math.comb(2, k) ** 2 * q**-k for k in range(3)), rel=1e-15)
    for a, b, c, z in [(0.3, 1.7, 2.2, 0.4), (-0.3, -0.3, 1, 0.9), (0.5, 0.5 + 1j, 3, 0.5)]:
        ref = complex(mpmath.hyp2f1(a, b, c, z))
        assert abs(gauss_2f1(a, b, c, z) - ref) < 1e-13 * abs(ref)
    # terminating series accepts any z
    assert gauss_2f1(-3, 2, 1, 5.0) == pytest.approx(complex(mpmath.hyp2f1(-3, 2, 1, 5)), rel=1e-14)
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, 1, 1.0)
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, -2, 0.3)


def test_gauss_summation_by_extrapolation():
    # F(s, s; 1; z) = A + B h + C h^(1-2s) + D h^2 + E h^(2-2s) + ... with h = 1 - z
    s = -0.3
    hs = [0.02 / 2**k for k in range(5)]
    powers = [0, 1, 1 - 2 * s, 2, 2 - 2 * s]
    mat = np.array([[h**p for p in powers] for h in hs])
    vals = np.array([gauss_2f1(s, s, 1, 1 - h).real for h in hs])
    limit = np.linalg.solve(mat, vals)[0]
    closed = math.gamma(1 - 2 * s) / math.gamma(1 - s) ** 2
    assert abs(limit - closed) < 1e-9


def test_zeta_tree_examples():
    assert abs(zeta_tree(2, 0.25) - mellin_zeta_oracle(lambda t: kernel_tree(TreeParams(2, t), 0), 0.25)) < 1e-6
    assert abs(zeta_tree(2, 0.3) - mellin_zeta_oracle(lambda t: kernel_tree(TreeParams(2, t), 0), 0.3)) < 1e-6
    assert zeta_tree(3, -1) == pytest.approx(4, abs=1e-12)
    assert zeta_tree(2, 0) == pytest.approx(1, abs=1e-12)
    with pytest.raises(DomainError):
        zeta_tree(0, 0.2)


@pytest.mark.parametrize("q", [1, 2, 3, 5])
def test_zeta_tree_zero_and_minus_one(q):
    assert zeta_tree(q, 0) == pytest.approx(1, abs=1e-12)
    assert zeta_tree(q, -1) == pytest.approx(q + 1, abs=1e-12)


@pytest.mark.parametrize("q", [2, 3])
@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_series_matches_integer_formula(q, m):
    assert abs(zeta_tree(q, -m) - zeta_tree_neg_int(q, m)) < 1e-9
    # the continuation is smooth through the integer point
    assert abs(zeta_tree(q, -m + 1e-7) - zeta_tree_neg_int(q, m)) < 1e-4 * (1 + abs(zeta_tree_neg_int(q, m)))


def test_zeta_tree_neg_int():
    for q in (1, 2, 5, 11):
        assert zeta_tree_neg_int(q, 0) == 1
        assert zeta_tree_neg_int(q, 1) == q + 1
    assert zeta_tree_neg_int(2, 2) == 12
    assert zeta_tree_neg_int(1, 2) == 6 and zeta_tree_neg_int(1, 3) == 20
    for m in range(11):
        assert zeta_tree_neg_int(1, m) == zeta_Z(-m) == math.comb(2 * m, m)
    with pytest.raises(DomainError):
        zeta_tree_neg_int(2, -1)


@pytest.mark.parametrize("m", range(0, 7))
def test_neg_int_is_degree_m_polynomial_in_q(m):
    vals = [zeta_tree_neg_int(q, m) for q in range(1, m + 3)]
    # (m+1)-th finite difference vanishes, the m-th is a nonzero constant
    diffs = vals
    for _ in range(m):
        diffs = [b - a for a, b in zip(diffs, diffs[1:])]
    assert len(set(diffs)) == 1 and diffs[0] != 0
    nxt = [b - a for a, b in zip(diffs, diffs[1:])]
    assert all(v == 0 for v in nxt)


def test_neg_int_is_the_spectral_moment():
    # zeta(-m) is the m-th moment of the Laplacian at the root: <delta, Delta^m delta>
    from discrete_gaussian.graphs import BetheBall
    for q in (2, 3):
        ball = BetheBall(q, 12)
        gen = ball.radial_generator()
        e = np.zeros(gen.shape[0])
        e[0] = 1.0
        v = e.copy()
        for m in range(6):
            assert abs(v[0] - zeta_tree_neg_int(q, m)) < 1e-6 * zeta_tree_neg_int(q, m)
            v = -gen @ v


def _fd_derivative_at_zero(q, h=1e-4):
    def d(step):
        return (zeta_tree(q, step) - zeta_tree(q, -step)) / (2 * step)
    return (4 * d(h / 2) - d(h)) / 3


@pytest.mark.parametrize("q", [2, 3, 5])
def test_derivative_at_zero(q):
    assert abs(_fd_derivative_at_zero(q) - tree_zeta_prime_zero(q)) < 1e-6
    assert tree_det_spectral(q) == pytest.approx(q * tree_det(q), rel=1e-14)


def test_derivative_matches_tree_entropy():
    # -zeta'(0) = int log(lambda) d(mu) for the Kesten-McKay measure of the Laplacian
    for q in (2, 3):
        r = 2 * math.sqrt(q)
        with mpmath.workdps(30):
            dens = lambda x: (q + 1) * mpmath.sqrt(r**2 - x**2) / (2 * mpmath.pi * ((q + 1) ** 2 - x**2))
            val = mpmath.quad(lambda x: mpmath.log(q + 1 - x) * dens(x), [-r, 0, r])
        assert abs(float(mpmath.re(val)) + tree_zeta_prime_zero(q)) < 1e-12


def test_tree_det():
    assert tree_det(1) == 1
    assert tree_det(3) == pytest.approx(1.125, rel=1e-15)
    assert tree_zeta_prime_zero(1) == 0
    with pytest.raises(DomainError):
        tree_det(0)


def test_evaluate_zeta_methods():
    assert evaluate_zeta(-1, 3).method is ZetaMethod.POLYNOMIAL
    assert evaluate_zeta(-1, 3).value == 4
    assert evaluate_zeta(0.25).method is ZetaMethod.CLOSED_FORM
    pt = evaluate_zeta(0.25, 2)
    assert pt.method is ZetaMethod.SERIES and abs(pt.value.imag) <= 1e-12 * abs(pt.value)


def test_zeta_tree_complex_conjugation():
    s = 0.3 + 1.1j
    assert abs(zeta_tree(3, s.conjugate()) - zeta_tree(3, s).conjugate()) < 1e-13
