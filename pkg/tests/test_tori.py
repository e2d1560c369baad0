import itertools
import math

import pytest
import scipy.integrate

from discrete_gaussian.bessel import scaled_bessel_i
from discrete_gaussian.errors import DegenerateError, DomainError, ResourceError
from discrete_gaussian.tori import (TorusSpec, asymptotic_remainder, lattice_density,
                                    log_det_prime, spanning_tree_count, torus_laplacian)

CATALAN = 0.915965594177219015054603514932


def test_spec_validation():
    with pytest.raises(DomainError):
        TorusSpec(())
    with pytest.raises(DomainError):
        TorusSpec((2, 2, 2, 2, 2))
    with pytest.raises(DomainError):
        TorusSpec((0, 3))
    with pytest.raises(ResourceError):
        TorusSpec((10_000, 10_000))
    assert TorusSpec([3, 4]).d == 2


def test_log_det_examples():
    assert log_det_prime((2,)) == pytest.approx(math.log(4), abs=1e-15)
    for n in (3, 4, 5):
        assert math.exp(log_det_prime((n,))) == pytest.approx(n * n, rel=1e-13)
        assert spanning_tree_count((n,)) == n
    count = spanning_tree_count((3, 3))
    assert count == 11664
    assert math.exp(log_det_prime((3, 3))) / 9 == pytest.approx(count, rel=1e-12)
    with pytest.raises(DegenerateError):
        log_det_prime((1, 1))


def test_laplacian_multigraph_rows():
    lap = torus_laplacian((2, 1))
    assert lap.tolist() == [[2, -2], [-2, 2]]
    assert torus_laplacian((3, 3)).sum(axis=1).tolist() == [0] * 9


def small_specs():
    sides = [1, 2, 3, 4, 5, 7]
    out = []
    for d in (1, 2, 3):
        for dims in itertools.combinations_with_replacement(sides, d):
            if 1 < math.prod(dims) <= 400:
                out.append(dims)
    out += [(20, 20), (2, 2, 2, 2), (3, 4, 5), (1, 1, 6)]
    return out


@pytest.mark.parametrize("dims", small_specs(), ids=str)
def test_matrix_tree(dims):
    count = spanning_tree_count(dims)
    lhs = log_det_prime(dims)
    assert abs(lhs - math.log(math.prod(dims)) - math.log(count)) < 1e-9


def density_oracle(d):
    # log(lambda) = int_0^inf (e^-t - e^-(lambda t)) dt/t, averaged over the torus
    f = lambda t: (math.exp(-t) - scaled_bessel_i(0, t) ** d) / t
    a, _ = scipy.integrate.quad(f, 0, 1, epsabs=1e-14, epsrel=1e-13, limit=200)
    b, _ = scipy.integrate.quad(f, 1, math.inf, epsabs=1e-14, epsrel=1e-13, limit=400)
    return a + b


def test_lattice_density():
    assert abs(lattice_density(1)) < 1e-12
    assert abs(lattice_density(2) - 4 * CATALAN / math.pi) < 1e-12
    for d in (2, 3, 4):
        assert abs(lattice_density(d) - density_oracle(d)) < 1e-8
    with pytest.raises(DomainError):
        lattice_density(5)


def test_remainder_d1_vanishes():
    for n in (2, 3, 8, 50, 1000):
        assert abs(asymptotic_remainder(1, n)) < 1e-12


def test_remainder_d2_differences_shrink():
    r = [asymptotic_remainder(2, n) for n in (8, 16, 32, 64, 128)]
    diffs = [abs(b - a) for a, b in zip(r, r[1:])]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def test_remainder_d3_cauchy():
    r = [asymptotic_remainder(3, n) for n in (4, 8, 16, 32)]
    diffs = [abs(b - a) for a, b in zip(r, r[1:])]
    assert all(b < a for a, b in zip(diffs, diffs[1:]))


def test_remainder_caps():
    with pytest.raises(ResourceError):
        asymptotic_remainder(3, 300)
    with pytest.raises(DomainError):
        asymptotic_remainder(2, 1)
