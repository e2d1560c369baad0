"""Spectral zeta functions of Z and of the Bethe lattice.

``zeta_Z(s) = Gamma(1/2 - s) / (sqrt(pi) 4^s Gamma(1 - s))`` is the Mellin
transform of ``exp(-2t) I_0(2t)`` divided by ``Gamma(s)``.  For the
(q+1)-regular tree the Mellin transform of each radial building block is a
Gauss hypergeometric value, which gives

    zeta_T(s) = q^-s F(s, s; 1; 1/q)
                - (q-1) sum_{j>=1} q^(-s-2j) (s)_{2j}/(2j)! F(s, s+2j; 2j+1; 1/q).

``(s)_{2j}/(2j)!`` equals ``Gamma(s+2j)/(Gamma(s) Gamma(2j+1))``; computing it as
a running product makes it exactly zero at ``s = -m`` for ``2j > m``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Callable

import scipy.integrate
import scipy.special

from .errors import DomainError, PoleError

__all__ = [
    "ZetaMethod",
    "ZetaPoint",
    "evaluate_zeta",
    "gauss_2f1",
    "mellin_zeta_oracle",
    "tree_det",
    "tree_det_spectral",
    "tree_zeta_prime_zero",
    "xi_Z",
    "zeta_Z",
    "zeta_tree",
    "zeta_tree_neg_int",
]

F21_MAX_TERMS = 100_000


class ZetaMethod(str, enum.Enum):
    CLOSED_FORM = "closed_form"
    SERIES = "series"
    QUADRATURE = "quadrature"
    POLYNOMIAL = "polynomial"


@dataclass(frozen=True)
class ZetaPoint:
    s: complex
    value: complex
    method: ZetaMethod


def _nonpositive_int(x: complex) -> int | None:
    x = complex(x)
    if x.imag == 0 and x.real <= 0 and x.real == math.floor(x.real):
        return int(-x.real)
    return None


def _real_if_real(s: complex, value: complex):
    return value.real if complex(s).imag == 0 else value


def zeta_Z(s: complex) -> complex:
    """Spectral zeta function of Z, the binomial coefficient ``C(-2s, -s)``.

    Exact central binomial ``C(2m, m)`` at ``s = -m``; zero at ``s = 1, 2, ...``.
    """
    s = complex(s)
    m = _nonpositive_int(s)
    if m is not None:
        return float(math.comb(2 * m, m)) if s.imag == 0 else complex(math.comb(2 * m, m))
    half = s - 0.5
    if half.imag == 0 and half.real >= 0 and half.real == math.floor(half.real):
        raise PoleError(f"zeta_Z has a pole at s={s.real}")
    if s.imag == 0 and s.real >= 1 and s.real == math.floor(s.real):
        return 0.0
    value = scipy.special.gamma(0.5 - s) * scipy.special.rgamma(1.0 - s) / (math.sqrt(math.pi) * 4.0**s)
    return _real_if_real(s, complex(value))


def xi_Z(s: complex) -> complex:
    """``2^s cos(pi s/2) zeta_Z(s/2)``, symmetric under ``s -> 1 - s``.

    At odd positive integers the cosine zero cancels the pole of ``zeta_Z(s/2)``;
    there the limit ``sqrt(pi) / (Gamma((1+s)/2) Gamma((2-s)/2))`` is used.
    """
    s = complex(s)
    if s.imag == 0 and s.real >= 1 and s.real == math.floor(s.real) and int(s.real) % 2 == 1:
        value = math.sqrt(math.pi) * scipy.special.rgamma(0.5 * (1 + s.real)) \
            * scipy.special.rgamma(0.5 * (2 - s.real))
        return float(value)
    value = 2.0**s * cmath.cos(0.5 * math.pi * s) * zeta_Z(0.5 * s)
    return _real_if_real(s, complex(value))


def gauss_2f1(a: complex, b: complex, c: complex, z: float) -> complex:
    """Gauss hypergeometric series ``sum (a)_k (b)_k / ((c)_k k!) z^k``.

    Terminating cases (``a`` or ``b`` a non-positive integer) are finite sums and
    accept any ``z``; otherwise ``0 <= z < 1`` is required.
    """
    z = float(z)
    stop = [m for m in (_nonpositive_int(a), _nonpositive_int(b)) if m is not None]
    terms_cap = min(stop) + 1 if stop else None
    cm = _nonpositive_int(c)
    if cm is not None and (terms_cap is None or terms_cap > cm + 1):
        raise DomainError(f"c = {c} is a non-positive integer before the series terminates")
    if terms_cap is None and not 0.0 <= z < 1.0:
        raise DomainError(f"series does not converge at z = {z}")
    a, b, c = complex(a), complex(b), complex(c)
    total = 1.0 + 0j
    term = 1.0 + 0j
    if terms_cap is not None:
        for k in range(terms_cap - 1):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * z
            total += term
        return total
    for k in range(F21_MAX_TERMS):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1)) * z
        term *= ratio
        total += term
        # past the hump the ratio tends to z < 1; bound the rest geometrically
        if abs(ratio) < 1.0 and k > abs(a) + abs(b):
            bound = max(abs(ratio), z)
            if abs(term) * bound / (1.0 - bound) < 1e-17 * abs(total) or term == 0:
                return total
    raise DomainError(f"2F1({a}, {b}; {c}; {z}) did not converge in {F21_MAX_TERMS} terms")


def zeta_tree(q: int, s: complex, tol: float = 1e-14) -> complex:
    """Spectral zeta function of the (q+1)-regular tree via the hypergeometric series.

    For ``q >= 2`` the tree spectrum is bounded away from zero and the series
    converges geometrically (ratio about ``q^-2``) for every complex ``s``.
    ``q = 1`` is the line Z and is delegated to :func:`zeta_Z`.
    """
    if int(q) != q or q < 1:
        raise DomainError(f"q must be an integer >= 1, got {q!r}")
    if q == 1:
        return zeta_Z(s)
    s = complex(s)
    z = 1.0 / q
    total = q ** (-s) * gauss_2f1(s, s, 1, z)
    poch = 1.0 + 0j  # (s)_{2j} / (2j)!
    prev = None
    j = 0
    while True:
        j += 1
        poch *= (s + 2 * j - 2) * (s + 2 * j - 1) / ((2 * j - 1) * (2 * j))
        if poch == 0:
            break  # s = -m: every later coefficient vanishes as well
        term = (q - 1) * q ** (-s - 2 * j) * poch * gauss_2f1(s, s + 2 * j, 2 * j + 1, z)
        total -= term
        if prev is not None and prev != 0:
            rho = abs(term) / abs(prev)
            if rho < 1.0 and abs(term) * rho / (1.0 - rho) < tol * max(1.0, abs(total)):
                break
        if j > 10_000:
            raise DomainError(f"tree zeta series did not converge at s = {s}")
        prev = term
    return _real_if_real(s, total)


def zeta_tree_neg_int(q: int, m: int) -> int:
    """Exact ``zeta_T(-m)`` from the double binomial sum."""
    if int(q) != q or q < 1:
        raise DomainError(f"q must be an integer >= 1, got {q!r}")
    if m < 0:
        raise DomainError(f"m must be non-negative, got {m}")
    lead = sum(math.comb(m, k) ** 2 * q ** (m - k) for k in range(m + 1))
    corr = sum(math.comb(m, k) * math.comb(m, 2 * j + k) * q ** (m - 2 * j - k)
               for j in range(1, m // 2 + 1) for k in range(m - 2 * j + 1))
    return lead - (q - 1) * corr


def tree_zeta_prime_zero(q: int) -> float:
    """``zeta_T'(0) = -log q + (q-1)/2 log(1 - q^-2)``, zero for ``q = 1``.

    The ``-log q`` comes from the leading ``q^-s`` factor of the series.  The
    value agrees with the tree entropy ``int log(lambda) dmu = -zeta_T'(0)``
    known from spanning-tree asymptotics of random regular graphs.
    """
    if int(q) != q or q < 1:
        raise DomainError(f"q must be an integer >= 1, got {q!r}")
    if q == 1:
        return 0.0
    return -math.log(q) + 0.5 * (q - 1) * math.log1p(-1.0 / (q * q))


def tree_det(q: int) -> float:
    """Closed form ``(1 - q^-2)^((1-q)/2)`` (``1`` for ``q = 1``).

    This is ``exp(-zeta_T'(0)) / q``: the regularized determinant of the
    Laplacian normalized as in :func:`kernel_tree` is ``q * tree_det(q)``,
    see :func:`tree_det_spectral`.
    """
    if int(q) != q or q < 1:
        raise DomainError(f"q must be an integer >= 1, got {q!r}")
    if q == 1:
        return 1.0
    return math.exp(0.5 * (1 - q) * math.log1p(-1.0 / (q * q)))


def tree_det_spectral(q: int) -> float:
    """``exp(-zeta_T'(0)) = q (1 - q^-2)^((1-q)/2)``."""
    return math.exp(-tree_zeta_prime_zero(q))


def mellin_zeta_oracle(kernel_at_origin: Callable[[float], float], s: complex,
                       epsabs: float = 1e-11) -> complex:
    """``(1/Gamma(s)) int_0^inf K(t) t^(s-1) dt`` by adaptive quadrature, ``0 < Re s < 1/2``.

    On ``[0, 1]`` the substitution ``t = u^(1/sigma)`` (``sigma = Re s``) removes
    the endpoint singularity.  On ``[1, inf)`` the substitution
    ``t = u^(-1/beta)`` with ``beta = 1/2 - sigma`` maps a kernel decaying like
    ``t^(-1/2)`` to a bounded integrand on ``(0, 1]``.  A kernel with a zero
    eigenvalue (a finite graph) does not decay and is not a valid input.
    """
    s = complex(s)
    sigma, tau = s.real, s.imag
    if not 0.0 < sigma < 0.5:
        raise DomainError(f"Re(s) must lie in (0, 1/2), got {sigma}")
    beta = 0.5 - sigma

    def near(u):
        # t^(s-1) dt = (1/sigma) u^(i tau / sigma) du
        t = u ** (1.0 / sigma)
        return kernel_at_origin(t) * cmath.exp(1j * tau * math.log(u) / sigma) / sigma

    def far(u):
        # t^(s-1) dt = (1/beta) u^(-s/beta - 1) du
        t = u ** (-1.0 / beta)
        return kernel_at_origin(t) * cmath.exp((-s / beta - 1.0) * math.log(u)) / beta

    total = 0j
    for fn in (near, far):
        re, _ = scipy.integrate.quad(lambda u: fn(u).real, 0.0, 1.0,
                                     epsabs=epsabs, epsrel=1e-12, limit=500)
        im = 0.0
        if tau != 0.0:
            im, _ = scipy.integrate.quad(lambda u: fn(u).imag, 0.0, 1.0,
                                         epsabs=epsabs, epsrel=1e-12, limit=500)
        total += complex(re, im)
    value = total * complex(scipy.special.rgamma(s))
    return _real_if_real(s, value)


def evaluate_zeta(s: complex, q: int = 1) -> ZetaPoint:
    """Tree zeta value (``q = 1`` is Z) tagged with the route that produced it."""
    s = complex(s)
    m = _nonpositive_int(s)
    if m is not None:
        return ZetaPoint(s, complex(zeta_tree_neg_int(q, m)), ZetaMethod.POLYNOMIAL)
    if q == 1:
        return ZetaPoint(s, complex(zeta_Z(s)), ZetaMethod.CLOSED_FORM)
    return ZetaPoint(s, complex(zeta_tree(q, s)), ZetaMethod.SERIES)
