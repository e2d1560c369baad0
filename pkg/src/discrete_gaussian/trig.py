"""Twisted trigonometric sums and their Chebyshev generating function.

    C_{m,r}(beta, n) = (1/m) sum_{j=0}^{m-1} exp(2 pi i r j / m) / sin^{2n}((j + beta) pi / m)

For non-integer ``beta`` the Maclaurin coefficients of

    2 exp(-2 pi i beta r / m) (U_{m-r-1}(1-2s) + exp(2 pi i beta) U_{r-1}(1-2s))
        / (T_m(1-2s) - cos 2 pi beta)

are ``C_{m,r}(beta, k+1)``, k = 0, 1, ...  The denominator vanishes exactly at
``s = sin^2((j + beta) pi / m)``, so the expansion is a partial-fraction
(resolvent) identity.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError

__all__ = [
    "ChebKind",
    "ChebPoly",
    "TrigSumSpec",
    "cheb_poly",
    "generating_coeffs",
    "sin4_identity",
    "trig_sum_direct",
]

WORK_DPS = 50
MAX_COEFFS = 64

# cos(2 pi beta) is rational exactly when 2 pi beta is a multiple of pi/3 or pi/2
_RATIONAL_COS = {
    Fraction(0): Fraction(1), Fraction(1, 6): Fraction(1, 2), Fraction(1, 4): Fraction(0),
    Fraction(1, 3): Fraction(-1, 2), Fraction(1, 2): Fraction(-1),
    Fraction(2, 3): Fraction(-1, 2), Fraction(3, 4): Fraction(0), Fraction(5, 6): Fraction(1, 2),
}


def _ctx(dps: int = WORK_DPS) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.dps = dps
    return ctx


def _as_fraction(beta) -> Fraction | None:
    """Exact rational for ``beta`` if it is (or rounds from) a small-denominator fraction."""
    if isinstance(beta, Fraction):
        return beta
    if isinstance(beta, int):
        return Fraction(beta)
    approx = Fraction(beta).limit_denominator(1000)
    return approx if abs(float(approx) - beta) <= 4 * math.ulp(beta or 1.0) else None


def _mp_beta(ctx, beta):
    frac = _as_fraction(beta)
    if frac is not None:
        return ctx.mpf(frac.numerator) / frac.denominator
    return ctx.mpf(beta)


@dataclass(frozen=True)
class TrigSumSpec:
    """Parameters of ``C_{m,r}(beta, n)``; ``exclude_singular`` drops the term with ``sin = 0``."""

    m: int
    r: int
    beta: float
    n: int
    exclude_singular: bool = False

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be an integer >= 1, got {self.m!r}")
        if int(self.r) != self.r or not 0 <= self.r < self.m:
            raise DomainError(f"r must be an integer in [0, {self.m - 1}], got {self.r!r}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n!r}")
        if not math.isfinite(float(self.beta)):
            raise DomainError("beta must be finite")

    @property
    def singular_index(self) -> int | None:
        """The ``j`` with ``(j + beta)/m`` an integer, if ``beta`` is an integer."""
        frac = _as_fraction(self.beta)
        if frac is None or frac.denominator != 1:
            return None
        return (-frac.numerator) % self.m


def trig_sum_direct(spec: TrigSumSpec, dps: int = WORK_DPS) -> complex:
    """Sum the ``m`` terms of ``C_{m,r}(beta, n)`` in ``dps``-digit arithmetic."""
    ctx = _ctx(dps)
    skip = spec.singular_index
    if skip is not None and not spec.exclude_singular:
        raise DomainError(f"term j={skip} is singular (integer beta); set exclude_singular")
    beta = _mp_beta(ctx, spec.beta)
    total = ctx.mpc(0)
    for j in range(spec.m):
        if j == skip:
            continue
        sine = ctx.sin((j + beta) * ctx.pi / spec.m)
        twist = ctx.expjpi(ctx.mpf(2 * spec.r * j) / spec.m)
        total += twist / sine ** (2 * spec.n)
    total /= spec.m
    value = complex(total)
    if spec.r == 0 or abs(value.imag) <= 1e-30 * abs(value):
        return complex(value.real, 0.0)
    return value


class ChebKind(str, enum.Enum):
    T = "T"
    U = "U"


@dataclass(frozen=True)
class ChebPoly:
    """Chebyshev polynomial with exact integer coefficients, lowest degree first."""

    kind: ChebKind
    degree: int
    coeffs: tuple[int, ...]

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def substitute_affine(self, a, b) -> list:
        """Coefficients of ``P(a + b s)`` in powers of ``s``."""
        out = [0] * max(len(self.coeffs), 1)
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for i in range(k + 1):
                out[i] += c * math.comb(k, i) * a ** (k - i) * b ** i
        return out


def cheb_poly(kind, degree: int) -> ChebPoly:
    """``T_n`` or ``U_n`` from the three-term recurrence; ``U_{-1}`` is the zero polynomial."""
    kind = ChebKind(kind)
    if degree < -1 or (degree == -1 and kind is ChebKind.T):
        raise DomainError(f"degree must be >= 0 (U also allows -1), got {degree}")
    if degree == -1:
        return ChebPoly(kind, -1, ())
    prev = [1]
    cur = [0, 1] if kind is ChebKind.T else [0, 2]
    if degree == 0:
        return ChebPoly(kind, 0, (1,))
    for _ in range(degree - 1):
        nxt = [0] + [2 * c for c in cur]
        for i, c in enumerate(prev):
            nxt[i] -= c
        prev, cur = cur, nxt
    return ChebPoly(kind, degree, tuple(cur))


def _series_divide(num, den, count):
    out = []
    for k in range(count):
        acc = num[k] if k < len(num) else 0
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * out[k - i]
        out.append(acc / den[0])
    return out


def _pad(poly, count, zero):
    return list(poly[:count]) + [zero] * max(0, count - len(poly))


def _generating_coeffs_at(m, r, beta, count, dps):
    ctx = _ctx(dps)
    frac = _as_fraction(beta)
    u_hi = cheb_poly("U", m - r - 1).substitute_affine(1, -2)
    u_lo = cheb_poly("U", r - 1).substitute_affine(1, -2) if r > 0 else [0]
    t_m = cheb_poly("T", m).substitute_affine(1, -2)
    b = _mp_beta(ctx, beta)
    exact_cos = _RATIONAL_COS.get(frac - math.floor(frac)) if frac is not None else None
    if exact_cos is not None:
        den = list(map(Fraction, t_m))
        den[0] -= exact_cos
        hi = _series_divide(list(map(Fraction, u_hi)), den, count)
        lo = _series_divide(list(map(Fraction, u_lo)), den, count)
        hi = [ctx.mpf(c.numerator) / c.denominator for c in hi]
        lo = [ctx.mpf(c.numerator) / c.denominator for c in lo]
    else:
        den = [ctx.mpf(c) for c in t_m]
        den[0] -= ctx.cospi(2 * b)
        hi = _series_divide([ctx.mpf(c) for c in u_hi], den, count)
        lo = _series_divide([ctx.mpf(c) for c in u_lo], den, count)
    front = 2 * ctx.expjpi(-2 * b * r / m)
    shift = ctx.expjpi(2 * b)
    return [front * (h + shift * l) for h, l in zip(hi, lo)]


def generating_coeffs(m: int, r: int, beta: float, count: int,
                      dps: int = WORK_DPS) -> list[complex]:
    """First ``count`` Maclaurin coefficients; entry ``k`` equals ``C_{m,r}(beta, k+1)``.

    Polynomial parts are exact.  When ``cos 2 pi beta`` is rational the series
    division is exact too; otherwise it runs at ``dps`` digits and is repeated
    at ``dps + 20`` as a conditioning check.
    """
    TrigSumSpec(m, r, beta, 1)
    if not 1 <= count <= MAX_COEFFS:
        raise DomainError(f"count must lie in [1, {MAX_COEFFS}], got {count}")
    frac = _as_fraction(beta)
    if frac is not None and frac.denominator == 1:
        raise DomainError("beta is an integer: T_m(1) - cos(2 pi beta) vanishes")
    coeffs = _generating_coeffs_at(m, r, beta, count, dps)
    if frac is None or _RATIONAL_COS.get(frac - math.floor(frac)) is None:
        check = _generating_coeffs_at(m, r, beta, count, dps + 20)
        for a, b in zip(coeffs, check):
            if abs(a - b) > mpmath.mpf(10) ** (-20) * (1 + abs(b)):
                raise DomainError("series division is ill-conditioned at this precision")
    out = []
    for c in coeffs:
        v = complex(c)
        out.append(complex(v.real, 0.0) if r == 0 else v)
    return out


def sin4_identity(k: int) -> tuple[float, float]:
    """``sum_{j=1}^{3k-1} cos(2 pi j/3) / sin^4(j pi / 3k)`` and ``-(39k^4 + 30k^2 + 11)/45``."""
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    ctx = _ctx()
    lhs = ctx.fsum(ctx.cospi(ctx.mpf(2 * j) / 3) / ctx.sinpi(ctx.mpf(j) / (3 * k)) ** 4
                   for j in range(1, 3 * k))
    rhs = Fraction(-(39 * k**4 + 30 * k**2 + 11), 45)
    return float(lhs), float(rhs)
