"""Heat kernels assembled from the discrete Gaussian.

Conventions: the Laplacian on Z is ``2 f(x) - f(x+1) - f(x-1)`` (unit edge
weights), so ``kernel_Z(t, x) = exp(-2t) I_x(2t)``.  The same normalization is
used for circles and trees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .bessel import (TAIL_RATIO, TAIL_TERM, building_block, scaled_bessel_i,
                     scaled_ive)
from .errors import DomainError

__all__ = [
    "TreeParams",
    "WalkParams",
    "kernel_Z",
    "kernel_circle",
    "kernel_pq",
    "kernel_tree",
    "rescaled_limit_error",
]


@dataclass(frozen=True)
class WalkParams:
    """Right-step weight ``p``, left-step weight ``q_w`` and time ``t``."""

    p: float
    q_w: float
    t: float

    def __post_init__(self):
        for name in ("p", "q_w"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be positive, got {v!r}")
        if not (math.isfinite(self.t) and self.t >= 0):
            raise DomainError(f"t must be non-negative, got {self.t!r}")

    @property
    def is_probability(self) -> bool:
        return abs(self.p + self.q_w - 1.0) <= 1e-12

    def require_probability(self) -> None:
        if not self.is_probability:
            raise DomainError(f"p + q_w must equal 1, got {self.p + self.q_w!r}")


@dataclass(frozen=True)
class TreeParams:
    """Bethe lattice of degree ``q + 1`` at time ``t``."""

    q: int
    t: float
    truncation_tol: float = 1e-15

    def __post_init__(self):
        if int(self.q) != self.q or self.q < 1:
            raise DomainError(f"q must be an integer >= 1, got {self.q!r}")
        if not (math.isfinite(self.t) and self.t >= 0):
            raise DomainError(f"t must be non-negative, got {self.t!r}")
        if not (0 < self.truncation_tol <= 1e-6):
            raise DomainError("truncation_tol must lie in (0, 1e-6]")


def kernel_Z(t: float, x: int) -> float:
    return scaled_bessel_i(x, t)


def kernel_pq(params: WalkParams, x: int) -> float:
    """Heat kernel of the drifted Laplacian ``(p+q)f(x) - p f(x+1) - q f(x-1)``.

    ``(p/q)^(x/2) exp(-(p+q)t) I_x(2 sqrt(pq) t)``, evaluated as
    ``exp(x/2 log(p/q) - (sqrt p - sqrt q)^2 t) * exp(-z) I_x(z)`` with
    ``z = 2 sqrt(pq) t``.
    """
    p, q, t = params.p, params.q_w, params.t
    if t == 0.0:
        return 1.0 if x == 0 else 0.0
    rp, rq = math.sqrt(p), math.sqrt(q)
    gap = (p - q) ** 2 / (rp + rq) ** 2  # (sqrt p - sqrt q)^2 without cancellation
    expo = 0.5 * x * math.log(p / q) - gap * t
    base = scaled_ive(x, 2.0 * rp * rq * t)
    if base == 0.0:
        return 0.0
    if expo > 700.0 or expo < -700.0:
        return math.exp(math.log(base) + expo)
    return base * math.exp(expo)


def _image_sum(t: float, x: int, n: int) -> float:
    # x in [0, n); orders x + j n for j >= 0 and x - j n for j >= 1 each decay
    # monotonically in |order|, so each one-sided sum stops at a certified term.
    terms = []
    for sign, start in ((1, x), (-1, x - n)):
        order = start
        prev = None
        while True:
            val = scaled_bessel_i(order, t)
            terms.append(val)
            if val == 0.0:
                break
            if val < TAIL_TERM and prev is not None and val < TAIL_RATIO * prev:
                break
            prev = val
            order += sign * n
    return math.fsum(terms)


def _spectral_sum(t: float, x: int, n: int) -> float:
    # conjugate pairs (k, n-k) combine into 2 cos(...) so the result is real
    terms = [1.0]
    for k in range(1, (n - 1) // 2 + 1):
        lam = 4.0 * math.sin(math.pi * k / n) ** 2
        terms.append(2.0 * math.exp(-lam * t) * math.cos(2.0 * math.pi * ((k * x) % n) / n))
    if n % 2 == 0:
        terms.append(math.exp(-4.0 * t) * (1.0 if x % 2 == 0 else -1.0))
    return math.fsum(terms) / n


def kernel_circle(n: int, t: float, x: int,
                  side: Literal["spectral", "images"] = "spectral") -> float:
    """Heat kernel on the cycle Z/nZ, by eigenfunction expansion or by images."""
    if int(n) != n or n < 1:
        raise DomainError(f"n must be an integer >= 1, got {n!r}")
    t = float(t)
    if not (math.isfinite(t) and t >= 0):
        raise DomainError(f"t must be non-negative, got {t!r}")
    x = int(x) % n
    if side == "spectral":
        return _spectral_sum(t, x, n)
    if side == "images":
        return _image_sum(t, x, n)
    raise DomainError(f"unknown side {side!r}")


def kernel_tree(params: TreeParams, r: int) -> float:
    """Heat kernel on the (q+1)-regular tree at distance ``r`` from the origin.

    ``B(r) - (q-1) sum_{j>=1} B(r+2j)`` with ``B`` the radial building block.
    Since ``B(n+2)/B(n) = I_{n+2}/(q I_n)`` decreases in ``n``, once the ratio
    ``rho`` of two consecutive terms is below one the remainder is at most
    ``term * rho / (1 - rho)``.  Truncation stops when that bound is below
    ``truncation_tol * min(1, B(r))``: the relative form keeps sums weighted by
    sphere sizes ``(q+1) q^(r-1)`` accurate.
    """
    if r < 0:
        raise DomainError(f"r must be non-negative, got {r}")
    q, t, tol = params.q, params.t, params.truncation_tol
    head = building_block(r, q, t)
    if q == 1 or t == 0.0:
        return head
    target = tol * min(1.0, head)
    tail = []
    prev = head
    j = 1
    while True:
        term = building_block(r + 2 * j, q, t)
        tail.append(term)
        if term == 0.0:
            break
        rho = term / prev if prev > 0 else 0.0
        if rho < 1.0 and (q - 1) * term * rho / (1.0 - rho) < target:
            break
        prev = term
        j += 1
    return max(head - (q - 1) * math.fsum(tail), 0.0)


def rescaled_limit_error(t: float, x: float, n: int) -> float:
    """``|n K(n^2 t, round(n x)) - (4 pi t)^(-1/2) exp(-x^2 / 4t)|``.

    ``round`` is Python's round-half-to-even.
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t!r}")
    if n < 1:
        raise DomainError(f"n must be positive, got {n!r}")
    gauss = math.exp(-x * x / (4.0 * t)) / math.sqrt(4.0 * math.pi * t)
    return abs(n * kernel_Z(n * n * t, round(n * x)) - gauss)
