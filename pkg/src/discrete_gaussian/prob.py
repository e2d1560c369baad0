"""The drifted walk law ``Y_{p,q,t}`` and the discrete local limit harness.

``P(Y = m) = kernel_pq(p, q, t; m)`` with ``p + q = 1``.  The local limit
experiment compares the exact law of ``S_n = X_1 + ... + X_n`` with the
drifted discrete Gaussian at ``t = n sigma^2``, ``(p - q) t = n mu``, and with
the sampled normal density.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path

import numpy as np

from .errors import (DegenerateError, DomainError, PreconditionError,
                     ResourceError, ValidationError)
from .heat import WalkParams, kernel_pq

__all__ = [
    "LltReport",
    "Pmf",
    "char_fn",
    "convolve_n",
    "lattice_span",
    "llt_discrepancy",
    "load_pmf",
    "moments",
    "parse_pmf",
    "pmf_Y",
    "sample_Y",
]

CONVOLUTION_CAP = 10**6


@dataclass(frozen=True, eq=False)
class Pmf:
    """Finitely supported law on Z: ``P(min_support + i) = probs[i]``."""

    min_support: int
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.size == 0:
            raise ValidationError("probs must be a non-empty 1-d sequence")
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValidationError("probabilities must be finite and non-negative")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValidationError(f"probabilities sum to {math.fsum(probs)!r}, not 1")
        if probs[0] == 0 or probs[-1] == 0:
            raise ValidationError("support must be tight (non-zero end points)")
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "min_support", int(self.min_support))

    @classmethod
    def from_dict(cls, table: dict[int, float]) -> Pmf:
        lo, hi = min(table), max(table)
        probs = np.zeros(hi - lo + 1)
        for k, v in table.items():
            probs[k - lo] = v
        return cls(lo, probs)

    @classmethod
    def uniform(cls, points) -> Pmf:
        points = list(points)
        return cls.from_dict({k: points.count(k) / len(points) for k in set(points)})

    @property
    def support(self) -> np.ndarray:
        return self.min_support + np.nonzero(self.probs)[0]

    @property
    def max_support(self) -> int:
        return self.min_support + self.probs.size - 1

    def mean(self) -> float:
        xs = self.min_support + np.arange(self.probs.size)
        return math.fsum(xs * self.probs)

    def variance(self) -> float:
        xs = self.min_support + np.arange(self.probs.size)
        mu = self.mean()
        return math.fsum((xs - mu) ** 2 * self.probs)

    def __getitem__(self, m: int) -> float:
        i = m - self.min_support
        return float(self.probs[i]) if 0 <= i < self.probs.size else 0.0

    def __eq__(self, other):
        return (isinstance(other, Pmf) and self.min_support == other.min_support
                and np.array_equal(self.probs, other.probs))


@dataclass(frozen=True)
class LltReport:
    n: int
    sup_discrepancy_discrete: float
    sup_discrepancy_continuous: float
    argmax_m: int


def pmf_Y(params: WalkParams, m: int) -> float:
    params.require_probability()
    return kernel_pq(params, m)


def char_fn(params: WalkParams, y: float) -> complex:
    """``E exp(i y Y) = exp(-(p+q)t(1 - cos y)) exp(i (p-q) t sin y)``."""
    p, q, t = params.p, params.q_w, params.t
    return cmath.exp(complex(-(p + q) * t * 2.0 * math.sin(0.5 * y) ** 2, (p - q) * t * math.sin(y)))


def moments(params: WalkParams) -> tuple[float, float]:
    """Mean ``(p-q)t`` and variance ``(p+q)t``."""
    return (params.p - params.q_w) * params.t, (params.p + params.q_w) * params.t


def _draw(params: WalkParams, rng: np.random.Generator, size=None):
    params.require_probability()
    total = rng.poisson((params.p + params.q_w) * params.t, size=size)
    right = rng.binomial(total, params.p / (params.p + params.q_w))
    return total, 2 * right - total


def sample_Y(params: WalkParams, rng: np.random.Generator, size=None):
    """Exact draws of ``Y_{p,q,t}``.

    A Poisson((p+q)t) number of unit steps, each to the right with probability
    ``p/(p+q)``.  Expanding the Bessel series term by term shows the resulting
    Poisson mixture of binomial walks is exactly ``kernel_pq``.
    """
    _, value = _draw(params, rng, size)
    return int(value) if size is None else value


def convolve_n(base: Pmf, n: int) -> Pmf:
    """Exact law of the sum of ``n`` independent copies (binary powering)."""
    if n < 1:
        raise DomainError(f"n must be positive, got {n}")
    if n * (base.probs.size - 1) + 1 > CONVOLUTION_CAP:
        raise ResourceError("n-fold support exceeds the convolution cap")
    result = None
    power = base.probs
    k = n
    while True:
        if k & 1:
            result = power if result is None else np.convolve(result, power)
        k >>= 1
        if not k:
            break
        power = np.convolve(power, power)
    result = np.clip(result, 0.0, None)
    # trim zero end points created by round-off clipping
    nz = np.nonzero(result)[0]
    lo = n * base.min_support + nz[0]
    result = result[nz[0]: nz[-1] + 1]
    return Pmf(lo, result / math.fsum(result))


def lattice_span(base: Pmf) -> tuple[int, int]:
    """Offset ``a`` and span ``l`` of the smallest progression ``a + lZ`` holding the support."""
    pts = [int(v) for v in base.support]
    if len(pts) < 2:
        raise DegenerateError("single-point support has no lattice span")
    span = reduce(math.gcd, (p - pts[0] for p in pts[1:]))
    return pts[0] % span, span


def llt_discrepancy(base: Pmf, n: int) -> LltReport:
    """sqrt(n)-scaled sup distances of ``P(S_n = m)`` to both local limit approximants."""
    if len(base.support) < 2:
        raise DegenerateError("single-point support: S_n is deterministic")
    _, span = lattice_span(base)
    if span != 1:
        raise PreconditionError(f"support lies in a progression with span {span} > 1")
    mu, var = base.mean(), base.variance()
    if not var > abs(mu):
        raise PreconditionError(f"need sigma^2 > |mu|, got sigma^2={var!r}, mu={mu!r}")
    exact = convolve_n(base, n)
    t = n * var
    walk = WalkParams(0.5 * (1.0 + mu / var), 0.5 * (1.0 - mu / var), t)
    width = 10.0 * math.sqrt(var * n)
    lo = min(exact.min_support, math.floor(n * mu - width))
    hi = max(exact.max_support, math.ceil(n * mu + width))
    ms = np.arange(lo, hi + 1)
    p_exact = np.array([exact[int(m)] for m in ms])
    p_disc = np.array([kernel_pq(walk, int(m)) for m in ms])
    p_cont = np.exp(-((ms - n * mu) ** 2) / (2.0 * n * var)) / math.sqrt(2.0 * math.pi * n * var)
    d_disc = np.abs(p_exact - p_disc)
    d_cont = np.abs(p_exact - p_cont)
    i = int(np.argmax(d_disc))
    root = math.sqrt(n)
    return LltReport(n, root * float(d_disc[i]), root * float(d_cont.max()), int(ms[i]))


def parse_pmf(text: str, source: str = "<string>") -> Pmf:
    """Lines ``integer probability``; renormalized when the total is within 1e-9 of 1."""
    table: dict[int, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"{source}:{lineno}: expected 'integer probability'")
        try:
            k, v = int(parts[0]), float(parts[1])
        except ValueError:
            raise ValidationError(f"{source}:{lineno}: cannot parse {raw.strip()!r}")
        if v < 0 or not math.isfinite(v):
            raise ValidationError(f"{source}:{lineno}: invalid probability {v!r}")
        if k in table:
            raise ValidationError(f"{source}:{lineno}: duplicate support point {k}")
        if v > 0:
            table[k] = v
    if not table:
        raise ValidationError(f"{source}: empty pmf")
    total = math.fsum(table.values())
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"{source}: probabilities sum to {total!r}")
    return Pmf.from_dict({k: v / total for k, v in table.items()})


def load_pmf(path) -> Pmf:
    path = Path(path)
    return parse_pmf(path.read_text(), source=str(path))
