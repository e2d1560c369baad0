"""Heat kernels on finite regular graphs from non-backtracking walk counts.

On a (q+1)-regular graph the heat kernel is

    K_X(t, x) = exp(-(q+1)t) sum_m b_m(x) q^(-m/2) I_m(2 sqrt(q) t),
    b_m = c_m - (q-1)(c_{m-2} + c_{m-4} + ...),

where ``c_m(x)`` counts non-backtracking walks of length ``m`` from the origin
to ``x`` (lifts of ``x`` at distance ``m`` in the universal covering tree).
:func:`matrix_exp_kernel` computes the same object from ``exp(-t Delta)`` and
serves as the oracle.

The truncated Bethe lattice of radius 30 has billions of vertices, so
:class:`BetheBall` works on its radial quotient: from the root, the heat
distribution is constant on spheres and the sphere occupation is a
birth-death chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .bessel import _check_time, scaled_ive
from .errors import DomainError, ResourceError, ValidationError

__all__ = [
    "BetheBall",
    "GraphSpec",
    "WalkCounts",
    "bm_coefficients",
    "count_geodesics",
    "kernel_graph",
    "kernel_graph_row",
    "load_graph",
    "matrix_exp_kernel",
    "parse_edge_list",
]

MAX_WALK_LENGTH = 512
DENSE_CAP = 2000
VERTEX_CAP = 10_000


@dataclass(frozen=True)
class GraphSpec:
    """Finite simple regular graph of degree ``q + 1 >= 2``."""

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    degree: int

    def __post_init__(self):
        if self.vertex_count < 1 or len(self.adjacency) != self.vertex_count:
            raise ValidationError("adjacency must list neighbours of every vertex")
        for v, nbrs in enumerate(self.adjacency):
            if len(nbrs) != self.degree:
                raise ValidationError(
                    f"vertex {v} has degree {len(nbrs)}, expected {self.degree}")
            if v in nbrs:
                raise ValidationError(f"self-loop at vertex {v}")
            if len(set(nbrs)) != len(nbrs):
                raise ValidationError(f"multi-edge at vertex {v}")
            for u in nbrs:
                if not 0 <= u < self.vertex_count:
                    raise ValidationError(f"vertex {v} has out-of-range neighbour {u}")
                if v not in self.adjacency[u]:
                    raise ValidationError(f"edge {v}-{u} is not symmetric")
        if self.degree < 2:
            raise ValidationError("degree must be at least 2 (q >= 1)")

    @property
    def q(self) -> int:
        return self.degree - 1

    @classmethod
    def from_edges(cls, n: int, edges) -> GraphSpec:
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f"edge ({u}, {v}) outside 0..{n - 1}")
            nbrs[u].append(v)
            nbrs[v].append(u)
        degrees = {len(a) for a in nbrs}
        if len(degrees) != 1:
            expected = max(set(len(a) for a in nbrs), key=[len(a) for a in nbrs].count)
            bad = next(i for i, a in enumerate(nbrs) if len(a) != expected)
            raise ValidationError(
                f"graph is not regular: vertex {bad} has degree {len(nbrs[bad])}, "
                f"most vertices have degree {expected}")
        return cls(n, tuple(tuple(sorted(a)) for a in nbrs), degrees.pop())

    def laplacian(self):
        rows, cols = [], []
        for v, nbrs in enumerate(self.adjacency):
            rows.extend([v] * len(nbrs))
            cols.extend(nbrs)
        adj = scipy.sparse.csr_matrix(
            (np.ones(len(rows)), (rows, cols)), shape=(self.vertex_count,) * 2)
        return scipy.sparse.identity(self.vertex_count, format="csr") * self.degree - adj

    # small catalogue used by tests and the CLI
    @classmethod
    def cycle(cls, n: int) -> GraphSpec:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def complete(cls, n: int) -> GraphSpec:
        return cls.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def hypercube(cls, d: int) -> GraphSpec:
        return cls.from_edges(
            2**d, [(v, v ^ (1 << b)) for v in range(2**d) for b in range(d) if v < v ^ (1 << b)])

    @classmethod
    def petersen(cls) -> GraphSpec:
        outer = [(i, (i + 1) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        return cls.from_edges(10, outer + spokes + inner)


@dataclass(frozen=True)
class WalkCounts:
    origin: int
    target: int
    counts: tuple[int, ...]


def parse_edge_list(text: str, source: str = "<string>") -> GraphSpec:
    """Parse whitespace-separated ``u v`` lines; ``#`` starts a comment."""
    edges = []
    seen = set()
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValidationError(f"{source}:{lineno}: expected 'u v', got {raw.strip()!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"{source}:{lineno}: non-integer vertex id in {raw.strip()!r}")
        if u < 0 or v < 0:
            raise ValidationError(f"{source}:{lineno}: negative vertex id")
        if u == v:
            raise ValidationError(f"{source}:{lineno}: self-loop at vertex {u}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValidationError(f"{source}:{lineno}: duplicate edge {u}-{v}")
        seen.add(key)
        edges.append((u, v))
        top = max(top, u, v)
    if not edges:
        raise ValidationError(f"{source}: no edges")
    return GraphSpec.from_edges(top + 1, edges)


def load_graph(path) -> GraphSpec:
    path = Path(path)
    return parse_edge_list(path.read_text(), source=str(path))


def _walk_count_table(g: GraphSpec, origin: int, max_len: int) -> list[list[int]]:
    """``table[m][x]`` = number of non-backtracking walks origin -> x of length m."""
    if not 0 <= origin < g.vertex_count:
        raise DomainError(f"origin {origin} out of range")
    if max_len < 0:
        raise DomainError("max_len must be non-negative")
    # directed edges (u -> v), indexed by position in adjacency lists
    heads, index = [], {}
    for u, nbrs in enumerate(g.adjacency):
        for v in nbrs:
            index[(u, v)] = len(heads)
            heads.append((u, v))
    succ = [[index[(v, w)] for w in g.adjacency[v] if w != u] for (u, v) in heads]

    table = [[0] * g.vertex_count for _ in range(max_len + 1)]
    table[0][origin] = 1
    if max_len == 0:
        return table
    state = [0] * len(heads)
    for v in g.adjacency[origin]:
        state[index[(origin, v)]] = 1
    for m in range(1, max_len + 1):
        row = table[m]
        for e, cnt in enumerate(state):
            if cnt:
                row[heads[e][1]] += cnt
        if m == max_len:
            break
        nxt = [0] * len(heads)
        for e, cnt in enumerate(state):
            if cnt:
                for f in succ[e]:
                    nxt[f] += cnt
        state = nxt
    return table


def count_geodesics(g: GraphSpec, origin: int, max_len: int) -> dict[int, WalkCounts]:
    """Non-backtracking walk counts ``c_0..c_M`` from ``origin`` to every vertex."""
    table = _walk_count_table(g, origin, max_len)
    return {x: WalkCounts(origin, x, tuple(table[m][x] for m in range(max_len + 1)))
            for x in range(g.vertex_count)}


def bm_coefficients(counts, q: int) -> list[int]:
    """``b_m = c_m - (q-1) * (c_{m-2} + c_{m-4} + ...)`` in exact integers."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    c = counts.counts if isinstance(counts, WalkCounts) else tuple(counts)
    b = []
    running = [0, 0]  # sums of c over indices of each parity seen so far
    for m, cm in enumerate(c):
        b.append(cm - (q - 1) * running[m % 2])
        running[m % 2] += cm
    return b


def _block_values(q: int, t: float, max_len: int) -> np.ndarray:
    """``q^(-m/2) exp(-(q+1)t) I_m(2 sqrt(q) t)`` for ``m = 0 .. max_len``."""
    rq = math.sqrt(q)
    z = 2.0 * rq * t
    damp = math.exp(-((rq - 1.0) ** 2) * t)
    out = np.zeros(max_len + 1)
    for m in range(max_len + 1):
        val = scaled_ive(m, z)
        if val == 0.0:
            break
        out[m] = q ** (-0.5 * m) * damp * val
    return out


def _tail_bound(q: int, t: float, m: int, block_m: float) -> float:
    """Bound on ``sum_{k > m} |b_k| q^(-k/2) e^{-(q+1)t} I_k(2 sqrt(q) t)``.

    Uses ``|b_k| <= (q+2) q^(k-1)`` and ``I_{k+1}(z)/I_k(z) <= z/(2k+2)``, so the
    bounding sequence has ratio at most ``q t / (k+1)``.
    """
    ratio = q * t / (m + 1)
    if ratio >= 0.5:
        return math.inf
    first = (q + 2) * q ** (m - 1) * block_m * ratio
    return first / (1.0 - ratio)


def _choose_length(q: int, t: float, tol: float) -> int:
    m = 16
    while True:
        blocks = _block_values(q, t, m)
        if _tail_bound(q, t, m, blocks[m]) < tol:
            return m
        if m >= MAX_WALK_LENGTH:
            raise ResourceError(f"walk length cap {MAX_WALK_LENGTH} reached at t={t}")
        m = min(2 * m, MAX_WALK_LENGTH)


def _expansion(b_rows, blocks) -> np.ndarray:
    # exact integers times floats; fsum keeps the mixed-sign sum honest
    return np.array([math.fsum(float(bm) * blk for bm, blk in zip(row, blocks)) for row in b_rows])


def kernel_graph(g: GraphSpec, origin: int, target: int, t: float,
                 tol: float = 1e-13) -> float:
    """Heat kernel between two vertices via the walk-count expansion."""
    if not 0 <= target < g.vertex_count:
        raise DomainError(f"target {target} out of range")
    return float(kernel_graph_row(g, origin, t, tol)[target])


def kernel_graph_row(g: GraphSpec, origin: int, t: float, tol: float = 1e-13) -> np.ndarray:
    """Walk-count expansion evaluated for every target at once."""
    t = _check_time(t)
    q = g.q
    if t == 0.0:
        out = np.zeros(g.vertex_count)
        out[origin] = 1.0
        return out
    length = _choose_length(q, t, tol)
    table = _walk_count_table(g, origin, length)
    blocks = _block_values(q, t, length)
    b_rows = [bm_coefficients([table[m][x] for m in range(length + 1)], q)
              for x in range(g.vertex_count)]
    return _expansion(b_rows, blocks)


def matrix_exp_kernel(g: GraphSpec, origin: int, t: float) -> np.ndarray:
    """Column ``origin`` of ``exp(-t Delta_X)``.

    Dense symmetric eigendecomposition up to ``DENSE_CAP`` vertices, otherwise
    ``scipy.sparse.linalg.expm_multiply`` (truncated Taylor with scaling).
    """
    t = _check_time(t)
    n = g.vertex_count
    if n > VERTEX_CAP:
        raise ResourceError(f"{n} vertices exceeds cap {VERTEX_CAP}")
    if not 0 <= origin < n:
        raise DomainError(f"origin {origin} out of range")
    e = np.zeros(n)
    e[origin] = 1.0
    if t == 0.0:
        return e
    lap = g.laplacian()
    if n <= DENSE_CAP:
        lam, vec = scipy.linalg.eigh(lap.toarray())
        return vec @ (np.exp(-t * lam) * vec[origin])
    return scipy.sparse.linalg.expm_multiply(-t * lap.tocsc(), e)


class BetheBall:
    """Ball of radius ``radius`` in the (q+1)-regular tree, seen from its root.

    Sphere sizes are ``1, (q+1), (q+1) q, ...``.  Boundary vertices keep only
    their parent edge, as in the induced finite subgraph.
    """

    def __init__(self, q: int, radius: int):
        if q < 1 or radius < 1:
            raise DomainError("need q >= 1 and radius >= 1")
        self.q = q
        self.radius = radius

    def sphere_size(self, r: int) -> int:
        return 1 if r == 0 else (self.q + 1) * self.q ** (r - 1)

    def radial_generator(self) -> np.ndarray:
        """Generator of the sphere-occupation chain (columns sum to zero)."""
        q, R = self.q, self.radius
        gen = np.zeros((R + 1, R + 1))
        for r in range(R + 1):
            out = (q + 1 if r == 0 else q) if r < R else 0
            back = 1 if r > 0 else 0
            if r < R:
                gen[r + 1, r] += out
            if r > 0:
                gen[r - 1, r] += back
            gen[r, r] -= out + back
        return gen

    def matrix_exp_kernel(self, t: float) -> np.ndarray:
        """Heat kernel from the root to one vertex at each distance ``r``.

        The generator is symmetrized by the sphere sizes before the
        eigendecomposition; the result is the root column of ``exp(-t Delta)``
        on the finite ball.
        """
        t = _check_time(t)
        R = self.radius
        sizes = np.array([float(self.sphere_size(r)) for r in range(R + 1)])
        if t == 0.0:
            out = np.zeros(R + 1)
            out[0] = 1.0
            return out
        root = np.sqrt(sizes)
        sym = self.radial_generator() * root[None, :] / root[:, None]
        sym = 0.5 * (sym + sym.T)
        lam, vec = scipy.linalg.eigh(sym)
        occupation = root * (vec @ (np.exp(t * lam) * vec[0]))  # P(at distance r)
        return occupation / sizes

    def walk_counts(self, r: int, max_len: int) -> tuple[int, ...]:
        """Non-backtracking walks from the root to one fixed vertex at distance ``r``.

        Radial transfer over (depth, last step outward/inward) states, divided
        by the sphere size at the end.
        """
        q, R = self.q, self.radius
        if not 0 <= r <= R:
            raise DomainError(f"r must lie in 0..{R}")
        counts = [1 if r == 0 else 0]
        out = [0] * (R + 1)  # walks whose last step went outward, ending at depth d
        inn = [0] * (R + 1)
        if max_len >= 1:
            out[1] = q + 1
        for m in range(1, max_len + 1):
            counts.append((out[r] + inn[r]) // self.sphere_size(r))
            if m == max_len:
                break
            n_out = [0] * (R + 1)
            n_in = [0] * (R + 1)
            for d in range(R + 1):
                if out[d]:
                    if d < R:
                        n_out[d + 1] += out[d] * q
                if inn[d]:
                    if d > 0:
                        n_in[d - 1] += inn[d]
                    children = q + 1 if d == 0 else q
                    if d < R:
                        n_out[d + 1] += inn[d] * (children - 1)
            out, inn = n_out, n_in
        return tuple(counts[: max_len + 1])

    def kernel_graph(self, r: int, t: float, tol: float = 1e-13) -> float:
        """Walk-count expansion at distance ``r`` (the ball's interior is (q+1)-regular)."""
        t = _check_time(t)
        if t == 0.0:
            return 1.0 if r == 0 else 0.0
        length = _choose_length(self.q, t, tol)
        b = bm_coefficients(self.walk_counts(r, length), self.q)
        blocks = _block_values(self.q, t, length)
        return float(_expansion([b], blocks)[0])
