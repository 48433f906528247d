"""Synthetic LP instances: PageRank feasibility LPs and random bounded LPs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .model import LpProblem
from .sparse import SparseMatrix


@dataclass(frozen=True)
class PagerankConfig:
    n_nodes: int
    damping: float = 0.85
    attachment: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.attachment < 1:
            raise ValueError("attachment must be >= 1")
        if self.n_nodes < self.attachment + 1:
            raise ValueError(f"n_nodes must be at least attachment + 1 = {self.attachment + 1}")
        if not 0.0 < self.damping < 1.0:
            raise ValueError("damping must lie in (0, 1)")


def preferential_attachment_edges(n_nodes: int, attachment: int, seed: int) -> np.ndarray:
    """Directed preferential-attachment graph as an ``(E, 2)`` array of (src, dst).

    Node ``i`` links to ``min(i, attachment)`` distinct earlier nodes, picked
    with probability proportional to in-degree + 1.
    """
    rng = np.random.default_rng(seed)
    # each node appears once, plus once per incoming edge
    pool = np.empty(n_nodes + n_nodes * attachment, dtype=np.int64)
    pool_len = 0
    edges = np.empty((max(0, (n_nodes - 1) * attachment), 2), dtype=np.int64)
    n_edges = 0
    pool[pool_len] = 0
    pool_len += 1
    for i in range(1, n_nodes):
        want = min(i, attachment)
        if want == i:
            targets = np.arange(i)
        else:
            chosen: set[int] = set()
            while len(chosen) < want:
                draws = pool[rng.integers(0, pool_len, size=2 * (want - len(chosen)))]
                for d in draws:
                    chosen.add(int(d))
                    if len(chosen) == want:
                        break
            targets = np.fromiter(sorted(chosen), dtype=np.int64, count=want)
        edges[n_edges:n_edges + want, 0] = i
        edges[n_edges:n_edges + want, 1] = targets
        n_edges += want
        pool[pool_len:pool_len + want] = targets
        pool_len += want
        pool[pool_len] = i
        pool_len += 1
    return edges[:n_edges]


def link_matrix(n_nodes: int, edges: np.ndarray) -> SparseMatrix:
    """Column-stochastic link matrix ``S`` with ``S[dst, src] = 1/outdeg(src)``.

    Duplicate edges collapse to one link. Nodes without out-links get a
    self-loop.
    """
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n_nodes):
        raise ValueError("edge endpoint out of range")
    edges = np.unique(edges, axis=0) if edges.size else edges
    outdeg = np.bincount(edges[:, 0], minlength=n_nodes) if edges.size else np.zeros(n_nodes, dtype=np.int64)
    dangling = np.flatnonzero(outdeg == 0)
    src = np.concatenate([edges[:, 0], dangling])
    dst = np.concatenate([edges[:, 1], dangling])
    outdeg[dangling] = 1
    return SparseMatrix.from_triplets(dst, src, 1.0 / outdeg[src], shape=(n_nodes, n_nodes))


def pagerank_lp(n_nodes: int, edges: np.ndarray, damping: float = 0.85, name: str = "pagerank") -> LpProblem:
    """Feasibility LP whose solutions include the PageRank vector.

        (I - damping S) x >= (1 - damping)/n,   sum(x) = 1,   x >= 0

    ``n_nodes + 1`` rows and ``n_nodes`` columns, zero objective.
    """
    s = link_matrix(n_nodes, edges).csr
    g = sp.identity(n_nodes, format="csr") - damping * s
    return LpProblem(
        a=SparseMatrix(np.ones((1, n_nodes))),
        g=SparseMatrix(g),
        c=np.zeros(n_nodes),
        b=np.ones(1),
        h=np.full(n_nodes, (1.0 - damping) / n_nodes),
        l=np.zeros(n_nodes),
        u=np.full(n_nodes, np.inf),
        name=name,
    )


def gen_pagerank(cfg: PagerankConfig) -> LpProblem:
    """PageRank LP on a seeded preferential-attachment digraph."""
    edges = preferential_attachment_edges(cfg.n_nodes, cfg.attachment, cfg.seed)
    return pagerank_lp(cfg.n_nodes, edges, cfg.damping, name=f"pagerank_{cfg.n_nodes}_s{cfg.seed}")


def pagerank_vector(n_nodes: int, edges: np.ndarray, damping: float = 0.85, tol: float = 1e-14, max_iter: int = 10_000) -> np.ndarray:
    """Power iteration for ``x = damping S x + (1 - damping)/n``."""
    s = link_matrix(n_nodes, edges)
    x = np.full(n_nodes, 1.0 / n_nodes)
    teleport = (1.0 - damping) / n_nodes
    for _ in range(max_iter):
        x_next = damping * s.matvec(x) + teleport
        if np.abs(x_next - x).sum() < tol:
            return x_next
        x = x_next
    return x


def read_edge_list(path: str | Path) -> tuple[int, np.ndarray]:
    """Read whitespace-separated ``src dst`` pairs, skipping ``#`` comments.

    Node ids are relabelled to ``0..n-1`` in increasing order of the original
    id. Returns ``(n_nodes, edges)``.
    """
    pairs = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) < 2:
                raise ValueError(f"{path}:{lineno}: expected 'src dst'")
            pairs.append((int(parts[0]), int(parts[1])))
    raw = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    ids, inverse = np.unique(raw, return_inverse=True)
    return len(ids), inverse.reshape(-1, 2)


def gen_random_lp(
    m: int,
    n: int,
    density: float = 0.5,
    seed: int = 0,
    n_eq: int = 0,
) -> LpProblem:
    """Random feasible LP in the unit box.

    Samples ``x_hat`` in ``[0, 1]^n`` and a random ``G`` with ``h = G x_hat - |noise|``,
    so ``x_hat`` is feasible; ``n_eq`` optional equality rows use ``b = A x_hat``.
    Every matrix row gets at least one nonzero.
    """
    return random_lp_with_witness(m, n, density, seed, n_eq)[0]


def random_lp_with_witness(
    m: int, n: int, density: float = 0.5, seed: int = 0, n_eq: int = 0
) -> tuple[LpProblem, np.ndarray]:
    """:func:`gen_random_lp` plus the feasible point it was built around."""
    if not 0.0 < density <= 1.0:
        raise ValueError("density must lie in (0, 1]")
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    rng = np.random.default_rng(seed)
    x_hat = rng.uniform(0.0, 1.0, n)
    g = _random_rows(rng, m, n, density)
    h = g @ x_hat - np.abs(rng.standard_normal(m))
    a = _random_rows(rng, n_eq, n, density)
    b = a @ x_hat
    c = rng.standard_normal(n)
    problem = LpProblem(
        a=SparseMatrix(a, shape=(n_eq, n)),
        g=SparseMatrix(g),
        c=c,
        b=b,
        h=h,
        l=np.zeros(n),
        u=np.ones(n),
        name=f"random_{m}x{n}_s{seed}",
    )
    return problem, x_hat


def _random_rows(rng: np.random.Generator, rows: int, cols: int, density: float) -> np.ndarray:
    mat = rng.standard_normal((rows, cols))
    mask = rng.uniform(size=(rows, cols)) < density
    forced = rng.integers(0, cols, size=rows)
    mask[np.arange(rows), forced] = True
    return np.where(mask, mat, 0.0)
