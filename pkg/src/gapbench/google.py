"""Row-stochastic transition matrices and the implicit Google operator."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np
import scipy.sparse as sp

from . import _runtime
from .errors import DenseThresholdError
from .graph import DirectedGraph

DanglingPolicy = Literal["uniform", "self-loop"]
DANGLING_POLICIES = ("uniform", "self-loop")

__all__ = [
    "DANGLING_POLICIES",
    "StochasticOperator",
    "GoogleOperator",
    "transition_matrix",
    "google_apply",
    "google_transpose_apply",
    "materialize_dense",
    "exact_sum",
]


def exact_sum(x: np.ndarray) -> float:
    """Correctly rounded sum, independent of summation order."""
    return math.fsum(x.tolist())


def _csr_matvec(a: sp.csr_matrix, x: np.ndarray) -> np.ndarray:
    # each row's dot product is computed the same way whatever the partition,
    # so the threaded path is bit-identical to the serial one
    k = _runtime.get_threads()
    rows = a.shape[0]
    if k == 1 or rows < _runtime.PARALLEL_MIN_ROWS:
        return a @ x
    bounds = np.linspace(0, rows, k + 1, dtype=np.int64)
    out = np.empty(rows, dtype=np.result_type(a.dtype, x.dtype))

    def block(i: int) -> None:
        lo, hi = bounds[i], bounds[i + 1]
        out[lo:hi] = a[lo:hi] @ x

    with ThreadPoolExecutor(max_workers=k) as pool:
        list(pool.map(block, range(k)))
    return out


@dataclass(frozen=True, eq=False)
class StochasticOperator:
    """
    Sparse row-stochastic matrix P built from a graph.

    ``links`` holds ``1/outdeg(i)`` at each edge ``(i, j)``. Under the
    ``"uniform"`` policy dangling rows are all ``1/n`` but are never stored;
    they enter :meth:`apply` and :meth:`transpose_apply` as a rank-1
    correction. Under ``"self-loop"`` they are stored as a diagonal 1.
    """

    n: int
    links: sp.csr_matrix
    links_t: sp.csr_matrix
    dangling: np.ndarray
    policy: str

    def _check(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got shape {x.shape}")
        return x

    def apply(self, x: np.ndarray) -> np.ndarray:
        """P x."""
        x = self._check(x)
        y = _csr_matvec(self.links, x)
        if self.policy == "uniform" and self.dangling.any():
            y[self.dangling] += exact_sum(x) / self.n
        return y

    def transpose_apply(self, x: np.ndarray) -> np.ndarray:
        """P^T x."""
        x = self._check(x)
        y = _csr_matvec(self.links_t, x)
        if self.policy == "uniform" and self.dangling.any():
            y += exact_sum(x[self.dangling]) / self.n
        return y

    def to_dense(self) -> np.ndarray:
        p = self.links.toarray()
        if self.policy == "uniform":
            p[self.dangling, :] = 1.0 / self.n
        return p

    @property
    def nnz(self) -> int:
        return int(self.links.nnz)

    def row_sums(self) -> np.ndarray:
        s = np.asarray(self.links.sum(axis=1)).ravel()
        if self.policy == "uniform":
            s[self.dangling] += 1.0
        return s


def transition_matrix(graph: DirectedGraph, policy: DanglingPolicy = "uniform") -> StochasticOperator:
    if policy not in DANGLING_POLICIES:
        raise ValueError(f"unknown dangling policy {policy!r}; choose from {DANGLING_POLICIES}")
    n = graph.n
    outdeg = graph.out_degree()
    dangling = outdeg == 0
    rows, cols = graph.sources, graph.targets
    data = 1.0 / outdeg[rows]
    if policy == "self-loop" and dangling.any():
        idx = np.flatnonzero(dangling)
        rows = np.concatenate([rows, idx])
        cols = np.concatenate([cols, idx])
        data = np.concatenate([data, np.ones(idx.size)])
    links = sp.csr_matrix((data, (rows, cols)), shape=(n, n))
    links.sort_indices()
    links_t = links.T.tocsr()
    links_t.sort_indices()
    dangling = dangling.copy()
    dangling.setflags(write=False)
    return StochasticOperator(n, links, links_t, dangling, policy)


@dataclass(frozen=True, eq=False)
class GoogleOperator:
    """G = alpha P^T + (1 - alpha) 11^T / n, applied without forming the rank-1 term."""

    stochastic: StochasticOperator
    alpha: float

    def __post_init__(self):
        if not (0.0 <= self.alpha < 1.0):
            raise ValueError(f"damping factor must lie in [0, 1), got {self.alpha}")

    @classmethod
    def from_graph(
        cls, graph: DirectedGraph, alpha: float, policy: DanglingPolicy = "uniform"
    ) -> "GoogleOperator":
        return cls(transition_matrix(graph, policy), float(alpha))

    @property
    def n(self) -> int:
        return self.stochastic.n

    def apply(self, x: np.ndarray) -> np.ndarray:
        """G x = alpha P^T x + (1 - alpha) mean(x) 1."""
        y = self.stochastic.transpose_apply(x)
        y *= self.alpha
        y += (1.0 - self.alpha) * exact_sum(np.asarray(x, dtype=float)) / self.n
        return y

    def transpose_apply(self, x: np.ndarray) -> np.ndarray:
        """G^T x = alpha P x + (1 - alpha) mean(x) 1."""
        y = self.stochastic.apply(x)
        y *= self.alpha
        y += (1.0 - self.alpha) * exact_sum(np.asarray(x, dtype=float)) / self.n
        return y


def google_apply(G: GoogleOperator, x: np.ndarray) -> np.ndarray:
    return G.apply(x)


def google_transpose_apply(G: GoogleOperator, x: np.ndarray) -> np.ndarray:
    return G.transpose_apply(x)


def materialize_dense(G: GoogleOperator, threshold: int | None = None) -> np.ndarray:
    """Dense n-by-n G. Refuses above the dense threshold (env ``GAPBENCH_DENSE_THRESHOLD``)."""
    limit = _runtime.dense_threshold() if threshold is None else threshold
    if G.n > limit:
        raise DenseThresholdError(
            f"n={G.n} exceeds the dense threshold {limit}; use the iterative method "
            f"or raise {_runtime.DENSE_THRESHOLD_ENV}"
        )
    dense = G.alpha * G.stochastic.to_dense().T
    dense += (1.0 - G.alpha) / G.n
    return dense
