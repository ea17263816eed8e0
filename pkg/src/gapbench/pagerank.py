"""Power-method PageRank and the two extraction operations (single element, inner product)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError
from .google import GoogleOperator, exact_sum

__all__ = ["PageRankResult", "power_method", "iteration_bound", "get_element", "inner_product"]

# sum drift allowed before the iteration is considered broken
_DRIFT_LIMIT = 1e-9


@dataclass(frozen=True)
class PageRankResult:
    pi: np.ndarray
    iterations: int
    residual: float
    epsilon: float
    alpha: float
    converged: bool = True

    @property
    def n(self) -> int:
        return int(self.pi.size)


def iteration_bound(alpha: float, epsilon: float) -> int:
    """ceil(ln eps / ln alpha) + 2; the power method never needs more than this."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if alpha <= 0.0:
        return 2
    return math.ceil(math.log(epsilon) / math.log(alpha)) + 2


def power_method(G: GoogleOperator, epsilon: float = 1e-8, max_iter: int = 10_000) -> PageRankResult:
    """
    Iterate ``x <- G x`` from the uniform vector until the L1 step is at most ``epsilon``.

    Raises ConvergenceError (with the partial result attached) if
    ``max_iter`` applications do not reach the tolerance.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    n = G.n
    x = np.full(n, 1.0 / n)
    residual = math.inf
    for k in range(1, max_iter + 1):
        y = G.apply(x)
        residual = float(np.abs(y - x).sum())
        x = y
        if residual <= epsilon:
            break
    drift = abs(exact_sum(x) - 1.0)
    assert drift < _DRIFT_LIMIT, f"probability mass drifted by {drift:g}"
    result = PageRankResult(x, k, residual, epsilon, G.alpha, converged=residual <= epsilon)
    if not result.converged:
        raise ConvergenceError(
            f"power method did not reach epsilon={epsilon:g} in {max_iter} iterations "
            f"(residual {residual:.3g})",
            result,
        )
    return result


def get_element(r: PageRankResult, i: int) -> float:
    if not 0 <= i < r.n:
        raise IndexError(f"vertex index {i} out of range [0, {r.n})")
    return float(r.pi[i])


def inner_product(r1: PageRankResult, r2: PageRankResult) -> float:
    if r1.n != r2.n:
        raise ValueError(f"dimension mismatch: {r1.n} vs {r2.n}")
    return math.fsum((r1.pi * r2.pi).tolist())
