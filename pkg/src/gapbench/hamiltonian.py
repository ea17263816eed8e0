"""
The interpolating Hamiltonian

    H(s) = s (I - G)^T (I - G) + (1 - s) (I - 11^T / n)

kept as an implicit operator, plus the norm of the difference between its
two endpoints.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceWarning
from .google import GoogleOperator, exact_sum, materialize_dense

__all__ = [
    "HamiltonianOperator",
    "hamiltonian_apply",
    "materialize_hamiltonian",
    "lambda_norm",
    "NormEstimate",
    "lambda_norm_estimate",
    "LAMBDA_BOUND",
]

LAMBDA_BOUND = 5.0

_ZERO_NORM = 1e-13
_RHO_CAP = 1.0 - 1e-6


def _center(x: np.ndarray) -> np.ndarray:
    return x - exact_sum(x) / x.size


def _residual_op(G: GoogleOperator, x: np.ndarray) -> np.ndarray:
    # (I - G)^T (I - G) x
    r = x - G.apply(x)
    return r - G.transpose_apply(r)


@dataclass(frozen=True)
class HamiltonianOperator:
    google: GoogleOperator
    s: float

    def __post_init__(self):
        if not (0.0 <= self.s <= 1.0):
            raise ValueError(f"interpolation parameter s must lie in [0, 1], got {self.s}")

    @property
    def n(self) -> int:
        return self.google.n

    def apply(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected vector of length {self.n}, got shape {x.shape}")
        s = self.s
        out = (1.0 - s) * _center(x)
        if s:
            out += s * _residual_op(self.google, x)
        return out


def hamiltonian_apply(H: HamiltonianOperator, x: np.ndarray) -> np.ndarray:
    return H.apply(x)


def dense_endpoints(G: GoogleOperator, threshold: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``(I - G)^T (I - G)`` and ``I - 11^T / n``."""
    n = G.n
    a = np.eye(n) - materialize_dense(G, threshold)
    final = a.T @ a
    final = 0.5 * (final + final.T)
    initial = np.eye(n) - 1.0 / n
    return final, initial


def materialize_hamiltonian(H: HamiltonianOperator, threshold: int | None = None) -> np.ndarray:
    final, initial = dense_endpoints(H.google, threshold)
    return H.s * final + (1.0 - H.s) * initial


@dataclass(frozen=True)
class NormEstimate:
    value: float
    iterations: int
    converged: bool


def lambda_norm_estimate(
    G: GoogleOperator, tol: float = 1e-10, max_iter: int = 100_000, seed: int | None = 0
) -> NormEstimate:
    """
    Power iteration for ``||(I - G)^T (I - G) - I + 11^T/n||_2``.

    The operator M is symmetric, so its 2-norm is its spectral radius. The
    estimate ``||M v||`` for unit ``v`` is non-decreasing along the
    iteration, and converges even when the extreme eigenvalues come in a
    +/- pair where the plain Rayleigh quotient of M would oscillate.
    Stopping is on the estimate, not the vector: the last change is
    scaled by ``rho / (1 - rho)``, with ``rho`` the observed ratio of
    successive changes, and iteration ends once that projected remaining
    error is at most ``tol`` relative to the estimate. A bare change test
    stops far too early when the top two magnitudes are close.
    """
    n = G.n

    def m_apply(x: np.ndarray) -> np.ndarray:
        return _residual_op(G, x) - _center(x)

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    prev_step = math.inf
    for k in range(1, max_iter + 1):
        w = m_apply(v)
        norm = float(np.linalg.norm(w))
        if norm <= _ZERO_NORM:
            return NormEstimate(norm, k, True)
        step = norm - est
        # remaining error of a geometric sequence with observed ratio rho
        rho = min(max(step / prev_step, 0.0), _RHO_CAP) if prev_step > 0 else 0.0
        remaining = abs(step) * max(rho / (1.0 - rho), 1.0)
        if k > 1 and remaining <= tol * norm:
            return NormEstimate(norm, k, True)
        est, prev_step = norm, step
        v = w / norm
    return NormEstimate(est, max_iter, False)


def lambda_norm(G: GoogleOperator, tol: float = 1e-10, max_iter: int = 100_000, seed: int | None = 0) -> float:
    """Norm of the endpoint difference; warns with ConvergenceWarning and returns the best estimate on cap."""
    est = lambda_norm_estimate(G, tol, max_iter, seed)
    if not est.converged:
        warnings.warn(
            f"lambda_norm did not converge in {est.iterations} iterations; best estimate {est.value:.12g}",
            ConvergenceWarning,
            stacklevel=2,
        )
    return est.value


def lambda_norm_dense(G: GoogleOperator, threshold: int | None = None) -> float:
    final, initial = dense_endpoints(G, threshold)
    w = np.linalg.eigvalsh(final - initial)
    return float(max(abs(w[0]), abs(w[-1])))

