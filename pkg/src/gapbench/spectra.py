"""Lowest two eigenvalues of H(s), the gap curve, and its minimum over s."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np
import scipy.linalg as sla

from . import _runtime
from .errors import DenseThresholdError
from .google import GoogleOperator
from .hamiltonian import HamiltonianOperator, dense_endpoints

Method = Literal["auto", "dense", "iterative"]
METHODS = ("auto", "dense", "iterative")

# the two largest eigenvalues of SHIFT*I - H are SHIFT - lambda1, SHIFT - lambda2 for any
# constant; positivity of the shifted operator is not required
SHIFT = 6.0
DEFAULT_TOL = 1e-9
DEFAULT_KRYLOV_DIM = 800

__all__ = [
    "METHODS",
    "SHIFT",
    "SpectrumResult",
    "GapProfile",
    "lowest_two_eigen",
    "gap_at",
    "min_gap",
    "golden_section",
    "block_lanczos_top2",
]


@dataclass(frozen=True)
class SpectrumResult:
    lambda1: float
    lambda2: float
    residual1: float
    residual2: float
    method: str
    converged: bool = True
    iterations: int = 0
    vectors: np.ndarray | None = field(default=None, repr=False)

    @property
    def gap(self) -> float:
        return max(self.lambda2 - self.lambda1, 0.0)


@dataclass
class GapProfile:
    """
    Sampled gap curve and its minimum.

    ``samples`` holds every evaluated ``(s, gap)`` pair sorted by s, coarse
    grid and refinement points alike; ``trace`` keeps them in evaluation
    order tagged ``"coarse"`` or ``"refine"``.
    """

    samples: list[tuple[float, float]]
    s_star: float
    delta: float
    trace: list[tuple[str, float, float]]
    method: str
    degraded: bool = False
    failures: list[float] = field(default_factory=list)

    @property
    def delta_inverse(self) -> float:
        return math.inf if self.delta == 0 else 1.0 / self.delta


def _resolve_method(method: str, n: int, threshold: int | None) -> str:
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    limit = _runtime.dense_threshold() if threshold is None else threshold
    if method == "auto":
        return "dense" if n <= limit else "iterative"
    if method == "dense" and n > limit:
        raise DenseThresholdError(
            f"dense method refused: n={n} exceeds the dense threshold {limit} "
            f"(set {_runtime.DENSE_THRESHOLD_ENV} or use --method iterative)"
        )
    return method


def _dense_result(h: np.ndarray) -> SpectrumResult:
    n = h.shape[0]
    if n == 1:
        w, v = np.array([h[0, 0], math.inf]), np.ones((1, 1))
        return SpectrumResult(float(w[0]), math.inf, 0.0, 0.0, "dense", True, 0, v)
    w, v = sla.eigh(h, subset_by_index=[0, 1], driver="evr")
    r = h @ v - v * w
    res = np.linalg.norm(r, axis=0)
    return SpectrumResult(float(w[0]), float(w[1]), float(res[0]), float(res[1]), "dense", True, 0, v)


def block_lanczos_top2(
    op: Callable[[np.ndarray], np.ndarray],
    n: int,
    tol: float = DEFAULT_TOL,
    max_dim: int | None = None,
    seed: int | None = 0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int, bool]:
    """
    Two largest eigenpairs of a symmetric operator by block Lanczos, block size 2.

    Every new block is orthogonalized twice against the whole basis, and
    the projected matrix is formed as ``V^T (A V)`` from stored products,
    so the Ritz values are a plain Rayleigh-Ritz on the block Krylov space.
    Block size 2 lets a (near-)degenerate top pair be resolved from one start.

    Returns ``(theta, X, residuals, dim, converged)`` with ``theta``
    descending.
    """
    b = min(2, n)
    max_dim = min(n, DEFAULT_KRYLOV_DIM if max_dim is None else max_dim)
    max_dim = max(max_dim, b)
    rng = np.random.default_rng(seed)
    V = np.zeros((n, max_dim))
    W = np.zeros((n, max_dim))
    T = np.zeros((max_dim, max_dim))

    q, _ = np.linalg.qr(rng.standard_normal((n, b)))
    k = 0
    next_check = b
    theta = X = res = None
    while True:
        bsize = q.shape[1]
        V[:, k : k + bsize] = q
        for j in range(bsize):
            W[:, k + j] = op(q[:, j])
        T[: k + bsize, k : k + bsize] = V[:, : k + bsize].T @ W[:, k : k + bsize]
        T[k : k + bsize, :k] = T[:k, k : k + bsize].T
        k += bsize

        r = W[:, k - bsize : k].copy()
        for _ in range(2):
            r -= V[:, :k] @ (V[:, :k].T @ r)
        exhausted = k >= max_dim
        if not exhausted:
            q, rr = np.linalg.qr(r)
            scale = max(np.abs(T[:k, :k]).max(), 1.0)
            keep = np.abs(np.diag(rr)) > 1e-10 * scale
            q = q[:, keep]
            q = q[:, : max_dim - k]
            exhausted = q.shape[1] == 0
            if not exhausted:
                # one more pass keeps the kept directions orthogonal after deflation
                q -= V[:, :k] @ (V[:, :k].T @ q)
                q, _ = np.linalg.qr(q)

        if k >= next_check or exhausted:
            tk = T[:k, :k]
            tk = 0.5 * (tk + tk.T)
            w, y = np.linalg.eigh(tk)
            top = y[:, ::-1][:, :b]
            theta = w[::-1][:b]
            X = V[:, :k] @ top
            AX = W[:, :k] @ top
            res = np.linalg.norm(AX - X * theta, axis=0)
            if np.all(res <= tol):
                return theta, X, res, k, True
            if exhausted:
                return theta, X, res, k, False
            next_check = k + max(b, k // 8)


def lowest_two_eigen(
    H: HamiltonianOperator,
    method: Method = "auto",
    tol: float = DEFAULT_TOL,
    seed: int | None = 0,
    max_dim: int | None = None,
    threshold: int | None = None,
) -> SpectrumResult:
    """
    The two smallest eigenvalues of ``H(s)`` with their residual norms.

    ``dense`` diagonalizes the materialized matrix (n at most the dense
    threshold). ``iterative`` runs block Lanczos on ``6 I - H`` and maps the
    two largest Ritz values back; a result that misses ``tol`` comes back
    with ``converged=False`` rather than raising.
    """
    m = _resolve_method(method, H.n, threshold)
    if m == "dense":
        final, initial = dense_endpoints(H.google, threshold)
        return _dense_result(H.s * final + (1.0 - H.s) * initial)
    return _iterative_result(H, tol, seed, max_dim)


def _iterative_result(H: HamiltonianOperator, tol: float, seed: int | None, max_dim: int | None) -> SpectrumResult:
    if H.n == 1:
        return SpectrumResult(0.0, math.inf, 0.0, 0.0, "iterative", True, 0, np.ones((1, 1)))

    def shifted(x: np.ndarray) -> np.ndarray:
        return SHIFT * x - H.apply(x)

    theta, X, res, dim, ok = block_lanczos_top2(shifted, H.n, tol, max_dim, seed)
    lam = SHIFT - theta
    return SpectrumResult(
        float(lam[0]), float(lam[1]), float(res[0]), float(res[1]), "iterative", bool(ok), dim, X
    )


class _GapEvaluator:
    """Gap as a function of s for one operator; the dense path factors out the s-independent parts."""

    def __init__(self, G, method, tol, seed, max_dim, threshold):
        self.G = G
        self.method = _resolve_method(method, G.n, threshold)
        self.tol = tol
        self.seed = seed
        self.max_dim = max_dim
        if self.method == "dense":
            self.final, self.initial = dense_endpoints(G, threshold)

    def spectrum(self, s: float) -> SpectrumResult:
        if self.method == "dense":
            return _dense_result(s * self.final + (1.0 - s) * self.initial)
        return _iterative_result(HamiltonianOperator(self.G, s), self.tol, self.seed, self.max_dim)


def gap_at(
    G: GoogleOperator,
    s: float,
    method: Method = "auto",
    tol: float = DEFAULT_TOL,
    seed: int | None = 0,
    threshold: int | None = None,
) -> float:
    H = HamiltonianOperator(G, s)
    return lowest_two_eigen(H, method, tol, seed, threshold=threshold).gap


def golden_section(f: Callable[[float], float], a: float, b: float, tol: float) -> list[tuple[float, float]]:
    """
    Shrink ``[a, b]`` around a minimum of ``f`` until it is narrower than ``tol``.

    Returns every ``(x, f(x))`` evaluated, in order. Endpoints are not
    evaluated; callers that already know them keep their own values.
    """
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    evals: list[tuple[float, float]] = []
    if b - a <= tol:
        return evals
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    evals += [(c, fc), (d, fd)]
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
            evals.append((c, fc))
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
            evals.append((d, fd))
    return evals


def min_gap(
    G: GoogleOperator,
    coarse_points: int = 33,
    refine_tol: float = 1e-6,
    method: Method = "auto",
    tol: float = DEFAULT_TOL,
    seed: int | None = 0,
    max_dim: int | None = None,
    threshold: int | None = None,
) -> GapProfile:
    """
    Minimum over s in [0, 1] of the gap between the two lowest eigenvalues of H(s).

    A uniform coarse grid locates the best sample; golden-section search
    then refines inside the bracket formed by its two neighbours. Minima
    at s = 0 or s = 1 are caught by the grid itself, since the grid
    includes both endpoints. Coarse points are evaluated concurrently when
    more than one worker thread is configured.
    """
    if coarse_points < 9:
        raise ValueError(f"coarse grid needs at least 9 points, got {coarse_points}")
    if not refine_tol > 0:
        raise ValueError("refine_tol must be positive")
    ev = _GapEvaluator(G, method, tol, seed, max_dim, threshold)
    failures: list[float] = []

    def gap(s: float) -> float:
        r = ev.spectrum(s)
        if not r.converged:
            failures.append(s)
        return r.gap

    grid = np.linspace(0.0, 1.0, coarse_points).tolist()
    coarse = _runtime.ordered_map(gap, grid)
    trace = [("coarse", s, g) for s, g in zip(grid, coarse)]
    i = int(np.argmin(coarse))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, coarse_points - 1)]
    refined = golden_section(gap, lo, hi, refine_tol)
    trace += [("refine", s, g) for s, g in refined]

    s_star, delta = grid[i], coarse[i]
    for s, g in refined:
        if g < delta:
            s_star, delta = s, g
    samples = sorted((s, g) for _, s, g in trace)
    return GapProfile(
        samples=samples,
        s_star=float(s_star),
        delta=float(delta),
        trace=trace,
        method=ev.method,
        degraded=bool(failures),
        failures=sorted(failures),
    )
