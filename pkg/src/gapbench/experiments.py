"""Scaling studies, adversarial search over transition matrices, and runtime-bound arithmetic."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import _runtime
from .google import GoogleOperator, StochasticOperator, transition_matrix
from .graph import DirectedGraph, ScaleFreeParams, scale_free_graph, uniform_random_graph, worst_case_graph
from .spectra import GapProfile, min_gap

__all__ = [
    "SolverConfig",
    "ScalingFit",
    "fit_power_law",
    "WorstCaseScan",
    "worst_case_scaling",
    "RandomFamilyScan",
    "random_family_scaling",
    "www_scaling",
    "AdversaryResult",
    "adversarial_search",
    "deterministic_graph",
    "relabel_signature",
    "worst_case_columns",
    "RuntimeModel",
    "RuntimeReport",
    "runtime_report",
    "WORST_CASE_PREFACTOR",
]

# reference prefactor in 1/delta ~ 0.5 (1 - alpha)^-2 n
WORST_CASE_PREFACTOR = 0.5

EXHAUSTIVE_MAX_N = 5

# relative margin a candidate must beat the incumbent by; equal gaps from relabelings must not count
_IMPROVEMENT_MARGIN = 1e-9


@dataclass(frozen=True)
class SolverConfig:
    method: str = "auto"
    coarse_points: int = 33
    refine_tol: float = 1e-6
    tol: float = 1e-9
    seed: int | None = 0
    policy: str = "uniform"

    def profile(self, G: GoogleOperator) -> GapProfile:
        return min_gap(G, self.coarse_points, self.refine_tol, self.method, self.tol, self.seed)

    def delta(self, graph: DirectedGraph, alpha: float) -> GapProfile:
        return self.profile(GoogleOperator.from_graph(graph, alpha, self.policy))


# ---------------------------------------------------------------------------
# power-law fits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScalingFit:
    """``y = prefactor * n ** exponent`` fitted in log space; ``residuals`` are log-space."""

    points: list[tuple[float, float]]
    exponent: float
    prefactor: float
    r_squared: float
    residuals: list[float] = field(default_factory=list)

    def predict(self, n) -> np.ndarray:
        return self.prefactor * np.asarray(n, dtype=float) ** self.exponent


def fit_power_law(points: Sequence[tuple[float, float]]) -> ScalingFit:
    """Least-squares line through ``(log n, log y)``."""
    pts = [(float(n), float(y)) for n, y in points]
    if len(pts) < 3:
        raise ValueError(f"power-law fit needs at least 3 points, got {len(pts)}")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.any(x <= 0) or np.any(y <= 0) or not np.all(np.isfinite(y)):
        raise ValueError("power-law fit needs finite positive n and y")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise ValueError("power-law fit is degenerate: all n are equal")
    A = np.column_stack([lx, np.ones_like(lx)])
    (beta, logc), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (beta * lx + logc)
    ss_res = float(resid @ resid)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return ScalingFit(pts, float(beta), float(math.exp(logc)), r2, resid.tolist())


# ---------------------------------------------------------------------------
# scaling studies
# ---------------------------------------------------------------------------


@dataclass
class WorstCaseScan:
    alpha: float
    points: list[tuple[int, float, float]]  # (n, delta, s_star)
    fit: ScalingFit | None
    rescaled_prefactor: float | None
    diagnostic: str = ""
    degraded: bool = False


def worst_case_scaling(
    alphas: Sequence[float], ns: Sequence[int], solver: SolverConfig | None = None
) -> dict[float, WorstCaseScan]:
    """
    Minimum gap of the worst-case graph over ``ns`` for each damping factor.

    The fitted prefactor ``c`` of ``1/delta = c n^beta`` is reported
    rescaled by ``(1 - alpha)^2`` for comparison with 0.5.
    """
    solver = solver or SolverConfig()
    ns = [int(n) for n in ns]
    if any(n < 8 for n in ns):
        raise ValueError("worst-case scaling needs every n >= 8")
    work = [(a, n) for a in alphas for n in ns]

    def run(item):
        a, n = item
        return solver.delta(worst_case_graph(n), a)

    profiles = _runtime.ordered_map(run, work)
    out: dict[float, WorstCaseScan] = {}
    for a in alphas:
        rows = [(n, p) for (aa, n), p in zip(work, profiles) if aa == a]
        points = [(n, p.delta, p.s_star) for n, p in rows]
        degraded = any(p.degraded for _, p in rows)
        scan = WorstCaseScan(float(a), points, None, None, degraded=degraded)
        if a == 0:
            scan.diagnostic = "fit rejected: alpha=0 gives a flat gap of 1, the scaling law does not apply"
        elif len(points) < 3:
            scan.diagnostic = "fit skipped: fewer than 3 sizes"
        else:
            scan.fit = fit_power_law([(n, 1.0 / d) for n, d, _ in points])
            scan.rescaled_prefactor = scan.fit.prefactor * (1.0 - a) ** 2
        if degraded:
            scan.diagnostic = (scan.diagnostic + "; " if scan.diagnostic else "") + "solver did not converge on some points"
        out[float(a)] = scan
    return out


@dataclass
class RandomFamilyScan:
    alpha: float
    raw: list[tuple[int, int, float]]  # (n, seed, delta)
    medians: list[tuple[int, float]]  # (n, median 1/delta)
    fit: ScalingFit
    generator: dict = field(default_factory=dict)
    degraded: bool = False


def random_family_scaling(
    make_graph: Callable[[int, int], DirectedGraph],
    ns: Sequence[int],
    seeds: int,
    alpha: float,
    solver: SolverConfig | None = None,
    base_seed: int = 0,
    generator: dict | None = None,
) -> RandomFamilyScan:
    """Median ``1/delta`` over ``seeds`` graphs per size, fitted to a power law. Graph seed is ``base_seed + i``."""
    solver = solver or SolverConfig()
    if seeds < 1:
        raise ValueError("need at least one seed per size")
    work = [(int(n), base_seed + i) for n in ns for i in range(seeds)]

    def run(item):
        n, sd = item
        return solver.delta(make_graph(n, sd), alpha)

    profiles = _runtime.ordered_map(run, work)
    raw = [(n, sd, p.delta) for (n, sd), p in zip(work, profiles)]
    medians = []
    for n in dict.fromkeys(int(n) for n in ns):
        inv = [1.0 / d for nn, _, d in raw if nn == n]
        medians.append((n, float(np.median(inv))))
    return RandomFamilyScan(
        float(alpha),
        raw,
        medians,
        fit_power_law(medians),
        dict(generator or {}),
        degraded=any(p.degraded for p in profiles),
    )


def www_scaling(
    params: ScaleFreeParams | None,
    ns: Sequence[int],
    seeds: int,
    alpha: float,
    solver: SolverConfig | None = None,
    base_seed: int = 0,
) -> RandomFamilyScan:
    params = params or ScaleFreeParams()
    params.validate()
    return random_family_scaling(
        lambda n, sd: scale_free_graph(n, params, sd),
        ns,
        seeds,
        alpha,
        solver,
        base_seed,
        {"family": "scale-free", **params.as_dict()},
    )


def uniform_scaling(
    edges_per_vertex: float,
    ns: Sequence[int],
    seeds: int,
    alpha: float,
    solver: SolverConfig | None = None,
    base_seed: int = 0,
) -> RandomFamilyScan:
    return random_family_scaling(
        lambda n, sd: uniform_random_graph(n, min(n * n, round(edges_per_vertex * n)), sd),
        ns,
        seeds,
        alpha,
        solver,
        base_seed,
        {"family": "uniform", "edges_per_vertex": edges_per_vertex},
    )


# ---------------------------------------------------------------------------
# adversarial search over deterministic P
# ---------------------------------------------------------------------------


def deterministic_graph(columns: Sequence[int]) -> DirectedGraph:
    """Graph whose transition matrix has row i equal to the basis vector ``e_{columns[i]}``."""
    n = len(columns)
    return DirectedGraph.from_arrays(n, np.arange(n), np.asarray(columns))


def worst_case_columns(n: int) -> tuple[int, ...]:
    g = worst_case_graph(n)
    return tuple(int(t) for t in g.targets)


def relabel_signature(columns: Sequence[int]) -> tuple[int, ...]:
    """Sorted in-degree profile; invariant under vertex relabeling."""
    return tuple(sorted(np.bincount(np.asarray(columns), minlength=len(columns)).tolist()))


@dataclass
class AdversaryResult:
    operator: StochasticOperator
    columns: tuple[int, ...]
    delta: float
    strategy: str
    candidates: list[tuple[tuple[int, ...], float]]
    evaluations: int
    complete: bool
    start_delta: float | None = None

    @property
    def improved(self) -> bool:
        return self.start_delta is not None and self.delta < self.start_delta * (1 - _IMPROVEMENT_MARGIN)

    @property
    def graph(self) -> DirectedGraph:
        return deterministic_graph(self.columns)


def adversarial_search(
    n: int,
    alpha: float,
    strategy: str = "exhaustive",
    budget: int | None = None,
    seed: int | None = 0,
    start: Sequence[int] | None = None,
    restarts: int = 0,
    patience: int | None = None,
    solver: SolverConfig | None = None,
) -> AdversaryResult:
    """
    Search deterministic transition matrices for the smallest minimum gap.

    ``exhaustive`` walks all ``n**n`` matrices in lexicographic order of
    their column tuples (n at most 5) and is exact for that class unless
    ``budget`` stops it early. ``hill-climb`` moves one row's target at a
    time, keeps strict improvements, and after ``patience`` consecutive
    rejections restarts from a random matrix while ``restarts`` remain.
    ``complete`` is False when the budget ran out first.
    """
    solver = solver or SolverConfig()
    if n < 2:
        raise ValueError("adversarial search needs n >= 2")

    def evaluate(cols: tuple[int, ...]) -> float:
        return solver.delta(deterministic_graph(cols), alpha).delta

    if strategy == "exhaustive":
        if n > EXHAUSTIVE_MAX_N:
            raise ValueError(
                f"exhaustive search is limited to n <= {EXHAUSTIVE_MAX_N} ({n}**{n} candidates requested)"
            )
        total = n**n
        limit = total if budget is None else min(budget, total)
        cands = list(itertools.islice(itertools.product(range(n), repeat=n), limit))
        deltas = _runtime.ordered_map(evaluate, cands)
        candidates = list(zip(cands, deltas))
        best_cols, best = min(candidates, key=lambda c: c[1])
        return AdversaryResult(
            transition_matrix(deterministic_graph(best_cols)),
            best_cols,
            best,
            strategy,
            candidates,
            len(candidates),
            complete=limit == total,
        )

    if strategy != "hill-climb":
        raise ValueError(f"unknown strategy {strategy!r}; choose 'exhaustive' or 'hill-climb'")
    budget = 200 if budget is None else budget
    if budget < 1:
        raise ValueError("budget must be positive")
    patience = n * (n - 1) if patience is None else patience
    rng = np.random.default_rng(seed)
    current = tuple(start) if start is not None else worst_case_columns(n)
    if len(current) != n or any(not 0 <= c < n for c in current):
        raise ValueError("start must list one target column in [0, n) per row")
    cur_delta = evaluate(current)
    start_delta = cur_delta
    candidates = [(current, cur_delta)]
    best_cols, best = current, cur_delta
    stale = 0
    while len(candidates) < budget:
        if stale >= patience:
            if restarts <= 0:
                break
            restarts -= 1
            current = tuple(int(c) for c in rng.integers(0, n, size=n))
            cur_delta = evaluate(current)
            candidates.append((current, cur_delta))
            stale = 0
        else:
            i = int(rng.integers(n))
            j = int(rng.integers(n - 1))
            j = j + 1 if j >= current[i] else j
            cand = current[:i] + (j,) + current[i + 1 :]
            d = evaluate(cand)
            candidates.append((cand, d))
            if d < cur_delta * (1 - _IMPROVEMENT_MARGIN):
                current, cur_delta, stale = cand, d, 0
            else:
                stale += 1
        if cur_delta < best * (1 - _IMPROVEMENT_MARGIN):
            best_cols, best = current, cur_delta
    return AdversaryResult(
        transition_matrix(deterministic_graph(best_cols)),
        best_cols,
        best,
        strategy,
        candidates,
        len(candidates),
        complete=len(candidates) < budget,
        start_delta=start_delta,
    )


# ---------------------------------------------------------------------------
# runtime-bound arithmetic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RuntimeModel:
    """
    Adiabatic runtime proxy ``log(1/eps)**a_exponent * delta**(-b_exponent)``.

    The defaults are the best case: runtime linear in ``log(1/eps)`` and in
    the inverse gap.
    """

    a_exponent: float = 1.0
    b_exponent: float = 1.0

    def __post_init__(self):
        if not (self.a_exponent > 0 and self.b_exponent > 0):
            raise ValueError("runtime exponents must be positive")

    def proxy(self, delta: float, epsilon: float) -> float:
        return math.log(1.0 / epsilon) ** self.a_exponent * delta ** (-self.b_exponent)


@dataclass(frozen=True)
class RuntimeReport:
    n: int
    alpha: float
    epsilon: float
    delta: float
    classical_iterations: int
    quantum_proxy: float
    worst_case_proxy: float
    quantum_over_classical: float
    worst_case_over_classical: float
    quantum_over_worst_case: float

    def as_rows(self) -> list[tuple[str, float]]:
        return [(k, getattr(self, k)) for k in self.__dataclass_fields__]


def runtime_report(
    n: int, alpha: float, epsilon: float, delta: float, model: RuntimeModel | None = None
) -> RuntimeReport:
    """Constant-free comparison of the classical iteration bound with the adiabatic proxies."""
    model = model or RuntimeModel()
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    log_inv_eps = math.log(1.0 / epsilon)
    classical = math.ceil(math.log(epsilon) / math.log(alpha))
    quantum = model.proxy(delta, epsilon)
    worst = WORST_CASE_PREFACTOR * n / (1.0 - alpha) ** 2 * log_inv_eps
    return RuntimeReport(
        n=int(n),
        alpha=float(alpha),
        epsilon=float(epsilon),
        delta=float(delta),
        classical_iterations=classical,
        quantum_proxy=quantum,
        worst_case_proxy=worst,
        quantum_over_classical=quantum / classical,
        worst_case_over_classical=worst / classical,
        quantum_over_worst_case=quantum / worst,
    )
