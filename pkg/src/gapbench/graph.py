"""Directed graphs, the edge-list text format, and the three generator families."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import GraphFormatError

__all__ = [
    "DirectedGraph",
    "ScaleFreeParams",
    "load_edge_list",
    "dump_edge_list",
    "read_edge_list",
    "write_edge_list",
    "worst_case_graph",
    "scale_free_graph",
    "uniform_random_graph",
]


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """
    Immutable directed graph on vertices ``0..n-1``.

    Edges are held as two parallel int64 arrays sorted lexicographically by
    (source, target), so two graphs with the same edge set compare equal
    regardless of the order the edges were supplied in. Self-loops are
    allowed, duplicate edges are not.
    """

    n: int
    sources: np.ndarray
    targets: np.ndarray

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "DirectedGraph":
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        return cls.from_arrays(n, pairs[:, 0], pairs[:, 1])

    @classmethod
    def from_arrays(cls, n: int, sources, targets) -> "DirectedGraph":
        n = int(n)
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        src = np.asarray(sources, dtype=np.int64).ravel()
        dst = np.asarray(targets, dtype=np.int64).ravel()
        if src.shape != dst.shape:
            raise ValueError("sources and targets differ in length")
        if src.size and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise ValueError(f"edge index out of range [0, {n})")
        keys = src * n + dst
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        if keys.size > 1 and np.any(keys[1:] == keys[:-1]):
            dup = int(keys[1:][keys[1:] == keys[:-1]][0])
            raise ValueError(f"duplicate edge ({dup // n}, {dup % n})")
        src, dst = src[order], dst[order]
        src.setflags(write=False)
        dst.setflags(write=False)
        return cls(n, src, dst)

    @property
    def m(self) -> int:
        return int(self.sources.size)

    @property
    def edges(self) -> list[tuple[int, int]]:
        return list(zip(self.sources.tolist(), self.targets.tolist()))

    def out_degree(self) -> np.ndarray:
        return np.bincount(self.sources, minlength=self.n)

    def in_degree(self) -> np.ndarray:
        return np.bincount(self.targets, minlength=self.n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.sources, other.sources)
            and np.array_equal(self.targets, other.targets)
        )

    def __hash__(self) -> int:
        return hash((self.n, self.sources.tobytes(), self.targets.tobytes()))

    def __repr__(self) -> str:
        return f"DirectedGraph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------------------
# edge-list text format
# ---------------------------------------------------------------------------


def load_edge_list(text: str) -> DirectedGraph:
    """
    Parse the line-oriented edge-list format.

    ``#`` lines and blank lines are skipped. The first content line must be
    ``n <count>``; each following line is ``u v``. Errors carry the 1-based
    line number of the offending line.
    """
    n: int | None = None
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise GraphFormatError("expected header 'n <count>'", lineno)
            try:
                n = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"bad vertex count {parts[1]!r}", lineno) from None
            if n < 1:
                raise GraphFormatError("vertex count must be positive", lineno)
            continue
        if len(parts) != 2:
            raise GraphFormatError(f"malformed edge line {line!r}", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"malformed edge line {line!r}", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError("index out of range", lineno)
        if (u, v) in seen:
            raise GraphFormatError(f"duplicate edge ({u}, {v})", lineno)
        seen.add((u, v))
        edges.append((u, v))
    if n is None:
        raise GraphFormatError("missing header 'n <count>'")
    return DirectedGraph.from_edges(n, edges)


def dump_edge_list(graph: DirectedGraph, header: Iterable[str] = ()) -> str:
    """Serialize ``graph``; ``header`` lines are emitted first as ``#`` comments."""
    lines = [f"# {h}" for h in header]
    lines.append(f"n {graph.n}")
    lines.extend(f"{u} {v}" for u, v in zip(graph.sources.tolist(), graph.targets.tolist()))
    return "\n".join(lines) + "\n"


def read_edge_list(path: str | Path) -> DirectedGraph:
    return load_edge_list(Path(path).read_text())


def write_edge_list(graph: DirectedGraph, path: str | Path, header: Iterable[str] = ()) -> None:
    Path(path).write_text(dump_edge_list(graph, header))


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------


def worst_case_graph(n: int) -> DirectedGraph:
    """
    The gap-minimizing deterministic transition structure.

    The first ``n // 2`` vertices all link to vertex 0 and the remaining
    ``n - n // 2`` link to vertex ``n - 1``; both sinks carry self-loops.
    """
    if n < 2:
        raise ValueError(f"worst-case graph needs n >= 2, got {n}")
    half = n // 2
    src = np.arange(n)
    dst = np.where(src < half, 0, n - 1)
    return DirectedGraph.from_arrays(n, src, dst)


def uniform_random_graph(n: int, m: int, seed: int | None = 0) -> DirectedGraph:
    """``m`` distinct edges drawn uniformly from all ``n*n`` ordered pairs (self-loops included)."""
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    if not 0 <= m <= n * n:
        raise ValueError(f"edge count must lie in [0, n^2] = [0, {n * n}], got {m}")
    rng = np.random.default_rng(seed)
    keys = rng.choice(n * n, size=m, replace=False)
    return DirectedGraph.from_arrays(n, keys // n, keys % n)


@dataclass(frozen=True)
class ScaleFreeParams:
    """
    Mixture weights and degree offsets for directed preferential attachment.

    Each step either adds a new vertex with an edge to an existing one
    (``p_new_source``), adds an edge between existing vertices
    (``p_existing``), or adds a new vertex receiving an edge
    (``p_new_target``). Targets are drawn with weight ``in_degree +
    delta_in`` and sources with ``out_degree + delta_out``; the offsets set
    the tail exponents of the in- and out-degree distributions.

    Defaults are the mixture of Bollobás, Borgs, Chayes and Riordan (2003).
    """

    p_new_source: float = 0.41
    p_existing: float = 0.54
    p_new_target: float = 0.05
    delta_in: float = 0.2
    delta_out: float = 0.0

    def validate(self) -> None:
        probs = (self.p_new_source, self.p_existing, self.p_new_target)
        if any(p < 0 for p in probs):
            raise ValueError("mixture probabilities must be non-negative")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise ValueError(f"mixture probabilities must sum to 1, got {sum(probs)}")
        if self.p_new_source + self.p_new_target <= 0:
            raise ValueError("at least one vertex-creating move needs positive probability")
        if self.delta_in < 0 or self.delta_out < 0:
            raise ValueError("degree offsets must be non-negative")

    def as_dict(self) -> dict[str, float]:
        return asdict(self)


def scale_free_graph(
    n: int, params: ScaleFreeParams | None = None, seed: int | None = 0
) -> DirectedGraph:
    """
    WWW-like directed graph from a preferential-attachment process.

    Starts from a 2-cycle and runs until ``n`` vertices exist. Moves that
    would create a self-loop or repeat an existing edge are discarded, so
    the result is a simple digraph. Vertices created as targets start with
    out-degree zero, which is what produces dangling pages.
    """
    if n < 2:
        raise ValueError(f"scale-free graph needs n >= 2, got {n}")
    params = params or ScaleFreeParams()
    params.validate()
    rng = np.random.default_rng(seed)

    a = params.p_new_source
    ab = a + params.p_existing
    src: list[int] = [0, 1]
    dst: list[int] = [1, 0]
    present = {(0, 1), (1, 0)}
    count = 2

    def pick(ends: list[int], delta: float) -> int:
        # weight deg(v) + delta: a uniform edge endpoint, or a uniform vertex
        m = len(ends)
        if rng.random() * (m + delta * count) < m:
            return ends[int(rng.random() * m)]
        return int(rng.random() * count)

    while count < n:
        r = rng.random()
        if r < a:
            v, w = count, pick(dst, params.delta_in)
            count += 1
        elif r < ab:
            v, w = pick(src, params.delta_out), pick(dst, params.delta_in)
            if v == w or (v, w) in present:
                continue
        else:
            v, w = pick(src, params.delta_out), count
            count += 1
        present.add((v, w))
        src.append(v)
        dst.append(w)
    return DirectedGraph.from_arrays(n, src, dst)
