"""Dependency pruning: keep a subset of labeling functions with no
strong pairwise correlation.

Pipeline: pairwise Pearson correlations over the raw verdict columns
(abstain = 0 included), a dependency graph with an edge wherever
|correlation| exceeds the threshold, maximal cliques via Bron-Kerbosch,
then a greedy walk that keeps one representative per clique.  LFs that
sit in many cliques are examined first; ties break by coverage (higher
first), then by original index, so the result is fully deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .matrix import LabelMatrix, coverages

__all__ = [
    "DependencyGraph",
    "LFRanking",
    "correlation_matrix",
    "build_dependency_graph",
    "maximal_cliques",
    "rank_lfs",
    "select_independent",
    "prune",
]


@dataclass(frozen=True)
class DependencyGraph:
    """Undirected graph over LF indices; edge = correlated pair."""

    node_count: int
    edges: frozenset[tuple[int, int]]  # each pair sorted, i < j
    delta: float

    def __post_init__(self):
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on node {i}")
            if not (0 <= i < j < self.node_count):
                raise ValueError(f"edge ({i}, {j}) out of range")

    def neighbors(self, node: int) -> set[int]:
        out = set()
        for i, j in self.edges:
            if i == node:
                out.add(j)
            elif j == node:
                out.add(i)
        return out

    def adjacency(self) -> list[set[int]]:
        adj: list[set[int]] = [set() for _ in range(self.node_count)]
        for i, j in self.edges:
            adj[i].add(j)
            adj[j].add(i)
        return adj

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        return (i, j) in self.edges


@dataclass(frozen=True)
class LFRanking:
    """Walk order for pruning: most clique-entangled LFs first."""

    order: tuple[int, ...]
    clique_membership_counts: tuple[int, ...]
    coverages: tuple[float, ...]


def correlation_matrix(matrix: LabelMatrix) -> np.ndarray:
    """Pairwise Pearson correlations of the raw verdict columns.

    Returns a symmetric float matrix with diagonal 1.  NaN marks an
    undefined coefficient (a zero-variance column, e.g. an LF that
    always abstains); graph construction treats NaN as "no edge".
    """
    cols = matrix.entries.astype(np.float64)
    centered = cols - cols.mean(axis=0)
    norms = np.sqrt((centered * centered).sum(axis=0))
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = (centered.T @ centered) / np.outer(norms, norms)
    corr = np.clip(corr, -1.0, 1.0)
    degenerate = norms == 0.0
    corr[degenerate, :] = np.nan
    corr[:, degenerate] = np.nan
    np.fill_diagonal(corr, 1.0)
    return corr


def build_dependency_graph(corr: np.ndarray, delta: float) -> DependencyGraph:
    """Edges between LF pairs with defined |correlation| > delta."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must be in [0, 1], got {delta}")
    corr = np.asarray(corr, dtype=np.float64)
    if corr.ndim != 2 or corr.shape[0] != corr.shape[1]:
        raise ValueError("correlation matrix must be square")
    n = corr.shape[0]
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            c = corr[i, j]
            if not math.isnan(c) and abs(c) > delta:
                edges.add((i, j))
    return DependencyGraph(node_count=n, edges=frozenset(edges), delta=delta)


def maximal_cliques(graph: DependencyGraph) -> set[frozenset[int]]:
    """All maximal cliques (Bron-Kerbosch with pivoting).

    Isolated nodes come back as singleton cliques.
    """
    adj = graph.adjacency()
    out: set[frozenset[int]] = set()

    def expand(r: set[int], p: set[int], x: set[int]) -> None:
        if not p and not x:
            out.add(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(p & adj[u]))
        for v in list(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p.remove(v)
            x.add(v)

    expand(set(), set(range(graph.node_count)), set())
    return out


def rank_lfs(
    graph: DependencyGraph,
    cliques: set[frozenset[int]],
    lf_coverages,
) -> LFRanking:
    """Order LFs by clique membership count (desc), coverage (desc),
    index (asc)."""
    cov = [float(c) for c in lf_coverages]
    if len(cov) != graph.node_count:
        raise ValueError(
            f"{len(cov)} coverages for {graph.node_count} nodes"
        )
    counts = [0] * graph.node_count
    for clique in cliques:
        for v in clique:
            counts[v] += 1
    order = sorted(range(graph.node_count), key=lambda v: (-counts[v], -cov[v], v))
    return LFRanking(
        order=tuple(order),
        clique_membership_counts=tuple(counts),
        coverages=tuple(cov),
    )


def select_independent(
    cliques: set[frozenset[int]],
    ranking: LFRanking,
) -> list[int]:
    """Greedy clique-cover walk: each surviving LF evicts every other
    member of every maximal clique it belongs to."""
    n = len(ranking.order)
    alive = [True] * n
    member_of: list[list[frozenset[int]]] = [[] for _ in range(n)]
    for clique in cliques:
        for v in clique:
            member_of[v].append(clique)
    for v in ranking.order:
        if not alive[v]:
            continue
        for clique in member_of[v]:
            for u in clique:
                if u != v:
                    alive[u] = False
    return [v for v in range(n) if alive[v]]


def prune(matrix: LabelMatrix, delta: float = 0.5) -> list[int]:
    """Indices of an independent LF subset, per the full procedure."""
    corr = correlation_matrix(matrix)
    graph = build_dependency_graph(corr, delta)
    cliques = maximal_cliques(graph)
    ranking = rank_lfs(graph, cliques, coverages(matrix))
    return select_independent(cliques, ranking)
