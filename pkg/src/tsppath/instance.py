"""Complete-metric TSP-path instances: validation, generators, serialization.

An instance is a complete graph with symmetric nonnegative costs obeying the
triangle inequality, plus two designated endpoints s and t.  Unit-weight
graphical metrics keep the generating graph around as ``origin`` so a
pipeline can tell graphical instances apart from general metric ones.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, int]


class InstanceError(ValueError):
    pass


def _norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Instance:
    """Complete metric graph with endpoints s and t."""

    n: int
    cost: np.ndarray
    s: int
    t: int
    origin: tuple[Edge, ...] | None = None
    label: str = ""

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InstanceError("need at least two vertices")
        if self.s == self.t:
            raise InstanceError("endpoints must be distinct")
        if not (0 <= self.s < self.n and 0 <= self.t < self.n):
            raise InstanceError("endpoint index out of range")
        c = np.asarray(self.cost, dtype=float)
        if c.shape != (self.n, self.n):
            raise InstanceError("cost matrix shape mismatch")
        object.__setattr__(self, "cost", c)

    @property
    def is_graphical(self) -> bool:
        return self.origin is not None

    def edges(self) -> list[Edge]:
        return [(u, v) for u in range(self.n) for v in range(u + 1, self.n)]

    def edge_cost(self, u: int, v: int) -> float:
        return float(self.cost[u, v])

    def internal_vertices(self) -> list[int]:
        return [v for v in range(self.n) if v not in (self.s, self.t)]


def all_pairs_bfs(n: int, edges: Iterable[Edge]) -> np.ndarray:
    """All-pairs unit-weight shortest path distances; inf where unreachable."""
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if u == v:
            raise InstanceError(f"self loop at {u}")
        adj[u].append(v)
        adj[v].append(u)
    dist = np.full((n, n), np.inf)
    for src in range(n):
        dist[src, src] = 0.0
        q = deque([src])
        while q:
            u = q.popleft()
            for w in adj[u]:
                if not np.isfinite(dist[src, w]):
                    dist[src, w] = dist[src, u] + 1.0
                    q.append(w)
    return dist


def metric_from_graph(n: int, edges: Sequence[Edge], s: int, t: int,
                      label: str = "") -> Instance:
    """Shortest-path metric of an unweighted undirected connected graph."""
    if s == t:
        raise InstanceError("endpoints must be distinct")
    dist = all_pairs_bfs(n, edges)
    if not np.isfinite(dist).all():
        raise InstanceError("metric undefined: graph is disconnected")
    origin = tuple(sorted(_norm_edge(u, v) for u, v in edges))
    return Instance(n=n, cost=dist, s=s, t=t, origin=origin, label=label)


def validate_metric(inst: Instance, tol: float = 1e-9) -> list[tuple[int, int, int]]:
    """Return every violated triple; empty list means the instance is a metric.

    A triple (u, v, w) is reported when cost[u][w] > cost[u][v] + cost[v][w] + tol.
    Symmetry and diagonal violations are reported as degenerate triples
    (u, u, v) and (v, v, v) respectively.
    """
    c = inst.cost
    bad: list[tuple[int, int, int]] = []
    n = inst.n
    for v in range(n):
        if abs(c[v, v]) > tol:
            bad.append((v, v, v))
    for u in range(n):
        for v in range(u + 1, n):
            if abs(c[u, v] - c[v, u]) > tol or c[u, v] < -tol:
                bad.append((u, u, v))
    for v in range(n):
        # all triples routed through v, vectorized
        excess = c - (c[:, v][:, None] + c[v, :][None, :])
        uu, ww = np.nonzero(excess > tol)
        for u, w in zip(uu.tolist(), ww.tolist()):
            if u != v and w != v and u != w:
                bad.append((u, v, w))
    return bad


@dataclass(frozen=True)
class GapFamilySpec:
    """Size-parapetrized pick of one of the two gap families."""

    family: str  # circuit_fig1a | path_fig1b
    k: int


def _triangle_arm_graph(arms: Sequence[int]) -> tuple[int, list[Edge]]:
    """Two triangles {0,1,2} and {3,4,5} joined by len(arms) paths.

    Arm i has arms[i] edges and joins vertex i to vertex 3+i.
    """
    edges: list[Edge] = [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)]
    n = 6
    for i, k in enumerate(arms):
        prev = i
        for _ in range(k - 1):
            edges.append(_norm_edge(prev, n))
            prev = n
            n += 1
        edges.append(_norm_edge(prev, 3 + i))
    return n, edges


def gen_gap_family(spec: GapFamilySpec) -> Instance:
    """Instance of one of the two integrality-gap families at size k.

    circuit_fig1a: two triangles joined by three paths of length k; the
    circuit ratio climbs towards 4/3.  path_fig1b: two triangles joined by
    two paths of length k, with s and t the two path-free triangle tips;
    the path ratio climbs towards 3/2.  Both transcriptions are isolated
    here so they can be corrected without touching callers.
    """
    if spec.k < 1:
        raise InstanceError("k must be >= 1")
    if spec.family == "circuit_fig1a":
        n, edges = _triangle_arm_graph([spec.k] * 3)
        return metric_from_graph(n, edges, s=0, t=3,
                                 label=f"circuit_fig1a[k={spec.k}]")
    if spec.family == "path_fig1b":
        n, edges = _triangle_arm_graph([spec.k] * 2)
        return metric_from_graph(n, edges, s=2, t=5,
                                 label=f"path_fig1b[k={spec.k}]")
    raise InstanceError(f"unknown gap family {spec.family!r}")


def gen_random_graphical(n: int, edge_probability: float, seed: int,
                         s: int = 0, t: int | None = None) -> Instance:
    """Random connected G(n,p) shortest-path metric; deterministic per seed."""
    if not 0.0 <= edge_probability <= 1.0:
        raise InstanceError("edge_probability outside [0,1]")
    if n < 2:
        raise InstanceError("need at least two vertices")
    if t is None:
        t = n - 1
    rng = np.random.default_rng(seed)
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    for _ in range(10000):
        mask = rng.random(len(pairs)) < edge_probability
        edges = [e for e, keep in zip(pairs, mask) if keep]
        if n == 2 and not edges:
            edges = [(0, 1)]
        dist = all_pairs_bfs(n, edges)
        if np.isfinite(dist).all():
            return Instance(n=n, cost=dist, s=s, t=t,
                            origin=tuple(sorted(edges)),
                            label=f"rand_graphical[n={n},p={edge_probability},seed={seed}]")
    raise InstanceError("could not generate a connected graph")


def gen_random_euclidean(n: int, seed: int, s: int = 0,
                         t: int | None = None) -> Instance:
    """Random points in the unit square under Euclidean distance.

    General (non-graphical) metric used to exercise the Hoogeveen pipeline
    beyond unit-weight inputs.
    """
    if t is None:
        t = n - 1
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    diff = pts[:, None, :] - pts[None, :, :]
    cost = np.sqrt((diff ** 2).sum(axis=2))
    return Instance(n=n, cost=cost, s=s, t=t, origin=None,
                    label=f"rand_euclidean[n={n},seed={seed}]")


def to_document(inst: Instance) -> dict:
    """Self-describing document; integer costs serialize as exact decimals."""
    rows = []
    for i in range(inst.n):
        row = []
        for j in range(i):
            c = float(inst.cost[i, j])
            row.append(int(c) if c == int(c) else c)
        rows.append(row)
    doc: dict = {"version": 1, "n": inst.n, "s": inst.s, "t": inst.t, "cost": rows}
    if inst.origin is not None:
        doc["origin_edges"] = [list(e) for e in inst.origin]
    if inst.label:
        doc["label"] = inst.label
    return doc


def from_document(doc: dict) -> Instance:
    if doc.get("version") != 1:
        raise InstanceError(f"unsupported instance version {doc.get('version')!r}")
    n = doc["n"]
    cost = np.zeros((n, n))
    for i, row in enumerate(doc["cost"]):
        if len(row) != i:
            raise InstanceError("cost rows must be lower-triangular")
        for j, c in enumerate(row):
            cost[i, j] = cost[j, i] = float(c)
    origin = None
    if "origin_edges" in doc:
        origin = tuple(sorted(_norm_edge(u, v) for u, v in doc["origin_edges"]))
    return Instance(n=n, cost=cost, s=doc["s"], t=doc["t"], origin=origin,
                    label=doc.get("label", ""))


def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_document(inst), fh, indent=1)


def load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return from_document(json.load(fh))
