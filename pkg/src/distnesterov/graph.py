"""Directed communication graphs.

Nodes are the integers ``0..n-1``. ``in_neighbors[i]`` holds every ``j`` with
an edge ``j -> i``; every node is its own in- and out-neighbor.
"""

from collections import deque
from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .errors import ParameterError, StructuralInputError


@dataclass(frozen=True)
class Digraph:
    n: int
    in_neighbors: tuple

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise StructuralInputError(f"node count must be a positive integer, got {self.n!r}")
        if len(self.in_neighbors) != self.n:
            raise StructuralInputError(
                f"expected {self.n} in-neighbor sets, got {len(self.in_neighbors)}")
        normalized = []
        for i, nbrs in enumerate(self.in_neighbors):
            s = set()
            for j in nbrs:
                if isinstance(j, bool) or not isinstance(j, (int, np.integer)):
                    raise StructuralInputError(f"node {i}: neighbor {j!r} is not an integer")
                if not 0 <= j < self.n:
                    raise StructuralInputError(f"node {i}: neighbor {j} out of range [0, {self.n})")
                s.add(int(j))
            s.add(i)
            normalized.append(frozenset(s))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "in_neighbors", tuple(normalized))

    @classmethod
    def from_edges(cls, n, edges):
        """Build from ``(src, dst)`` pairs; self-loops are added."""
        nbrs = [set() for _ in range(n)]
        for src, dst in edges:
            if not (0 <= dst < n):
                raise StructuralInputError(f"edge ({src}, {dst}) out of range for n={n}")
            nbrs[dst].add(src)
        return cls(n, tuple(nbrs))

    @cached_property
    def out_neighbors(self):
        out = [set() for _ in range(self.n)]
        for i, nbrs in enumerate(self.in_neighbors):
            for j in nbrs:
                out[j].add(i)
        return tuple(frozenset(s) for s in out)

    def adjacency(self):
        """Boolean matrix with ``adj[i, j]`` true iff ``j -> i``."""
        adj = np.zeros((self.n, self.n), dtype=bool)
        for i, nbrs in enumerate(self.in_neighbors):
            adj[i, sorted(nbrs)] = True
        return adj

    @property
    def num_edges(self):
        """Directed edge count, self-loops excluded."""
        return sum(len(s) for s in self.in_neighbors) - self.n

    def edges(self):
        return sorted((j, i) for i, nbrs in enumerate(self.in_neighbors) for j in nbrs if j != i)

    def to_json(self):
        return {"n": self.n, "in_neighbors": [sorted(s) for s in self.in_neighbors]}

    @classmethod
    def from_json(cls, obj):
        try:
            n = obj["n"]
            nbrs = obj["in_neighbors"]
        except (KeyError, TypeError) as exc:
            raise StructuralInputError(f"graph JSON needs 'n' and 'in_neighbors': {exc}") from None
        return cls(n, tuple(nbrs))


def _check_node(g, i):
    if not 0 <= i < g.n:
        raise StructuralInputError(f"node {i} out of range [0, {g.n})")


def out_degree(g, i):
    """Number of out-neighbors of ``i``, counting ``i`` itself."""
    _check_node(g, i)
    return len(g.out_neighbors[i])


def in_degree(g, i):
    _check_node(g, i)
    return len(g.in_neighbors[i])


def _reaches_all(n, adjacency, start=0):
    seen = [False] * n
    seen[start] = True
    queue = deque([start])
    count = 1
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if not seen[w]:
                seen[w] = True
                count += 1
                queue.append(w)
    return count == n


def is_strongly_connected(g):
    """True iff every node reaches every other node along directed edges.

    One BFS along out-edges and one along in-edges from node 0.
    """
    if not isinstance(g, Digraph):
        raise StructuralInputError(f"expected a Digraph, got {type(g).__name__}")
    return _reaches_all(g.n, g.out_neighbors) and _reaches_all(g.n, g.in_neighbors)


def cycle_digraph(n):
    """Directed ring ``0 -> 1 -> ... -> n-1 -> 0`` with self-loops."""
    return Digraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)] if n > 1 else [])


def generate_nearest_neighbor_digraph(n, radius, seed):
    """Random geometric digraph on the unit square, repaired to be strongly connected.

    Nodes are dropped uniformly in ``[0, 1]^2``. Every pair closer than
    ``radius`` is linked in both directions, then each such pair is
    independently reduced to one random direction with probability 1/2.
    If the result is not strongly connected, edges of a random Hamiltonian
    cycle are added one at a time until it is.

    All random draws are made up front and do not depend on ``radius``, so
    for a fixed ``(n, seed)`` the geometric edge set grows with ``radius``.

    Parameters
    ----------
    n : int
        Number of nodes.
    radius : float
        Connection radius in ``[0, sqrt(2)]``. ``0`` yields the pure
        cycle fallback.
    seed : int
        Seed for a PCG64 generator.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"n must be a positive integer, got {n!r}")
    if not (0.0 <= radius <= math.sqrt(2)):
        raise ParameterError(f"radius must lie in [0, sqrt(2)], got {radius}")
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    prune = rng.random((n, n))
    direction = rng.random((n, n))
    order = rng.permutation(n)

    dist = np.sqrt(((pos[:, None, :] - pos[None, :, :]) ** 2).sum(axis=-1))
    nbrs = [{i} for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] >= radius:
                continue
            if prune[i, j] < 0.5:
                if direction[i, j] < 0.5:
                    nbrs[j].add(i)
                else:
                    nbrs[i].add(j)
            else:
                nbrs[i].add(j)
                nbrs[j].add(i)

    g = Digraph(n, tuple(nbrs))
    for t in range(n):
        if is_strongly_connected(g):
            break
        src, dst = int(order[t]), int(order[(t + 1) % n])
        nbrs[dst].add(src)
        g = Digraph(n, tuple(nbrs))
    return g
