"""Shared brute-force oracles, kept independent of the library internals."""

from __future__ import annotations

import random

import pytest

from sprec import Graph


def brute_all_pairs(g: Graph) -> list[list[int]]:
    """Distance table via a plain level-by-level BFS, written from scratch."""
    table = []
    for s in range(g.n):
        dist = [-1] * g.n
        dist[s] = 0
        level = [s]
        d = 0
        while level:
            d += 1
            nxt = []
            for u in level:
                for w in g.adj[u]:
                    if dist[w] < 0:
                        dist[w] = d
                        nxt.append(w)
            level = nxt
        table.append(dist)
    return table


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def brute_components(g: Graph, alive: set[int]) -> dict[int, int]:
    """Masked component labels via union-find; labels are component minima."""
    uf = UnionFind(g.n)
    for u in alive:
        for w in g.adj[u]:
            if w in alive and w > u:
                uf.union(u, w)
    groups: dict[int, list[int]] = {}
    for v in alive:
        groups.setdefault(uf.find(v), []).append(v)
    out = {}
    for members in groups.values():
        label = min(members)
        for v in members:
            out[v] = label
    return out


def brute_anc(g: Graph, depth: list[int] | tuple[int, ...], x: int, k: int) -> frozenset[int]:
    """Vertices of layer k in x's component once layers < k are removed."""
    alive = {v for v in range(g.n) if depth[v] >= k}
    labels = brute_components(g, alive)
    target = labels[x]
    return frozenset(
        v for v in alive if depth[v] == k and labels[v] == target
    )


def random_graph(rng: random.Random, n: int, extra_edges: int) -> Graph:
    """Random connected graph: random spanning tree plus extra edges."""
    edges = set()
    for v in range(1, n):
        u = rng.randrange(v)
        edges.add((u, v))
    for _ in range(extra_edges):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return Graph(n, sorted(edges))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
