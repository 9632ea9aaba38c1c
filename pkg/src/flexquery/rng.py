"""Relative neighborhood graph over a 1-D value series.

Two values are joined iff no third value is simultaneously closer to
both. On a line this provably yields the consecutive-value path, but the
builder implements the general triple condition so the module stays
correct if richer distances ever get plugged in.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class RNGraph:
    nodes: tuple[float, ...]                    # ascending distinct values
    edges: tuple[tuple[int, int, float], ...]   # (i, j, weight), i < j

    @property
    def weights(self) -> list[float]:
        return [w for _, _, w in self.edges]

    def neighbors(self, i: int) -> list[int]:
        out = []
        for a, b, _ in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def max_edge_weight(self) -> float:
        """Largest edge weight; 0 for a single-node graph."""
        return max(self.weights, default=0.0)


def build_rng(series) -> RNGraph:
    """Build the relative neighborhood graph of a value series.

    Accepts an AttributeSeries or any sequence of strictly ascending
    distinct reals. Edge (i, j) is kept iff
    d(xi, xj) <= max(d(xi, xk), d(xj, xk)) for every third point xk,
    and its weight is the distance.
    """
    values = tuple(getattr(series, "values", series))
    if not values:
        raise ValueError("cannot build a neighborhood graph over an empty series")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError("series values must be strictly ascending and distinct")
    n = len(values)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            dij = values[j] - values[i]
            ok = True
            for k in range(n):
                if k == i or k == j:
                    continue
                if dij > max(abs(values[i] - values[k]), abs(values[j] - values[k])):
                    ok = False
                    break
            if ok:
                edges.append((i, j, dij))
    return RNGraph(values, tuple(edges))


def components_after_cut(g: RNGraph, threshold: float) -> list[RNGraph]:
    """Connected components of g after deleting edges heavier than threshold.

    Each component is returned as a sub-graph over its own nodes (edges
    restricted to the survivors), ordered by smallest node.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    kept = [(i, j, w) for i, j, w in g.edges if w <= threshold]
    parent = list(range(len(g.nodes)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j, _ in kept:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj

    groups: dict[int, list[int]] = {}
    for i in range(len(g.nodes)):
        groups.setdefault(find(i), []).append(i)

    comps = []
    for members in groups.values():
        members.sort()
        remap = {old: new for new, old in enumerate(members)}
        nodes = tuple(g.nodes[i] for i in members)
        edges = tuple((remap[i], remap[j], w) for i, j, w in kept
                      if i in remap and j in remap)
        comps.append(RNGraph(nodes, edges))
    comps.sort(key=lambda c: c.nodes[0])
    return comps
