"""Cluster validity indices: Davies-Bouldin, its DB* refinement, Dunn
(plain and neighborhood-edge diameters) and silhouette.

All indices operate on a PartitionView, a read-only summary of a
partition of 1-D values. Dispersion S_i is the mean absolute deviation
from the cluster centroid; the inter-cluster distance d_ij is the
distance between centroids (the usual Davies-Bouldin convention; the
source material leaves it open, see the package docs).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field


class ValidityError(Exception):
    """Index undefined for the given partition."""


def _centroid(values, mode: str) -> float:
    mean = sum(values) / len(values)
    if mode == "mean":
        return mean
    if mode == "nearest-member":
        # ties resolved toward the smaller member
        return min(values, key=lambda v: (abs(v - mean), v))
    raise ValueError(f"unknown centroid mode: {mode!r}")


@dataclass(frozen=True)
class PartitionView:
    clusters: tuple[tuple[float, ...], ...]
    centroid_mode: str = "mean"
    centroids: tuple[float, ...] = field(init=False, compare=False)
    dispersions: tuple[float, ...] = field(init=False, compare=False)
    diameters: tuple[float, ...] = field(init=False, compare=False)

    def __post_init__(self):
        if not self.clusters:
            raise ValidityError("a partition needs at least one cluster")
        cents, disps, diams = [], [], []
        for c in self.clusters:
            if not c:
                raise ValidityError("empty cluster in partition")
            ce = _centroid(c, self.centroid_mode)
            cents.append(ce)
            disps.append(sum(abs(x - ce) for x in c) / len(c))
            diams.append(max(c) - min(c))
        object.__setattr__(self, "centroids", tuple(cents))
        object.__setattr__(self, "dispersions", tuple(disps))
        object.__setattr__(self, "diameters", tuple(diams))

    @classmethod
    def of(cls, clusters, centroid_mode: str = "mean") -> "PartitionView":
        return cls(tuple(tuple(sorted(c)) for c in clusters), centroid_mode)

    def centroid_distance(self, i: int, j: int) -> float:
        return abs(self.centroids[i] - self.centroids[j])


def _require_pairs(p: PartitionView):
    if len(p.clusters) < 2:
        raise ValidityError("index undefined for fewer than 2 clusters")


def db(p: PartitionView) -> float:
    """Davies-Bouldin: mean over clusters of the worst (S_i+S_j)/d_ij ratio."""
    _require_pairs(p)
    n = len(p.clusters)
    S = p.dispersions
    total = 0.0
    for i in range(n):
        total += max((S[i] + S[j]) / p.centroid_distance(i, j)
                     for j in range(n) if j != i)
    return total / n


def db_star(p: PartitionView) -> float:
    """DB* variant: per cluster, the worst dispersion sum is divided by the
    smallest centroid distance instead of pairing both in one ratio."""
    _require_pairs(p)
    n = len(p.clusters)
    S = p.dispersions
    total = 0.0
    for i in range(n):
        worst_sum = max(S[i] + S[k] for k in range(n) if k != i)
        nearest = min(p.centroid_distance(i, l) for l in range(n) if l != i)
        total += worst_sum / nearest
    return total / n


def _edge_diameter(cluster) -> float:
    # On sorted 1-D values the neighborhood graph is the consecutive path,
    # so its heaviest edge is the largest consecutive gap.
    return max((b - a for a, b in zip(cluster, cluster[1:])), default=0.0)


def dunn(p: PartitionView, diameter_mode: str = "full") -> float:
    """Dunn index: min inter-cluster point distance over max cluster diameter.

    diameter_mode "full" uses the cluster span, "rng-edge" the heaviest
    neighborhood-graph edge inside the cluster.
    """
    _require_pairs(p)
    if diameter_mode == "full":
        diams = p.diameters
    elif diameter_mode == "rng-edge":
        diams = tuple(_edge_diameter(c) for c in p.clusters)
    else:
        raise ValueError(f"unknown diameter mode: {diameter_mode!r}")
    dmax = max(diams)
    if dmax == 0:
        raise ValidityError("Dunn undefined: all cluster diameters are zero")
    n = len(p.clusters)
    best = math.inf
    for i in range(n):
        for j in range(i + 1, n):
            delta = min(abs(x - y) for x in p.clusters[i] for y in p.clusters[j])
            best = min(best, delta / dmax)
    return best


@dataclass(frozen=True)
class SilhouetteResult:
    per_object: tuple[tuple[float, ...], ...]  # aligned with p.clusters
    cluster_means: tuple[float, ...]
    global_mean: float


def silhouette(p: PartitionView) -> SilhouetteResult:
    """Silhouette values per object, per-cluster means and the global mean
    (mean of cluster means). Objects in singleton clusters score 0, as do
    objects with a == b == 0."""
    _require_pairs(p)
    per_cluster = []
    for ci, cluster in enumerate(p.clusters):
        vals = []
        for x in cluster:
            if len(cluster) == 1:
                vals.append(0.0)
                continue
            # |x - x| contributes 0, so dividing by n-1 averages over the others
            a = sum(abs(x - y) for y in cluster) / (len(cluster) - 1)
            b = min(sum(abs(x - y) for y in other) / len(other)
                    for cj, other in enumerate(p.clusters) if cj != ci)
            m = max(a, b)
            vals.append(0.0 if m == 0 else (b - a) / m)
        per_cluster.append(tuple(vals))
    means = tuple(sum(v) / len(v) for v in per_cluster)
    return SilhouetteResult(tuple(per_cluster), means, sum(means) / len(means))
