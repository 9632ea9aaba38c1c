"""Recursive edge-cut clustering over the relative neighborhood graph.

Two entry points:

* cluster_plain   - the base recursive procedure plus the small-cluster
                    merge/noise stage (merge fires below 5 % of the row
                    count; a small cluster whose birth threshold exceeds
                    3x the neighbor's largest internal gap is noise).
* clusterdb_star  - same recursion, but each accepted split must strictly
                    lower the DB* index of the current global partition;
                    otherwise the branch keeps its pre-split cluster.
                    The merge stage is off by default here: rejecting
                    quality-losing splits is what prevents small clusters
                    in the first place.

Both are fully deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .dataset import AttributeSeries
from .rng import RNGraph, build_rng, components_after_cut
from .validity import PartitionView, db_star

SMALL_CLUSTER_FRACTION = 0.05
NOISE_LAMBDA = 3.0


@dataclass(frozen=True)
class Cluster:
    values: tuple[float, ...]
    size: int                       # sum of multiplicities of the members
    graph: RNGraph = field(compare=False)
    birth_threshold: float | None = None

    @property
    def min(self) -> float:
        return self.values[0]

    @property
    def max(self) -> float:
        return self.values[-1]

    @property
    def span(self) -> tuple[float, float]:
        return (self.values[0], self.values[-1])

    def max_internal_gap(self) -> float:
        return max((b - a for a, b in zip(self.values, self.values[1:])), default=0.0)


@dataclass(frozen=True)
class Partition:
    clusters: tuple[Cluster, ...]   # ascending by span
    source: AttributeSeries
    noise: tuple[Cluster, ...] = ()

    @property
    def cluster_values(self) -> list[tuple[float, ...]]:
        return [c.values for c in self.clusters]

    def view(self, centroid_mode: str = "mean") -> PartitionView:
        return PartitionView.of(self.cluster_values, centroid_mode)

    def locate(self, x: float) -> int | None:
        """Index of the cluster whose span contains x, else None."""
        for i, c in enumerate(self.clusters):
            if c.min <= x <= c.max:
                return i
        return None


@dataclass(frozen=True)
class ThresholdSearch:
    """Trace of one threshold search over a graph's edge weights."""
    ao: tuple[float, ...]           # ascending deduplicated distances
    lvar: tuple[float, ...]         # sorted successive variations of ao
    t: float | None                 # (min variation + max variation) / 2
    threshold: float | None

    @property
    def min(self) -> float:
        return self.ao[0]

    @property
    def max(self) -> float:
        return self.ao[-1]


def threshold_search(g: RNGraph) -> ThresholdSearch:
    """Run the distance-threshold search on a graph's edge weights.

    Stops with no threshold when Max <= 2*Min (the pseudo-code comparison;
    the prose says strict), or when no distance d_i satisfies both
    d_{i+1} - d_i >= t and d_i >= 2*Min. The first qualifying d_i in
    ascending order wins.
    """
    ao = tuple(sorted(set(g.weights)))
    if not ao:
        return ThresholdSearch(ao, (), None, None)
    lo, hi = ao[0], ao[-1]
    lvar = tuple(sorted(ao[i + 1] - ao[i] for i in range(len(ao) - 1)))
    if hi <= 2 * lo:
        return ThresholdSearch(ao, lvar, None, None)
    t = (lvar[0] + lvar[-1]) / 2
    for j in range(len(ao) - 1):
        if ao[j + 1] - ao[j] >= t and ao[j] >= 2 * lo:
            return ThresholdSearch(ao, lvar, t, ao[j])
    return ThresholdSearch(ao, lvar, t, None)


def find_threshold(g: RNGraph) -> float | None:
    return threshold_search(g).threshold


def _split_once(g: RNGraph):
    """One recursion step: (threshold, components) or (None, None) when the
    branch must stop (no threshold, single component, or component count
    above sqrt of the branch size)."""
    thr = find_threshold(g)
    if thr is None:
        return None, None
    comps = components_after_cut(g, thr)
    if len(comps) == 1 or len(comps) > math.sqrt(len(g.nodes)):
        return None, None
    return thr, comps


def _as_cluster(g: RNGraph, series: AttributeSeries, birth: float | None) -> Cluster:
    return Cluster(g.nodes, series.size_of(g.nodes), g, birth)


def cluster_plain(series: AttributeSeries, merge: bool = True) -> Partition:
    """Recursive threshold clustering, then the small-cluster stage."""
    leaves: list[tuple[RNGraph, float | None]] = []

    def recurse(g: RNGraph, birth: float | None):
        thr, comps = _split_once(g)
        if comps is None:
            leaves.append((g, birth))
            return
        for c in comps:
            recurse(c, thr)

    recurse(build_rng(series.values), None)
    clusters = [_as_cluster(g, series, birth) for g, birth in leaves]
    noise: list[Cluster] = []
    if merge:
        clusters, noise = _merge_small(clusters, series)
    return Partition(tuple(clusters), series, tuple(noise))


def _merge_small(clusters: list[Cluster], series: AttributeSeries):
    """Merge clusters smaller than 5 % of the row count into their nearest
    neighbor; drop them as noise when their birth threshold exceeds
    NOISE_LAMBDA times the neighbor's largest internal gap."""
    total = series.total
    clusters = list(clusters)
    noise: list[Cluster] = []
    while len(clusters) > 1:
        smalls = [i for i, c in enumerate(clusters)
                  if c.size < SMALL_CLUSTER_FRACTION * total]
        if not smalls:
            break
        i = min(smalls, key=lambda k: (clusters[k].size, k))
        left_gap = clusters[i].min - clusters[i - 1].max if i > 0 else math.inf
        right_gap = clusters[i + 1].min - clusters[i].max if i + 1 < len(clusters) else math.inf
        j = i - 1 if left_gap <= right_gap else i + 1
        neighbor_max = clusters[j].max_internal_gap()
        birth = clusters[i].birth_threshold
        if birth is not None and birth > NOISE_LAMBDA * neighbor_max:
            noise.append(clusters.pop(i))
            continue
        lo, hi = min(i, j), max(i, j)
        merged_values = clusters[lo].values + clusters[hi].values
        sub = build_rng(merged_values)
        merged = Cluster(merged_values, series.size_of(merged_values), sub,
                         clusters[j].birth_threshold)
        clusters[lo:hi + 1] = [merged]
    return clusters, noise


def clusterdb_star(series: AttributeSeries, merge: bool = False,
                   centroid_mode: str = "mean"):
    """DB*-guided clustering. Returns (partition, final DB* value).

    The recursion mirrors cluster_plain, but every candidate split is
    evaluated against the DB* of the whole current partition: the split
    stands only while the index strictly decreases (the very first split
    has no predecessor value and is always kept). The index value is None
    when the result is a single cluster.
    """
    root = build_rng(series.values)
    state: list[tuple[RNGraph, float | None]] = [(root, None)]
    current_index: float | None = None
    final: list[tuple[RNGraph, float | None]] = []

    def position(g: RNGraph) -> int:
        for k, (h, _) in enumerate(state):
            if h.nodes == g.nodes:
                return k
        raise AssertionError("branch graph missing from partition state")

    def recurse(g: RNGraph, birth: float | None):
        nonlocal current_index
        thr, comps = _split_once(g)
        if comps is None:
            final.append((g, birth))
            return
        k = position(g)
        candidate = state[:k] + [(c, thr) for c in comps] + state[k + 1:]
        view = PartitionView.of([h.nodes for h, _ in candidate], centroid_mode)
        new_index = db_star(view)
        if current_index is not None and not (new_index < current_index):
            final.append((g, birth))      # split rejected, branch stops
            return
        state[k:k + 1] = [(c, thr) for c in comps]
        current_index = new_index
        for c in comps:
            recurse(c, thr)

    recurse(root, None)
    final.sort(key=lambda item: item[0].nodes[0])
    clusters = [_as_cluster(g, series, birth) for g, birth in final]
    noise: list[Cluster] = []
    if merge:
        clusters, noise = _merge_small(clusters, series)
    partition = Partition(tuple(clusters), series, tuple(noise))
    if len(partition.clusters) >= 2:
        index_value = db_star(partition.view(centroid_mode))
    else:
        index_value = None
    return partition, index_value


def satisfies_p1(p: Partition) -> bool:
    """Cluster spans ordered and disjoint."""
    spans = [c.span for c in p.clusters]
    return all(a[1] < b[0] for a, b in zip(spans, spans[1:]))


def covers_series(p: Partition) -> bool:
    """Clusters plus dropped noise account for every distinct value."""
    seen: set[float] = set()
    for c in list(p.clusters) + list(p.noise):
        seen.update(c.values)
    return seen == set(p.source.values)
