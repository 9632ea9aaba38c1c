"""Incremental maintenance of a partition and its membership functions
under single-value insertion and deletion.

The fast path adjusts only the touched cluster's kernel (and the supports
of its neighbors); whenever the partition coherence rules would break,
the whole attribute is reclustered from scratch. Coherence of a partition
means: cluster spans are ordered and disjoint (P1) and every gap between
adjacent clusters strictly exceeds every internal consecutive gap of the
two clusters it separates (P2).

Kernel adjustments follow the insertion/deletion case analysis of the
underlying method: recompute the centroid and the density threshold of
the touched cluster, regenerate the kernel when the centroid left the old
kernel or the threshold rose, otherwise extend or regrow kernel ends with
a single directional walk over the new density profile ("dense" means
density >= threshold; the deletion variant additionally restarts the walk
beside the removed value, which is what lets a kernel shrink).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .clustering import Cluster, Partition, clusterdb_star
from .dataset import AttributeSeries
from .membership import (Kernel, LinguisticVariable, centroid, density_profile,
                         gfat, kernel as gennoyau, supports)
from .rng import build_rng
from .validity import PartitionView, silhouette

EQUIDISTANCE_RTOL = 1e-12


class MaintenanceError(Exception):
    pass


@dataclass(frozen=True)
class UpdateOutcome:
    kind: str                       # "adjusted" | "reclustered"
    partition: Partition
    variable: LinguisticVariable
    touched: tuple[int, ...]        # indices of terms whose parameters changed


def check_coherence(p: Partition) -> bool:
    """P1 and P2 for the partition; vacuously true for a single cluster."""
    clusters = p.clusters
    for cur, nxt in zip(clusters, clusters[1:]):
        if cur.max >= nxt.min:
            return False
        gap = nxt.min - cur.max
        if gap <= cur.max_internal_gap() or gap <= nxt.max_internal_gap():
            return False
    return True


def _rebuild(values, series: AttributeSeries, birth) -> Cluster:
    values = tuple(sorted(values))
    return Cluster(values, series.size_of(values), build_rng(values), birth)


def _variable_kernels(v: LinguisticVariable) -> list[Kernel]:
    return [Kernel(t.b, t.c) for t in v.terms]


def _assemble(kernels, series, old_variable, labels=None, names=None):
    if labels is None:
        labels = [t.label for t in old_variable.terms]
        names = [t.term for t in old_variable.terms]
    return supports(kernels, series.min, series.max,
                    attribute=series.attribute, labels=labels, names=names)


def _touched(old: LinguisticVariable, new: LinguisticVariable) -> tuple[int, ...]:
    out = []
    for i, t in enumerate(new.terms):
        if i >= len(old.terms) or old.terms[i].params != t.params:
            out.append(i)
    out.extend(range(len(new.terms), len(old.terms)))
    return tuple(sorted(set(out)))


def _recluster(series: AttributeSeries, old_variable: LinguisticVariable) -> UpdateOutcome:
    partition, _ = clusterdb_star(series)
    if len(partition.clusters) == len(old_variable.terms):
        labels = [t.label for t in old_variable.terms]
        names = [t.term for t in old_variable.terms]
    else:
        labels = names = None
    variable = gfat(partition, labels=labels, names=names)
    return UpdateOutcome("reclustered", partition, variable,
                         tuple(range(len(variable.terms))))


def _left_of(values, x):
    """Value immediately left of x in a sorted tuple, or None."""
    i = values.index(x)
    return values[i - 1] if i > 0 else None


def _right_of(values, x):
    i = values.index(x)
    return values[i + 1] if i + 1 < len(values) else None


def _walk(cluster: Cluster, profile, start: float, direction: str) -> float:
    """From start (always kept), extend while the next value is dense."""
    values = cluster.values
    i = values.index(start)
    if direction == "left":
        while i - 1 >= 0 and profile.is_dense(values[i - 1]):
            i -= 1
    else:
        while i + 1 < len(values) and profile.is_dense(values[i + 1]):
            i += 1
    return values[i]


def _same_threshold(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=1e-12, abs_tol=1e-12)


def insert_value(p: Partition, v: LinguisticVariable, x: float) -> UpdateOutcome:
    """Insert one occurrence of x; adjust the partition and variable, or
    recluster when coherence cannot be preserved."""
    series = p.source
    if not math.isfinite(x):
        raise MaintenanceError(f"non-finite value: {x}")

    if x in series.multiplicity:
        # duplicate: only the count changes, no structural work
        new_series = series.with_value(x)
        i = p.locate(x)
        clusters = list(p.clusters)
        clusters[i] = _rebuild(clusters[i].values, new_series, clusters[i].birth_threshold)
        return UpdateOutcome("adjusted", Partition(tuple(clusters), new_series, p.noise),
                             v, ())

    new_series = series.with_value(x)
    target = p.locate(x)
    if target is None:
        target = _choose_cluster_for_insert(p, x)
        if target is None:
            return _recluster(new_series, v)
        trial = _partition_with_value(p, new_series, target, x)
        if not check_coherence(trial):
            return _recluster(new_series, v)
        new_partition = trial
    else:
        new_partition = _partition_with_value(p, new_series, target, x)

    old_cluster = p.clusters[target]
    new_cluster = new_partition.clusters[target]
    old_term = v.terms[target]
    new_kernel = _insert_kernel(old_cluster, new_cluster, Kernel(old_term.b, old_term.c), x)

    kernels = _variable_kernels(v)
    kernels[target] = new_kernel
    variable = _assemble(kernels, new_series, v)
    return UpdateOutcome("adjusted", new_partition, variable, _touched(v, variable))


def _choose_cluster_for_insert(p: Partition, x: float):
    """Cluster index for a value outside all spans; None means equidistant
    (which forces a recluster)."""
    prev = next_ = None
    for i, c in enumerate(p.clusters):
        if c.max < x:
            prev = i
        if c.min > x and next_ is None:
            next_ = i
    if prev is None:
        return next_
    if next_ is None:
        return prev
    dl = x - p.clusters[prev].max
    dr = p.clusters[next_].min - x
    if math.isclose(dl, dr, rel_tol=EQUIDISTANCE_RTOL):
        return None
    return prev if dl < dr else next_


def _partition_with_value(p: Partition, new_series: AttributeSeries,
                          target: int, x: float) -> Partition:
    clusters = list(p.clusters)
    c = clusters[target]
    clusters[target] = _rebuild(c.values + (x,), new_series, c.birth_threshold)
    return Partition(tuple(clusters), new_series, p.noise)


def _insert_kernel(old: Cluster, new: Cluster, anoy: Kernel, x: float) -> Kernel:
    """Kernel update for an insertion into a cluster (the INSERT case table)."""
    if len(old.values) < 2:
        return gennoyau(new)
    asd = density_profile(old).threshold
    profile = density_profile(new)
    nsd = profile.threshold
    nce = centroid(new)
    if not (anoy.inf <= nce <= anoy.sup):
        return gennoyau(new)
    if _same_threshold(nsd, asd):
        if anoy.inf <= x <= anoy.sup:
            return anoy
        if _right_of(new.values, x) == anoy.inf:
            return Kernel(_walk(new, profile, anoy.inf, "left"), anoy.sup)
        if _left_of(new.values, x) == anoy.sup:
            return Kernel(anoy.inf, _walk(new, profile, anoy.sup, "right"))
        return anoy
    if nsd < asd:
        return Kernel(_walk(new, profile, anoy.inf, "left"),
                      _walk(new, profile, anoy.sup, "right"))
    return gennoyau(new)


def delete_value(p: Partition, v: LinguisticVariable, x: float) -> UpdateOutcome:
    """Delete one occurrence of x; adjust or recluster."""
    series = p.source
    if x not in series.multiplicity:
        raise MaintenanceError(f"value {x} not present in {series.attribute!r}")

    if series.multiplicity[x] > 1:
        new_series = series.without_value(x)
        i = p.locate(x)
        clusters = list(p.clusters)
        clusters[i] = _rebuild(clusters[i].values, new_series, clusters[i].birth_threshold)
        return UpdateOutcome("adjusted", Partition(tuple(clusters), new_series, p.noise),
                             v, ())

    if len(series.values) == 1:
        raise MaintenanceError("cannot delete the last remaining value")
    new_series = series.without_value(x)
    target = p.locate(x)
    old_cluster = p.clusters[target]

    if len(old_cluster.values) == 1:
        # the cluster disappears with its only value
        clusters = list(p.clusters)
        del clusters[target]
        partition = Partition(tuple(clusters), new_series, p.noise)
        kernels = [k for i, k in enumerate(_variable_kernels(v)) if i != target]
        labels = [t.label for i, t in enumerate(v.terms) if i != target]
        names = [t.term for i, t in enumerate(v.terms) if i != target]
        variable = _assemble(kernels, new_series, v, labels=labels, names=names)
        return UpdateOutcome("adjusted", partition, variable, _touched(v, variable))

    interior = old_cluster.min < x < old_cluster.max
    if interior:
        gp = _left_of(old_cluster.values, x)
        dp = _right_of(old_cluster.values, x)
        new_gap = dp - gp
        left_ok = target == 0 or \
            old_cluster.min - p.clusters[target - 1].max > new_gap
        right_ok = target == len(p.clusters) - 1 or \
            p.clusters[target + 1].min - old_cluster.max > new_gap
        if not (left_ok and right_ok):
            return _recluster(new_series, v)

    clusters = list(p.clusters)
    new_values = tuple(val for val in old_cluster.values if val != x)
    clusters[target] = _rebuild(new_values, new_series, old_cluster.birth_threshold)
    partition = Partition(tuple(clusters), new_series, p.noise)

    old_term = v.terms[target]
    new_kernel = _delete_kernel(old_cluster, partition.clusters[target],
                                Kernel(old_term.b, old_term.c), x)
    kernels = _variable_kernels(v)
    kernels[target] = new_kernel
    variable = _assemble(kernels, new_series, v)
    return UpdateOutcome("adjusted", partition, variable, _touched(v, variable))


def _delete_kernel(old: Cluster, new: Cluster, anoy: Kernel, x: float) -> Kernel:
    """Kernel update after deleting x from a cluster (the Supp case table)."""
    if len(new.values) == 1:
        val = new.values[0]
        return Kernel(val, val)
    asd = density_profile(old).threshold
    profile = density_profile(new)
    nsd = profile.threshold
    nce = centroid(new)
    if not (anoy.inf <= nce <= anoy.sup):
        return gennoyau(new)

    g_ainf = _left_of(old.values, anoy.inf) if anoy.inf in old.values else None
    d_asup = _right_of(old.values, anoy.sup) if anoy.sup in old.values else None
    g_nce = _left_of(old.values, nce)
    d_nce = _right_of(old.values, nce)
    lo_left = g_ainf if g_ainf is not None else -math.inf
    hi_left = g_nce if g_nce is not None else -math.inf
    lo_right = d_nce if d_nce is not None else math.inf
    hi_right = d_asup if d_asup is not None else math.inf

    if _same_threshold(nsd, asd):
        if lo_left <= x <= hi_left:
            return Kernel(_walk(new, profile, nce, "left"), anoy.sup)
        if lo_right <= x <= hi_right:
            return Kernel(anoy.inf, _walk(new, profile, nce, "right"))
        return anoy
    if nsd < asd:
        if lo_right <= x <= hi_right:
            gp = _left_of(old.values, x)
            return Kernel(_walk(new, profile, anoy.inf, "left"),
                          _walk(new, profile, gp, "right"))
        if d_asup is not None and x > d_asup:
            return Kernel(_walk(new, profile, anoy.inf, "left"),
                          _walk(new, profile, anoy.sup, "right"))
        if lo_left <= x <= hi_left:
            dp = _right_of(old.values, x)
            return Kernel(_walk(new, profile, dp, "left"),
                          _walk(new, profile, anoy.sup, "right"))
        return Kernel(_walk(new, profile, anoy.inf, "left"),
                      _walk(new, profile, anoy.sup, "right"))
    return gennoyau(new)


def naive_insert_partition(p: Partition, x: float) -> Partition:
    """Keep-in-place comparator used by the reclustering quality audit:
    assign x to a cluster without any coherence checks (equidistant values
    go to whichever side scores the better silhouette)."""
    new_series = p.source.with_value(x)
    if x in p.source.multiplicity:
        return Partition(p.clusters, new_series, p.noise)
    target = p.locate(x)
    if target is None:
        target = _choose_cluster_for_insert(p, x)
    if target is None:
        target = _silhouette_choice(p, x)
    return _partition_with_value(p, new_series, target, x)


def _silhouette_choice(p: Partition, x: float) -> int:
    prev = max(i for i, c in enumerate(p.clusters) if c.max < x)
    best, best_val = prev, -math.inf
    for cand in (prev, prev + 1):
        clusters = [list(c.values) for c in p.clusters]
        clusters[cand].append(x)
        view = PartitionView.of(clusters)
        res = silhouette(view)
        idx = sorted(clusters[cand]).index(x)
        val = res.per_object[cand][idx]
        if val > best_val:
            best, best_val = cand, val
    return best


def naive_delete_partition(p: Partition, x: float) -> Partition:
    """Comparator for deletions: drop the value in place."""
    new_series = p.source.without_value(x)
    if p.source.multiplicity[x] > 1:
        return Partition(p.clusters, new_series, p.noise)
    target = p.locate(x)
    clusters = list(p.clusters)
    remaining = tuple(val for val in clusters[target].values if val != x)
    if remaining:
        clusters[target] = _rebuild(remaining, new_series, clusters[target].birth_threshold)
    else:
        del clusters[target]
    return Partition(tuple(clusters), new_series, p.noise)
