import math
import random

import pytest

from flexquery.clustering import Partition, clusterdb_star, satisfies_p1
from flexquery.dataset import series_from_values
from flexquery.maintenance import (MaintenanceError, check_coherence, delete_value,
                                   insert_value, naive_delete_partition,
                                   naive_insert_partition)
from flexquery.membership import gfat, mf_eval
from flexquery.validity import PartitionView, db_star

from conftest import AGE_CLUSTERS


@pytest.fixture()
def age_state(age_series):
    partition, _ = clusterdb_star(age_series)
    return partition, gfat(partition)


def ruspini_ok(variable, samples=200):
    lo, hi = variable.domain
    for k in range(samples + 1):
        x = min(max(lo + (hi - lo) * k / samples, lo), hi)  # clamp fp drift
        total = sum(mf_eval(t, x) for t in variable.terms)
        if abs(total - 1.0) > 1e-9:
            return False
    return True


def spans(partition):
    return [c.span for c in partition.clusters]


def test_check_coherence_cases(age_state):
    partition, _ = age_state
    assert check_coherence(partition) is True

    bad = clusterdb_star(series_from_values("x", [0, 1, 2, 3]))[0]
    assert check_coherence(bad) is True  # single cluster, vacuous

    # {0,1},{2,3}: gap 1 equals the internal gaps, strict rule fails
    s = series_from_values("x", [0, 1, 2, 3])
    one, _ = clusterdb_star(s)
    from flexquery.clustering import Cluster
    from flexquery.rng import build_rng
    halves = Partition(
        (Cluster((0.0, 1.0), 2, build_rng((0.0, 1.0))),
         Cluster((2.0, 3.0), 2, build_rng((2.0, 3.0)))), s)
    assert check_coherence(halves) is False


def test_insert_inside_span_adjusts(age_state):
    partition, variable = age_state
    out = insert_value(partition, variable, 37)
    assert out.kind == "adjusted"
    assert 37 in out.partition.clusters[1].values
    assert check_coherence(out.partition)
    assert ruspini_ok(out.variable)


def test_insert_equidistant_reclusters(age_state):
    partition, variable = age_state
    out = insert_value(partition, variable, 23.5)  # midpoint of the 17-30 gap
    assert out.kind == "reclustered"
    assert check_coherence(out.partition)
    assert ruspini_ok(out.variable)


def test_insert_far_left_outlier_reclusters(age_state):
    # gap to the first cluster (8) exceeds nothing internal, but an outlier
    # whose distance dwarfs the cluster gaps must recluster: choose x so the
    # new internal gap of C1 would beat the 13-wide gap to C2
    partition, variable = age_state
    out = insert_value(partition, variable, -10)
    assert out.kind == "reclustered"
    assert check_coherence(out.partition)


def test_insert_near_left_edge_adjusts(age_state):
    partition, variable = age_state
    out = insert_value(partition, variable, 9)
    assert out.kind == "adjusted"
    assert out.partition.clusters[0].values[0] == 9
    assert out.variable.terms[0].a == 9  # domain minimum moved
    assert ruspini_ok(out.variable)


def test_insert_existing_value_only_bumps_multiplicity(age_state):
    partition, variable = age_state
    out = insert_value(partition, variable, 40)
    assert out.kind == "adjusted"
    assert out.touched == ()
    assert out.partition.source.multiplicity[40] == 2
    assert spans(out.partition) == spans(partition)
    assert out.variable is variable


def test_delete_lower_bound_kernel_regenerated(age_state):
    partition, variable = age_state
    out = delete_value(partition, variable, 10)
    assert out.kind == "adjusted"
    assert out.partition.clusters[0].values == (11, 12, 13, 14, 15, 17)
    # fresh density walk over {11..17} gives [11, 15]
    assert out.variable.terms[0].kernel == (11, 15)
    assert check_coherence(out.partition)
    assert ruspini_ok(out.variable)


def test_delete_upper_bound_adjusts(age_state):
    partition, variable = age_state
    out = delete_value(partition, variable, 95)
    assert out.kind == "adjusted"
    assert out.partition.clusters[3].values == (90, 91)
    assert out.variable.terms[3].kernel == (90, 91)  # pinned to new maximum
    assert ruspini_ok(out.variable)


def test_delete_duplicate_only_decrements(age_state):
    partition, variable = age_state
    grown = insert_value(partition, variable, 40)
    out = delete_value(grown.partition, grown.variable, 40)
    assert out.kind == "adjusted"
    assert out.touched == ()
    assert out.partition.source.multiplicity[40] == 1
    assert spans(out.partition) == spans(partition)


def test_delete_missing_value_rejected(age_state):
    partition, variable = age_state
    with pytest.raises(MaintenanceError):
        delete_value(partition, variable, 1234)


def test_delete_singleton_cluster_drops_term():
    series = series_from_values("x", [0, 1, 2, 4, 5, 7, 60, 100, 101, 103, 104, 106])
    partition, _ = clusterdb_star(series)
    if not any(len(c.values) == 1 for c in partition.clusters):
        pytest.skip("layout did not isolate a singleton cluster")
    variable = gfat(partition)
    idx = next(i for i, c in enumerate(partition.clusters) if len(c.values) == 1)
    x = partition.clusters[idx].values[0]
    out = delete_value(partition, variable, x)
    assert out.kind == "adjusted"
    assert len(out.variable.terms) == len(variable.terms) - 1
    assert check_coherence(out.partition)
    assert ruspini_ok(out.variable)


def test_insert_then_delete_restores_spans(age_state):
    partition, variable = age_state
    ins = insert_value(partition, variable, 37)
    back = delete_value(ins.partition, ins.variable, 37)
    assert spans(back.partition) == spans(partition)


def test_deleting_last_value_rejected():
    series = series_from_values("x", [5])
    partition, _ = clusterdb_star(series)
    from flexquery.membership import supports, Kernel
    variable = supports([Kernel(5.0, 5.0)], 5.0, 5.0, attribute="x")
    with pytest.raises(MaintenanceError, match="last remaining"):
        delete_value(partition, variable, 5)


def build_partition(groups):
    """Coherent partition straight from value groups (bypasses the fit, which
    deliberately leaves margins too wide for single deletions to break)."""
    from flexquery.clustering import Cluster
    from flexquery.rng import build_rng
    vals = [v for g in groups for v in g]
    series = series_from_values("x", vals)
    clusters = tuple(Cluster(tuple(g), len(g), build_rng(tuple(g)))
                     for g in groups)
    return Partition(clusters, series)


def test_interior_delete_recluster_trigger():
    # deleting 2 merges gaps 2+2 into 4, beating the 3.5 inter-cluster gap
    p = build_partition([[-40.0, -39.0, -38.0, -36.0, -35.0],
                         [0.0, 2.0, 4.0, 5.0],
                         [8.5, 10.5, 12.5, 13.5]])
    assert check_coherence(p)
    out = delete_value(p, gfat(p), 2.0)
    assert out.kind == "reclustered"
    assert check_coherence(out.partition)


def random_gap_series(rng):
    base = 0.0
    values = []
    for _ in range(rng.randint(2, 4)):
        width = rng.randint(4, 9)
        group = sorted(rng.sample(range(0, 30), width))
        values.extend(base + g for g in group)
        base += 30 + rng.randint(40, 90)
    return series_from_values("x", values)


def test_randomized_operations_keep_invariants():
    rng = random.Random(20240811)
    ops = 0
    while ops < 500:
        series = random_gap_series(rng)
        partition, _ = clusterdb_star(series)
        variable = gfat(partition)
        for _ in range(rng.randint(2, 6)):
            if rng.random() < 0.5:
                lo, hi = series.min - 20, series.max + 20
                x = round(rng.uniform(lo, hi), 2)
                out = insert_value(partition, variable, x)
            else:
                x = rng.choice(series.values)
                if len(series.values) == 1:
                    break
                out = delete_value(partition, variable, x)
            assert satisfies_p1(out.partition)
            assert check_coherence(out.partition)
            assert ruspini_ok(out.variable, samples=60)
            partition, variable = out.partition, out.variable
            series = partition.source
            ops += 1
    assert ops >= 500


def test_recluster_quality_audit_insert():
    # crafted triggers: an outlier beyond the domain, farther out than the
    # widest inter-cluster gap, always breaks coherence; reclustering must
    # score at least as well (DB*, lower is better) as naive keep-in-place
    rng = random.Random(42)
    checked = 0
    while checked < 25:
        series = random_gap_series(rng)
        partition, _ = clusterdb_star(series)
        if len(partition.clusters) < 2:
            continue
        variable = gfat(partition)
        inter = max(b.min - a.max for a, b in
                    zip(partition.clusters, partition.clusters[1:]))
        d = inter + rng.randint(1, 30)
        x = series.min - d if rng.random() < 0.5 else series.max + d
        out = insert_value(partition, variable, x)
        assert out.kind == "reclustered"
        naive = naive_insert_partition(partition, x)
        if len(naive.clusters) < 2 or len(out.partition.clusters) < 2:
            continue
        assert db_star(out.partition.view()) <= db_star(naive.view()) + 1e-9
        checked += 1


def test_recluster_quality_audit_delete():
    # interior deletions that merge two gaps past the inter-cluster distance
    for shift in (0.0, 7.0, 19.0, 40.0):
        p = build_partition([
            [v + shift for v in (-40.0, -39.0, -38.0, -36.0, -35.0)],
            [v + shift for v in (0.0, 2.0, 4.0, 5.0)],
            [v + shift for v in (8.5, 10.5, 12.5, 13.5)]])
        out = delete_value(p, gfat(p), 2.0 + shift)
        assert out.kind == "reclustered"
        naive = naive_delete_partition(p, 2.0 + shift)
        assert db_star(out.partition.view()) <= db_star(naive.view()) + 1e-9


def test_naive_delete_partition(age_state):
    partition, _ = age_state
    naive = naive_delete_partition(partition, 10)
    assert naive.clusters[0].values == (11, 12, 13, 14, 15, 17)
