"""Acceptance suite: one test per release criterion, each printing a
[PASS] line on success (run with `pytest tests/test_acceptance.py -v -s`).
Tolerances are pinned here and nowhere else."""
import random
import time
from itertools import combinations

import pytest

from flexquery.clustering import clusterdb_star
from flexquery.dataset import attribute_series, series_from_values
from flexquery.fca import FormalContext, build_lattice, derive_down, derive_up
from flexquery.maintenance import (check_coherence, delete_value, insert_value,
                                   naive_delete_partition, naive_insert_partition)
from flexquery.membership import gfat, mf_eval
from flexquery.query import (Condition, FuzzyContextQ, approximate_subqueries,
                             binarize, evaluate, minimal_failure_reasons,
                             parse_query)
from flexquery.validity import db_star

from conftest import AGE_CLUSTERS, AGE_VALUES, EMPLOYE_QUERY

from test_maintenance import build_partition, random_gap_series, ruspini_ok


def report(name):
    print(f"\n[PASS] {name}")


def test_age_worked_example(age_series):
    start = time.perf_counter()
    partition, index_value = clusterdb_star(age_series)
    variable = gfat(partition)
    elapsed = time.perf_counter() - start

    assert [c.values for c in partition.clusters] == AGE_CLUSTERS
    assert [t.kernel for t in variable.terms] == \
        [(10, 15), (38, 41), (69, 72), (90, 95)]
    assert [t.params for t in variable.terms] == [
        (10, 10, 15, 38),    # support [10, 38[
        (15, 38, 41, 69),    # support ]15, 69[
        (41, 69, 72, 90),    # support ]41, 90[
        (72, 90, 95, 95),    # support ]72, 95]
    ]
    assert 0.247 <= index_value <= 0.347, \
        f"DB* {index_value} outside the documented band around 0.297"
    assert elapsed < 1.0
    report(f"age worked example: 4 clusters, published kernels/supports, "
           f"DB*={index_value:.3f} in [0.247, 0.347], {elapsed*1e3:.0f} ms")


def test_membership_arithmetic(employes_kb):
    taille = employes_kb.variable("taille")
    degrees_162 = [mf_eval(t, 162) for t in taille.terms]
    degrees_174 = [mf_eval(t, 174) for t in taille.terms]
    assert degrees_162 == [0.6, 0.4, 0.0]
    assert degrees_174 == [0.0, 0.2, 0.8]

    for variable in employes_kb.variables:
        lo, hi = variable.domain
        for k in range(10_000):
            x = min(max(lo + (hi - lo) * k / 9_999, lo), hi)
            total = sum(mf_eval(t, x) for t in variable.terms)
            assert abs(total - 1.0) <= 1e-9, (variable.attribute, x, total)
    report("membership arithmetic: 162 -> (0.6, 0.4, 0), 174 -> (0, 0.2, 0.8) "
           "exact; Ruspini sum within 1e-9 at 10000 points on all 5 variables")


def test_employe_cooperative_query(employes, employes_kb):
    start = time.perf_counter()
    outcome = evaluate(parse_query(EMPLOYE_QUERY), employes, employes_kb)
    elapsed = time.perf_counter() - start

    assert outcome.status == "empty"
    got_reasons = {frozenset((c.attribute, c.label) for c in r)
                   for r in outcome.failure_reasons}
    assert got_reasons == {
        frozenset({("nbE", "faible")}),
        frozenset({("age", "grand"), ("nbAT", "moyen")}),
        frozenset({("age", "grand"), ("salaire", "faible")}),
        frozenset({("salaire", "faible"), ("nbAT", "moyen"),
                   ("taille", "moyenne")}),
    }

    approx = {frozenset((c.attribute, c.label) for c in conds):
              [(proj["nom"], deg) for _, deg, proj in answers]
              for conds, answers in outcome.approximate}
    expected = {
        frozenset({("nbAT", "moyen"), ("taille", "moyenne")}):
            [("Amal", 1.0), ("Imed", 0.2), ("Nawfel", 0.2)],
        frozenset({("nbAT", "moyen"), ("salaire", "faible")}):
            [("Hanene", 1.0), ("Bassem", 0.86)],
        frozenset({("salaire", "faible"), ("taille", "moyenne")}):
            # published table prints Sihem 0.46 and the name "Amel" above;
            # min(0.46, 0.4) = 0.4 and the dataset spells "Amal" - the
            # formulas win over the two typos
            [("Saif", 0.8), ("Sihem", 0.4), ("Faiza", 0.2)],
        frozenset({("age", "grand"), ("taille", "moyenne")}):
            [("Farah", 0.2)],
    }
    assert set(approx) == set(expected)
    for intent, ranked in expected.items():
        got = approx[intent]
        assert [n for n, _ in got] == [n for n, _ in ranked]
        for (_, got_deg), (_, want_deg) in zip(got, ranked):
            assert got_deg == pytest.approx(want_deg, abs=1e-6)
    assert elapsed < 1.0
    report(f"cooperative query: empty answer, 4 published failure reasons, "
           f"4 ranked subqueries (typos asserted against formulas), "
           f"{elapsed*1e3:.0f} ms")


def closure_enumeration_intents(ctx):
    """Independent oracle: intents are the closures f(g(Y)) of all attribute
    subsets."""
    out = set()
    attrs = list(ctx.attributes)
    for r in range(len(attrs) + 1):
        for sub in combinations(attrs, r):
            out.add(derive_up(ctx, derive_down(ctx, sub)))
    return out


def test_lattice_oracle_200_contexts():
    rng = random.Random(20250811)
    start = time.perf_counter()
    for i in range(200):
        n = rng.randint(1, 12)
        m = rng.randint(1, 8)
        density = rng.uniform(0.1, 0.9)
        objects = list(range(n))
        attributes = [f"a{j}" for j in range(m)]
        incidence = [(o, a) for o in objects for a in attributes
                     if rng.random() < density]
        ctx = FormalContext.of(objects, attributes, incidence)
        lattice = build_lattice(ctx)
        assert {c.intent for c in lattice.concepts} == closure_enumeration_intents(ctx)
        for c in lattice.concepts:
            assert derive_down(ctx, c.intent) == c.extent

        # incremental insertion equals the batch build
        half = n // 2
        prefix = FormalContext.of(objects[:half], attributes,
                                  [(o, a) for o, a in incidence if o < half])
        lat = build_lattice(prefix)
        for o in objects[half:]:
            lat = lat.with_object(o, ctx.row(o))
        assert {(c.extent, c.intent) for c in lat.concepts} == \
            {(c.extent, c.intent) for c in lattice.concepts}
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(f"lattice oracle: 200 random contexts equal closure enumeration, "
           f"incremental == batch, {elapsed:.1f} s")


def test_mre_oracle_200_contexts():
    rng = random.Random(20250812)
    start = time.perf_counter()
    for i in range(200):
        n = rng.randint(1, 6)
        conditions = [Condition(f"c{j}", "t") for j in range(n)]
        n_obj = rng.randint(1, 50)
        rows = []
        for _ in range(n_obj):
            row = {c for c in conditions if rng.random() < rng.uniform(0.1, 0.8)}
            if len(row) == n:
                row.discard(rng.choice(conditions))
            rows.append(row)
        degrees = {(o, c): (round(rng.uniform(0.01, 1.0), 3) if c in rows[o] else 0.0)
                   for o in range(n_obj) for c in conditions}
        fc = FuzzyContextQ(tuple(range(n_obj)), tuple(conditions), degrees)
        lattice = build_lattice(binarize(fc))
        assert lattice.infimum.extent == frozenset()

        got = minimal_failure_reasons(conditions, lattice)
        empty = []
        for r in range(1, n + 1):
            for sub in combinations(conditions, r):
                if not any(set(sub) <= row for row in rows):
                    empty.append(frozenset(sub))
        expected = {s for s in empty if not any(t < s for t in empty)}
        assert got == expected

        approx = approximate_subqueries(lattice, fc)
        inhabited = {}
        for r in range(1, n + 1):
            for sub in combinations(conditions, r):
                support = [o for o in range(n_obj) if set(sub) <= rows[o]]
                if support:
                    inhabited[frozenset(sub)] = support
        if inhabited:
            cmax = max(len(s) for s in inhabited)
            assert {frozenset(conds) for conds, _ in approx} == \
                {s for s in inhabited if len(s) == cmax}
        else:
            assert approx == []
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    report(f"failure-reason oracle: 200 empty-infimum contexts match the "
           f"brute-force minimal family; subquery intents maximal, {elapsed:.1f} s")


def test_incremental_maintenance_properties():
    rng = random.Random(20240811)
    ops = 0
    while ops < 500:
        series = random_gap_series(rng)
        partition, _ = clusterdb_star(series)
        variable = gfat(partition)
        for _ in range(rng.randint(2, 6)):
            if rng.random() < 0.5:
                x = round(rng.uniform(series.min - 20, series.max + 20), 2)
                out = insert_value(partition, variable, x)
            else:
                if len(series.values) == 1:
                    break
                out = delete_value(partition, variable, rng.choice(series.values))
            assert check_coherence(out.partition)
            assert ruspini_ok(out.variable, samples=60)
            partition, variable = out.partition, out.variable
            series = partition.source
            ops += 1

    # crafted recluster triggers: reclustering never scores worse than naive
    rng = random.Random(42)
    audits = 0
    while audits < 25:
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
        audits += 1
    for shift in (0.0, 11.0):
        p = build_partition([
            [v + shift for v in (-40.0, -39.0, -38.0, -36.0, -35.0)],
            [v + shift for v in (0.0, 2.0, 4.0, 5.0)],
            [v + shift for v in (8.5, 10.5, 12.5, 13.5)]])
        out = delete_value(p, gfat(p), 2.0 + shift)
        assert out.kind == "reclustered"
        assert db_star(out.partition.view()) <= \
            db_star(naive_delete_partition(p, 2.0 + shift).view()) + 1e-9
    report("incremental maintenance: 500 randomized updates kept coherence "
           "and the Ruspini sum; reclustering beat keep-in-place on all "
           "crafted triggers")


def test_planted_cluster_counts_recovered():
    # the published per-dataset cluster-count benchmark is not reproducible
    # without the original extracts; these planted gap structures stand in
    def group(start, steps):
        vals = [float(start)]
        for s in steps:
            vals.append(vals[-1] + s)
        return vals

    two = group(0, [1, 1, 2, 1, 2]) + group(60, [2, 1, 1, 2, 1])
    three = group(0, [1, 2, 1, 1]) + group(50, [1, 1, 2, 2]) + group(110, [2, 1, 2, 1])
    four = (group(0, [1, 1, 2]) + group(40, [2, 1, 1]) +
            group(85, [1, 2, 1]) + group(130, [1, 1, 2]))
    for values, expected in ((two, 2), (three, 3), (four, 4)):
        series = series_from_values("x", values)
        partition, _ = clusterdb_star(series)
        assert len(partition.clusters) == expected, \
            f"expected {expected} clusters, got {len(partition.clusters)}"
        # recovered exactly: cluster spans match the planted groups
        gaps = [b.min - a.max for a, b in
                zip(partition.clusters, partition.clusters[1:])]
        assert all(g >= 20 for g in gaps)
    report("planted gap structures: 2-, 3- and 4-cluster synthetic datasets "
           "recovered exactly")
