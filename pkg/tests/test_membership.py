
import pytest
from hypothesis import given, settings, strategies as st

from flexquery.clustering import clusterdb_star
from flexquery.dataset import series_from_values
from flexquery.membership import (Kernel, LinguisticVariable, MembershipError,
                                  TrapezoidMF, centroid, density_profile, gfat,
                                  kernel, mf_eval, supports)

from conftest import AGE_CLUSTERS


@pytest.fixture(scope="module")
def age_partition(age_series):
    p, _ = clusterdb_star(age_series)
    return p


def test_centroids(age_partition):
    cs = [centroid(c) for c in age_partition.clusters]
    assert cs == [13, 39, 72, 91]  # published: 13, 39, 72, 91


def test_centroid_trivia():
    assert centroid([5.0]) == 5.0
    assert centroid([0.0, 2.0]) == 0.0  # mean 1 equidistant, smaller wins
    assert centroid([1.0, 2.0, 3.0]) == 2.0  # exact member mean


def test_density_profile_path_examples():
    from flexquery.clustering import Cluster
    from flexquery.rng import build_rng

    def mk(values):
        vals = tuple(map(float, values))
        return Cluster(vals, len(vals), build_rng(vals))

    p = density_profile(mk([0, 1, 2]))
    assert p.densities == {0.0: 0.5, 1.0: 0.5, 2.0: 0.5}
    assert p.threshold == 0.5

    p = density_profile(mk([0, 1, 10]))
    assert p.densities[0.0] == pytest.approx(0.9)
    assert p.densities[1.0] == pytest.approx(0.5)
    assert p.densities[10.0] == pytest.approx(0.1)
    assert p.threshold == pytest.approx(0.5)

    with pytest.raises(MembershipError):
        density_profile(mk([7]))


def test_kernels_from_density_walk(age_partition):
    ks = [kernel(c) for c in age_partition.clusters]
    assert (ks[0].inf, ks[0].sup) == (10, 15)
    assert (ks[1].inf, ks[1].sup) == (38, 41)
    assert (ks[2].inf, ks[2].sup) == (69, 72)
    # the raw walk stops at 91 (95 is not dense); the published [90, 95]
    # appears once the last term's kernel is pinned to the domain maximum
    assert (ks[3].inf, ks[3].sup) == (90, 91)


def test_singleton_kernel():
    from flexquery.clustering import Cluster
    from flexquery.rng import build_rng
    c = Cluster((4.0,), 1, build_rng((4.0,)))
    assert kernel(c) == Kernel(4.0, 4.0)


def test_gfat_age_matches_published_tables(age_partition):
    var = gfat(age_partition)
    assert [t.params for t in var.terms] == [
        (10, 10, 15, 38),   # support [10, 38[
        (15, 38, 41, 69),   # support ]15, 69[
        (41, 69, 72, 90),   # support ]41, 90[
        (72, 90, 95, 95),   # support ]72, 95], kernel pinned to [90, 95]
    ]
    assert [t.kernel for t in var.terms] == [(10, 15), (38, 41), (69, 72), (90, 95)]


def test_supports_single_kernel_is_constant_one():
    var = supports([Kernel(3.0, 5.0)], 0.0, 10.0, attribute="x")
    assert var.terms[0].params == (0, 0, 10, 10)
    for x in (0, 2.5, 9.9, 10):
        assert mf_eval(var.terms[0], x) == 1.0


def test_supports_reject_overlapping_kernels():
    with pytest.raises(MembershipError):
        supports([Kernel(0.0, 5.0), Kernel(5.0, 9.0)], 0.0, 10.0)


def taille_variable():
    terms = (
        TrapezoidMF(100, 100, 160, 165, "tail_p", "petite"),
        TrapezoidMF(160, 165, 170, 175, "tail_m", "moyenne"),
        TrapezoidMF(170, 175, 200, 200, "tail_g", "grande"),
    )
    return LinguisticVariable("taille", terms, (100.0, 200.0))


def test_taille_variable_satisfies_stitching():
    var = taille_variable()  # constructor validates
    assert var.labels == ["petite", "moyenne", "grande"]


def test_mf_eval_published_degrees():
    var = taille_variable()
    p, m, g = var.terms
    assert mf_eval(p, 162) == pytest.approx(0.6)   # (165-162)/(165-160)
    assert mf_eval(m, 162) == pytest.approx(0.4)
    assert mf_eval(g, 162) == 0.0
    assert mf_eval(m, 174) == pytest.approx(0.2)
    assert mf_eval(g, 174) == pytest.approx(0.8)
    assert mf_eval(m, 170) == 1.0                  # kernel
    assert mf_eval(p, 100) == 1.0                  # closed domain end
    assert mf_eval(g, 200) == 1.0


def test_mf_eval_step_edges():
    spike = TrapezoidMF(0, 0, 0, 4, "left", "l")
    assert mf_eval(spike, 0) == 1.0
    assert mf_eval(spike, -0.001) == 0.0
    assert mf_eval(spike, 2) == pytest.approx(0.5)


def test_invalid_trapezoid_rejected():
    with pytest.raises(MembershipError):
        TrapezoidMF(5, 4, 6, 7, "bad", "b")


kernel_layouts = st.lists(
    st.integers(min_value=0, max_value=400), min_size=2, max_size=8,
    unique=True).filter(lambda xs: len(xs) >= 2)


@st.composite
def stitched_variables(draw):
    cuts = sorted(draw(kernel_layouts))
    # consecutive pairs become kernels when separated by a gap
    ks, i = [], 0
    while i + 1 < len(cuts):
        ks.append(Kernel(float(cuts[i]), float(cuts[i + 1])))
        i += 2
    if not ks:
        ks = [Kernel(float(cuts[0]), float(cuts[0]))]
    lo = ks[0].inf - draw(st.integers(0, 10))
    hi = ks[-1].sup + draw(st.integers(0, 10))
    return supports(ks, float(lo), float(hi), attribute="x")


@settings(deadline=None)
@given(stitched_variables(), st.floats(min_value=0, max_value=1))
def test_ruspini_sum_to_one(var, frac):
    lo, hi = var.domain
    x = lo + frac * (hi - lo)
    total = sum(mf_eval(t, x) for t in var.terms)
    assert abs(total - 1.0) <= 1e-9


@given(stitched_variables())
def test_monotone_ramps(var):
    for t in var.terms:
        if t.a < t.b:
            xs = [t.a + k * (t.b - t.a) / 7 for k in range(8)]
            vals = [mf_eval(t, x) for x in xs]
            assert all(u <= v + 1e-12 for u, v in zip(vals, vals[1:]))
        if t.c < t.d:
            xs = [t.c + k * (t.d - t.c) / 7 for k in range(8)]
            vals = [mf_eval(t, x) for x in xs]
            assert all(u >= v - 1e-12 for u, v in zip(vals, vals[1:]))


series_strategy = st.lists(
    st.integers(min_value=0, max_value=2000).map(float),
    min_size=2, max_size=30, unique=True)


@settings(deadline=None)
@given(series_strategy)
def test_kernel_bounds_are_members_and_contain_centroid(values):
    series = series_from_values("x", values)
    p, _ = clusterdb_star(series)
    for c in p.clusters:
        k = kernel(c)
        assert k.inf in c.values and k.sup in c.values
        assert k.inf <= centroid(c) <= k.sup


@settings(deadline=None)
@given(series_strategy)
def test_gfat_kernels_inside_their_clusters(values):
    series = series_from_values("x", values)
    p, _ = clusterdb_star(series)
    var = gfat(p)
    for c, t in zip(p.clusters, var.terms):
        assert c.min <= t.b <= t.c <= c.max
