"""Trapezoidal membership functions derived from a partition.

Each cluster becomes one linguistic term. The kernel is the dense run of
values around the cluster centroid; supports are stitched from adjacent
kernels so the terms always form a Ruspini partition (degrees sum to 1
everywhere on the attribute domain). The first term's kernel is pinned to
the domain minimum and the last term's to the maximum.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .clustering import Cluster, Partition


class MembershipError(Exception):
    pass


@dataclass(frozen=True)
class TrapezoidMF:
    a: float
    b: float
    c: float
    d: float
    term: str            # full term name, e.g. "taille-moyenne" or "tail_m"
    label: str = ""      # short label, e.g. "moyenne"

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise MembershipError(
                f"trapezoid parameters must be ordered: {(self.a, self.b, self.c, self.d)}")

    @property
    def params(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def kernel(self) -> tuple[float, float]:
        return (self.b, self.c)


def mf_eval(mf: TrapezoidMF, x: float) -> float:
    """Degree of x under a trapezoid: 1 on the kernel, linear on the
    ramps, 0 outside; zero-width ramps behave as step edges."""
    if mf.b <= x <= mf.c:
        return 1.0
    if x <= mf.a or x >= mf.d:
        return 0.0
    if x < mf.b:
        return (x - mf.a) / (mf.b - mf.a)
    return (mf.d - x) / (mf.d - mf.c)


@dataclass(frozen=True)
class LinguisticVariable:
    attribute: str
    terms: tuple[TrapezoidMF, ...]      # ordered left to right
    domain: tuple[float, float]

    def __post_init__(self):
        validate_stitching(self.terms, self.domain)

    @property
    def labels(self) -> list[str]:
        return [t.label for t in self.terms]

    def term(self, key: str) -> TrapezoidMF:
        """Find a term by short label, falling back to full term name."""
        for t in self.terms:
            if t.label == key:
                return t
        for t in self.terms:
            if t.term == key:
                return t
        raise MembershipError(
            f"{self.attribute!r} has no term {key!r}; available labels: "
            f"{{{', '.join(self.labels)}}}")

    def degrees(self, x: float) -> dict[str, float]:
        return {t.label: mf_eval(t, x) for t in self.terms}


def validate_stitching(terms, domain) -> None:
    """Check the adjacency invariants that force the Ruspini property."""
    if not terms:
        raise MembershipError("a linguistic variable needs at least one term")
    lo, hi = domain
    first, last = terms[0], terms[-1]
    if not (first.a == first.b == lo):
        raise MembershipError("first term must have A = B = domain minimum")
    if not (last.c == last.d == hi):
        raise MembershipError("last term must have C = D = domain maximum")
    for left, right in zip(terms, terms[1:]):
        if left.d != right.b or right.a != left.c:
            raise MembershipError(
                f"terms {left.term!r} and {right.term!r} are not stitched "
                "(need D_i = B_(i+1) and A_(i+1) = C_i)")
        if left.c >= right.b:
            raise MembershipError(
                f"kernels of {left.term!r} and {right.term!r} overlap")


def centroid(c) -> float:
    """Cluster centroid: the mean when it is a member, otherwise the member
    nearest the mean (ties toward the smaller value)."""
    values = tuple(getattr(c, "values", c))
    if not values:
        raise MembershipError("empty cluster has no centroid")
    mean = sum(values) / len(values)
    if mean in values:
        return mean
    return min(values, key=lambda v: (abs(v - mean), v))


@dataclass(frozen=True)
class DensityProfile:
    densities: dict[float, float] = field(compare=False)
    dmin: float
    dmax: float
    threshold: float        # (dmin + dmax) / 2
    diameter: float

    def is_dense(self, x: float) -> bool:
        return self.densities[x] >= self.threshold


def density_profile(c: Cluster) -> DensityProfile:
    """Node densities over the cluster graph.

    De(x) = (Diam - mean distance to direct neighbors) / Diam, so values
    hugging their neighbors score high. Requires at least two values.
    """
    if len(c.values) < 2:
        raise MembershipError("density undefined for singleton clusters")
    diam = c.values[-1] - c.values[0]
    densities = {}
    for i, x in enumerate(c.values):
        nb = c.graph.neighbors(i)
        if not nb:
            raise MembershipError(f"value {x} has no neighbors in its cluster graph")
        mean_dist = sum(abs(x - c.values[j]) for j in nb) / len(nb)
        densities[x] = (diam - mean_dist) / diam
    dmin, dmax = min(densities.values()), max(densities.values())
    return DensityProfile(densities, dmin, dmax, (dmin + dmax) / 2, diam)


@dataclass(frozen=True)
class Kernel:
    inf: float
    sup: float

    def __post_init__(self):
        if self.inf > self.sup:
            raise MembershipError("kernel bounds out of order")


def kernel(c: Cluster) -> Kernel:
    """Dense run around the centroid.

    Walk right from the centroid while the next value is dense, then left
    likewise; density threshold per density_profile. Singletons collapse
    to their only value. Note this is the raw walk: the variable assembly
    later pins the first kernel's inf to the domain minimum and the last
    kernel's sup to the maximum.
    """
    if len(c.values) == 1:
        v = c.values[0]
        return Kernel(v, v)
    profile = density_profile(c)
    ce = centroid(c)
    i = c.values.index(ce)
    r = i
    while r + 1 < len(c.values) and profile.is_dense(c.values[r + 1]):
        r += 1
    l = i
    while l - 1 >= 0 and profile.is_dense(c.values[l - 1]):
        l -= 1
    return Kernel(c.values[l], c.values[r])


def supports(kernels, vmin: float, vmax: float, attribute: str = "x",
             labels=None, names=None) -> LinguisticVariable:
    """Assemble a linguistic variable from ordered disjoint kernels.

    Term i gets (A, B, C, D) = (sup_{i-1}, inf_i, sup_i, inf_{i+1}), with
    the first term pinned at A = B = vmin and the last at C = D = vmax.
    """
    ks = list(kernels)
    if not ks:
        raise MembershipError("no kernels to build supports from")
    for left, right in zip(ks, ks[1:]):
        if left.sup >= right.inf:
            raise MembershipError(f"kernels overlap: {left} / {right}")
    if vmin > ks[0].inf or vmax < ks[-1].sup:
        raise MembershipError("domain bounds must enclose the kernels")
    n = len(ks)
    if labels is None:
        labels = [f"t{i + 1}" for i in range(n)]
    if names is None:
        names = [f"{attribute}-{lab}" for lab in labels]
    terms = []
    for i, k in enumerate(ks):
        b = vmin if i == 0 else k.inf
        c = vmax if i == n - 1 else k.sup
        a = vmin if i == 0 else terms[i - 1].c
        d = vmax if i == n - 1 else ks[i + 1].inf
        terms.append(TrapezoidMF(a, b, c, d, names[i], labels[i]))
    return LinguisticVariable(attribute, tuple(terms), (vmin, vmax))


def gfat(p: Partition, labels=None, names=None) -> LinguisticVariable:
    """Derive the full linguistic variable for a partition: one kernel per
    cluster, then stitched supports over the attribute domain."""
    ks = [kernel(c) for c in p.clusters]
    return supports(ks, p.source.min, p.source.max,
                    attribute=p.source.attribute, labels=labels, names=names)
