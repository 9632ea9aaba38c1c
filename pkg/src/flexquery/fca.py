"""Formal concept analysis: contexts, Galois derivations and the concept
lattice, built incrementally one object at a time.

The construction follows the object-insertion idea behind Godin's
algorithm: inserting an object intersects its attribute row with every
known intent, so updating an existing lattice is one pass over its
concepts instead of a rebuild. The bottom concept always carries the full
attribute set as intent (with an empty extent when no object matches
everything), because the query layer reads the answer set straight off
the infimum.
"""
from __future__ import annotations

from dataclasses import dataclass, field


class FCAError(Exception):
    pass


@dataclass(frozen=True)
class FormalContext:
    objects: tuple
    attributes: tuple
    incidence: frozenset  # of (object, attribute) pairs

    def __post_init__(self):
        objs, attrs = set(self.objects), set(self.attributes)
        for o, a in self.incidence:
            if o not in objs or a not in attrs:
                raise FCAError(f"incidence pair {(o, a)!r} outside the context")

    @classmethod
    def of(cls, objects, attributes, incidence) -> "FormalContext":
        return cls(tuple(objects), tuple(attributes), frozenset(incidence))

    def row(self, obj) -> frozenset:
        return frozenset(a for o, a in self.incidence if o == obj)


def derive_up(ctx: FormalContext, objects) -> frozenset:
    """f: attributes common to every object of the set; all attributes
    for the empty set."""
    objects = set(objects)
    unknown = objects - set(ctx.objects)
    if unknown:
        raise FCAError(f"unknown objects: {sorted(map(repr, unknown))}")
    result = set(ctx.attributes)
    for o in objects:
        result &= ctx.row(o)
    return frozenset(result)


def derive_down(ctx: FormalContext, attributes) -> frozenset:
    """g: objects possessing every attribute of the set; all objects for
    the empty set."""
    attributes = set(attributes)
    unknown = attributes - set(ctx.attributes)
    if unknown:
        raise FCAError(f"unknown attributes: {sorted(map(repr, unknown))}")
    return frozenset(o for o in ctx.objects if attributes <= ctx.row(o))


@dataclass(frozen=True)
class Concept:
    extent: frozenset
    intent: frozenset

    def __repr__(self):
        ext = ",".join(sorted(map(str, self.extent)))
        intn = ",".join(sorted(map(str, self.intent)))
        return f"Concept([{ext}] | [{intn}])"


@dataclass(frozen=True)
class Lattice:
    context: FormalContext
    concepts: tuple[Concept, ...]
    parents: dict = field(compare=False)    # concept -> tuple of upper covers
    children: dict = field(compare=False)   # concept -> tuple of lower covers
    supremum: Concept = field(compare=False)
    infimum: Concept = field(compare=False)

    def concept_with_intent(self, intent) -> Concept | None:
        intent = frozenset(intent)
        for c in self.concepts:
            if c.intent == intent:
                return c
        return None

    def with_object(self, obj, attributes) -> "Lattice":
        """Insert one more object into the lattice (structural repair only,
        no rebuild of previously found concepts)."""
        if obj in self.context.objects:
            raise FCAError(f"object {obj!r} already present")
        attributes = frozenset(attributes)
        unknown = attributes - set(self.context.attributes)
        if unknown:
            raise FCAError(f"unknown attributes: {sorted(map(repr, unknown))}")
        ctx = FormalContext(self.context.objects + (obj,), self.context.attributes,
                            self.context.incidence |
                            frozenset((obj, a) for a in attributes))
        intents = {c.intent: set(c.extent) for c in self.concepts}
        _insert_row(intents, obj, attributes)
        return _finish(ctx, intents)


def _insert_row(intents: dict, obj, attrs: frozenset) -> None:
    """One object-insertion pass: known intents gain the object when they
    cover its row; every intersection with the row becomes a concept."""
    fresh: dict = {}
    for intent, extent in intents.items():
        if intent <= attrs:
            extent.add(obj)
            continue
        meet = intent & attrs
        if meet in intents:
            continue  # its own concept; handled by the branch above
        bucket = fresh.setdefault(meet, set())
        bucket |= extent
        bucket.add(obj)
    intents.update(fresh)


def build_lattice(ctx: FormalContext) -> Lattice:
    """Concept lattice of a context via repeated object insertion."""
    full = frozenset(ctx.attributes)
    intents: dict = {full: set()}
    for obj in ctx.objects:
        _insert_row(intents, obj, ctx.row(obj))
    return _finish(ctx, intents)


def _finish(ctx: FormalContext, intents: dict) -> Lattice:
    concepts = [Concept(frozenset(ext), intent) for intent, ext in intents.items()]
    concepts.sort(key=lambda c: (len(c.extent), sorted(map(str, c.intent))))
    # Hasse covers by extent inclusion (transitive reduction); d covers c
    # iff c < d with no third concept strictly between
    parents: dict = {c: () for c in concepts}
    children: dict = {c: [] for c in concepts}
    for c in concepts:
        uppers = [d for d in concepts if c.extent < d.extent]
        covers = [d for d in uppers
                  if not any(e.extent < d.extent for e in uppers if e is not d)]
        parents[c] = tuple(covers)
        for d in covers:
            children[d].append(c)
    children = {c: tuple(v) for c, v in children.items()}
    supremum = max(concepts, key=lambda c: len(c.extent))
    infimum = next(c for c in concepts if c.intent == frozenset(ctx.attributes))
    return Lattice(ctx, tuple(concepts), parents, children, supremum, infimum)


def infimum_parents(lattice: Lattice) -> list[Concept]:
    """Concepts directly covering the bottom of the lattice."""
    return list(lattice.parents[lattice.infimum])


def to_dot(lattice: Lattice) -> str:
    """DOT export for debugging; nodes show `intent | extent size`."""
    lines = ["digraph lattice {", '  rankdir="BT";', "  node [shape=record];"]
    ids = {c: f"c{i}" for i, c in enumerate(lattice.concepts)}
    for c in lattice.concepts:
        intent = ",".join(sorted(map(str, c.intent))) or "{}"
        label = f"{{{intent} | {len(c.extent)}}}"
        label = label.replace('"', r'\"')
        lines.append(f'  {ids[c]} [label="{label}"];')
    for c, ups in lattice.parents.items():
        for d in ups:
            lines.append(f"  {ids[c]} -> {ids[d]};")
    lines.append("}")
    return "\n".join(lines)
