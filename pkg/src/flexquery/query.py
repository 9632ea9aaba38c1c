"""Conjunctive fuzzy queries over a dataset and a knowledge base.

Evaluation pipeline: per-attribute fuzzy scales -> fuzzy context over the
query's conditions -> binary context (degree strictly above alpha, alpha
defaults to 0) -> concept lattice. The answer set is the extent of the
lattice's infimum; when it is empty the outcome is a failure report with
the inclusion-minimal condition subsets that no object satisfies and the
inhabited subqueries of maximal size, each with answers ranked by the min
of their condition degrees.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

from .dataset import Dataset, AttributeSeries, attribute_series
from .fca import FormalContext, Lattice, build_lattice, infimum_parents
from .knowledge import KnowledgeBase
from .membership import LinguisticVariable, mf_eval


class QueryError(Exception):
    pass


class QuerySyntaxError(QueryError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class Condition(NamedTuple):
    attribute: str
    label: str

    def __str__(self):
        return f"{self.attribute} is {self.label}"


@dataclass(frozen=True)
class FuzzyQuery:
    select: tuple[str, ...] | None      # None means '*'
    table: str
    conditions: tuple[Condition, ...]


_TOKEN = re.compile(r"(?P<word>\w[\w.\-]*)|(?P<star>\*)|(?P<comma>,)")


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", pos)
        out.append((m.lastgroup, m.group(m.lastgroup), pos))
        pos = m.end()
    return out


def parse_query(text: str) -> FuzzyQuery:
    """Parse `SELECT cols FROM table WHERE a IS t (AND a IS t)*`.

    Keywords are case-insensitive; identifiers may carry accents. Errors
    report the character offset of the offending token.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("eof", "", len(text))

    def take(expected_word=None, what=None):
        nonlocal pos
        kind, value, offset = peek()
        if expected_word is not None:
            if kind != "word" or value.lower() != expected_word:
                raise QuerySyntaxError(
                    f"expected {expected_word.upper()!r}, found {value or 'end of input'!r}",
                    offset)
        elif kind != "word":
            raise QuerySyntaxError(
                f"expected {what or 'identifier'}, found {value or 'end of input'!r}", offset)
        pos += 1
        return value, offset

    take("select")
    select: tuple[str, ...] | None
    kind, value, offset = peek()
    if kind == "star":
        select = None
        pos += 1
    else:
        cols = [take(what="column name")[0]]
        while peek()[0] == "comma":
            pos += 1
            cols.append(take(what="column name")[0])
        if any(c.lower() in ("from",) for c in cols):
            raise QuerySyntaxError("missing select list", offset)
        select = tuple(cols)
    take("from")
    table, _ = take(what="table name")
    take("where")

    conditions: list[Condition] = []
    while True:
        attr, attr_off = take(what="attribute name")
        take("is")
        label, _ = take(what="linguistic term")
        cond = Condition(attr, label)
        if cond in conditions:
            raise QuerySyntaxError(f"duplicate condition {cond}", attr_off)
        conditions.append(cond)
        kind, value, offset = peek()
        if kind == "eof":
            break
        if kind == "word" and value.lower() == "and":
            pos += 1
            continue
        raise QuerySyntaxError(f"expected AND or end of query, found {value!r}", offset)
    return FuzzyQuery(select, table, tuple(conditions))


def fuzzy_scale(series: AttributeSeries, variable: LinguisticVariable) -> dict:
    """Degree of every distinct value under every term of the variable."""
    lo, hi = variable.domain
    if series.min < lo or series.max > hi:
        raise QueryError(
            f"variable domain {variable.domain} does not cover values of "
            f"{series.attribute!r} ({series.min}..{series.max})")
    return {v: variable.degrees(v) for v in series.values}


@dataclass(frozen=True)
class FuzzyContextQ:
    objects: tuple[int, ...]                    # row ids
    conditions: tuple[Condition, ...]
    degrees: dict = field(compare=False)        # (row id, Condition) -> degree

    def degree(self, obj: int, cond: Condition) -> float:
        return self.degrees[(obj, cond)]


def build_fuzzy_context(q: FuzzyQuery, ds: Dataset, kb: KnowledgeBase) -> FuzzyContextQ:
    """One degree column per query condition, one row per dataset record.
    Degrees are read off the per-attribute fuzzy scales."""
    scales: dict[str, dict] = {}
    degrees = {}
    for cond in q.conditions:
        kb.lookup(cond.attribute, cond.label)  # fail early on unknown labels
        if cond.attribute not in scales:
            series = attribute_series(ds, cond.attribute)
            scales[cond.attribute] = fuzzy_scale(series, kb.variable(cond.attribute))
        scale = scales[cond.attribute]
        label = kb.variable(cond.attribute).term(cond.label).label
        for row_id in range(len(ds.rows)):
            x = ds.numeric_value(row_id, cond.attribute)
            degrees[(row_id, cond)] = scale[x][label]
    return FuzzyContextQ(tuple(range(len(ds.rows))), q.conditions, degrees)


def binarize(fc: FuzzyContextQ, alpha: float = 0.0) -> FormalContext:
    """Formal context holding (o, c) iff the degree strictly exceeds alpha."""
    if not 0 <= alpha < 1:
        raise QueryError(f"alpha must be in [0, 1), got {alpha}")
    incidence = {(o, c) for (o, c), d in fc.degrees.items() if d > alpha}
    return FormalContext(fc.objects, fc.conditions, frozenset(incidence))


def satisfaction_degree(fc: FuzzyContextQ, obj: int, conditions) -> float:
    """Global degree of an object: min over the conditions' degrees."""
    conditions = tuple(conditions)
    if not conditions:
        raise QueryError("satisfaction degree over an empty condition set")
    return min(fc.degree(obj, c) for c in conditions)


def minimal_failure_reasons(conditions, lattice: Lattice) -> set[frozenset]:
    """Inclusion-minimal condition subsets satisfied by no object.

    Size-1 reasons are the conditions missing from every parent intent of
    the infimum; size i in 2..n-1 keeps the i-subsets that are no concept
    intent, are contained in no larger intent, and contain no smaller
    reason. When nothing is found the whole condition set is the reason.
    """
    conditions = tuple(conditions)
    n = len(conditions)
    intents = [c.intent for c in lattice.concepts if c is not lattice.infimum]
    parent_union: set = set()
    for parent in infimum_parents(lattice):
        parent_union |= parent.intent
    mre: set[frozenset] = {frozenset([c]) for c in conditions if c not in parent_union}
    for i in range(2, n):
        sized = {fs for fs in intents if len(fs) == i}
        larger = [fs for fs in intents if len(fs) > i]
        for combo in combinations(conditions, i):
            cand = frozenset(combo)
            if cand in sized:
                continue
            if any(cand <= big for big in larger):
                continue
            if any(reason <= cand for reason in mre):
                continue
            mre.add(cand)
    if not mre:
        mre = {frozenset(conditions)}
    return mre


def approximate_subqueries(lattice: Lattice, fc: FuzzyContextQ):
    """Inhabited subqueries of maximal size with ranked answers.

    Candidates are concepts with non-empty extent and non-empty intent;
    among them only those of maximal intent size survive. Answers are
    ranked by min-degree satisfaction (ties by row id); subqueries are
    ordered by their intent, lexicographically over the query's condition
    order.
    """
    order = {cond: i for i, cond in enumerate(fc.conditions)}
    candidates = [c for c in lattice.concepts if c.extent and c.intent]
    if not candidates:
        return []
    cmax = max(len(c.intent) for c in candidates)
    result = []
    for concept in candidates:
        if len(concept.intent) != cmax:
            continue
        intent = tuple(sorted(concept.intent, key=order.__getitem__))
        ranked = sorted(
            ((obj, satisfaction_degree(fc, obj, intent)) for obj in concept.extent),
            key=lambda item: (-item[1], item[0]))
        result.append((intent, ranked))
    result.sort(key=lambda item: tuple(order[c] for c in item[0]))
    return result


@dataclass(frozen=True)
class QueryOutcome:
    status: str                                  # "answers" | "empty"
    query: FuzzyQuery
    answers: tuple = ()                          # (row id, degree, projection)
    failure_reasons: tuple = ()                  # tuple of condition tuples
    approximate: tuple = ()                      # (conditions, ((row, degree, projection), ...))

    def to_json_dict(self) -> dict:
        def cond(c: Condition):
            return {"attribute": c.attribute, "label": c.label}

        def answer(row, degree, projection):
            return {"row": row, "degree": round(degree, 6), "projection": projection}

        return {
            "status": self.status,
            "answers": [answer(*a) for a in self.answers],
            "failure_reasons": [[cond(c) for c in reason]
                                for reason in self.failure_reasons],
            "approximate": [
                {"conditions": [cond(c) for c in conds],
                 "answers": [answer(*a) for a in answers]}
                for conds, answers in self.approximate
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), ensure_ascii=False)


def _validate_query(q: FuzzyQuery, ds: Dataset, kb: KnowledgeBase) -> None:
    if not q.conditions:
        raise QueryError("a query needs at least one condition")
    if q.select:
        for col in q.select:
            ds.column_index(col)  # raises on unknown columns
    for cond in q.conditions:
        ds.column_index(cond.attribute)
        kb.lookup(cond.attribute, cond.label)


def _projection(ds: Dataset, row_id: int, select) -> dict:
    names = list(select) if select else ds.column_names
    return {name: ds.cell(row_id, name) for name in names}


def evaluate(q: FuzzyQuery, ds: Dataset, kb: KnowledgeBase,
             alpha: float = 0.0) -> QueryOutcome:
    """Evaluate a fuzzy query; empty answers come back with the failure
    report (minimal reasons plus approximate subqueries)."""
    _validate_query(q, ds, kb)
    fc = build_fuzzy_context(q, ds, kb)
    lattice = build_lattice(binarize(fc, alpha))
    answer_rows = lattice.infimum.extent
    if answer_rows:
        ranked = sorted(((obj, satisfaction_degree(fc, obj, q.conditions))
                         for obj in answer_rows), key=lambda it: (-it[1], it[0]))
        answers = tuple((obj, deg, _projection(ds, obj, q.select))
                        for obj, deg in ranked)
        return QueryOutcome("answers", q, answers=answers)

    reasons = minimal_failure_reasons(q.conditions, lattice)
    order = {cond: i for i, cond in enumerate(q.conditions)}
    reason_list = sorted(
        (tuple(sorted(r, key=order.__getitem__)) for r in reasons),
        key=lambda r: (len(r), tuple(order[c] for c in r)))
    approx = tuple(
        (conds, tuple((obj, deg, _projection(ds, obj, q.select))
                      for obj, deg in ranked))
        for conds, ranked in approximate_subqueries(lattice, fc))
    return QueryOutcome("empty", q, failure_reasons=tuple(reason_list),
                        approximate=approx)
