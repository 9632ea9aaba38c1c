"""Persistence of linguistic variables: the FT table of MF parameters.

The knowledge base is a value object; put() returns a new instance with a
bumped version, so readers holding the old reference keep a consistent
snapshot. On disk it is a single canonical JSON document; a flat CSV
export of the FT rows (terme, A, B, C, D) is available for interchange.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass

from .membership import LinguisticVariable, TrapezoidMF


class KnowledgeBaseError(Exception):
    pass


@dataclass(frozen=True)
class FTRecord:
    terme: str
    a: float
    b: float
    c: float
    d: float


@dataclass(frozen=True)
class KnowledgeBase:
    variables: tuple[LinguisticVariable, ...] = ()
    version: int = 0

    def attribute_names(self) -> list[str]:
        return [v.attribute for v in self.variables]

    def variable(self, attribute: str) -> LinguisticVariable:
        for v in self.variables:
            if v.attribute == attribute:
                return v
        raise KnowledgeBaseError(
            f"no variable for attribute {attribute!r}; known: {self.attribute_names()}")

    def put(self, variable: LinguisticVariable) -> "KnowledgeBase":
        """Insert or replace the variable for its attribute; bumps version."""
        kept = tuple(v for v in self.variables if v.attribute != variable.attribute)
        return KnowledgeBase(kept + (variable,), self.version + 1)

    def lookup(self, attribute: str, key: str) -> TrapezoidMF:
        """Find a term by short label or full term name."""
        var = self.variable(attribute)
        try:
            return var.term(key)
        except Exception:
            raise KnowledgeBaseError(
                f"attribute {attribute!r} has no term {key!r}; available labels: "
                f"{{{', '.join(var.labels)}}}") from None

    @property
    def records(self) -> list[FTRecord]:
        out = []
        for v in self.variables:
            for t in v.terms:
                out.append(FTRecord(t.term, t.a, t.b, t.c, t.d))
        return out

    def to_document(self) -> dict:
        return {
            "version": self.version,
            "attributes": [
                {
                    "name": v.attribute,
                    "domain": [float(v.domain[0]), float(v.domain[1])],
                    "terms": [
                        {"label": t.label, "name": t.term,
                         "A": float(t.a), "B": float(t.b),
                         "C": float(t.c), "D": float(t.d)}
                        for t in v.terms
                    ],
                }
                for v in sorted(self.variables, key=lambda v: v.attribute)
            ],
        }

    def dumps(self) -> str:
        # sorted keys and repr floats keep the serialization byte-stable
        return json.dumps(self.to_document(), ensure_ascii=False, sort_keys=True,
                          indent=2) + "\n"

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    def export_ft(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["terme", "A", "B", "C", "D"])
            for r in self.records:
                writer.writerow([r.terme, r.a, r.b, r.c, r.d])


def kb_put(kb: KnowledgeBase, variable: LinguisticVariable) -> KnowledgeBase:
    return kb.put(variable)


def kb_lookup(kb: KnowledgeBase, attribute: str, key: str) -> TrapezoidMF:
    return kb.lookup(attribute, key)


def load_kb(path) -> KnowledgeBase:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise KnowledgeBaseError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise KnowledgeBaseError(f"{path}: invalid JSON ({exc})") from None
    variables = []
    for att in doc.get("attributes", []):
        terms = tuple(
            TrapezoidMF(float(t["A"]), float(t["B"]), float(t["C"]), float(t["D"]),
                        t.get("name", f"{att['name']}-{t['label']}"), t["label"])
            for t in att["terms"]
        )
        lo, hi = att["domain"]
        variables.append(LinguisticVariable(att["name"], terms, (float(lo), float(hi))))
    return KnowledgeBase(tuple(variables), int(doc.get("version", 0)))
