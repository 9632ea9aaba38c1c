"""JSON-over-HTTP facade for the query engine.

The service owns one dataset and one knowledge base. Reads evaluate
against an immutable snapshot; row mutations take an exclusive writer
slot (concurrent mutations get 409) and swap in a fresh snapshot after
running incremental maintenance on every fitted numeric attribute.

Scales loaded from a kb.json override fitted ones for query evaluation;
maintenance still tracks the fitted partition for those attributes but
leaves the hand-loaded scale untouched.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field, replace

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, model_validator

from . import __version__
from .clustering import Partition, clusterdb_star
from .dataset import Dataset, DatasetError, attribute_series, load_csv
from .knowledge import KnowledgeBase, KnowledgeBaseError, load_kb
from .maintenance import MaintenanceError, delete_value, insert_value
from .membership import LinguisticVariable, gfat
from .query import (Condition, FuzzyQuery, QueryError, QuerySyntaxError,
                    evaluate, parse_query)


@dataclass(frozen=True)
class AttributeState:
    series_attribute: str
    partition: Partition
    variable: LinguisticVariable
    kb_overrides: bool  # query scale comes from a loaded kb, not this fit


@dataclass(frozen=True)
class SessionState:
    dataset: Dataset
    kb: KnowledgeBase
    fitted: dict = field(compare=False)  # attr -> AttributeState
    alpha: float = 0.0
    query_log: tuple = ()

    @classmethod
    def from_paths(cls, data_path, kb_path=None, alpha: float = 0.0,
                   fit_attributes=None) -> "SessionState":
        dataset = load_csv(data_path)
        kb = load_kb(kb_path) if kb_path else KnowledgeBase()
        return cls.from_objects(dataset, kb, alpha=alpha, fit_attributes=fit_attributes)

    @classmethod
    def from_objects(cls, dataset: Dataset, kb: KnowledgeBase, alpha: float = 0.0,
                     fit_attributes=None) -> "SessionState":
        if fit_attributes is None:
            fit_attributes = [c.name for c in dataset.columns if c.kind == "numeric"]
        fitted = {}
        for attr in fit_attributes:
            series = attribute_series(dataset, attr)
            partition, _ = clusterdb_star(series)
            variable = gfat(partition)
            overridden = attr in kb.attribute_names()
            if not overridden:
                kb = kb.put(variable)
            fitted[attr] = AttributeState(attr, partition, variable, overridden)
        return cls(dataset, kb, fitted, alpha)


class ConditionModel(BaseModel):
    attribute: str
    label: str


class QueryRequest(BaseModel):
    text: str | None = None
    conditions: list[ConditionModel] | None = None
    select: list[str] | None = None
    alpha: float | None = Field(default=None, ge=0, lt=1)

    @model_validator(mode="after")
    def _one_form(self):
        if (self.text is None) == (self.conditions is None):
            raise ValueError("provide exactly one of 'text' or 'conditions'")
        if self.conditions is not None and not self.conditions:
            raise ValueError("'conditions' must not be empty")
        return self


class AnswerModel(BaseModel):
    row: int
    degree: float
    projection: dict[str, str]


class ApproximateModel(BaseModel):
    conditions: list[ConditionModel]
    answers: list[AnswerModel]


class QueryResponse(BaseModel):
    status: str
    answers: list[AnswerModel] = []
    failure_reasons: list[list[ConditionModel]] = []
    approximate: list[ApproximateModel] = []


class TermModel(BaseModel):
    label: str
    name: str
    A: float
    B: float
    C: float
    D: float


class VariableModel(BaseModel):
    attribute: str
    domain: tuple[float, float]
    terms: list[TermModel]


class ColumnModel(BaseModel):
    name: str
    kind: str


class AttributesResponse(BaseModel):
    columns: list[ColumnModel]
    attributes: list[VariableModel]


class RowInsertRequest(BaseModel):
    cells: dict[str, str]


class MutationResponse(BaseModel):
    row: int | None = None
    outcomes: dict[str, str]
    kb_version: int


class HealthResponse(BaseModel):
    status: str
    version: str
    dataset: str
    rows: int
    kb_version: int


def _variable_model(v: LinguisticVariable) -> VariableModel:
    return VariableModel(
        attribute=v.attribute, domain=v.domain,
        terms=[TermModel(label=t.label, name=t.term, A=t.a, B=t.b, C=t.c, D=t.d)
               for t in v.terms])


def create_app(state: SessionState) -> FastAPI:
    app = FastAPI(title="flexquery", version=__version__)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    holder = {"state": state}
    writer = threading.Lock()
    app.state.holder = holder
    app.state.writer_lock = writer  # exposed so tests can simulate contention

    def current() -> SessionState:
        return holder["state"]

    @app.get("/api/health", response_model=HealthResponse)
    def health():
        st = current()
        return HealthResponse(status="ok", version=__version__,
                              dataset=st.dataset.name, rows=len(st.dataset.rows),
                              kb_version=st.kb.version)

    @app.get("/api/attributes", response_model=AttributesResponse)
    def attributes():
        st = current()
        return AttributesResponse(
            columns=[ColumnModel(name=c.name, kind=c.kind) for c in st.dataset.columns],
            attributes=[_variable_model(v)
                        for v in sorted(st.kb.variables, key=lambda v: v.attribute)])

    @app.get("/api/mf/{attr}", response_model=VariableModel)
    def mf(attr: str):
        st = current()
        try:
            return _variable_model(st.kb.variable(attr))
        except KnowledgeBaseError as exc:
            raise HTTPException(404, str(exc))

    @app.post("/api/query", response_model=QueryResponse)
    def query(req: QueryRequest):
        st = current()
        try:
            if req.text is not None:
                fq = parse_query(req.text)
            else:
                conds = tuple(Condition(c.attribute, c.label) for c in req.conditions)
                if len(set(conds)) != len(conds):
                    raise QueryError("duplicate condition")
                fq = FuzzyQuery(tuple(req.select) if req.select else None,
                                st.dataset.name, conds)
            alpha = st.alpha if req.alpha is None else req.alpha
            outcome = evaluate(fq, st.dataset, st.kb, alpha=alpha)
        except QuerySyntaxError as exc:
            raise HTTPException(400, {"error": "syntax", "message": str(exc),
                                      "offset": exc.offset})
        except (QueryError, KnowledgeBaseError, DatasetError) as exc:
            raise HTTPException(400, {"error": "query", "message": str(exc)})
        holder["state"] = replace(st, query_log=st.query_log + (outcome.query,))
        return QueryResponse(**outcome.to_json_dict())

    def _apply_maintenance(st: SessionState, attr_values: dict, op) -> tuple:
        outcomes = {}
        fitted = dict(st.fitted)
        kb = st.kb
        for attr, astate in st.fitted.items():
            x = attr_values[attr]
            result = op(astate.partition, astate.variable, x)
            fitted[attr] = AttributeState(attr, result.partition, result.variable,
                                          astate.kb_overrides)
            outcomes[attr] = result.kind
            if not astate.kb_overrides:
                kb = kb.put(result.variable)
        return fitted, kb, outcomes

    @app.post("/api/rows", response_model=MutationResponse)
    def insert_row(req: RowInsertRequest):
        if not writer.acquire(blocking=False):
            raise HTTPException(409, "another mutation is in flight")
        try:
            st = current()
            try:
                new_dataset = st.dataset.with_row(req.cells)
                values = {attr: new_dataset.numeric_value(len(new_dataset.rows) - 1, attr)
                          for attr in st.fitted}
                fitted, kb, outcomes = _apply_maintenance(
                    st, values, lambda p, v, x: insert_value(p, v, x))
            except (DatasetError, MaintenanceError) as exc:
                raise HTTPException(400, str(exc))
            holder["state"] = replace(st, dataset=new_dataset, kb=kb, fitted=fitted)
            return MutationResponse(row=len(new_dataset.rows) - 1, outcomes=outcomes,
                                    kb_version=kb.version)
        finally:
            writer.release()

    @app.delete("/api/rows/{row_id}", response_model=MutationResponse)
    def delete_row(row_id: int):
        if not writer.acquire(blocking=False):
            raise HTTPException(409, "another mutation is in flight")
        try:
            st = current()
            if not 0 <= row_id < len(st.dataset.rows):
                raise HTTPException(404, f"unknown row id: {row_id}")
            try:
                values = {attr: st.dataset.numeric_value(row_id, attr)
                          for attr in st.fitted}
                new_dataset = st.dataset.without_row(row_id)
                fitted, kb, outcomes = _apply_maintenance(
                    st, values, lambda p, v, x: delete_value(p, v, x))
            except (DatasetError, MaintenanceError) as exc:
                raise HTTPException(400, str(exc))
            holder["state"] = replace(st, dataset=new_dataset, kb=kb, fitted=fitted)
            return MutationResponse(row=row_id, outcomes=outcomes,
                                    kb_version=kb.version)
        finally:
            writer.release()

    return app


def create_app_from_paths(data_path, kb_path=None, alpha: float = 0.0) -> FastAPI:
    return create_app(SessionState.from_paths(data_path, kb_path, alpha=alpha))
