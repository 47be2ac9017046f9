"""Strongly-typed template extraction and the frequency-weighted template pool.

A template is the canonical rendering of a query with FROM clauses removed,
columns replaced by ``colK_<strongtype>`` placeholders and compared literals
replaced by ``VALUE_J``.  Slots that must be filled with identical or directly
PK-FK linked columns share an FK group; every group member after the first
carries an ``_fkG`` suffix in its token.
"""
from __future__ import annotations

import hashlib
import json
import logging
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

from .errors import EmptyPool, NotFound, SqlSynthError, UnsupportedQuery
from .schema import Schema, StrongType, strong_type_of
from .sql.nodes import (
    BoolOp,
    ColumnRef,
    Literal,
    OrderItem,
    Predicate,
    Query,
    SlotRef,
    ValueRef,
    ValueUnit,
)
from .sql.parser import parse_sql, parse_template
from .sql.render import render_sql

log = logging.getLogger(__name__)

POOL_FORMAT = "sqlsynth-template-pool"
POOL_VERSION = 1

NUMERIC_AGGREGATES = ("SUM", "AVG", "MIN", "MAX")


@dataclass(frozen=True)
class ColumnSlot:
    index: int
    strong_type: StrongType
    fk_group: int | None = None


@dataclass(frozen=True)
class ValueSlot:
    index: int
    anchor: int  # index of the column slot the value is compared against
    literal_type: str


@dataclass(frozen=True)
class Template:
    q: str
    columns: tuple[ColumnSlot, ...]
    values: tuple[ValueSlot, ...]
    frequency: int = 1
    source_ids: tuple = ()

    def __post_init__(self):
        groups: dict[int, StrongType] = {}
        for slot in self.columns:
            if slot.fk_group is None:
                continue
            seen = groups.setdefault(slot.fk_group, slot.strong_type)
            if seen != slot.strong_type:
                raise ValueError(f"fk group {slot.fk_group} mixes {seen} and {slot.strong_type}")
        n = len(self.columns)
        for v in self.values:
            if not 1 <= v.anchor <= n:
                raise ValueError(f"value slot {v.index} anchored to missing column slot {v.anchor}")

    @property
    def id(self) -> str:
        return hashlib.sha1(self.q.encode("utf-8")).hexdigest()[:10]

    @cached_property
    def skeleton(self) -> Query:
        """The template re-read as an AST (``SlotRef``/``ValueRef`` placeholders)."""
        return parse_template(self.q)

    def slot(self, index: int) -> ColumnSlot:
        return self.columns[index - 1]

    def group_members(self, group: int) -> list[ColumnSlot]:
        return [s for s in self.columns if s.fk_group == group]


class _UnionFind:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, x: int) -> int:
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def members(self, x: int) -> list[int]:
        r = self.find(x)
        return [k for k in list(self.parent) if self.find(k) == r]


class _Extractor:
    """Walks a query in rendering order, numbering columns and values."""

    def __init__(self, schema: Schema):
        self.schema = schema
        self.slot_of: dict[int, int] = {}  # column id -> slot index
        self.columns: list[int] = []  # slot index - 1 -> column id
        self.values: list[tuple[int, str]] = []  # (anchor slot, literal type)
        self.pairs: list[tuple[int, int]] = []  # candidate fk-group links, column ids

    def column(self, ref: ColumnRef) -> int:
        if ref.column not in self.slot_of:
            self.columns.append(ref.column)
            self.slot_of[ref.column] = len(self.columns)
        return self.slot_of[ref.column]

    def unit(self, u: ValueUnit) -> ValueUnit:
        if u.is_star:
            return u
        col = self.schema.column(u.arg.column)
        if u.agg in NUMERIC_AGGREGATES and col.data_type == "text":
            raise UnsupportedQuery(f"{u.agg} over text column {self.schema.qualified_name(col.id)}")
        self.column(u.arg)
        return u

    def value(self, lit, anchor: int):
        if isinstance(lit, Literal):
            dtype = self.schema.column(self.columns[anchor - 1]).data_type
            self.values.append((anchor, dtype))
            return ValueRef(len(self.values))
        return lit

    def cond(self, c):
        if c is None:
            return None
        if isinstance(c, BoolOp):
            return BoolOp(c.op, tuple(self.cond(i) for i in c.items))
        left = self.unit(c.left)
        # literals compared with COUNT or * describe cardinality, not column content
        anchor = None
        if not left.is_star and left.agg != "COUNT":
            anchor = self.slot_of[left.arg.column]
        right, upper = c.right, c.upper
        if isinstance(right, Query):
            inner = right.select[0] if len(right.select) == 1 else None
            right = self.query(right)
            if (
                inner is not None and not inner.is_star and not left.is_star
                and left.agg is None and inner.agg is None
            ):
                self.pairs.append((left.arg.column, inner.arg.column))
        elif isinstance(right, ValueUnit):
            right = self.unit(right)
        elif anchor is not None:
            right = self.value(right, anchor)
            if upper is not None:
                upper = self.value(upper, anchor)
        return Predicate(left, c.op, right, upper)

    def query(self, q: Query) -> Query:
        select = tuple(self.unit(u) for u in q.select)
        where = self.cond(q.where)
        for col in q.group_by:
            self.column(col)
        having = self.cond(q.having)
        order_by = tuple(OrderItem(self.unit(o.expr), o.direction) for o in q.order_by)
        right = None
        if q.set_right is not None:
            for a, b in zip(q.select, q.set_right.select):
                if not a.is_star and not b.is_star and a.agg == b.agg:
                    self.pairs.append((a.arg.column, b.arg.column))
            right = self.query(q.set_right)
        return replace(q, select=select, from_=None, where=where, having=having, order_by=order_by,
                       set_right=right)


def _compatible(schema: Schema, a: int, b: int) -> bool:
    return a == b or schema.fk_linked(a, b)


def _fk_groups(ex: _Extractor, schema: Schema) -> dict[int, int]:
    """Slot index -> fk group id, groups numbered by their first slot."""
    uf = _UnionFind()
    for a, b in ex.pairs:
        sa, sb = ex.slot_of[a], ex.slot_of[b]
        if sa == sb:
            continue
        if strong_type_of(schema.column(a)) != strong_type_of(schema.column(b)):
            continue
        if not schema.fk_linked(a, b):
            continue
        merged = set(uf.members(sa)) | set(uf.members(sb))
        # keep every group pairwise satisfiable so the source query is always a valid fill
        cols = [ex.columns[s - 1] for s in merged]
        if all(_compatible(schema, x, y) for i, x in enumerate(cols) for y in cols[i + 1:]):
            uf.union(sa, sb)
    roots: dict[int, list[int]] = {}
    for s in range(1, len(ex.columns) + 1):
        roots.setdefault(uf.find(s), []).append(s)
    groups = {}
    gid = 0
    for members in sorted((m for m in roots.values() if len(m) > 1), key=min):
        gid += 1
        for s in members:
            groups[s] = gid
    return groups


def _to_template_ast(q: Query, slot_refs: Mapping[int, SlotRef]) -> Query:
    def col(c):
        return slot_refs[c.column] if isinstance(c, ColumnRef) else c

    def unit(u: ValueUnit) -> ValueUnit:
        return u if u.is_star else replace(u, arg=col(u.arg))

    def cond(c):
        if c is None:
            return None
        if isinstance(c, BoolOp):
            return BoolOp(c.op, tuple(cond(i) for i in c.items))
        right = c.right
        if isinstance(right, ValueUnit):
            right = unit(right)
        elif isinstance(right, Query):
            right = walk(right)
        return Predicate(unit(c.left), c.op, right, c.upper)

    def walk(x: Query) -> Query:
        return replace(
            x,
            select=tuple(unit(u) for u in x.select),
            where=cond(x.where),
            group_by=tuple(col(c) for c in x.group_by),
            having=cond(x.having),
            order_by=tuple(OrderItem(unit(o.expr), o.direction) for o in x.order_by),
            set_right=walk(x.set_right) if x.set_right is not None else None,
        )

    return walk(q)


def extract_template(ast: Query, schema: Schema, source_id=None) -> Template:
    """Normalize a parsed query into a template with frequency 1."""
    ex = _Extractor(schema)
    stripped = ex.query(ast)
    groups = _fk_groups(ex, schema)
    first_in_group = {}
    for s in sorted(groups):
        first_in_group.setdefault(groups[s], s)
    slot_refs = {}
    columns = []
    for idx, col_id in enumerate(ex.columns, start=1):
        st = strong_type_of(schema.column(col_id))
        g = groups.get(idx)
        marked = g is not None and first_in_group[g] != idx
        slot_refs[col_id] = SlotRef(idx, st.token, g if marked else None, marked)
        columns.append(ColumnSlot(idx, st, g))
    tmpl_ast = _to_template_ast(stripped, slot_refs)
    values = tuple(ValueSlot(i, a, t) for i, (a, t) in enumerate(ex.values, start=1))
    src = () if source_id is None else (source_id,)
    return Template(render_sql(tmpl_ast), tuple(columns), values, 1, src)


def template_fill(template: Template, ast: Query, schema: Schema) -> tuple[list[int], list]:
    """Columns and literals that a concrete query assigns to the template's slots."""
    ex = _Extractor(schema)
    ex.query(ast)
    literals = []

    def collect(c):
        for p in _preds(c):
            for x in (p.right, p.upper):
                if isinstance(x, Literal) and not p.left.is_star and p.left.agg != "COUNT":
                    literals.append(x)
                elif isinstance(x, Query):
                    walk(x)

    def walk(q: Query):
        collect(q.where)
        collect(q.having)
        if q.set_right is not None:
            walk(q.set_right)

    walk(ast)
    return list(ex.columns), literals


def _preds(c):
    if c is None:
        return
    if isinstance(c, BoolOp):
        for i in c.items:
            yield from _preds(i)
    else:
        yield c


@dataclass
class TemplatePool:
    templates: list[Template] = field(default_factory=list)

    def __post_init__(self):
        self._index = {t.q: i for i, t in enumerate(self.templates)}
        if len(self._index) != len(self.templates):
            merged = TemplatePool()
            for t in self.templates:
                merged.add(t)
            self.templates = merged.templates
            self._index = merged._index

    def __len__(self) -> int:
        return len(self.templates)

    def __iter__(self):
        return iter(self.templates)

    def add(self, template: Template):
        i = self._index.get(template.q)
        if i is None:
            self._index[template.q] = len(self.templates)
            self.templates.append(template)
        else:
            old = self.templates[i]
            self.templates[i] = replace(
                old, frequency=old.frequency + template.frequency, source_ids=old.source_ids + template.source_ids
            )

    @property
    def total(self) -> int:
        return sum(t.frequency for t in self.templates)

    def distribution(self) -> list[float]:
        total = self.total
        return [t.frequency / total for t in self.templates]

    def get(self, template_id: str) -> Template:
        for t in self.templates:
            if t.id == template_id:
                return t
        raise NotFound(f"no template with id {template_id!r}")

    def sample(self, rng) -> Template:
        """Draw a template with probability frequency / total."""
        if not self.templates:
            raise EmptyPool("template pool is empty")
        return rng.choices(self.templates, weights=[t.frequency for t in self.templates])[0]


def sample_template(pool: TemplatePool, rng) -> Template:
    return pool.sample(rng)


@dataclass
class ExtractionReport:
    total: int = 0
    extracted: int = 0
    skipped: Counter = field(default_factory=Counter)
    examples: list = field(default_factory=list)  # (source id, reason, message), capped

    def skip(self, source_id, reason: str, message: str):
        self.skipped[reason] += 1
        if len(self.examples) < 50:
            self.examples.append({"source_id": source_id, "reason": reason, "message": message})

    def to_json(self) -> dict:
        return {
            "total": self.total,
            "extracted": self.extracted,
            "skipped": dict(sorted(self.skipped.items())),
            "skipped_examples": self.examples,
        }


def build_pool(corpus: Iterable, schemas: Mapping[str, Schema]) -> tuple[TemplatePool, ExtractionReport]:
    """Extract templates from ``(sql, db_id)`` pairs or Spider records.

    Unknown databases and unsupported or unparseable queries are skipped and
    counted in the returned report.
    """
    pool = TemplatePool()
    report = ExtractionReport()
    for i, item in enumerate(corpus):
        if isinstance(item, Mapping):
            sql, db_id = item["query"], item["db_id"]
        else:
            sql, db_id = item
        report.total += 1
        schema = schemas.get(db_id)
        if schema is None:
            report.skip(i, "unknown_db", f"db_id {db_id!r} not in schema set")
            log.warning("example %d: unknown db_id %r", i, db_id)
            continue
        try:
            template = extract_template(parse_sql(sql, schema), schema, source_id=i)
        except SqlSynthError as exc:
            reason = type(exc).__name__
            report.skip(i, reason, str(exc))
            log.warning("example %d skipped (%s): %s", i, reason, exc)
            continue
        pool.add(template)
        report.extracted += 1
    return pool, report


def load_corpus(path: str | Path) -> list[dict]:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise ValueError(f"{path}: expected a JSON array of records")
    return data


def pool_to_json(pool: TemplatePool) -> dict:
    return {
        "format": POOL_FORMAT,
        "version": POOL_VERSION,
        "templates": [
            {
                "id": t.id,
                "q": t.q,
                "columns": [
                    {"index": s.index, "strong_type": s.strong_type.token, "fk_group": s.fk_group}
                    for s in t.columns
                ],
                "values": [
                    {"index": v.index, "anchor": v.anchor, "literal_type": v.literal_type} for v in t.values
                ],
                "frequency": t.frequency,
                "source_ids": list(t.source_ids),
            }
            for t in pool.templates
        ],
    }


def pool_from_json(data: Mapping) -> TemplatePool:
    if data.get("format") != POOL_FORMAT:
        raise ValueError("not a template pool file")
    if data.get("version") != POOL_VERSION:
        raise ValueError(f"unsupported pool version {data.get('version')!r}")
    templates = []
    for rec in data["templates"]:
        templates.append(
            Template(
                q=rec["q"],
                columns=tuple(
                    ColumnSlot(c["index"], StrongType.from_token(c["strong_type"]), c.get("fk_group"))
                    for c in rec["columns"]
                ),
                values=tuple(ValueSlot(v["index"], v["anchor"], v["literal_type"]) for v in rec["values"]),
                frequency=int(rec["frequency"]),
                source_ids=tuple(rec.get("source_ids", ())),
            )
        )
    return TemplatePool(templates)


def save_pool(pool: TemplatePool, path: str | Path):
    from .io import atomic_write_text

    atomic_write_text(path, json.dumps(pool_to_json(pool), indent=1) + "\n")


def load_pool(path: str | Path) -> TemplatePool:
    with open(path, encoding="utf-8") as fh:
        return pool_from_json(json.load(fh))

