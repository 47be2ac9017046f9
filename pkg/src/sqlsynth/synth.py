"""Schema-distance weighted template filling.

A template's first column slot is filled uniformly among columns of its strong
type.  Every later slot is drawn with probability proportional to a weight that
accumulates over the columns chosen so far: a chosen column adds 1 to columns
of its own table and ``1 / gamma**d`` to columns ``d`` joins away (nothing to
unreachable tables).  FROM clauses are rebuilt afterwards from the tables the
chosen columns live in.
"""
from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import JoinPathUnavailable, SlotUnfillable, SqlSynthError
from .schema import (
    UNREACHABLE,
    Column,
    DatabaseContent,
    Schema,
    TableGraph,
    build_table_graph,
    sample_value,
)
from .sql.nodes import (
    BoolOp,
    ColumnRef,
    FromClause,
    Join,
    Literal,
    OrderItem,
    Predicate,
    Query,
    SlotRef,
    ValueRef,
    ValueUnit,
    iter_levels,
    iter_predicates,
    level_columns,
)
from .sql.parser import parse_sql
from .sql.render import render_sql
from .template import NUMERIC_AGGREGATES, ColumnSlot, Template, TemplatePool

log = logging.getLogger(__name__)

SAMPLERS = ("weighted", "uniform")


@dataclass
class SynthesisConfig:
    gamma: float = 5.0
    seed: int = 0
    total_samples: int | None = 1000
    samples_per_db: int | None = None
    max_join_tables: int | None = None
    allow_fallback_values: bool = True
    sampler: str = "weighted"
    retries: int = 20
    with_ir: bool = True

    def __post_init__(self):
        if not self.gamma > 1:
            raise ValueError(f"gamma must be > 1, got {self.gamma}")
        if self.sampler not in SAMPLERS:
            raise ValueError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if self.samples_per_db is not None and self.samples_per_db < 0:
            raise ValueError("samples_per_db must be non-negative")
        if self.total_samples is not None and self.total_samples < 0:
            raise ValueError("total_samples must be non-negative")
        if self.retries < 1:
            raise ValueError("retries must be at least 1")
        if self.max_join_tables is not None and self.max_join_tables < 1:
            raise ValueError("max_join_tables must be at least 1")


@dataclass
class WeightState:
    """Cumulative sampling weight per column id."""

    weights: dict[int, float]

    def __getitem__(self, column_id: int) -> float:
        return self.weights[column_id]


def _cid(column) -> int:
    return column.id if isinstance(column, Column) else int(column)


def _increment(schema: Schema, graph: TableGraph, chosen: int, gamma: float) -> dict[int, float]:
    t0 = schema.table_of(chosen)
    out = {}
    for col in schema.columns:
        d = graph.dist(t0, col.table_id)
        if d is UNREACHABLE:
            out[col.id] = 0.0
        elif d == 0:
            out[col.id] = 1.0
        else:
            out[col.id] = 1.0 / gamma**d
    return out


def initial_weights(anchor, schema: Schema, graph: TableGraph, gamma: float) -> WeightState:
    """Weights over every column after choosing ``anchor`` (a Column or column id)."""
    return WeightState(_increment(schema, graph, _cid(anchor), gamma))


def update_weights(state: WeightState, chosen, schema: Schema, graph: TableGraph, gamma: float) -> WeightState:
    """Add the contribution of ``chosen`` to every column's weight."""
    inc = _increment(schema, graph, _cid(chosen), gamma)
    return WeightState({c: w + inc[c] for c, w in state.weights.items()})


def _fk_allowed(slot: ColumnSlot, filled: Mapping[ColumnSlot, int], schema: Schema, candidate: int) -> bool:
    if slot.fk_group is None:
        return True
    for other, col in filled.items():
        if other.fk_group == slot.fk_group and other.index != slot.index:
            if candidate != col and not schema.fk_linked(candidate, col):
                return False
    return True


def candidates(slot: ColumnSlot, filled: Mapping[ColumnSlot, int], schema: Schema) -> list[int]:
    """Columns of the slot's strong type that satisfy its FK group, by id."""
    return [c for c in schema.columns_of_type(slot.strong_type) if _fk_allowed(slot, filled, schema, c)]


def slot_distribution(
    state: WeightState, slot: ColumnSlot, filled: Mapping[ColumnSlot, int], schema: Schema
) -> dict[int, float]:
    """Probability of each admissible column for ``slot``; zero-weight columns omitted."""
    cands = candidates(slot, filled, schema)
    weights = {c: state.weights[c] for c in cands if state.weights[c] > 0}
    total = sum(weights.values())
    if not weights or total <= 0:
        raise SlotUnfillable(f"no admissible column for slot col{slot.index}_{slot.strong_type.token}")
    return {c: w / total for c, w in weights.items()}


def _draw(dist: Mapping[int, float], rng) -> int:
    keys = sorted(dist)
    return rng.choices(keys, weights=[dist[k] for k in keys])[0]


def fill_columns(template: Template, schema: Schema, graph: TableGraph, gamma: float, rng,
                 sampler: str = "weighted") -> dict[ColumnSlot, int]:
    """Choose a column for every slot of ``template``."""
    filled: dict[ColumnSlot, int] = {}
    state = None
    for slot in template.columns:
        if sampler == "uniform" or state is None:
            cands = candidates(slot, filled, schema)
            if not cands:
                raise SlotUnfillable(f"no column of type {slot.strong_type.token} in {schema.db_id}")
            chosen = cands[rng.randrange(len(cands))]
        else:
            chosen = _draw(slot_distribution(state, slot, filled, schema), rng)
        filled[slot] = chosen
        if sampler == "weighted":
            if state is None:
                state = initial_weights(chosen, schema, graph, gamma)
            else:
                state = update_weights(state, chosen, schema, graph, gamma)
    return filled


def _join_for(schema: Schema, a: int, b: int) -> Join:
    """The FK pair with the smallest ids joining table ``a`` (attached) to ``b``."""
    pairs = []
    for src, dst in schema.foreign_keys:
        ts, td = schema.table_of(src), schema.table_of(dst)
        if {ts, td} == {a, b}:
            left, right = (src, dst) if ts == a else (dst, src)
            pairs.append((min(src, dst), max(src, dst), left, right))
    _, _, left, right = min(pairs)
    return Join(ColumnRef(left), ColumnRef(right))


def reconstruct_from(tables: Iterable[int], graph: TableGraph, schema: Schema) -> FromClause:
    """Greedy join tree over ``tables`` plus the connector tables it needs."""
    required = sorted(set(tables))
    if not required:
        raise ValueError("reconstruct_from needs at least one table")
    attached = [required[0]]
    joins: list[Join] = []
    pending = required[1:]
    while pending:
        best = None
        for r in pending:
            for a in sorted(attached):
                d = graph.dist(a, r)
                if d is UNREACHABLE:
                    continue
                key = (d, r, a)
                if best is None or key < best:
                    best = key
        if best is None:
            names = ", ".join(schema.table(t).name for t in pending)
            raise JoinPathUnavailable(f"{names} unreachable from {schema.table(attached[0]).name}")
        _, r, a = best
        path = graph.shortest_path(a, r)
        for prev, nxt in zip(path, path[1:]):
            if nxt in attached:
                continue
            joins.append(_join_for(schema, prev, nxt))
            attached.append(nxt)
        pending = [t for t in pending if t not in attached]
    return FromClause(tuple(attached), tuple(joins))


@dataclass
class SynthesizedQuery:
    ast: Query
    columns: dict[int, int]  # slot index -> column id
    value_fallback_used: bool


def _level_tables(level: Query, filled: Mapping[int, int], schema: Schema) -> set[int]:
    return {schema.table_of(filled[c.index]) for c in level_columns(level) if isinstance(c, SlotRef)}


def _value_roles(skeleton: Query) -> tuple[dict[int, str], list[tuple[int, int]]]:
    """Operator per value placeholder and the BETWEEN placeholder pairs."""
    ops = {}
    between = []
    for level in iter_levels(skeleton):
        for cond in (level.where, level.having):
            for p in iter_predicates(cond):
                if isinstance(p.right, ValueRef):
                    ops[p.right.index] = p.op
                    if p.op == "BETWEEN" and isinstance(p.upper, ValueRef):
                        ops[p.upper.index] = p.op
                        between.append((p.right.index, p.upper.index))
    return ops, between


def _sort_key(lit: Literal):
    if lit.kind == "number":
        return (0, float(lit.value), "")
    return (1, 0.0, lit.value)


def fill_values(template: Template, columns: Mapping[int, int], schema: Schema,
                content: DatabaseContent | None, rng) -> tuple[dict[int, Literal], bool]:
    """Draw a literal for every value slot from its anchor column's content."""
    ops, between = _value_roles(template.skeleton)
    values: dict[int, Literal] = {}
    fallback = False
    for vs in template.values:
        col = schema.column(columns[vs.anchor])
        if content is None or not content.get(col.id):
            fallback = True
        lit = sample_value(content, col, rng)
        if ops.get(vs.index) in ("LIKE", "NOT LIKE"):
            lit = Literal(f"%{lit.value}%", "text")
        values[vs.index] = lit
    for lo, hi in between:
        a, b = values[lo], values[hi]
        if _sort_key(b) < _sort_key(a):
            values[lo], values[hi] = b, a
    return values, fallback


def materialize(skeleton: Query, columns: Mapping[int, int], values: Mapping[int, Literal],
                schema: Schema, graph: TableGraph, rng, max_tables: int | None = None,
                _parent_tables: tuple[int, ...] = ()) -> Query:
    """Replace placeholders and attach a FROM clause to every query level."""

    def col(c):
        return ColumnRef(columns[c.index]) if isinstance(c, SlotRef) else c

    def unit(u: ValueUnit) -> ValueUnit:
        return u if u.is_star else replace(u, arg=col(u.arg))

    def operand(x, tables):
        if isinstance(x, ValueRef):
            return values[x.index]
        if isinstance(x, ValueUnit):
            return unit(x)
        if isinstance(x, Query):
            return level(x, tables)
        return x

    def cond(c, tables):
        if c is None:
            return None
        if isinstance(c, BoolOp):
            return BoolOp(c.op, tuple(cond(i, tables) for i in c.items))
        return Predicate(unit(c.left), c.op, operand(c.right, tables), operand(c.upper, tables))

    def level(q: Query, context: tuple[int, ...]) -> Query:
        tables = _level_tables(q, columns, schema)
        if not tables:
            # nothing anchors this level: reuse the surrounding level's first table
            if context:
                tables = {context[0]}
            else:
                tables = {schema.tables[rng.randrange(len(schema.tables))].id}
        from_ = reconstruct_from(tables, graph, schema)
        if max_tables is not None and len(from_.tables) > max_tables:
            raise JoinPathUnavailable(f"join needs {len(from_.tables)} tables, cap is {max_tables}")
        right = q.set_right
        if right is not None:
            right = level(right, from_.tables)
        return replace(
            q,
            select=tuple(unit(u) for u in q.select),
            from_=from_,
            where=cond(q.where, from_.tables),
            group_by=tuple(col(c) for c in q.group_by),
            having=cond(q.having, from_.tables),
            order_by=tuple(OrderItem(unit(o.expr), o.direction) for o in q.order_by),
            set_right=right,
        )

    return level(skeleton, _parent_tables)


def synthesize_one(template: Template, schema: Schema, graph: TableGraph, content: DatabaseContent | None,
                   config: SynthesisConfig, rng) -> SynthesizedQuery:
    filled = fill_columns(template, schema, graph, config.gamma, rng, config.sampler)
    columns = {slot.index: col for slot, col in filled.items()}
    values, fallback = fill_values(template, columns, schema, content, rng)
    if fallback and not config.allow_fallback_values:
        raise SlotUnfillable("no stored values for a value slot and fallback values are disabled")
    ast = materialize(template.skeleton, columns, values, schema, graph, rng, config.max_join_tables)
    return SynthesizedQuery(ast, columns, fallback)


def validity_problems(ast: Query, schema: Schema) -> list[str]:
    """Reasons ``ast`` would not be a well-formed synthetic query; empty when valid."""
    problems = []
    try:
        text = render_sql(ast, schema)
        if parse_sql(text, schema) != ast:
            problems.append("render/parse round trip changed the query")
    except SqlSynthError as exc:
        problems.append(f"does not parse: {exc}")
    for level in iter_levels(ast):
        if level.from_ is not None:
            for j in level.from_.joins:
                if not schema.fk_linked(j.left.column, j.right.column):
                    problems.append("join predicate is not a PK-FK pair")
        if level.set_right is not None and len(level.select) != len(level.set_right.select):
            problems.append("set-op branches differ in arity")
        units = list(level.select) + [o.expr for o in level.order_by]
        for cond in (level.where, level.having):
            for p in iter_predicates(cond):
                units.append(p.left)
                if isinstance(p.right, ValueUnit):
                    units.append(p.right)
        for u in units:
            if u.agg in NUMERIC_AGGREGATES and not u.is_star:
                if schema.column(u.arg.column).data_type == "text":
                    problems.append(f"{u.agg} applied to a text column")
    return problems


@dataclass
class SyntheticExample:
    db_id: str
    sql: str
    ir: str | None
    template_id: str
    sample_seed: int
    value_fallback_used: bool
    columns: list[str] = field(default_factory=list)

    def to_json(self, with_ir: bool = True) -> dict:
        out = {"db_id": self.db_id, "sql": self.sql}
        if with_ir:
            out["ir"] = self.ir
        out.update(
            template_id=self.template_id,
            sample_seed=self.sample_seed,
            value_fallback_used=self.value_fallback_used,
            columns=self.columns,
        )
        return out


@dataclass
class SynthesisReport:
    requested: int = 0
    emitted: int = 0
    skipped: Counter = field(default_factory=Counter)
    failed_attempts: Counter = field(default_factory=Counter)
    per_db: Counter = field(default_factory=Counter)

    def to_json(self) -> dict:
        return {
            "requested": self.requested,
            "emitted": self.emitted,
            "skipped": sum(self.skipped.values()),
            "skip_reasons": dict(sorted(self.skipped.items())),
            "failed_attempts": dict(sorted(self.failed_attempts.items())),
            "per_db": dict(sorted(self.per_db.items())),
        }


def _fits(template: Template, schema: Schema) -> bool:
    return all(schema.columns_of_type(s.strong_type) for s in template.columns)


def _plan(schemas: Mapping[str, Schema], config: SynthesisConfig) -> list[str | None]:
    """Target db per sample index; ``None`` means drawn from the sample's rng."""
    if config.samples_per_db is not None:
        return [db for db in sorted(schemas) for _ in range(config.samples_per_db)]
    return [None] * (config.total_samples or 0)


def synthesize_dataset(pool: TemplatePool, schemas: Mapping[str, Schema],
                       contents: Mapping[str, DatabaseContent | None] | None,
                       config: SynthesisConfig) -> tuple[list[SyntheticExample], SynthesisReport]:
    """Synthesize queries; sample ``i`` uses ``random.Random(config.seed ^ i)``."""
    from .ir import to_ir

    contents = contents or {}
    report = SynthesisReport()
    plan = _plan(schemas, config)
    report.requested = len(plan)
    if not plan:
        return [], report
    graphs = {db: build_table_graph(s) for db, s in schemas.items()}
    fitting = {db: [t for t in pool.templates if _fits(t, s)] for db, s in schemas.items()}
    db_ids = sorted(db for db in schemas if fitting[db])
    examples = []
    for i, target in enumerate(plan):
        sample_seed = config.seed ^ i
        rng = random.Random(sample_seed)
        error = None
        for attempt in range(config.retries):
            if target is not None:
                db_id = target
            elif db_ids:
                db_id = db_ids[rng.randrange(len(db_ids))]
            else:
                error = "no_fitting_template"
                break
            templates = fitting[db_id]
            if not templates:
                error = "no_fitting_template"
                break
            template = rng.choices(templates, weights=[t.frequency for t in templates])[0]
            schema = schemas[db_id]
            try:
                result = synthesize_one(template, schema, graphs[db_id], contents.get(db_id), config, rng)
            except SqlSynthError as exc:
                error = type(exc).__name__
                report.failed_attempts[error] += 1
                continue
            problems = validity_problems(result.ast, schema)
            if problems:
                error = "invalid"
                report.failed_attempts[error] += 1
                log.error("sample %d: invalid synthesis from %s: %s", i, template.id, "; ".join(problems))
                continue
            ir = to_ir(result.ast, schema).text if config.with_ir else None
            examples.append(
                SyntheticExample(
                    db_id=db_id,
                    sql=render_sql(result.ast, schema),
                    ir=ir,
                    template_id=template.id,
                    sample_seed=sample_seed,
                    value_fallback_used=result.value_fallback_used,
                    columns=[schema.qualified_name(result.columns[k]) for k in sorted(result.columns)],
                )
            )
            report.emitted += 1
            report.per_db[db_id] += 1
            error = None
            break
        if error is not None:
            report.skipped[error] += 1
            log.info("sample %d skipped after retries: %s", i, error)
    return examples, report
