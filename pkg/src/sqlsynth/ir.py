"""Lowering of SQL ASTs into the question-like intermediate representation.

See docs/ir.md for the grammar.  Rules, applied per query level:

* table_drop: FROM/JOIN disappears; tables that only act as join filters stay
  as ``FROM <table>``.
* star_enrichment: ``COUNT(*)`` becomes ``Count ( record of <table> )`` where the
  table is the FK side of the joins (or the FROM table without joins).
* most_least: ``ORDER BY <aggregate> ... LIMIT 1`` becomes ``WITH most|least``.
* group_by_drop / group_by_each: GROUP BY columns already selected are dropped;
  without most/least intent they are wrapped as ``EACH ( ... )``.
* set_op_dedup: clauses of a set-op branch equal to the previous branch's are
  removed.  HAVING is written ``WITH <condition>``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .schema import Schema
from .sql.analysis import has_most_least
from .sql.nodes import BoolOp, ColumnRef, Literal, Predicate, Query, ValueUnit, level_columns

AGG_WORDS = {"COUNT": "Count", "SUM": "Sum", "AVG": "Avg", "MIN": "Min", "MAX": "Max"}
RULES = (
    "table_drop",
    "filter_table_kept",
    "star_enrichment",
    "most_least",
    "group_by_drop",
    "group_by_each",
    "group_by_kept",
    "having_with",
    "order_by_verbatim",
    "set_op_dedup",
    "subquery",
)


@dataclass(frozen=True)
class IrText:
    text: str
    rules: tuple[str, ...]

    def __str__(self):
        return self.text


def _literal(lit: Literal) -> str:
    return lit.value if lit.kind == "number" else f'"{lit.value}"'


class _Lowerer:
    def __init__(self, schema: Schema):
        self.schema = schema
        self.fired: set[str] = set()

    def column(self, c: ColumnRef) -> str:
        col = self.schema.column(c.column)
        return f"{col.name} of {self.schema.table(col.table_id).name}"

    def star_table(self, q: Query) -> int:
        f = q.from_
        if not f.joins:
            return f.tables[0]
        s = self.schema
        fk_side = set()
        edges = {t: 0 for t in f.tables}
        for j in f.joins:
            a, b = j.left.column, j.right.column
            ta, tb = s.table_of(a), s.table_of(b)
            edges[ta] += 1
            edges[tb] += 1
            if s.references(a, b):
                fk_side.add(ta)
            if s.references(b, a):
                fk_side.add(tb)
        if not fk_side:
            return f.tables[0]
        return min(fk_side, key=lambda t: (-edges[t], t))

    def unit(self, u: ValueUnit, q: Query) -> str:
        if u.is_star:
            if u.agg is None:
                return "*"
            self.fired.add("star_enrichment")
            inner = f"record of {self.schema.table(self.star_table(q)).name}"
        else:
            inner = self.column(u.arg)
        if u.agg is None:
            return inner
        if u.distinct:
            inner = "DISTINCT " + inner
        return f"{AGG_WORDS[u.agg]} ( {inner} )"

    def operand(self, x, q: Query) -> str:
        if isinstance(x, Literal):
            return _literal(x)
        if isinstance(x, ValueUnit):
            return self.unit(x, q)
        if isinstance(x, Query):
            self.fired.add("subquery")
            return f"( {self.query(x)} )"
        raise TypeError(f"unexpected operand {x!r}")

    def cond(self, c, q: Query) -> str:
        if isinstance(c, BoolOp):
            parts = []
            for item in c.items:
                text = self.cond(item, q)
                parts.append(f"( {text} )" if isinstance(item, BoolOp) else text)
            return f" {c.op} ".join(parts)
        assert isinstance(c, Predicate)
        text = f"{self.unit(c.left, q)} {c.op} {self.operand(c.right, q)}"
        if c.op == "BETWEEN":
            text += f" AND {self.operand(c.upper, q)}"
        return text

    def clauses(self, q: Query) -> list[tuple[str, str]]:
        s = self.schema
        most_least = has_most_least(q)
        selected = {u.arg.column for u in q.select if not u.is_star and u.agg is None}
        group_cols = [c.column for c in q.group_by]
        each = set()
        kept_group = [c for c in group_cols if c not in selected]
        if len(kept_group) < len(group_cols):
            if most_least:
                self.fired.add("group_by_drop")
            else:
                self.fired.add("group_by_each")
                each = {c for c in group_cols if c in selected}

        items = []
        for u in q.select:
            text = self.unit(u, q)
            if not u.is_star and u.agg is None and u.arg.column in each:
                text = f"EACH ( {text} )"
            items.append(text)
        out = [("SELECT", ("SELECT DISTINCT " if q.distinct else "SELECT ") + " , ".join(items))]

        mentioned = {s.table_of(c.column) for c in level_columns(q) if isinstance(c, ColumnRef)}
        units = list(q.select) + [o.expr for o in q.order_by]
        for cond in (q.where, q.having):
            units.extend(_pred_units(cond))
        if any(u.is_star and u.agg is not None for u in units):
            mentioned.add(self.star_table(q))
        kept = [t for t in q.from_.tables if t not in mentioned]
        if len(kept) < len(q.from_.tables):
            self.fired.add("table_drop")
        if kept:
            self.fired.add("filter_table_kept")
            out.append(("FROM", "FROM " + " , ".join(s.table(t).name for t in kept)))

        if most_least:
            self.fired.add("most_least")
            o = q.order_by[0]
            word = "most" if o.direction == "DESC" else "least"
            out.append(("ORDER", f"WITH {word} {self.unit(o.expr, q)}"))
        if q.where is not None:
            out.append(("WHERE", "WHERE " + self.cond(q.where, q)))
        if kept_group:
            self.fired.add("group_by_kept")
            cols = " , ".join(self.column(ColumnRef(c)) for c in kept_group)
            out.append(("GROUP", f"GROUP BY ( {cols} )"))
        if q.having is not None:
            self.fired.add("having_with")
            out.append(("HAVING", "WITH " + self.cond(q.having, q)))
        if q.order_by and not most_least:
            self.fired.add("order_by_verbatim")
            items = " , ".join(f"{self.unit(o.expr, q)} {o.direction}" for o in q.order_by)
            out.append(("ORDER", "ORDER BY " + items))
        if q.limit is not None and not most_least:
            out.append(("LIMIT", f"LIMIT {q.limit}"))
        return out

    def query(self, q: Query) -> str:
        branches = q.branches()
        ops = []
        node = q
        while node.set_op is not None:
            ops.append(node.set_op)
            node = node.set_right
        pieces = [self.clauses(b) for b in branches]
        text = " ".join(t for _, t in pieces[0])
        for op, prev, cur in zip(ops, pieces, pieces[1:]):
            kept = [c for c in cur if c not in prev]
            if len(kept) < len(cur):
                self.fired.add("set_op_dedup")
            if not kept:
                kept = [c for c in cur if c[0] == "SELECT"]
            text += f" {op} " + " ".join(t for _, t in kept)
        return text


def _pred_units(cond):
    if cond is None:
        return
    if isinstance(cond, BoolOp):
        for item in cond.items:
            yield from _pred_units(item)
        return
    yield cond.left
    if isinstance(cond.right, ValueUnit):
        yield cond.right


def to_ir(ast: Query, schema: Schema) -> IrText:
    """Lower a concrete (FROM-carrying) query to IR text plus the rules that fired."""
    lw = _Lowerer(schema)
    text = lw.query(ast)
    return IrText(text, tuple(r for r in RULES if r in lw.fired))
