"""Canonical SQL rendering.

Keywords are upper case, items are separated by ``", "``, and multi-table FROM
clauses get aliases ``T1..Tn`` in FROM order.  Single-table levels use bare
column names.  Text literals are double quoted.
"""
from __future__ import annotations

from typing import TYPE_CHECKING

from .nodes import BoolOp, ColumnRef, Literal, Predicate, Query, SlotRef, ValueRef, ValueUnit

if TYPE_CHECKING:
    from ..schema import Schema


def render_literal(lit: Literal) -> str:
    if lit.kind == "number":
        return lit.value
    if '"' in lit.value and "'" not in lit.value:
        return f"'{lit.value}'"
    return '"' + lit.value.replace('"', '""') + '"'


class _Renderer:
    def __init__(self, schema: "Schema | None"):
        self.schema = schema

    def _need_schema(self) -> "Schema":
        if self.schema is None:
            raise ValueError("a schema is required to render concrete SQL")
        return self.schema

    def query(self, q: Query) -> str:
        aliases = {}
        if q.from_ is not None and len(q.from_.tables) > 1:
            aliases = {t: f"T{i + 1}" for i, t in enumerate(q.from_.tables)}
        parts = ["SELECT"]
        if q.distinct:
            parts.append("DISTINCT")
        parts.append(", ".join(self.unit(u, aliases) for u in q.select))
        if q.from_ is not None:
            parts.append(self.from_clause(q.from_, aliases))
        if q.where is not None:
            parts += ["WHERE", self.cond(q.where, aliases)]
        if q.group_by:
            parts += ["GROUP BY", ", ".join(self.column(c, aliases) for c in q.group_by)]
        if q.having is not None:
            parts += ["HAVING", self.cond(q.having, aliases)]
        if q.order_by:
            parts += ["ORDER BY", ", ".join(f"{self.unit(o.expr, aliases)} {o.direction}" for o in q.order_by)]
        if q.limit is not None:
            parts += ["LIMIT", str(q.limit)]
        if q.set_op is not None:
            parts += [q.set_op, self.query(q.set_right)]
        return " ".join(parts)

    def from_clause(self, f, aliases) -> str:
        s = self._need_schema()
        if len(f.tables) == 1:
            return "FROM " + s.table(f.tables[0]).name
        # each join condition goes with the first table that makes it resolvable
        pending = list(f.joins)
        seen = set()
        out = []
        for i, t in enumerate(f.tables):
            name = f"{s.table(t).name} AS {aliases[t]}"
            seen.add(t)
            if i == 0:
                out.append("FROM " + name)
                continue
            conds = [j for j in pending if {s.table_of(j.left.column), s.table_of(j.right.column)} <= seen]
            pending = [j for j in pending if j not in conds]
            piece = "JOIN " + name
            if conds:
                piece += " ON " + " AND ".join(
                    f"{self.column(j.left, aliases)} = {self.column(j.right, aliases)}" for j in conds
                )
            out.append(piece)
        return " ".join(out)

    def column(self, col, aliases) -> str:
        if isinstance(col, SlotRef):
            return col.token
        c = self._need_schema().column(col.column)
        alias = aliases.get(c.table_id)
        return f"{alias}.{c.name}" if alias else c.name

    def unit(self, u: ValueUnit, aliases) -> str:
        inner = "*" if u.is_star else self.column(u.arg, aliases)
        if u.agg is None:
            return inner
        if u.distinct:
            inner = "DISTINCT " + inner
        return f"{u.agg}({inner})"

    def operand(self, x, aliases) -> str:
        if isinstance(x, Literal):
            return render_literal(x)
        if isinstance(x, ValueRef):
            return x.token
        if isinstance(x, ValueUnit):
            return self.unit(x, aliases)
        if isinstance(x, Query):
            return f"({self.query(x)})"
        raise TypeError(f"unexpected operand {x!r}")

    def cond(self, c, aliases) -> str:
        if isinstance(c, BoolOp):
            parts = []
            for item in c.items:
                text = self.cond(item, aliases)
                parts.append(f"({text})" if isinstance(item, BoolOp) else text)
            return f" {c.op} ".join(parts)
        assert isinstance(c, Predicate)
        text = f"{self.unit(c.left, aliases)} {c.op} {self.operand(c.right, aliases)}"
        if c.op == "BETWEEN":
            text += f" AND {self.operand(c.upper, aliases)}"
        return text


def render_sql(ast: Query, schema: "Schema | None" = None) -> str:
    """Canonical text of ``ast``.  ``schema`` may be omitted for templates."""
    return _Renderer(schema).query(ast)
