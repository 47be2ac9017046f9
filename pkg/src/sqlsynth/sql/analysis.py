"""Structural facts about a parsed query, shared by template extraction and IR lowering."""
from __future__ import annotations

from dataclasses import dataclass, field

from .nodes import ColumnRef, Query, iter_levels, iter_predicates


@dataclass(frozen=True)
class QueryFacts:
    tables: frozenset[int]
    all_tables: frozenset[int]
    columns: dict = field(hash=False)
    most_least: bool = False
    direction: str | None = None
    group_by: tuple[int, ...] = ()
    star_positions: tuple[int, ...] = ()

    @property
    def table_count(self) -> int:
        return len(self.all_tables)


def _ids(cols):
    return tuple(c.column for c in cols if isinstance(c, ColumnRef))


def _pred_cols(cond):
    out = []
    for p in iter_predicates(cond):
        out.append(p.left.arg)
        if hasattr(p.right, "arg"):
            out.append(p.right.arg)
    return out


def has_most_least(q: Query) -> bool:
    return len(q.order_by) == 1 and q.order_by[0].expr.agg is not None and q.limit == 1


def all_tables(q: Query) -> frozenset[int]:
    out = set()
    for level in iter_levels(q):
        if level.from_ is not None:
            out.update(level.from_.tables)
    return frozenset(out)


def table_count(q: Query) -> int:
    """Distinct tables referenced anywhere in the query, subqueries and set-op branches included."""
    return len(all_tables(q))


def analyze(q: Query) -> QueryFacts:
    """Facts for the top level of ``q``; ``all_tables`` spans every level."""
    columns = {
        "select": _ids(u.arg for u in q.select),
        "where": _ids(_pred_cols(q.where)),
        "group_by": _ids(q.group_by),
        "having": _ids(_pred_cols(q.having)),
        "order_by": _ids(o.expr.arg for o in q.order_by),
    }
    ml = has_most_least(q)
    return QueryFacts(
        tables=frozenset(q.from_.tables) if q.from_ is not None else frozenset(),
        all_tables=all_tables(q),
        columns=columns,
        most_least=ml,
        direction=q.order_by[0].direction if ml else None,
        group_by=columns["group_by"],
        star_positions=tuple(i + 1 for i, u in enumerate(q.select) if u.is_star and u.agg == "COUNT"),
    )
