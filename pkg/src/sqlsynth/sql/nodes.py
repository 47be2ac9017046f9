"""AST node types for the supported SQL subset.

Concrete queries refer to schema columns by id (:class:`ColumnRef`).  Templates
use the same node types with :class:`SlotRef` / :class:`ValueRef` placeholders
and no FROM clause.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterator, Union

AGGREGATES = ("COUNT", "SUM", "AVG", "MIN", "MAX")
SET_OPS = ("INTERSECT", "EXCEPT", "UNION")
COMPARISONS = ("=", "!=", "<", ">", "<=", ">=")
OPERATORS = COMPARISONS + ("LIKE", "NOT LIKE", "IN", "NOT IN", "BETWEEN")


@dataclass(frozen=True)
class Literal:
    value: str
    kind: str  # "text" | "number"


@dataclass(frozen=True)
class ColumnRef:
    column: int


@dataclass(frozen=True)
class Star:
    pass


STAR = Star()


@dataclass(frozen=True)
class SlotRef:
    index: int
    type_token: str
    fk_group: int | None = None
    # first member of an FK group carries no marker in its token
    marked: bool = False

    @property
    def token(self) -> str:
        tok = f"col{self.index}_{self.type_token}"
        if self.fk_group is not None and self.marked:
            tok += f"_fk{self.fk_group}"
        return tok


@dataclass(frozen=True)
class ValueRef:
    index: int

    @property
    def token(self) -> str:
        return f"VALUE_{self.index}"


ColumnLike = Union[ColumnRef, SlotRef]


@dataclass(frozen=True)
class ValueUnit:
    """A column, ``*``, or an aggregate over one of those."""

    arg: ColumnRef | SlotRef | Star
    agg: str | None = None
    distinct: bool = False

    @property
    def is_star(self) -> bool:
        return isinstance(self.arg, Star)


@dataclass(frozen=True)
class Join:
    left: ColumnRef
    right: ColumnRef


@dataclass(frozen=True)
class FromClause:
    tables: tuple[int, ...]
    joins: tuple[Join, ...] = ()


@dataclass(frozen=True)
class Predicate:
    left: ValueUnit
    op: str
    right: "Literal | ValueRef | ValueUnit | Query"
    upper: "Literal | ValueRef | None" = None  # BETWEEN only


@dataclass(frozen=True)
class BoolOp:
    op: str  # "AND" | "OR"
    items: tuple


Condition = Union[Predicate, BoolOp]


@dataclass(frozen=True)
class OrderItem:
    expr: ValueUnit
    direction: str = "ASC"


@dataclass(frozen=True)
class Query:
    select: tuple[ValueUnit, ...]
    from_: FromClause | None = None
    distinct: bool = False
    where: Condition | None = None
    group_by: tuple[ColumnLike, ...] = ()
    having: Condition | None = None
    order_by: tuple[OrderItem, ...] = ()
    limit: int | None = None
    set_op: str | None = None
    set_right: "Query | None" = None

    def branches(self) -> list["Query"]:
        """This query and every set-op branch, left to right, without the links."""
        out = []
        q: Query | None = self
        while q is not None:
            out.append(replace(q, set_op=None, set_right=None))
            q = q.set_right
        return out


def make_bool(op: str, items) -> Condition:
    flat = []
    for it in items:
        if isinstance(it, BoolOp) and it.op == op:
            flat.extend(it.items)
        else:
            flat.append(it)
    if len(flat) == 1:
        return flat[0]
    return BoolOp(op, tuple(flat))


def iter_predicates(cond: Condition | None) -> Iterator[Predicate]:
    if cond is None:
        return
    if isinstance(cond, Predicate):
        yield cond
    else:
        for it in cond.items:
            yield from iter_predicates(it)


def iter_levels(query: Query) -> Iterator[Query]:
    """Every query level: set-op branches and nested subqueries, in textual order."""
    q: Query | None = query
    while q is not None:
        yield q
        for cond in (q.where, q.having):
            for pred in iter_predicates(cond):
                if isinstance(pred.right, Query):
                    yield from iter_levels(pred.right)
        q = q.set_right


def level_columns(query: Query) -> Iterator[ColumnLike]:
    """Column mentions of one level in textual order, excluding FROM and subqueries."""
    for unit in query.select:
        if not unit.is_star:
            yield unit.arg
    for pred in iter_predicates(query.where):
        yield from _pred_columns(pred)
    yield from query.group_by
    for pred in iter_predicates(query.having):
        yield from _pred_columns(pred)
    for item in query.order_by:
        if not item.expr.is_star:
            yield item.expr.arg


def _pred_columns(pred: Predicate):
    if not pred.left.is_star:
        yield pred.left.arg
    if isinstance(pred.right, ValueUnit) and not pred.right.is_star:
        yield pred.right.arg
