"""Recursive-descent parser for the Spider SQL subset (see docs/sql-subset.md).

``parse_sql`` resolves every name against a schema.  ``parse_template`` reads the
flat template strings produced by the template engine: no FROM clauses, column
placeholders such as ``col2_textkey_fk1`` and value placeholders ``VALUE_3``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

from ..errors import ResolutionError, SqlSyntaxError, UnsupportedQuery
from .nodes import (
    AGGREGATES,
    SET_OPS,
    STAR,
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
    make_bool,
)

if TYPE_CHECKING:
    from ..schema import Schema

KEYWORDS = {
    "SELECT", "FROM", "WHERE", "GROUP", "BY", "HAVING", "ORDER", "LIMIT", "JOIN", "ON",
    "AS", "AND", "OR", "NOT", "IN", "LIKE", "BETWEEN", "INTERSECT", "UNION", "EXCEPT",
    "DISTINCT", "ASC", "DESC", "INNER", "LEFT", "RIGHT", "OUTER", "CROSS", "ALL", "IS",
    "EXISTS", "NULL", "CASE", "OFFSET",
}
UNSUPPORTED_KEYWORDS = {"LEFT", "RIGHT", "OUTER", "CROSS", "ALL", "IS", "EXISTS", "NULL", "CASE", "OFFSET"}

SLOT_RE = re.compile(r"^col(\d+)_((?:text|number|date|time|boolean|others)(?:key)?)(?:_fk(\d+))?$")
VALUE_RE = re.compile(r"^VALUE_(\d+)$")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d*|\.\d+|\d+)
  | (?P<string>"(?:[^"]|"")*"|'(?:[^']|'')*')
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*|`[^`]+`|\[[^\]]+\])
  | (?P<op><>|!=|<=|>=|==|[=<>])
  | (?P<punct>[(),.*;\-+/])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    pos: int

    @property
    def upper(self) -> str:
        return self.value.upper() if self.kind == "name" else self.value


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise SqlSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        value = m.group()
        if kind == "string":
            q = value[0]
            value = value[1:-1].replace(q + q, q)
        elif kind == "name" and value[0] in "`[":
            value = value[1:-1]
            kind = "qname"
        if kind != "ws":
            tokens.append(Token(kind, value, m.start()))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


@dataclass(frozen=True)
class _RawCol:
    qualifier: str | None
    name: str
    pos: int


class _Scope:
    def __init__(self, schema: "Schema"):
        self.schema = schema
        self.tables: list[int] = []
        self.names: dict[str, int] = {}

    def add(self, table_id: int, alias: str | None, pos: int):
        if table_id in self.tables:
            raise UnsupportedQuery(f"self-join on table {self.schema.table(table_id).name!r} (offset {pos})")
        self.tables.append(table_id)
        self.names[self.schema.table(table_id).name.lower()] = table_id
        if alias:
            key = alias.lower()
            if key in self.names and self.names[key] != table_id:
                raise SqlSyntaxError(f"duplicate alias {alias!r}", pos)
            self.names[key] = table_id

    def resolve(self, raw: _RawCol) -> ColumnRef:
        if raw.qualifier is not None:
            tid = self.names.get(raw.qualifier.lower())
            if tid is None:
                raise ResolutionError(raw.qualifier, f"unknown table or alias {raw.qualifier!r} at offset {raw.pos}")
            col = self.schema.find_column(tid, raw.name)
            if col is None:
                raise ResolutionError(
                    f"{raw.qualifier}.{raw.name}",
                    f"no column {raw.name!r} in table {self.schema.table(tid).name!r} at offset {raw.pos}",
                )
            return ColumnRef(col.id)
        hits = [c for c in (self.schema.find_column(t, raw.name) for t in self.tables) if c is not None]
        if not hits:
            raise ResolutionError(raw.name, f"unknown column {raw.name!r} at offset {raw.pos}")
        if len(hits) > 1:
            raise ResolutionError(raw.name, f"ambiguous column {raw.name!r} at offset {raw.pos}")
        return ColumnRef(hits[0].id)


class Parser:
    def __init__(self, text: str, schema: "Schema | None" = None, template: bool = False):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0
        self.schema = schema
        self.template = template
        if not template and schema is None:
            raise ValueError("a schema is required to parse concrete SQL")

    # token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, *words: str) -> bool:
        t = self.tok
        return t.kind in ("name", "op", "punct") and t.upper in words

    def accept(self, *words: str) -> Token | None:
        if self.at(*words):
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, word: str) -> Token:
        t = self.accept(word)
        if t is None:
            self.fail(f"expected {word}")
        return t

    def fail(self, message: str):
        t = self.tok
        shown = "end of input" if t.kind == "eof" else repr(t.value)
        raise SqlSyntaxError(f"{message}, found {shown}", t.pos)

    def _check_unsupported(self):
        t = self.tok
        if t.kind == "name" and t.upper in UNSUPPORTED_KEYWORDS:
            raise UnsupportedQuery(f"unsupported construct {t.value!r} at offset {t.pos}")

    # grammar

    def parse(self) -> Query:
        q = self.parse_query()
        self.accept(";")
        if self.tok.kind != "eof":
            self._check_unsupported()
            self.fail("unexpected trailing input")
        return q

    def parse_query(self) -> Query:
        self.expect("SELECT")
        distinct = self.accept("DISTINCT") is not None
        select = [self.parse_unit()]
        while self.accept(","):
            select.append(self.parse_unit())

        scope = None
        from_raw = None
        if self.template:
            if self.at("FROM"):
                self.fail("templates carry no FROM clause")
        else:
            self.expect("FROM")
            scope, from_raw = self.parse_from()

        where = self.parse_condition() if self.accept("WHERE") else None
        group_by = []
        if self.accept("GROUP"):
            self.expect("BY")
            group_by.append(self.parse_column())
            while self.accept(","):
                group_by.append(self.parse_column())
        having = self.parse_condition() if self.accept("HAVING") else None
        order_by = []
        if self.accept("ORDER"):
            self.expect("BY")
            order_by.append(self.parse_order_item())
            while self.accept(","):
                order_by.append(self.parse_order_item())
        limit = None
        if self.accept("LIMIT"):
            t = self.tok
            if t.kind != "number" or not t.value.isdigit():
                self.fail("expected integer after LIMIT")
            self.i += 1
            limit = int(t.value)
        self._check_unsupported()

        q = Query(
            select=tuple(select),
            from_=from_raw,
            distinct=distinct,
            where=where,
            group_by=tuple(group_by),
            having=having,
            order_by=tuple(order_by),
            limit=limit,
        )
        if scope is not None:
            q = _resolve_level(q, scope)

        op_tok = self.accept(*SET_OPS)
        if op_tok is not None:
            if self.at("ALL"):
                self._check_unsupported()
            right = self.parse_query()
            if len(right.select) != len(q.select):
                raise SqlSyntaxError(
                    f"{op_tok.upper} branches differ in arity ({len(q.select)} vs {len(right.select)})", op_tok.pos
                )
            q = replace(q, set_op=op_tok.upper, set_right=right)
        return q

    def parse_from(self):
        scope = _Scope(self.schema)
        raw_joins = []
        self.parse_table_ref(scope)
        while True:
            if self.accept(","):
                self.parse_table_ref(scope)
                continue
            self.accept("INNER")
            self._check_unsupported()
            if not self.accept("JOIN"):
                break
            self.parse_table_ref(scope)
            if self.accept("ON"):
                raw_joins.append(self.parse_join_cond())
                while self.accept("AND"):
                    raw_joins.append(self.parse_join_cond())
        joins = tuple(Join(scope.resolve(a), scope.resolve(b)) for a, b in raw_joins)
        return scope, FromClause(tuple(scope.tables), joins)

    def parse_table_ref(self, scope: _Scope):
        t = self.tok
        if self.at("("):
            raise UnsupportedQuery(f"subquery in FROM at offset {t.pos}")
        if t.kind not in ("name", "qname") or (t.kind == "name" and t.upper in KEYWORDS):
            self.fail("expected table name")
        self.i += 1
        try:
            table_id = self.schema.table_id(t.value)
        except KeyError:
            raise ResolutionError(t.value, f"unknown table {t.value!r} at offset {t.pos}") from None
        alias = None
        if self.accept("AS"):
            a = self.tok
            if a.kind not in ("name", "qname"):
                self.fail("expected alias")
            self.i += 1
            alias = a.value
        elif self.tok.kind == "name" and self.tok.upper not in KEYWORDS:
            alias = self.tok.value
            self.i += 1
        scope.add(table_id, alias, t.pos)

    def parse_join_cond(self):
        left = self.parse_raw_column()
        if not self.accept("=", "=="):
            self.fail("join conditions must be column equalities")
        right = self.parse_raw_column()
        return left, right

    def parse_raw_column(self) -> _RawCol:
        t = self.tok
        if t.kind not in ("name", "qname") or (t.kind == "name" and t.upper in KEYWORDS):
            self.fail("expected column")
        self.i += 1
        if self.accept("."):
            c = self.tok
            if c.kind not in ("name", "qname"):
                self.fail("expected column name after '.'")
            self.i += 1
            return _RawCol(t.value, c.value, t.pos)
        return _RawCol(None, t.value, t.pos)

    def parse_column(self):
        t = self.tok
        if self.template and t.kind == "name":
            m = SLOT_RE.match(t.value)
            if m:
                self.i += 1
                fk = int(m.group(3)) if m.group(3) else None
                return SlotRef(int(m.group(1)), m.group(2), fk, fk is not None)
        if self.template:
            self.fail("expected column placeholder")
        return self.parse_raw_column()

    def parse_unit(self) -> ValueUnit:
        t = self.tok
        if t.kind == "name" and t.upper in AGGREGATES and self.peek().value == "(":
            self.i += 2
            distinct = self.accept("DISTINCT") is not None
            if self.accept("*"):
                arg = STAR
            else:
                arg = self.parse_column()
            if self.at("+", "-", "/", "*"):
                raise UnsupportedQuery(f"arithmetic expression at offset {self.tok.pos}")
            self.expect(")")
            return ValueUnit(arg, t.upper, distinct)
        if self.accept("*"):
            return ValueUnit(STAR)
        if t.kind == "name" and t.upper == "DISTINCT":
            raise UnsupportedQuery(f"item-level DISTINCT at offset {t.pos}")
        if t.kind == "name" and self.peek().value == "(" and t.upper not in KEYWORDS:
            raise UnsupportedQuery(f"function {t.value!r} at offset {t.pos}")
        col = self.parse_column()
        if self.at("+", "-", "/", "*"):
            raise UnsupportedQuery(f"arithmetic expression at offset {self.tok.pos}")
        return ValueUnit(col)

    def parse_order_item(self) -> OrderItem:
        unit = self.parse_unit()
        direction = "ASC"
        t = self.accept("ASC", "DESC")
        if t is not None:
            direction = t.upper
        return OrderItem(unit, direction)

    def parse_condition(self):
        items = [self.parse_and()]
        while self.accept("OR"):
            items.append(self.parse_and())
        return make_bool("OR", items)

    def parse_and(self):
        items = [self.parse_atom()]
        while self.accept("AND"):
            items.append(self.parse_atom())
        return make_bool("AND", items)

    def parse_atom(self):
        if self.at("(") and not (self.peek().kind == "name" and self.peek().upper == "SELECT"):
            self.i += 1
            cond = self.parse_condition()
            self.expect(")")
            return cond
        return self.parse_predicate()

    def parse_predicate(self) -> Predicate:
        self._check_unsupported()
        left = self.parse_unit()
        op = None
        if self.accept("NOT"):
            t = self.accept("IN", "LIKE")
            if t is None:
                self.fail("expected IN or LIKE after NOT")
            op = "NOT " + t.upper
        else:
            t = self.accept("IN", "LIKE", "BETWEEN", "=", "==", "!=", "<>", "<", ">", "<=", ">=")
            if t is None:
                self._check_unsupported()
                self.fail("expected comparison operator")
            op = {"<>": "!=", "==": "="}.get(t.upper, t.upper)
        if op in ("IN", "NOT IN"):
            if not (self.at("(") and self.peek().upper == "SELECT"):
                raise UnsupportedQuery(f"IN without a subquery at offset {self.tok.pos}")
            return Predicate(left, op, self.parse_subquery())
        if op == "BETWEEN":
            low = self.parse_value()
            self.expect("AND")
            high = self.parse_value()
            return Predicate(left, op, low, high)
        if self.at("(") and self.peek().kind == "name" and self.peek().upper == "SELECT":
            return Predicate(left, op, self.parse_subquery())
        t = self.tok
        if t.kind in ("number", "string") or self.at("-", "+") or (self.template and VALUE_RE.match(t.value)):
            return Predicate(left, op, self.parse_value())
        return Predicate(left, op, self.parse_unit())

    def parse_subquery(self) -> Query:
        self.expect("(")
        q = self.parse_query()
        self.expect(")")
        return q

    def parse_value(self):
        t = self.tok
        if self.template and t.kind == "name":
            m = VALUE_RE.match(t.value)
            if m:
                self.i += 1
                return ValueRef(int(m.group(1)))
        if t.kind == "string":
            self.i += 1
            return Literal(t.value, "text")
        sign = ""
        if self.at("-", "+"):
            sign = "-" if self.tok.value == "-" else ""
            self.i += 1
            t = self.tok
        if t.kind == "number":
            self.i += 1
            return Literal(sign + t.value, "number")
        self.fail("expected literal value")


def _resolve_unit(unit: ValueUnit, scope: _Scope) -> ValueUnit:
    if isinstance(unit.arg, _RawCol):
        return ValueUnit(scope.resolve(unit.arg), unit.agg, unit.distinct)
    return unit


def _resolve_cond(cond, scope: _Scope):
    if cond is None:
        return None
    if isinstance(cond, BoolOp):
        return BoolOp(cond.op, tuple(_resolve_cond(c, scope) for c in cond.items))
    right = cond.right
    if isinstance(right, ValueUnit):
        right = _resolve_unit(right, scope)
    return Predicate(_resolve_unit(cond.left, scope), cond.op, right, cond.upper)


def _resolve_level(q: Query, scope: _Scope) -> Query:
    return Query(
        select=tuple(_resolve_unit(u, scope) for u in q.select),
        from_=q.from_,
        distinct=q.distinct,
        where=_resolve_cond(q.where, scope),
        group_by=tuple(scope.resolve(c) if isinstance(c, _RawCol) else c for c in q.group_by),
        having=_resolve_cond(q.having, scope),
        order_by=tuple(OrderItem(_resolve_unit(o.expr, scope), o.direction) for o in q.order_by),
        limit=q.limit,
    )


def parse_sql(text: str, schema: "Schema") -> Query:
    """Parse concrete SQL and resolve names against ``schema``."""
    return Parser(text, schema).parse()


def parse_template(text: str) -> Query:
    """Parse a flat template string (no FROM, placeholder tokens)."""
    return Parser(text, template=True).parse()
