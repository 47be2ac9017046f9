"""Database schemas, strong column types, the PK-FK table graph and value sampling.

Schemas are read from Spider-style ``tables.json`` files.  Column ids are the
indices used by that file; the ``*`` pseudo-column (index 0, table -1) is not
materialized as a :class:`Column`.
"""
from __future__ import annotations

import json
import logging
import sqlite3
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import NotFound, SchemaIntegrityError
from .sql.nodes import Literal

log = logging.getLogger(__name__)

DATA_TYPES = ("text", "number", "date", "time", "boolean", "others")

_TYPE_ALIASES = {
    "text": "text",
    "varchar": "text",
    "char": "text",
    "string": "text",
    "number": "number",
    "int": "number",
    "integer": "number",
    "real": "number",
    "float": "number",
    "double": "number",
    "numeric": "number",
    "date": "date",
    "datetime": "date",
    "time": "time",
    "timestamp": "time",
    "boolean": "boolean",
    "bool": "boolean",
    "bit": "boolean",
}

FALLBACK_VALUES = {
    "number": Literal("1", "number"),
    "text": Literal("value", "text"),
    "date": Literal("2000-01-01", "text"),
    "time": Literal("00:00:00", "text"),
    "boolean": Literal("1", "text"),
    "others": Literal("value", "text"),
}


def normalize_type(type_string: str) -> str:
    return _TYPE_ALIASES.get(str(type_string).strip().lower(), "others")


@dataclass(frozen=True)
class StrongType:
    data_type: str
    is_key: bool

    @property
    def token(self) -> str:
        return self.data_type + ("key" if self.is_key else "")

    @classmethod
    def from_token(cls, token: str) -> "StrongType":
        is_key = token.endswith("key")
        data_type = token[:-3] if is_key else token
        if data_type not in DATA_TYPES:
            raise ValueError(f"unknown strong type token {token!r}")
        return cls(data_type, is_key)

    def __str__(self):
        return self.token


@dataclass(frozen=True)
class Table:
    id: int
    name: str


@dataclass(frozen=True)
class Column:
    id: int
    table_id: int
    name: str
    data_type: str
    is_key: bool = False


def strong_type_of(column: Column) -> StrongType:
    return StrongType(column.data_type, column.is_key)


@dataclass(frozen=True)
class Schema:
    db_id: str
    tables: tuple[Table, ...]
    columns: tuple[Column, ...]
    primary_keys: frozenset[int] = frozenset()
    foreign_keys: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        seen = set()
        table_ids = {t.id for t in self.tables}
        for col in self.columns:
            if col.id in seen:
                raise SchemaIntegrityError(f"{self.db_id}: duplicate column id {col.id}")
            if col.table_id not in table_ids:
                raise SchemaIntegrityError(f"{self.db_id}: column {col.id} has unknown table {col.table_id}")
            seen.add(col.id)
        for pk in self.primary_keys:
            if pk not in seen:
                raise SchemaIntegrityError(f"{self.db_id}: primary key references unknown column {pk}")
        for src, dst in self.foreign_keys:
            if src not in seen or dst not in seen:
                raise SchemaIntegrityError(f"{self.db_id}: foreign key ({src}, {dst}) references unknown column")
            if self.column(src).table_id == self.column(dst).table_id:
                raise SchemaIntegrityError(f"{self.db_id}: foreign key ({src}, {dst}) stays within one table")

    @cached_property
    def _column_index(self) -> dict[int, Column]:
        return {c.id: c for c in self.columns}

    @cached_property
    def _table_index(self) -> dict[int, Table]:
        return {t.id: t for t in self.tables}

    @cached_property
    def _table_names(self) -> dict[str, int]:
        return {t.name.lower(): t.id for t in self.tables}

    @cached_property
    def _columns_by_table(self) -> dict[int, tuple[Column, ...]]:
        out: dict[int, list[Column]] = {t.id: [] for t in self.tables}
        for c in self.columns:
            out[c.table_id].append(c)
        return {k: tuple(v) for k, v in out.items()}

    @cached_property
    def _fk_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.foreign_keys)

    @cached_property
    def _by_strong_type(self) -> dict[StrongType, tuple[int, ...]]:
        out: dict[StrongType, list[int]] = {}
        for c in self.columns:
            out.setdefault(strong_type_of(c), []).append(c.id)
        return {k: tuple(v) for k, v in out.items()}

    def column(self, column_id: int) -> Column:
        try:
            return self._column_index[column_id]
        except KeyError:
            raise NotFound(f"{self.db_id}: no column with id {column_id}") from None

    def table(self, table_id: int) -> Table:
        try:
            return self._table_index[table_id]
        except KeyError:
            raise NotFound(f"{self.db_id}: no table with id {table_id}") from None

    def table_id(self, name: str) -> int:
        try:
            return self._table_names[name.lower()]
        except KeyError:
            raise NotFound(f"{self.db_id}: no table named {name!r}") from None

    def table_of(self, column_id: int) -> int:
        return self.column(column_id).table_id

    def columns_of(self, table_id: int) -> tuple[Column, ...]:
        return self._columns_by_table[table_id]

    def find_column(self, table_id: int, name: str) -> Column | None:
        name = name.lower()
        for c in self._columns_by_table[table_id]:
            if c.name.lower() == name:
                return c
        return None

    def columns_of_type(self, strong_type: StrongType) -> tuple[int, ...]:
        """Column ids with the given strong type, ascending."""
        return self._by_strong_type.get(strong_type, ())

    def fk_linked(self, a: int, b: int) -> bool:
        return (a, b) in self._fk_set or (b, a) in self._fk_set

    def references(self, src: int, dst: int) -> bool:
        return (src, dst) in self._fk_set

    def qualified_name(self, column_id: int) -> str:
        col = self.column(column_id)
        return f"{self.table(col.table_id).name}.{col.name}"

    def to_spider(self) -> dict:
        """Serialize back into one Spider ``tables.json`` entry."""
        table_pos = {t.id: i for i, t in enumerate(self.tables)}
        n = max((c.id for c in self.columns), default=0) + 1
        names: list = [[-1, "*"]] + [None] * (n - 1)
        types: list = ["text"] + [None] * (n - 1)
        for c in self.columns:
            names[c.id] = [table_pos[c.table_id], c.name]
            types[c.id] = c.data_type
        if any(x is None for x in names):
            raise SchemaIntegrityError(f"{self.db_id}: column ids are not contiguous")
        return {
            "db_id": self.db_id,
            "table_names_original": [t.name for t in self.tables],
            "table_names": [t.name.lower().replace("_", " ") for t in self.tables],
            "column_names_original": names,
            "column_names": [[t, str(nm).lower().replace("_", " ")] for t, nm in names],
            "column_types": types,
            "primary_keys": sorted(self.primary_keys),
            "foreign_keys": [list(p) for p in self.foreign_keys],
        }


def schema_from_spider(entry: Mapping) -> Schema:
    db_id = entry["db_id"]
    table_names = entry["table_names_original"]
    col_names = entry["column_names_original"]
    col_types = entry["column_types"]
    if len(col_names) != len(col_types):
        raise SchemaIntegrityError(f"{db_id}: column_names_original and column_types differ in length")
    n_cols = len(col_names)

    def check(idx):
        if not isinstance(idx, int) or idx <= 0 or idx >= n_cols:
            raise SchemaIntegrityError(f"{db_id}: column index {idx!r} out of range (1..{n_cols - 1})")
        return idx

    pk_raw = []
    for pk in entry.get("primary_keys", []):
        # newer Spider files list composite keys as nested lists
        pk_raw.extend(pk if isinstance(pk, list) else [pk])
    primary_keys = frozenset(check(p) for p in pk_raw)

    fk_pairs = []
    for pair in entry.get("foreign_keys", []):
        src, dst = check(pair[0]), check(pair[1])
        if col_names[src][0] == col_names[dst][0]:
            log.warning("%s: dropping self-referencing foreign key %s -> %s", db_id, src, dst)
            continue
        if (src, dst) not in fk_pairs:
            fk_pairs.append((src, dst))

    key_ids = set(primary_keys)
    for src, dst in fk_pairs:
        key_ids.update((src, dst))

    tables = tuple(Table(i, name) for i, name in enumerate(table_names))
    columns = []
    for idx, ((t_idx, name), type_str) in enumerate(zip(col_names, col_types)):
        if t_idx < 0:
            continue
        if t_idx >= len(tables):
            raise SchemaIntegrityError(f"{db_id}: column {idx} references table index {t_idx}")
        columns.append(Column(idx, t_idx, name, normalize_type(type_str), idx in key_ids))
    return Schema(db_id, tables, tuple(columns), primary_keys, tuple(fk_pairs))


def load_schemas(schema_file: str | Path) -> dict[str, Schema]:
    with open(schema_file, encoding="utf-8") as fh:
        entries = json.load(fh)
    return {e["db_id"]: schema_from_spider(e) for e in entries}


def load_schema(schema_file: str | Path, db_id: str) -> Schema:
    with open(schema_file, encoding="utf-8") as fh:
        entries = json.load(fh)
    for entry in entries:
        if entry.get("db_id") == db_id:
            return schema_from_spider(entry)
    raise NotFound(f"no schema entry for db_id {db_id!r} in {schema_file}")


class _Unreachable:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNREACHABLE"

    def __reduce__(self):
        return (_Unreachable, ())


UNREACHABLE = _Unreachable()


@dataclass(frozen=True)
class TableGraph:
    nodes: tuple[int, ...]
    edges: frozenset[frozenset[int]]
    # missing pairs are unreachable
    _dist: Mapping[tuple[int, int], int] = field(repr=False)
    _adjacent: Mapping[int, tuple[int, ...]] = field(repr=False)

    def dist(self, a: int, b: int):
        d = self._dist.get((a, b))
        return UNREACHABLE if d is None else d

    def neighbors(self, table_id: int) -> tuple[int, ...]:
        return self._adjacent[table_id]

    def has_edge(self, a: int, b: int) -> bool:
        return frozenset((a, b)) in self.edges

    def shortest_path(self, a: int, b: int) -> list[int] | None:
        """Table ids from ``a`` to ``b`` inclusive; ties go to lower table ids."""
        if a == b:
            return [a]
        parent = {a: None}
        queue = deque([a])
        while queue:
            cur = queue.popleft()
            for nxt in self._adjacent[cur]:
                if nxt not in parent:
                    parent[nxt] = cur
                    if nxt == b:
                        path = [b]
                        while parent[path[-1]] is not None:
                            path.append(parent[path[-1]])
                        return path[::-1]
                    queue.append(nxt)
        return None

    def matrix(self) -> list[list]:
        return [[self.dist(a, b) for b in self.nodes] for a in self.nodes]


def build_table_graph(schema: Schema) -> TableGraph:
    nodes = tuple(t.id for t in schema.tables)
    adjacent: dict[int, set[int]] = {t: set() for t in nodes}
    edges = set()
    for src, dst in schema.foreign_keys:
        a, b = schema.table_of(src), schema.table_of(dst)
        edges.add(frozenset((a, b)))
        adjacent[a].add(b)
        adjacent[b].add(a)
    adj = {t: tuple(sorted(n)) for t, n in adjacent.items()}
    dist: dict[tuple[int, int], int] = {}
    for start in nodes:
        dist[(start, start)] = 0
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in adj[cur]:
                if (start, nxt) not in dist:
                    dist[(start, nxt)] = dist[(start, cur)] + 1
                    queue.append(nxt)
    return TableGraph(nodes, frozenset(edges), dist, adj)


@dataclass(frozen=True)
class DatabaseContent:
    """Per-column value lists keyed by column id."""

    values: Mapping[int, tuple] = field(default_factory=dict)

    def get(self, column_id: int) -> tuple:
        return self.values.get(column_id, ())


def _dedup(values: Iterable) -> tuple:
    seen = set()
    out = []
    for v in values:
        if v is None or v in seen:
            continue
        seen.add(v)
        out.append(v)
    return tuple(out)


def content_from_json(path: str | Path, schema: Schema) -> DatabaseContent:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    values = {}
    for key, vals in raw.items():
        cid = int(key)
        schema.column(cid)
        values[cid] = _dedup(vals)
    return DatabaseContent(values)


def content_from_sqlite(path: str | Path, schema: Schema, limit: int = 1000) -> DatabaseContent:
    values = {}
    conn = sqlite3.connect(f"file:{path}?mode=ro", uri=True)
    conn.text_factory = lambda b: b.decode("utf-8", errors="replace")
    try:
        for col in schema.columns:
            table = schema.table(col.table_id).name
            try:
                rows = conn.execute(
                    f'SELECT DISTINCT "{col.name}" FROM "{table}" LIMIT {int(limit)}'
                ).fetchall()
            except sqlite3.Error as exc:
                log.debug("%s: cannot read %s.%s: %s", schema.db_id, table, col.name, exc)
                continue
            values[col.id] = _dedup(r[0] for r in rows)
    finally:
        conn.close()
    return DatabaseContent(values)


def load_content(content_dir: str | Path | None, schema: Schema) -> DatabaseContent | None:
    """Find and read content for ``schema``; ``None`` when nothing is available.

    Looks for ``<db_id>.json``, ``<db_id>.sqlite`` and the Spider layout
    ``<db_id>/<db_id>.sqlite`` under ``content_dir``.
    """
    if content_dir is None:
        return None
    root = Path(content_dir)
    db_id = schema.db_id
    candidates = [
        (root / f"{db_id}.json", content_from_json),
        (root / f"{db_id}.sqlite", content_from_sqlite),
        (root / db_id / f"{db_id}.sqlite", content_from_sqlite),
    ]
    for path, reader in candidates:
        if path.is_file():
            try:
                return reader(path, schema)
            except (OSError, ValueError, sqlite3.Error) as exc:
                log.warning("%s: unreadable content file %s: %s", db_id, path, exc)
                return None
    return None


def to_literal(value, column: Column) -> Literal:
    if isinstance(value, bool):
        value = int(value)
    if isinstance(value, (int, float)) and column.data_type in ("number", "boolean", "others"):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        return Literal(str(value), "number")
    return Literal(str(value), "text")


def fallback_value(column: Column) -> Literal:
    return FALLBACK_VALUES[column.data_type]


def sample_value(content: DatabaseContent | None, column: Column, rng) -> Literal:
    """Uniform draw from the column's stored values, or the type's fallback literal."""
    pool: Sequence = content.get(column.id) if content is not None else ()
    if not pool:
        return fallback_value(column)
    return to_literal(pool[rng.randrange(len(pool))], column)
