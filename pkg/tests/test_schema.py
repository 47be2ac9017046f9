import json
import pickle
import random
import sqlite3

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqlsynth.errors import NotFound, SchemaIntegrityError
from sqlsynth.schema import (
    UNREACHABLE,
    DatabaseContent,
    StrongType,
    build_table_graph,
    content_from_sqlite,
    fallback_value,
    load_content,
    load_schema,
    normalize_type,
    sample_value,
    schema_from_spider,
    strong_type_of,
)
from sqlsynth.sql.nodes import Literal

# reference table graph of college_1, written with table aliases
COLLEGE_EDGES = [("T1", "T5"), ("T2", "T1"), ("T3", "T2"), ("T3", "T6"), ("T3", "T7"),
                 ("T4", "T1"), ("T4", "T3"), ("T4", "T6"), ("T7", "T5")]
COLLEGE_ALIASES = {"T1": "class", "T2": "course", "T3": "department", "T4": "employee",
                   "T5": "enroll", "T6": "professor", "T7": "student"}

# frozen BFS result for the table order in data/seed (class..student)
COLLEGE_DIST = [
    [0, 1, 2, 1, 1, 2, 2],
    [1, 0, 1, 2, 2, 2, 2],
    [2, 1, 0, 1, 2, 1, 1],
    [1, 2, 1, 0, 2, 1, 2],
    [1, 2, 2, 2, 0, 3, 1],
    [2, 2, 1, 1, 3, 0, 2],
    [2, 2, 1, 2, 1, 2, 0],
]


def _nx_distances(schema):
    g = nx.Graph()
    g.add_nodes_from(t.id for t in schema.tables)
    for a, b in schema.foreign_keys:
        g.add_edge(schema.table_of(a), schema.table_of(b))
    return dict(nx.all_pairs_shortest_path_length(g))


def test_college_distances_match_reference_graph(schemas):
    s = schemas["college_1"]
    graph = build_table_graph(s)
    fig = nx.Graph([(COLLEGE_ALIASES[a], COLLEGE_ALIASES[b]) for a, b in COLLEGE_EDGES])
    oracle = dict(nx.all_pairs_shortest_path_length(fig))
    for a in s.tables:
        for b in s.tables:
            assert graph.dist(a.id, b.id) == oracle[a.name][b.name]
    assert graph.matrix() == COLLEGE_DIST
    assert graph.dist(s.table_id("class"), s.table_id("course")) == 1
    assert graph.dist(s.table_id("course"), s.table_id("student")) == 2


def test_all_seed_graphs_match_networkx(schemas):
    for s in schemas.values():
        graph = build_table_graph(s)
        oracle = _nx_distances(s)
        for a in s.tables:
            for b in s.tables:
                expect = oracle[a.id].get(b.id, UNREACHABLE)
                assert graph.dist(a.id, b.id) == expect, (s.db_id, a.name, b.name)


def test_unreachable_sentinel(schemas):
    s = schemas["flight_company"]
    graph = build_table_graph(s)
    weather = s.table_id("weather")
    assert graph.dist(s.table_id("flight"), weather) is UNREACHABLE
    assert graph.shortest_path(s.table_id("flight"), weather) is None
    assert pickle.loads(pickle.dumps(UNREACHABLE)) is UNREACHABLE
    assert graph.neighbors(weather) == ()


def test_shortest_path_prefers_lower_ids(schemas):
    s = schemas["college_1"]
    graph = build_table_graph(s)
    course, student = s.table_id("course"), s.table_id("student")
    assert [s.table(t).name for t in graph.shortest_path(course, student)] == ["course", "department", "student"]
    # enroll -> professor has two 3-hop routes; the lower-id neighbour (class) goes first
    path = graph.shortest_path(s.table_id("enroll"), s.table_id("professor"))
    assert [s.table(t).name for t in path] == ["enroll", "class", "employee", "professor"]


def test_strong_types(schemas):
    music = schemas["music_1"]
    song = music.table_id("song")
    artist_name = music.find_column(song, "artist_name")
    assert strong_type_of(artist_name).token == "textkey"
    assert strong_type_of(music.find_column(song, "rating")).token == "number"
    club = schemas["riding_club"]
    assert strong_type_of(club.find_column(club.table_id("club"), "club_id")).token == "numberkey"
    # a column that is only a foreign key still counts as a key
    college = schemas["college_1"]
    assert college.find_column(college.table_id("class"), "crs_code").is_key


def test_strong_type_tokens_round_trip():
    for dtype in ("text", "number", "time", "boolean", "others", "date"):
        for key in (False, True):
            st_ = StrongType(dtype, key)
            assert StrongType.from_token(st_.token) == st_


def test_normalize_type():
    assert normalize_type("TEXT") == "text"
    assert normalize_type("varchar") == "text"
    assert normalize_type("INTEGER") == "number"
    assert normalize_type("blob") == "others"


def test_to_spider_round_trip(schemas):
    for s in schemas.values():
        assert schema_from_spider(json.loads(json.dumps(s.to_spider()))) == s


def _entry(**over):
    entry = {
        "db_id": "x",
        "table_names_original": ["a", "b"],
        "column_names_original": [[-1, "*"], [0, "id"], [1, "id"], [1, "a_id"]],
        "column_types": ["text", "number", "number", "number"],
        "primary_keys": [1, 2],
        "foreign_keys": [[3, 1]],
    }
    entry.update(over)
    return entry


def test_schema_integrity_errors():
    with pytest.raises(SchemaIntegrityError):
        schema_from_spider(_entry(foreign_keys=[[3, 9]]))
    with pytest.raises(SchemaIntegrityError):
        schema_from_spider(_entry(primary_keys=[0]))
    with pytest.raises(SchemaIntegrityError):
        schema_from_spider(_entry(column_types=["text"]))
    with pytest.raises(SchemaIntegrityError):
        schema_from_spider(_entry(column_names_original=[[-1, "*"], [0, "id"], [5, "id"], [1, "a_id"]]))


def test_self_referencing_fk_dropped(caplog):
    s = schema_from_spider(_entry(foreign_keys=[[3, 1], [3, 2], [3, 1]]))
    assert s.foreign_keys == ((3, 1),)
    assert "self-referencing" in caplog.text


def test_composite_primary_keys_flattened():
    s = schema_from_spider(_entry(primary_keys=[1, [2, 3]]))
    assert s.primary_keys == frozenset({1, 2, 3})


def test_lookup_errors(schemas, seed_dir):
    s = schemas["pets_1"]
    assert s.table_id("STUDENT") == s.table_id("student")
    with pytest.raises(NotFound):
        s.table_id("nope")
    with pytest.raises(NotFound):
        s.column(999)
    with pytest.raises(NotFound):
        load_schema(seed_dir / "tables.json", "nope")
    assert load_schema(seed_dir / "tables.json", "pets_1") == s


def test_fallback_values(schemas):
    s = schemas["college_1"]
    assert fallback_value(s.find_column(s.table_id("student"), "stu_gpa")) == Literal("1", "number")
    assert fallback_value(s.find_column(s.table_id("student"), "stu_fname")) == Literal("value", "text")
    assert fallback_value(s.find_column(s.table_id("student"), "stu_dob")) == Literal("00:00:00", "text")
    col = s.find_column(s.table_id("student"), "stu_fname")
    assert sample_value(None, col, random.Random(0)) == Literal("value", "text")
    assert sample_value(DatabaseContent({}), col, random.Random(0)) == Literal("value", "text")


def test_sample_value_is_uniform(schemas):
    s = schemas["pets_1"]
    col = s.find_column(s.table_id("pets"), "pet_type")
    content = DatabaseContent({col.id: ("cat", "dog", "bird", "fish")})
    rng = random.Random(5)
    n = 20000
    counts = {}
    for _ in range(n):
        v = sample_value(content, col, rng).value
        counts[v] = counts.get(v, 0) + 1
    assert set(counts) == {"cat", "dog", "bird", "fish"}
    for c in counts.values():
        assert abs(c / n - 0.25) < 0.015


def test_numeric_content_becomes_number_literals(schemas):
    s = schemas["singer"]
    col = s.find_column(s.table_id("singer"), "birth_year")
    lit = sample_value(DatabaseContent({col.id: (1948.0,)}), col, random.Random(0))
    assert lit == Literal("1948", "number")


def test_content_from_sqlite(tmp_path, schemas):
    s = schemas["pets_1"]
    path = tmp_path / "pets_1" / "pets_1.sqlite"
    path.parent.mkdir()
    conn = sqlite3.connect(path)
    conn.execute("CREATE TABLE pets (pet_id INTEGER, pet_type TEXT, pet_age INTEGER, weight REAL)")
    conn.executemany("INSERT INTO pets VALUES (?, ?, ?, ?)", [(1, "cat", 3, 12.0), (2, "dog", 2, 13.4),
                                                             (3, "dog", 1, 9.3)])
    conn.commit()
    conn.close()
    content = load_content(tmp_path, s)
    pet_type = s.find_column(s.table_id("pets"), "pet_type")
    assert sorted(content.get(pet_type.id)) == ["cat", "dog"]
    # tables missing from the file simply have no values
    assert content.get(s.find_column(s.table_id("student"), "name").id) == ()
    assert content_from_sqlite(path, s).get(pet_type.id) == content.get(pet_type.id)


def test_load_content_missing_dir(tmp_path, schemas):
    assert load_content(tmp_path, schemas["pets_1"]) is None
    assert load_content(None, schemas["pets_1"]) is None


@st.composite
def random_schemas(draw):
    n_tables = draw(st.integers(1, 6))
    cols = [[-1, "*"]]
    for t in range(n_tables):
        for k in range(draw(st.integers(1, 3))):
            cols.append([t, f"c{t}_{k}"])
    n = len(cols)
    pairs = draw(st.lists(st.tuples(st.integers(1, n - 1), st.integers(1, n - 1)), max_size=8))
    fks = [[a, b] for a, b in pairs if cols[a][0] != cols[b][0]]
    return schema_from_spider({
        "db_id": "h",
        "table_names_original": [f"t{i}" for i in range(n_tables)],
        "column_names_original": cols,
        "column_types": ["number"] * n,
        "primary_keys": [],
        "foreign_keys": fks,
    })


@settings(max_examples=60, deadline=None)
@given(random_schemas())
def test_distances_are_a_metric_matching_networkx(schema):
    graph = build_table_graph(schema)
    oracle = _nx_distances(schema)
    ids = [t.id for t in schema.tables]
    for a in ids:
        assert graph.dist(a, a) == 0
        for b in ids:
            d = graph.dist(a, b)
            assert d == oracle[a].get(b, UNREACHABLE)
            assert d == graph.dist(b, a)
            path = graph.shortest_path(a, b)
            if d is UNREACHABLE:
                assert path is None
            else:
                assert len(path) == d + 1
                assert all(graph.has_edge(x, y) for x, y in zip(path, path[1:]))
