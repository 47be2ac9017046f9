import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sqlsynth.errors import ResolutionError, SqlSyntaxError, UnsupportedQuery
from sqlsynth.sql import analyze, parse_sql, parse_template, render_sql, table_count
from sqlsynth.sql.nodes import Literal, SlotRef, ValueRef
from sqlsynth.sql.render import render_literal


@pytest.fixture(scope="module")
def concert(schemas):
    return schemas["concert_singer"]


def test_every_seed_query_parses_and_is_a_render_fixed_point(corpus, schemas):
    for rec in corpus:
        s = schemas[rec["db_id"]]
        ast = parse_sql(rec["query"], s)
        text = render_sql(ast, s)
        assert parse_sql(text, s) == ast
        assert render_sql(parse_sql(text, s), s) == text


@pytest.mark.parametrize("sql, expected, count", [
    ("select count(*) from singer", "SELECT COUNT(*) FROM singer", 1),
    ("SELECT T1.name FROM singer AS T1 JOIN singer_in_concert AS T2 ON T1.singer_id = T2.singer_id "
     "WHERE T2.concert_id IN (SELECT concert_id FROM concert WHERE year > 2014)",
     "SELECT T1.name FROM singer AS T1 JOIN singer_in_concert AS T2 ON T1.singer_id = T2.singer_id "
     "WHERE T2.concert_id IN (SELECT concert_id FROM concert WHERE year > 2014)", 3),
    ("select name from singer where age between 20 and 30 order by age desc limit 3",
     "SELECT name FROM singer WHERE age BETWEEN 20 AND 30 ORDER BY age DESC LIMIT 3", 1),
    ("select name from singer where country like '%fr%' union select name from stadium",
     'SELECT name FROM singer WHERE country LIKE "%fr%" UNION SELECT name FROM stadium', 2),
    ("select t2.name, count(*) from concert as t1 join stadium as t2 on t1.stadium_id = t2.stadium_id "
     "group by t1.stadium_id having count(*) >= 2",
     "SELECT T2.name, COUNT(*) FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = T2.stadium_id "
     "GROUP BY T1.stadium_id HAVING COUNT(*) >= 2", 2),
    ("select name from singer where age > (select avg(age) from singer)",
     "SELECT name FROM singer WHERE age > (SELECT AVG(age) FROM singer)", 1),
])
def test_canonical_render_and_table_count(concert, sql, expected, count):
    ast = parse_sql(sql, concert)
    assert render_sql(ast, concert) == expected
    assert table_count(ast) == count


@pytest.mark.parametrize("sql, exc", [
    ("select name from singer left join concert on 1 = 1", UnsupportedQuery),
    ("select name, age + 1 from singer", UnsupportedQuery),
    ("select name from (select name from singer)", UnsupportedQuery),
    ("select upper(name) from singer", UnsupportedQuery),
    ("select name from singer where age is null", UnsupportedQuery),
    ("select name from singer where age in (1, 2)", UnsupportedQuery),
    ("select nosuch from singer", ResolutionError),
    ("select name from nowhere", ResolutionError),
    ("select name from stadium join singer", ResolutionError),
    ("select name from", SqlSyntaxError),
    ("select name singer where", SqlSyntaxError),
    ("select name from singer where name = 'x", SqlSyntaxError),
])
def test_rejections(concert, sql, exc):
    with pytest.raises(exc):
        parse_sql(sql, concert)


def test_syntax_error_has_position(concert):
    with pytest.raises(SqlSyntaxError) as info:
        parse_sql("select name from", concert)
    assert info.value.position == 16


def test_concrete_sql_needs_schema(concert):
    with pytest.raises(ValueError):
        parse_sql("select name from singer", None)
    with pytest.raises(ValueError):
        render_sql(parse_sql("select name from singer", concert))


def test_template_parsing():
    q = parse_template("SELECT col1_textkey INTERSECT SELECT col2_textkey_fk1")
    assert q.from_ is None
    assert q.select[0].arg == SlotRef(1, "textkey", None)
    assert q.set_right.select[0].arg == SlotRef(2, "textkey", 1, marked=True)
    assert q.set_right.select[0].arg.token == "col2_textkey_fk1"
    q = parse_template("SELECT col1_text WHERE col2_number > VALUE_1 AND col3_text LIKE VALUE_2")
    assert render_sql(q) == "SELECT col1_text WHERE col2_number > VALUE_1 AND col3_text LIKE VALUE_2"
    assert q.where.items[0].right == ValueRef(1)


def test_analyze(schemas):
    s = schemas["concert_singer"]
    ast = parse_sql("SELECT T2.name, COUNT(*) FROM concert AS T1 JOIN stadium AS T2 ON T1.stadium_id = "
                    "T2.stadium_id GROUP BY T1.stadium_id ORDER BY COUNT(*) DESC LIMIT 1", s)
    facts = analyze(ast)
    assert facts.most_least and facts.direction == "DESC"
    assert facts.table_count == 2
    assert facts.group_by == (s.find_column(s.table_id("concert"), "stadium_id").id,)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet=st.characters(blacklist_categories=("Cs", "Cc")), max_size=20))
def test_text_literals_round_trip(concert, value):
    lit = Literal(value, "text")
    ast = parse_sql(f"select name from singer where country = {render_literal(lit)}", concert)
    assert ast.where.right == lit


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=10**9), st.sampled_from(["=", "<", ">", "<=", ">=", "!="]))
def test_number_literals_round_trip(concert, n, op):
    ast = parse_sql(f"select name from singer where age {op} {n}", concert)
    assert ast.where.right == Literal(str(n), "number")
    assert render_sql(ast, concert) == f"SELECT name FROM singer WHERE age {op} {n}"
