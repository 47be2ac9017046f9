import json
from pathlib import Path

import pytest

from sqlsynth.schema import load_content, load_schemas, schema_from_spider
from sqlsynth.template import build_pool

ROOT = Path(__file__).resolve().parent.parent
SEED = ROOT / "data" / "seed"


def toy_chain_schema():
    """Three tables in a chain a - b - c plus an isolated table d.

    Column ids: 1 a.a_id, 2 a.a_num, 3 a.a_txt, 4 b.b_id, 5 b.a_id, 6 b.b_txt,
    7 c.c_id, 8 c.b_id, 9 c.c_txt, 10 c.c_txt2, 11 d.d_txt.
    """
    cols = [
        [-1, "*"],
        [0, "a_id"], [0, "a_num"], [0, "a_txt"],
        [1, "b_id"], [1, "a_id"], [1, "b_txt"],
        [2, "c_id"], [2, "b_id"], [2, "c_txt"], [2, "c_txt2"],
        [3, "d_txt"],
    ]
    types = ["text", "number", "number", "text", "number", "number", "text", "number", "number", "text", "text",
             "text"]
    return schema_from_spider({
        "db_id": "toy",
        "table_names_original": ["a", "b", "c", "d"],
        "column_names_original": cols,
        "column_types": types,
        "primary_keys": [1, 4, 7],
        "foreign_keys": [[5, 1], [8, 4]],
    })


@pytest.fixture(scope="session")
def seed_dir():
    return SEED


@pytest.fixture(scope="session")
def schemas():
    return load_schemas(SEED / "tables.json")


@pytest.fixture(scope="session")
def corpus():
    with open(SEED / "train.json", encoding="utf-8") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def contents(schemas):
    return {db: load_content(SEED / "content", s) for db, s in schemas.items()}


@pytest.fixture(scope="session")
def pool(corpus, schemas):
    return build_pool(corpus, schemas)[0]


@pytest.fixture(scope="session")
def toy():
    return toy_chain_schema()


# acceptance reporting: tests marked ``criterion(n, title)`` get one summary line each

_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion implemented by a test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.skipped):
        status = "PASS" if rep.passed else "SKIP" if rep.skipped else "FAIL"
        key = (mark.args[0], item.name)
        _criteria[key] = (status, mark.args[1], getattr(item, "criterion_detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for (number, _), (status, title, detail) in sorted(_criteria.items(), key=lambda kv: str(kv[0][0])):
        line = f"criterion {number} {status}: {title}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
