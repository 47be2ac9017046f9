from .analysis import QueryFacts, analyze, table_count
from .nodes import Query
from .parser import parse_sql, parse_template
from .render import render_sql

__all__ = ["Query", "QueryFacts", "analyze", "parse_sql", "parse_template", "render_sql", "table_count"]
