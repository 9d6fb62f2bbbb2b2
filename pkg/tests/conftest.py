import io

import pytest

from rdfvec import parse_ntriples
from rdfvec.walks import write_walks

EX = "http://ex/"

CITY_NT = """\
<http://ex/Hamburg> <http://ex/country> <http://ex/Germany> .
<http://ex/Germany> <http://ex/leader> <http://ex/Angela_Merkel> .
<http://ex/Angela_Merkel> <http://ex/birthPlace> <http://ex/Hamburg> .
<http://ex/Hamburg> <http://ex/leader> <http://ex/Peter_Tschentscher> .
<http://ex/Peter_Tschentscher> <http://ex/residence> <http://ex/Hamburg> .
"""


@pytest.fixture
def city_graph():
    """Five-triple toy graph: a city, its country and two politicians."""
    return parse_ntriples(CITY_NT)


def corpus_lines(corpus):
    """Walk lines (with newlines) for a generated corpus."""
    sink = io.StringIO()
    write_walks(corpus, sink)
    return sink.getvalue().splitlines(keepends=True)
