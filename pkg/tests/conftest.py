import pytest

from helpline import compile_grammar_ast, load_agents, load_lexicon, load_policies, parse_grammar
from helpline.fixtures import fixture_path


def grammar_fixture(name):
    return parse_grammar(fixture_path(name).read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def f1_auto():
    return compile_grammar_ast(grammar_fixture("f1.xml"))


@pytest.fixture(scope="session")
def f2_auto():
    return compile_grammar_ast(grammar_fixture("f2.xml"))


@pytest.fixture(scope="session")
def f3_auto():
    return compile_grammar_ast(grammar_fixture("f3.xml"))


@pytest.fixture(scope="session")
def f2_mini_auto():
    return compile_grammar_ast(grammar_fixture("f2_mini.xml"))


@pytest.fixture(scope="session")
def f3_mini_auto():
    return compile_grammar_ast(grammar_fixture("f3_mini.xml"))


@pytest.fixture(scope="session")
def lexicon_schema():
    return load_lexicon(fixture_path("lexicon.ini"))


@pytest.fixture(scope="session")
def lexicon(lexicon_schema):
    return lexicon_schema[0]


@pytest.fixture(scope="session")
def schema(lexicon_schema):
    return lexicon_schema[1]


@pytest.fixture(scope="session")
def policy_store():
    return load_policies(fixture_path("policies.tsv"))


@pytest.fixture(scope="session")
def agents():
    return load_agents(fixture_path("agents.tsv"))
