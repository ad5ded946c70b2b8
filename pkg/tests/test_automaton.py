import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpline.automaton import (
    COLLAPSE,
    MARKER,
    WordAutomaton,
    compile_grammar_ast,
    count_language,
    enumerate_language,
    matches,
)
from helpline.fixtures import fixture_path
from helpline.grammar import (
    GrammarAst,
    OptionalGroup,
    PhraseAlt,
    RecursiveRuleError,
    Rule,
    RuleRef,
    UnresolvedRuleRefError,
    Words,
    parse_grammar,
)
from helpline.tokens import tokenize

from oracles import expand_language


def single_rule(*items):
    return GrammarAst(rules=(Rule(name="T", toplevel=True, body=tuple(items)),))


def test_phrase_alternation_language_size():
    ast = single_rule(PhraseAlt((
        ("surrender", "value"), ("maturity", "value"), ("address", "change"),
    )))
    auto = compile_grammar_ast(ast)
    assert count_language(auto) == len(expand_language(ast)) == 3


def test_wildcard_grammar_accepts_everything():
    ast = single_rule(RuleRef("DonotCare"))
    auto = compile_grammar_ast(ast)
    assert matches(auto, ())
    assert matches(auto, tokenize("literally anything goes here"))
    strings, truncated = enumerate_language(auto, COLLAPSE)
    assert strings == [()] and not truncated
    assert enumerate_language(auto, MARKER)[0] == [("*",)]


def test_self_reference_is_rejected():
    ast = GrammarAst(rules=(
        Rule(name="T", toplevel=True, body=(RuleRef("T"),)),
    ))
    with pytest.raises(RecursiveRuleError):
        compile_grammar_ast(ast)


def test_mutual_recursion_is_rejected():
    ast = GrammarAst(rules=(
        Rule(name="T", toplevel=True, body=(RuleRef("A"),)),
        Rule(name="A", toplevel=False, body=(RuleRef("B"),)),
        Rule(name="B", toplevel=False, body=(RuleRef("A"),)),
    ))
    with pytest.raises(RecursiveRuleError):
        compile_grammar_ast(ast)


def test_unresolved_reference_is_rejected():
    ast = single_rule(RuleRef("Ghost"))
    with pytest.raises(UnresolvedRuleRefError):
        compile_grammar_ast(ast)


class TestFixtureLanguages:
    def test_f3_mini_enumeration_matches_oracle(self, f3_mini_auto):
        ast = parse_grammar(fixture_path("f3_mini.xml").read_text(encoding="utf-8"))
        oracle = expand_language(ast)
        strings, truncated = enumerate_language(f3_mini_auto, COLLAPSE)
        assert not truncated
        assert len(strings) == len(oracle) == 24
        assert set(strings) == oracle
        assert count_language(f3_mini_auto) == 24

    def test_f2_mini_language(self, f2_mini_auto):
        strings, _ = enumerate_language(f2_mini_auto, COLLAPSE)
        assert [" ".join(s) for s in strings] == [
            "maturity value policy number",
            "surrender value policy number",
        ]
        assert count_language(f2_mini_auto) == 2

    def test_f1_collapses_to_empty_string(self, f1_auto):
        assert enumerate_language(f1_auto, COLLAPSE) == ([()], False)
        assert count_language(f1_auto) == 1

    def test_member_and_non_member(self, f3_mini_auto):
        assert matches(f3_mini_auto, tokenize("what is the surrender value of the policy number"))
        assert not matches(f3_mini_auto, tokenize("what does this system do"))


def test_empty_language_counts_zero():
    dead_end = WordAutomaton(num_states=2, start=0, finals=frozenset(), arcs=((0, "x", 1),))
    assert count_language(dead_end) == 0
    assert enumerate_language(dead_end) == ([], False)
    assert not matches(dead_end, ("x",))


def test_truncation_flag():
    auto = compile_grammar_ast(single_rule(PhraseAlt((("a",), ("b",), ("c",)))))
    strings, truncated = enumerate_language(auto, COLLAPSE, limit=2)
    assert strings == [("a",), ("b",)] and truncated
    strings, truncated = enumerate_language(auto, COLLAPSE, limit=3)
    assert len(strings) == 3 and not truncated
    with pytest.raises(ValueError):
        enumerate_language(auto, COLLAPSE, limit=0)
    with pytest.raises(ValueError):
        enumerate_language(auto, "squash")


def test_enumeration_order_is_shortlex(f3_auto):
    strings, _ = enumerate_language(f3_auto, COLLAPSE)
    keys = [(len(s), s) for s in strings]
    assert keys == sorted(keys)
    assert len(set(strings)) == len(strings)
    assert count_language(f3_auto, COLLAPSE) == len(strings)


def test_compile_is_deterministic():
    text = fixture_path("f3.xml").read_text(encoding="utf-8")
    a = compile_grammar_ast(parse_grammar(text))
    b = compile_grammar_ast(parse_grammar(text))
    assert a == b


def test_every_state_reachable_and_coreachable(f3_auto):
    out = f3_auto.outgoing()
    seen = {f3_auto.start}
    stack = [f3_auto.start]
    while stack:
        for _, _, dst in out[stack.pop()]:
            if dst not in seen:
                seen.add(dst)
                stack.append(dst)
    assert seen == set(range(f3_auto.num_states))
    back: dict[int, list[int]] = {}
    for src, _, dst in f3_auto.arcs:
        back.setdefault(dst, []).append(src)
    co = set(f3_auto.finals)
    stack = list(f3_auto.finals)
    while stack:
        for src in back.get(stack.pop(), ()):
            if src not in co:
                co.add(src)
                stack.append(src)
    assert co == set(range(f3_auto.num_states))


def test_membership_agrees_with_enumeration_under_perturbation(f3_mini_auto):
    rng = random.Random(1234)
    strings, _ = enumerate_language(f3_mini_auto, COLLAPSE)
    language = set(strings)
    vocab = sorted({tok for s in strings for tok in s}) + ["zzz"]
    for s in strings:
        assert matches(f3_mini_auto, s)
    for _ in range(100):
        base = list(rng.choice(strings))
        op = rng.choice(["sub", "del", "ins"])
        if op == "sub":
            base[rng.randrange(len(base))] = rng.choice(vocab)
        elif op == "del":
            del base[rng.randrange(len(base))]
        else:
            base.insert(rng.randrange(len(base) + 1), rng.choice(vocab))
        perturbed = tuple(base)
        assert matches(f3_mini_auto, perturbed) == (perturbed in language)


# --- randomized grammars against the expansion oracle ---------------------

_word = st.sampled_from(["a", "b", "c", "dd"])
_phrase = st.lists(_word, min_size=1, max_size=3).map(tuple)
_base_item = st.one_of(
    st.builds(Words, _phrase),
    st.builds(PhraseAlt, st.lists(_phrase, min_size=1, max_size=3, unique=True).map(tuple)),
)
_item = st.recursive(
    _base_item,
    lambda inner: st.builds(OptionalGroup, st.lists(inner, min_size=1, max_size=2).map(tuple)),
    max_leaves=4,
)
_body = st.lists(_item, min_size=0, max_size=4).map(tuple)


@settings(max_examples=150, deadline=None)
@given(_body)
def test_random_grammar_agrees_with_oracle(body):
    ast = single_rule(*body)
    auto = compile_grammar_ast(ast)
    oracle = expand_language(ast)
    strings, truncated = enumerate_language(auto, COLLAPSE)
    assert not truncated
    assert set(strings) == oracle
    assert len(strings) == len(oracle)
    assert count_language(auto) == len(oracle)
    keys = [(len(s), s) for s in strings]
    assert keys == sorted(keys)


@settings(max_examples=60, deadline=None)
@given(_body, st.lists(_word, max_size=5).map(tuple))
def test_random_grammar_membership(body, probe):
    ast = single_rule(*body)
    auto = compile_grammar_ast(ast)
    oracle = expand_language(ast)
    assert matches(auto, probe) == (probe in oracle)
