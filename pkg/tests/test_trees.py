import random

import pytest

from skelgram.trees import (Context, HOLE, IDENTITY_CONTEXT, Leaf, Node,
                            RankedAlphabet, TreeSyntaxError, canonical_key,
                            compose, compose_contexts, enumerate_full_trees,
                            parse_context, parse_structured_string,
                            sigma_contexts, sigma_extension, subtrees,
                            tree_yield)

from conftest import random_tree

AB2 = RankedAlphabet(["a", "b"], 2)
ABC = RankedAlphabet(["a", "b", "c"], 2)


def test_alphabet_validation():
    with pytest.raises(ValueError):
        RankedAlphabet([], 2)
    with pytest.raises(ValueError):
        RankedAlphabet(["a"], 0)
    with pytest.raises(ValueError):
        RankedAlphabet(["a", "a"], 2)
    with pytest.raises(ValueError):
        RankedAlphabet(["a b"], 2)
    with pytest.raises(ValueError):
        RankedAlphabet(["(x"], 2)


def test_parse_single_leaf():
    assert parse_structured_string("a", ABC) == Leaf("a")


def test_parse_structure():
    t = parse_structured_string("(a (b c))", ABC)
    assert t == Node((Leaf("a"), Node((Leaf("b"), Leaf("c")))))


def test_structure_distinguishes_equal_yields():
    t1 = parse_structured_string("((a b) c)", ABC)
    t2 = parse_structured_string("(a (b c))", ABC)
    assert t1 != t2
    assert tree_yield(t1) == tree_yield(t2) == ("a", "b", "c")


@pytest.mark.parametrize("bad", [
    "", "(a", "a)", "()", "(a b c)", "(d)", "a b", "(a (b)", "<>",
])
def test_parse_errors(bad):
    with pytest.raises(TreeSyntaxError):
        parse_structured_string(bad, AB2)


def test_parse_accepts_arbitrary_whitespace():
    t = parse_structured_string("  ( a\t( b   c ) ) ", ABC)
    assert t.text == "(a (b c))"


def test_roundtrip_random_trees():
    rng = random.Random(11)
    for _ in range(200):
        t = random_tree(rng, ABC, 5)
        assert parse_structured_string(t.text, ABC) == t


def test_roundtrip_contexts():
    rng = random.Random(12)
    for _ in range(100):
        t = random_tree(rng, ABC, 4)
        ctx = Context(Node((HOLE, t.children[0] if isinstance(t, Node) else t)))
        assert parse_context(ctx.text, ABC) == ctx


def test_context_needs_exactly_one_hole():
    with pytest.raises(TreeSyntaxError):
        parse_context("(a b)", AB2)
    with pytest.raises(TreeSyntaxError):
        parse_context("(<> <>)", AB2)


def test_compose_identity():
    t = parse_structured_string("(a (b c))", ABC)
    assert compose(IDENTITY_CONTEXT, t) == t


def test_compose_examples():
    c = parse_context("(<> b)", AB2)
    assert compose(c, Leaf("a")).text == "(a b)"
    c2 = parse_context("(a (<> c))", ABC)
    t = parse_structured_string("(a b)", ABC)
    assert compose(c2, t).text == "(a ((a b) c))"


def test_compose_size_arithmetic():
    rng = random.Random(13)
    for _ in range(100):
        t = random_tree(rng, ABC, 4)
        c = parse_context("(a (<> c))", ABC)
        assert compose(c, t).size == c.size - 1 + t.size


def test_compose_contexts_associativity():
    rng = random.Random(14)
    outer = parse_context("((a b) <>)", ABC)
    inner = parse_context("(<> c)", ABC)
    for _ in range(50):
        t = random_tree(rng, ABC, 4)
        assert compose(outer, compose(inner, t)) == compose(compose_contexts(outer, inner), t)


def test_compose_yield_substitution():
    outer = parse_context("(a (<> c))", ABC)
    t = parse_structured_string("(b b)", ABC)
    composed = compose(outer, t)
    assert tree_yield(composed) == ("a", "b", "b", "c")


def test_subtrees_examples():
    assert [s.text for s in subtrees(Leaf("a"))] == ["a"]
    t = parse_structured_string("(a b)", AB2)
    assert [s.text for s in subtrees(t)] == ["a", "b", "(a b)"]


def test_subtrees_bounded_by_size():
    rng = random.Random(15)
    for _ in range(100):
        t = random_tree(rng, ABC, 5)
        assert len(subtrees(t)) <= t.size


def test_sigma_extension_examples():
    got = [t.text for t in sigma_extension([Leaf("a")], AB2)]
    assert got == ["a", "b", "(a)", "(a a)"]
    # empty base set: leaves only
    assert [t.text for t in sigma_extension([], AB2)] == ["a", "b"]


def test_sigma_extension_count_bound():
    rng = random.Random(16)
    base = {random_tree(rng, AB2, 3) for _ in range(5)}
    got = sigma_extension(base, AB2)
    n = len(base)
    assert len(got) <= len(AB2.leaf_symbols) + n + n ** 2


def test_sigma_contexts_examples():
    assert [c.text for c in sigma_contexts([], AB2)] == ["(<>)"]
    got = [c.text for c in sigma_contexts([Leaf("a")], AB2)]
    assert got == ["(<>)", "(<> a)", "(a <>)"]
    for c in sigma_contexts([Leaf("a"), Leaf("b")], AB2):
        assert c.hole_depth == 2


def test_canonical_key_orders_by_size_first():
    small = parse_structured_string("(a a)", AB2)
    big = parse_structured_string("((a a) a)", AB2)
    assert canonical_key(small) < canonical_key(big)


def test_enumerate_full_trees_counts():
    # binary bracketings of strings of length <= 3 over 2 tokens:
    # 2 + 4 + 2*8 = 22
    got = enumerate_full_trees(["a", "b"], 3)
    assert len(got) == 22
    assert len(set(got)) == 22
