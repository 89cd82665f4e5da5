import random
from fractions import Fraction

import pytest

from skelgram.grammar import load_wcfg, parse_wcfg
from skelgram.multilinear import colinear_witness
from skelgram.table import Budget, CapExceeded, ObservationTable
from skelgram.teacher import SimulatedTeacher
from skelgram.trees import (Leaf, Node, RankedAlphabet, compose,
                            parse_structured_string)

from conftest import FIXTURES


def make_table(grammar, max_rank=2, budget=None):
    alphabet = grammar.alphabet(max_rank)
    teacher = SimulatedTeacher(grammar)
    table = ObservationTable(alphabet, teacher, budget=budget)
    return table, alphabet


def complete_with_leaves(table, alphabet, extra=()):
    table.complete([Leaf(tok) for tok in alphabet.leaf_symbols] + list(extra))


def test_trivial_grammar_closes_to_rank_one():
    g = load_wcfg(FIXTURES / "trivial.wcfg")
    table, alphabet = make_table(g)
    complete_with_leaves(table, alphabet)
    assert len(table.basis) == 1
    assert table.basis[0] == Leaf("a")
    assert table.is_completed


def test_complete_on_completed_table_is_noop():
    g = load_wcfg(FIXTURES / "trivial.wcfg")
    table, alphabet = make_table(g)
    complete_with_leaves(table, alphabet)
    queries = table.smq_count
    table.complete()
    assert table.smq_count == queries
    assert len(table.basis) == 1


def test_close_adds_one_basis_row_per_iteration():
    g = load_wcfg(FIXTURES / "smalldup.wcfg")
    table, alphabet = make_table(g)
    before = len(table.basis)
    complete_with_leaves(table, alphabet)
    # smalldup has co-linear rank 2: the chain direction and the leaf direction
    assert len(table.basis) == 2
    assert before == 0


def test_classify_kinds():
    g = load_wcfg(FIXTURES / "smalldup.wcfg")
    table, alphabet = make_table(g)
    complete_with_leaves(table, alphabet)
    two_chain = parse_structured_string("(a a)", alphabet)
    three_chain = parse_structured_string("(a (a a))", alphabet)
    cls = table.classify(two_chain)
    assert cls.kind == "basis" and cls.coeff == 1
    cls3 = table.classify(three_chain)
    assert cls3.kind == "basis"
    assert cls3.coeff == Fraction(1, 5)  # 0.16 = 0.2 * 0.8
    dead = table.classify(parse_structured_string("((a a) a)", alphabet))
    assert dead.is_zero


def test_zero_consistency_violation_detected():
    # before any context beyond the identity, the leaf row of the chain toy is
    # zero but composes to a non-zero value: the check must return the context
    g = load_wcfg(FIXTURES / "smalldup.wcfg")
    table, alphabet = make_table(g)
    table.add_subtree_closed(Leaf("a"))
    table.close()
    violation = table.check_zero_consistency()
    assert violation is not None
    assert violation.text == "(<> a)"


def test_colinear_consistency_violation_detected():
    # chain grammar: rows stay pairwise co-linear over {identity} but diverge
    # under one-level contexts
    g = load_wcfg(FIXTURES / "chain.wcfg")
    table, alphabet = make_table(g, budget=Budget(100))
    table.add_subtree_closed(parse_structured_string("(a (a a))", alphabet))
    table.close()
    v = table.check_zero_consistency()
    assert v is not None
    table._add_column(v)
    table.close()
    violation = table.check_colinear_consistency()
    assert violation is not None
    # adding the context must break the witnessed co-linearity
    t1 = parse_structured_string("(a a)", alphabet)
    t2 = parse_structured_string("(a (a a))", alphabet)
    before = colinear_witness(table.rows[t1], table.rows[t2])
    table._add_column(violation)
    after = colinear_witness(table.rows[t1], table.rows[t2])
    assert before is not None and after is None


def test_consistency_checks_pass_on_exact_su_fixture():
    g = load_wcfg(FIXTURES / "colinearity3.wcfg")
    table, alphabet = make_table(g)
    extra = [parse_structured_string("(a (a a))", alphabet),
             parse_structured_string("((a a) (a a))", alphabet)]
    complete_with_leaves(table, alphabet, extra)
    assert table.check_zero_consistency() is None
    assert table.check_colinear_consistency() is None


def test_basis_rows_pairwise_independent():
    g = load_wcfg(FIXTURES / "acrab.wcfg")
    table, alphabet = make_table(g)
    best = parse_structured_string("(AcrR ((AcrA AcrB) TolC))", alphabet)
    complete_with_leaves(table, alphabet, [best])
    for i, b1 in enumerate(table.basis):
        for b2 in table.basis[i + 1:]:
            assert colinear_witness(table.rows[b1], table.rows[b2]) is None


def test_coefficient_product_property():
    """On a closed consistent table, a one-level row equals the product of its
    children's coefficients times the basis-representative row."""
    g = load_wcfg(FIXTURES / "acrab.wcfg")
    table, alphabet = make_table(g)
    best = parse_structured_string("(AcrR ((AcrA AcrB) TolC))", alphabet)
    complete_with_leaves(table, alphabet, [best])
    checked = 0
    for t1 in table.trees:
        for t2 in table.trees:
            c1, c2 = table.classify(t1), table.classify(t2)
            if c1.kind != "basis" or c2.kind != "basis":
                continue
            node = Node((t1, t2))
            repr_node = Node((table.basis[c1.index], table.basis[c2.index]))
            lhs = table.rows[node]
            rhs = table.rows[repr_node]
            coeff = c1.coeff * c2.coeff
            assert lhs == [coeff * x for x in rhs]
            checked += 1
    assert checked > 10


def test_ratio_equality_for_colinear_siblings():
    """If the children of two one-level rows are co-linear slot by slot and the
    rows are non-zero, the row coefficient over the children-coefficient
    product is the same for both."""
    import itertools
    g = load_wcfg(FIXTURES / "smalldup.wcfg")
    table, alphabet = make_table(g)
    complete_with_leaves(table, alphabet,
                         [parse_structured_string("(a (a (a a)))", alphabet)])
    by_class = {}
    for t in table.trees:
        cls = table.classify(t)
        if cls.kind == "basis":
            by_class.setdefault(cls.index, []).append((t, cls.coeff))
    checked = 0
    classes = list(by_class.values())
    for left, right in itertools.product(classes, repeat=2):
        for (t1, a1), (t2, a2) in itertools.product(left, repeat=2):
            for (s1, b1), (s2, b2) in itertools.product(right, repeat=2):
                n1, n2 = Node((t1, s1)), Node((t2, s2))
                c1, c2 = table.classify(n1), table.classify(n2)
                if c1.kind != "basis" or c2.kind != "basis":
                    continue
                assert c1.index == c2.index
                assert c1.coeff / (a1 * b1) == c2.coeff / (a2 * b2)
                checked += 1
    assert checked > 0


def test_independence_monotone_under_column_addition():
    """A row co-linearly independent over a column subset stays independent
    when columns are added."""
    g = load_wcfg(FIXTURES / "acrab.wcfg")
    table, alphabet = make_table(g)
    best = parse_structured_string("(AcrR ((AcrA AcrB) TolC))", alphabet)
    complete_with_leaves(table, alphabet, [best])
    ncols = len(table.columns)
    assert ncols > 2
    for prefix_len in range(1, ncols):
        for i, b1 in enumerate(table.basis):
            for b2 in table.basis[i + 1:]:
                r1 = table.rows[b1][:prefix_len]
                r2 = table.rows[b2][:prefix_len]
                if colinear_witness(r1, r2) is None:
                    assert colinear_witness(table.rows[b1], table.rows[b2]) is None


def test_classify_independent_row():
    g = load_wcfg(FIXTURES / "smalldup.wcfg")
    table, alphabet = make_table(g)
    table.add_subtree_closed(Leaf("a"))
    # before any closing, the two-leaf chain row is independent of the
    # (empty) basis
    two_chain = parse_structured_string("(a a)", alphabet)
    assert table.classify(two_chain).is_independent


def test_column_count_bounded_by_rank():
    for name in ("trivial.wcfg", "smalldup.wcfg", "acrab.wcfg", "colinearity3.wcfg"):
        g = load_wcfg(FIXTURES / name)
        table, alphabet = make_table(g)
        seeds = []
        if name == "acrab.wcfg":
            seeds = [parse_structured_string("(AcrR ((AcrA AcrB) TolC))", alphabet),
                     parse_structured_string("(TolC (AcrR (AcrA AcrB)))", alphabet)]
        complete_with_leaves(table, alphabet, seeds)
        assert len(table.columns) <= max(len(table.basis), 1), name


def test_unbounded_rank_exhausts_budget():
    g = load_wcfg(FIXTURES / "chain.wcfg")
    table, alphabet = make_table(g, budget=Budget(25))
    with pytest.raises(CapExceeded):
        complete_with_leaves(table, alphabet,
                             [parse_structured_string("(a (a (a (a a))))", alphabet)])


def test_smq_memoization_counts_distinct_queries():
    g = load_wcfg(FIXTURES / "smalldup.wcfg")
    table, alphabet = make_table(g)
    complete_with_leaves(table, alphabet)
    assert table.smq_count == len(table._smq_cache)
    # every row cell corresponds to a cached composed tree
    for tree, row in table.rows.items():
        for ctx, value in zip(table.columns, row):
            assert table._smq_cache[compose(ctx, tree)] == value


def test_dump_tsv_contains_rows_and_columns():
    g = load_wcfg(FIXTURES / "trivial.wcfg")
    table, alphabet = make_table(g)
    complete_with_leaves(table, alphabet)
    dump = table.dump_tsv()
    assert "<>" in dump.splitlines()[0]
    assert any(line.startswith("a") for line in dump.splitlines()[1:])
