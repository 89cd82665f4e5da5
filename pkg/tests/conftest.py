"""Shared fixtures and independent brute-force oracles for the test suite.

The oracles here recompute quantities by explicit enumeration (taggings,
binary parses, Hankel rows) and never call the production code paths they
are used to check.
"""
import itertools
import random
from fractions import Fraction
from pathlib import Path

import pytest

from skelgram.trees import Leaf, Node, RankedAlphabet

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


def random_tree(rng, alphabet, max_depth):
    if max_depth <= 1 or rng.random() < 0.3:
        return Leaf(rng.choice(alphabet.leaf_symbols))
    k = rng.randint(1, alphabet.max_rank)
    return Node(tuple(random_tree(rng, alphabet, max_depth - 1) for _ in range(k)))


def random_binary_tree(rng, tokens, max_leaves):
    n = rng.randint(1, max_leaves)
    return _random_shape(rng, [rng.choice(tokens) for _ in range(n)])


def _random_shape(rng, tokens):
    if len(tokens) == 1:
        return Leaf(tokens[0])
    split = rng.randint(1, len(tokens) - 1)
    return Node((_random_shape(rng, tokens[:split]),
                 _random_shape(rng, tokens[split:])))


# -- brute-force tagging enumeration ----------------------------------------


def enumerate_taggings(grammar, tree):
    """All (root symbol, weight) pairs over complete taggings of `tree`.

    A leaf may stand for its own terminal or be tagged by any nonterminal
    with a matching terminal rule; an internal node tagged N consumes a rule
    N -> X1..Xk whose symbols match the children's chosen tags.  Pure
    enumeration; no memoization and no reuse of the grammar's weight code.
    """
    terminals = set(grammar.terminals)

    def expand(node):
        if isinstance(node, Leaf):
            options = [(node.token, 1)]
            for (lhs, rhs), w in grammar.weights.items():
                if rhs == (node.token,):
                    options.append((lhs, w))
            return options
        child_options = [expand(c) for c in node.children]
        options = []
        for combo in itertools.product(*child_options):
            symbols = tuple(sym for sym, _ in combo)
            weight_product = 1
            for _, w in combo:
                weight_product = weight_product * w
            for (lhs, rhs), w in grammar.weights.items():
                if rhs == symbols and not (len(rhs) == 1 and rhs[0] in terminals):
                    options.append((lhs, w * weight_product))
        return options

    return [(sym, w) for sym, w in expand(tree) if sym not in terminals]


def brute_force_weight(grammar, tree, root=None):
    """Sum of tagging weights rooted at `root` (default: the start symbol)."""
    root = root or grammar.start
    total = Fraction(0) if grammar.is_exact() else 0.0
    for sym, w in enumerate_taggings(grammar, tree):
        if sym == root:
            total = total + w
    return total


def count_taggings(grammar, tree):
    """Number of complete taggings with any nonterminal at the root."""
    return len(enumerate_taggings(grammar, tree))


# -- brute-force binary parsing ---------------------------------------------


def all_binary_trees(tokens):
    """Every binary bracketing of the token string."""
    tokens = list(tokens)
    if len(tokens) == 1:
        return [Leaf(tokens[0])]
    out = []
    for split in range(1, len(tokens)):
        for left in all_binary_trees(tokens[:split]):
            for right in all_binary_trees(tokens[split:]):
                out.append(Node((left, right)))
    return out


def leaves_of(tree):
    if isinstance(tree, Leaf):
        return [tree.token]
    out = []
    for c in tree.children:
        out.extend(leaves_of(c))
    return out


def parse_score(tree, w):
    """Score of one binary parse: substring weight of every node spanning
    three or more leaves plus its children's scores; spans of one or two
    leaves contribute exactly their substring weight."""
    tokens = leaves_of(tree)
    if len(tokens) <= 2:
        return w(tokens)
    left, right = tree.children
    return w(tokens) + parse_score(left, w) + parse_score(right, w)


# -- random grammar generation -----------------------------------------------


def random_nonneg_wcfg(rng, invertible=False):
    """Random grammar over <= 4 nonterminals, rhs length <= 2, weights >= 0."""
    from skelgram.grammar import WCFG

    n_nts = rng.randint(1, 4)
    nts = [f"N{i}" for i in range(n_nts)]
    toks = ["a", "b"][:rng.randint(1, 2)]
    rhs_pool = [(t,) for t in toks]
    rhs_pool += [(x, y) for x in nts + toks for y in nts + toks]
    rng.shuffle(rhs_pool)
    weights = {}
    used_rhs = set()
    for _ in range(rng.randint(2, 7)):
        rhs = rng.choice(rhs_pool)
        lhs = rng.choice(nts)
        if invertible:
            if rhs in used_rhs:
                continue
            used_rhs.add(rhs)
        weights[(lhs, rhs)] = Fraction(rng.randint(0, 6), rng.randint(1, 4))
    if not weights:
        weights[(nts[0], (toks[0],))] = Fraction(1)
    return WCFG(nts, toks, weights)


def enumeration_of_small_grammars(count=200, seed=2024):
    """Deterministic enumeration of small CNF-style grammars: <= 3
    nonterminals, <= 2 terminals, <= 6 rules, rhs drawn from unit terminals,
    unit nonterminals, and nonterminal pairs.  Only grammars whose
    nonterminals all derive a tree of depth <= 3 are kept, so every shared
    right-hand side is realizable inside the depth-4 check universe.
    """
    from skelgram.grammar import WCFG

    rng = random.Random(seed)
    out = []
    seen = set()
    while len(out) < count:
        n_nts = rng.randint(1, 3)
        nts = [f"N{i}" for i in range(n_nts)]
        toks = ["a", "b"]
        rhs_pool = [(t,) for t in toks]
        rhs_pool += [(m,) for m in nts]
        rhs_pool += [(x, y) for x in nts for y in nts]
        n_rules = rng.randint(2, 6)
        rules = set()
        for _ in range(n_rules):
            rules.add((rng.choice(nts), rng.choice(rhs_pool)))
        lhs_set = sorted({lhs for lhs, _ in rules})
        if not lhs_set or lhs_set[0] != "N0":
            continue
        referenced = {sym for _, rhs in rules for sym in rhs if sym not in toks}
        if not referenced <= set(lhs_set):
            continue  # a referenced nonterminal without rules is unproductive
        key = tuple(sorted(rules))
        if key in seen:
            continue
        seen.add(key)
        grammar = WCFG(lhs_set, toks, {rule: Fraction(1) for rule in rules})
        if _all_productive_within(grammar, depth=3):
            out.append(grammar)
    return out


def _all_productive_within(grammar, depth):
    best = {nt: None for nt in grammar.nonterminals}
    for _ in range(depth):
        for (lhs, rhs) in grammar.weights:
            cost = 1
            ok = True
            for sym in rhs:
                if sym in best:
                    if best[sym] is None:
                        ok = False
                        break
                    cost = max(cost, 1 + best[sym])
            if ok and (best[lhs] is None or cost < best[lhs]):
                best[lhs] = cost
    return all(b is not None and b <= depth for b in best.values())
