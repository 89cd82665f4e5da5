"""Simulated teachers answering structured membership and equivalence
queries, plus the corpus-backed membership oracle with edit-distance decay.

An equivalence query scans a strategy's candidate trees and returns the
first one (in generation order) whose hypothesis value strays from the true
series by more than the teacher's margin.
"""
from __future__ import annotations

import itertools
import random

from .geneclusters import (INF, duplication_distance, expand_chains,
                           lift_weight, optimal_tree, preprocess_runs,
                           right_chain, swap_distance)
from .grammar import WCFG
from .mta import MTA
from .scalars import parse_scalar
from .trees import (Leaf, Node, RankedAlphabet, SkeletalTree, canonical_key,
                    enumerate_full_trees, parse_structured_string, tree_yield)


class SimulatedTeacher:
    """Answers smq from a grammar, automaton, or corpus oracle target, and
    seq by scanning a candidate strategy with comparison margin epsilon."""

    def __init__(self, target, strategy=None, epsilon=0):
        self.target = target
        self.strategy = strategy
        self.epsilon = epsilon
        self.smq_calls = 0
        self.seq_calls = 0
        self._memo: dict[SkeletalTree, object] = {}

    def _true_value(self, tree: SkeletalTree):
        value = self._memo.get(tree)
        if value is None:
            if isinstance(self.target, WCFG):
                value = self.target.skeletal_weight(tree)
            elif isinstance(self.target, MTA):
                value = self.target.eval(tree)
            else:
                value = self.target.smq(tree)
            self._memo[tree] = value
        return value

    def smq(self, tree: SkeletalTree):
        self.smq_calls += 1
        return self._true_value(tree)

    def seq(self, hypothesis: MTA):
        if self.strategy is None:
            raise ValueError("teacher has no equivalence strategy configured")
        self.seq_calls += 1
        for tree in self.strategy.candidates():
            truth = self._true_value(tree)
            got = hypothesis.eval(tree)
            if abs(got - truth) > self.epsilon:
                return tree, truth
        return None


# -- candidate strategies ----------------------------------------------------


def _strings_up_to(tokens, max_len):
    for length in range(1, max_len + 1):
        yield from itertools.product(tokens, repeat=length)


class ExhaustiveStrategy:
    """All strings up to max_len (shortlex order), one optimal parse each."""

    def __init__(self, alphabet: RankedAlphabet, max_len: int, weight=None):
        self.alphabet = alphabet
        self.max_len = max_len
        self.weight = weight or (lambda piece: 0)

    def candidates(self):
        for string in _strings_up_to(self.alphabet.leaf_symbols, self.max_len):
            merged = preprocess_runs(string)
            tree, _ = optimal_tree(merged, lift_weight(self.weight, merged))
            yield expand_chains(tree)


class SamplingStrategy:
    """count strings drawn uniformly from all strings of length <= max_len,
    deterministic for a fixed seed, one optimal parse each."""

    def __init__(self, alphabet: RankedAlphabet, count: int, max_len: int,
                 seed: int, weight=None):
        self.alphabet = alphabet
        self.count = count
        self.max_len = max_len
        self.seed = seed
        self.weight = weight or (lambda piece: 0)

    def _sample_string(self, rng):
        tokens = self.alphabet.leaf_symbols
        b = len(tokens)
        total = sum(b ** k for k in range(1, self.max_len + 1))
        index = rng.randrange(total)
        length = 1
        while index >= b ** length:
            index -= b ** length
            length += 1
        out = []
        for _ in range(length):
            index, digit = divmod(index, b)
            out.append(tokens[digit])
        return tuple(reversed(out))

    def candidates(self):
        rng = random.Random(self.seed)
        for _ in range(self.count):
            string = self._sample_string(rng)
            merged = preprocess_runs(string)
            tree, _ = optimal_tree(merged, lift_weight(self.weight, merged))
            yield expand_chains(tree)


class DuplicationsStrategy:
    """Every way of replacing each leaf of each base tree by a right chain of
    up to max_dup + 1 copies; candidates in canonical order."""

    def __init__(self, base_trees, max_dup: int):
        self.base_trees = list(base_trees)
        self.max_dup = max_dup

    def candidates(self):
        seen = set()
        out = []
        for base in self.base_trees:
            for variant in self._variants(base):
                if variant not in seen:
                    seen.add(variant)
                    out.append(variant)
        yield from sorted(out, key=canonical_key)

    def _variants(self, tree: SkeletalTree):
        if isinstance(tree, Leaf):
            return [right_chain(tree.token, 1 + extra)
                    for extra in range(self.max_dup + 1)]
        pools = [self._variants(c) for c in tree.children]
        return [Node(combo) for combo in itertools.product(*pools)]


class AllTreesStrategy:
    """Every tree with at most max_leaves leaves and no unary nodes, in
    canonical order.  Unary rows are already covered by the table itself."""

    def __init__(self, alphabet: RankedAlphabet, max_leaves: int):
        self.alphabet = alphabet
        self.max_leaves = max_leaves

    def candidates(self):
        yield from enumerate_full_trees(
            self.alphabet.leaf_symbols, self.max_leaves,
            min_rank=2, max_rank=self.alphabet.max_rank)


def exhaustive_candidates(alphabet: RankedAlphabet, max_len: int, weight=None):
    """Stream of optimal trees for all strings up to max_len."""
    return ExhaustiveStrategy(alphabet, max_len, weight).candidates()


def sampling_candidates(alphabet: RankedAlphabet, count: int, max_len: int,
                        seed: int, weight=None):
    """Deterministic stream of optimal trees for sampled strings."""
    return SamplingStrategy(alphabet, count, max_len, seed, weight).candidates()


# -- corpus oracle -----------------------------------------------------------


def _is_binary(tree: SkeletalTree) -> bool:
    if isinstance(tree, Leaf):
        return True
    return len(tree.children) == 2 and all(_is_binary(c) for c in tree.children)


class CorpusOracle:
    """smq by decayed edit distance to a weighted tree corpus:
    sum over corpus entries of freq * q^distance(t, entry), q^inf = 0."""

    def __init__(self, corpus, decay, distance: str = "duplication"):
        if distance not in ("swap", "duplication"):
            raise ValueError("distance must be 'swap' or 'duplication'")
        corpus = list(corpus)
        if not corpus:
            raise ValueError("corpus is empty")
        if any(freq <= 0 for _, freq in corpus):
            raise ValueError("corpus frequencies must be positive")
        if not 0 < decay < 1:
            raise ValueError("decay factor must be in (0, 1)")
        total = sum(freq for _, freq in corpus)
        self.corpus = [(tree, freq / total) for tree, freq in corpus]
        self.decay = decay
        self.distance = distance
        self._dist = swap_distance if distance == "swap" else duplication_distance

    def smq(self, tree: SkeletalTree):
        if not _is_binary(tree):
            return 0  # infinitely distant from every binary corpus tree
        total = 0
        for entry, freq in self.corpus:
            d = self._dist(tree, entry)
            if d != INF:
                total = total + freq * self.decay ** int(d)
        return total

    def alphabet(self, max_rank: int = 2) -> RankedAlphabet:
        tokens = []
        for entry, _ in self.corpus:
            for tok in tree_yield(entry):
                if tok not in tokens:
                    tokens.append(tok)
        return RankedAlphabet(tokens, max_rank)


def corpus_smq(oracle: CorpusOracle, tree: SkeletalTree):
    return oracle.smq(tree)


def load_corpus(path, exact: bool = True, max_rank: int = 2):
    """Corpus file: lines of "<frequency><TAB><structured string>"."""
    entries = []
    with open(path, encoding="utf-8") as fh:
        raw = [(lineno, line.strip()) for lineno, line in enumerate(fh, start=1)
               if line.strip() and not line.strip().startswith("#")]
    token_pool: list[str] = []
    texts = []
    for lineno, line in raw:
        if "\t" not in line:
            raise ValueError(f"line {lineno}: expected '<frequency>\\t<structured string>'")
        freq_text, tree_text = line.split("\t", 1)
        texts.append((lineno, freq_text, tree_text))
        for tok in tree_text.replace("(", " ").replace(")", " ").split():
            if tok not in token_pool:
                token_pool.append(tok)
    if not texts:
        raise ValueError("corpus is empty")
    alphabet = RankedAlphabet(token_pool, max_rank)
    for lineno, freq_text, tree_text in texts:
        freq = parse_scalar(freq_text, exact)
        tree = parse_structured_string(tree_text, alphabet)
        entries.append((tree, freq))
    return entries, alphabet
