"""Ranked skeletal trees, one-hole contexts, and their structured-string format.

A skeletal tree is either a leaf carrying an alphabet token or an anonymous
internal node with 1..p ordered children.  The text format is an
s-expression: a leaf is a bare token, a node is "(" + space-separated
children + ")", and the context hole is the token "<>".
"""
from __future__ import annotations

import itertools
import re

HOLE_TOKEN = "<>"


class TreeSyntaxError(ValueError):
    """Malformed structured string (parens, unknown token, or arity)."""


class RankedAlphabet:
    """Leaf tokens plus the anonymous internal symbol at every rank 1..max_rank."""

    __slots__ = ("leaf_symbols", "max_rank")

    def __init__(self, leaf_symbols, max_rank: int = 2):
        symbols = tuple(leaf_symbols)
        if not symbols:
            raise ValueError("alphabet needs at least one leaf symbol")
        if max_rank < 1:
            raise ValueError("max_rank must be >= 1")
        if len(set(symbols)) != len(symbols):
            raise ValueError("duplicate leaf symbols")
        for tok in symbols:
            if not tok or re.search(r"[\s()]", tok) or tok == HOLE_TOKEN:
                raise ValueError(f"bad leaf symbol: {tok!r}")
        self.leaf_symbols = symbols
        self.max_rank = max_rank

    def __contains__(self, token: str) -> bool:
        return token in self.leaf_symbols

    def __repr__(self):
        return f"RankedAlphabet({list(self.leaf_symbols)}, max_rank={self.max_rank})"

    def __eq__(self, other):
        return (isinstance(other, RankedAlphabet)
                and self.leaf_symbols == other.leaf_symbols
                and self.max_rank == other.max_rank)

    def __hash__(self):
        return hash((self.leaf_symbols, self.max_rank))


class SkeletalTree:
    """Base for Leaf and Node.  Instances are immutable and hash by text."""

    __slots__ = ("text", "size", "height")

    def __eq__(self, other):
        return isinstance(other, SkeletalTree) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __repr__(self):
        return self.text

    @property
    def is_leaf(self) -> bool:
        return isinstance(self, Leaf)


class Leaf(SkeletalTree):
    __slots__ = ("token",)

    def __init__(self, token: str):
        self.token = token
        self.text = token
        self.size = 1
        self.height = 1


class Node(SkeletalTree):
    __slots__ = ("children",)

    def __init__(self, children):
        kids = tuple(children)
        if not kids:
            raise ValueError("internal node needs at least one child")
        self.children = kids
        self.text = "(" + " ".join(c.text for c in kids) + ")"
        self.size = 1 + sum(c.size for c in kids)
        self.height = 1 + max(c.height for c in kids)


class Hole:
    """The unique hole marker of a context; behaves like a leaf structurally."""

    __slots__ = ()
    text = HOLE_TOKEN
    size = 1
    height = 1

    def __repr__(self):
        return HOLE_TOKEN

    def __eq__(self, other):
        return isinstance(other, Hole)

    def __hash__(self):
        return hash(HOLE_TOKEN)


HOLE = Hole()


def canonical_key(t):
    """Deterministic tree/context order: (size, height, serialization)."""
    return (t.size, t.height, t.text)


class Context:
    """A skeletal-tree shape with exactly one hole at a leaf position."""

    __slots__ = ("root", "text", "size", "height", "hole_depth")

    def __init__(self, root):
        holes = _count_holes(root)
        if holes != 1:
            raise ValueError(f"context must contain exactly one hole, found {holes}")
        self.root = root
        self.text = root.text
        self.size = root.size
        self.height = root.height
        self.hole_depth = _hole_depth(root)

    def __eq__(self, other):
        return isinstance(other, Context) and self.text == other.text

    def __hash__(self):
        return hash(("ctx", self.text))

    def __repr__(self):
        return self.text


def _count_holes(node) -> int:
    if isinstance(node, Hole):
        return 1
    if isinstance(node, Leaf):
        return 0
    return sum(_count_holes(c) for c in node.children)


def _hole_depth(node, depth: int = 1) -> int:
    if isinstance(node, Hole):
        return depth
    if isinstance(node, Leaf):
        return 0
    for c in node.children:
        d = _hole_depth(c, depth + 1)
        if d:
            return d
    return 0


IDENTITY_CONTEXT = Context(HOLE)


def compose(c: Context, t: SkeletalTree) -> SkeletalTree:
    """Plug tree t into the hole of context c."""
    return _substitute(c.root, t)


def compose_contexts(outer: Context, inner: Context) -> Context:
    """Plug context `inner` into the hole of `outer` (hole of the result is inner's)."""
    return Context(_substitute(outer.root, inner.root))


def _substitute(node, replacement):
    if isinstance(node, Hole):
        return replacement
    if isinstance(node, Leaf):
        return node
    kids = node.children
    # only one child subtree contains the hole; rebuild just that path
    for i, c in enumerate(kids):
        if _count_holes(c):
            new_child = _substitute(c, replacement)
            return Node(kids[:i] + (new_child,) + kids[i + 1:])
    return node


_TOKENIZE = re.compile(r"\(|\)|[^\s()]+")


def _parse_nodes(text: str, alphabet: RankedAlphabet, allow_hole: bool):
    tokens = _TOKENIZE.findall(text)
    if not tokens:
        raise TreeSyntaxError("empty structured string")
    pos = 0

    def parse_one():
        nonlocal pos
        if pos >= len(tokens):
            raise TreeSyntaxError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            children = []
            while pos < len(tokens) and tokens[pos] != ")":
                children.append(parse_one())
            if pos >= len(tokens):
                raise TreeSyntaxError("unbalanced parentheses: missing ')'")
            pos += 1  # consume ')'
            if not children:
                raise TreeSyntaxError("empty node '()'")
            if len(children) > alphabet.max_rank:
                raise TreeSyntaxError(
                    f"node arity {len(children)} exceeds max rank {alphabet.max_rank}")
            return Node(children)
        if tok == ")":
            raise TreeSyntaxError("unbalanced parentheses: stray ')'")
        if tok == HOLE_TOKEN:
            if not allow_hole:
                raise TreeSyntaxError("hole marker not allowed in a tree")
            return HOLE
        if tok not in alphabet:
            raise TreeSyntaxError(f"unknown token: {tok!r}")
        return Leaf(tok)

    root = parse_one()
    if pos != len(tokens):
        raise TreeSyntaxError(f"trailing input after tree: {tokens[pos]!r}")
    return root


def parse_structured_string(text: str, alphabet: RankedAlphabet) -> SkeletalTree:
    """Parse a structured string into a skeletal tree."""
    root = _parse_nodes(text, alphabet, allow_hole=False)
    return root


def parse_context(text: str, alphabet: RankedAlphabet) -> Context:
    """Parse a structured string with one "<>" marker into a context."""
    root = _parse_nodes(text, alphabet, allow_hole=True)
    try:
        return Context(root)
    except ValueError as exc:
        raise TreeSyntaxError(str(exc)) from None


def tree_yield(t: SkeletalTree) -> tuple:
    """Leaf tokens left to right."""
    if isinstance(t, Leaf):
        return (t.token,)
    out = []
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, Leaf):
            out.append(n.token)
        else:
            stack.extend(reversed(n.children))
    return tuple(out)


def subtrees(t: SkeletalTree) -> list:
    """All distinct subtrees of t (including t), in canonical order."""
    seen = {}
    stack = [t]
    while stack:
        n = stack.pop()
        if n.text in seen:
            continue
        seen[n.text] = n
        if isinstance(n, Node):
            stack.extend(n.children)
    return sorted(seen.values(), key=canonical_key)


def sigma_extension(trees, alphabet: RankedAlphabet) -> list:
    """All one-level combinations over `trees`, plus every alphabet leaf.

    Returns Node(t1..tk) for every rank 1 <= k <= p with ti drawn from
    `trees`, together with all leaves, deduplicated, in canonical order.
    """
    base = sorted(set(trees), key=canonical_key)
    out = {Leaf(tok) for tok in alphabet.leaf_symbols}
    for k in range(1, alphabet.max_rank + 1):
        for combo in itertools.product(base, repeat=k):
            out.add(Node(combo))
    return sorted(out, key=canonical_key)


def sigma_contexts(trees, alphabet: RankedAlphabet) -> list:
    """All one-level contexts whose non-hole children are drawn from `trees`."""
    base = sorted(set(trees), key=canonical_key)
    out = set()
    for k in range(1, alphabet.max_rank + 1):
        for hole_at in range(k):
            slots = [base] * k
            slots[hole_at] = [HOLE]
            for combo in itertools.product(*slots):
                out.add(Context(Node(combo)))
    return sorted(out, key=canonical_key)


def enumerate_trees(alphabet: RankedAlphabet, max_depth: int) -> list:
    """All skeletal trees of depth <= max_depth, in canonical order."""
    levels = [sorted((Leaf(tok) for tok in alphabet.leaf_symbols), key=canonical_key)]
    for _ in range(1, max_depth):
        below = [t for lvl in levels for t in lvl]
        new = []
        for k in range(1, alphabet.max_rank + 1):
            for combo in itertools.product(below, repeat=k):
                new.append(Node(combo))
        levels.append(new)
    return sorted({t for lvl in levels for t in lvl}, key=canonical_key)


def enumerate_contexts(alphabet: RankedAlphabet, max_depth: int) -> list:
    """All contexts of total depth <= max_depth, in canonical order."""
    memo: dict[int, list] = {}

    def ctxs(budget: int) -> list:
        if budget in memo:
            return memo[budget]
        out = [HOLE]
        if budget >= 2:
            inner_pool = ctxs(budget - 1)
            tree_pool = enumerate_trees(alphabet, budget - 1)
            for k in range(1, alphabet.max_rank + 1):
                for hole_slot in range(k):
                    pools = [tree_pool] * k
                    pools[hole_slot] = inner_pool
                    for combo in itertools.product(*pools):
                        out.append(Node(combo))
        memo[budget] = out
        return out

    roots = {n.text: n for n in ctxs(max_depth)}
    return sorted((Context(r) for r in roots.values()), key=canonical_key)


def enumerate_full_trees(tokens, max_leaves: int, min_rank: int = 2, max_rank: int = 2) -> list:
    """Trees with <= max_leaves leaves where every node has min_rank..max_rank
    children (no unary chains), in canonical order.  With min_rank =
    max_rank = 2 this is every binary bracketing of every token string.
    """
    by_leaves = {1: [Leaf(tok) for tok in tokens]}
    for n in range(2, max_leaves + 1):
        shapes = []
        for k in range(min_rank, max_rank + 1):
            if k > n:
                continue
            for split in _compositions(n, k):
                for combo in itertools.product(*[by_leaves[m] for m in split]):
                    shapes.append(Node(combo))
        by_leaves[n] = shapes
    return sorted((t for lst in by_leaves.values() for t in lst), key=canonical_key)


def _compositions(n: int, k: int):
    """Ordered ways to write n as a sum of k positive integers."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest
