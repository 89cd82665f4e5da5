"""Multiplicity tree automata over skeletal alphabets.

An automaton of dimension d assigns every leaf token a d-vector, every rank
k an arity-k multilinear map, and carries an output vector; a tree evaluates
bottom-up to a d-vector and the automaton value is the dot product with the
output vector.
"""
from __future__ import annotations

from fractions import Fraction

from .multilinear import MultilinearMap, apply
from .scalars import format_scalar, parse_scalar
from .trees import Leaf, RankedAlphabet, SkeletalTree


class EvaluationError(ValueError):
    """Tree uses a token or rank the automaton does not define."""


class MTA:
    """dim-d automaton: per-token leaf vectors, per-rank node maps, output vector."""

    __slots__ = ("alphabet", "dim", "leaf_maps", "node_maps", "output")

    def __init__(self, alphabet: RankedAlphabet, dim: int, leaf_maps, node_maps, output):
        if dim < 0:
            raise ValueError("dimension must be non-negative")
        leaf_maps = {tok: list(v) for tok, v in leaf_maps.items()}
        for tok in alphabet.leaf_symbols:
            if tok not in leaf_maps:
                raise ValueError(f"missing leaf vector for {tok!r}")
            if len(leaf_maps[tok]) != dim:
                raise ValueError(f"leaf vector for {tok!r} has wrong length")
        node_maps = dict(node_maps)
        for k in range(1, alphabet.max_rank + 1):
            m = node_maps.get(k)
            if m is None:
                node_maps[k] = MultilinearMap.zero(k, dim)
            elif m.arity != k or m.dim != dim:
                raise ValueError(f"rank-{k} map has wrong shape")
        output = list(output)
        if len(output) != dim:
            raise ValueError("output vector has wrong length")
        self.alphabet = alphabet
        self.dim = dim
        self.leaf_maps = leaf_maps
        self.node_maps = node_maps
        self.output = output

    @classmethod
    def zero(cls, alphabet: RankedAlphabet) -> "MTA":
        """The dimension-0 automaton mapping every tree to 0."""
        return cls(alphabet, 0, {tok: [] for tok in alphabet.leaf_symbols}, {}, [])

    def eval_vector(self, t: SkeletalTree) -> list:
        """Bottom-up vector of t."""
        if isinstance(t, Leaf):
            try:
                return self.leaf_maps[t.token]
            except KeyError:
                raise EvaluationError(f"unknown leaf token {t.token!r}") from None
        kids = [self.eval_vector(c) for c in t.children]
        k = len(kids)
        if k > self.alphabet.max_rank:
            raise EvaluationError(f"rank {k} exceeds max rank {self.alphabet.max_rank}")
        return apply(self.node_maps[k], kids)

    def eval(self, t: SkeletalTree):
        """Automaton value: dot(output, eval_vector(t))."""
        vec = self.eval_vector(t)
        acc = 0
        for lam, x in zip(self.output, vec):
            if lam != 0 and x != 0:
                acc = acc + lam * x
        return acc if self.dim else Fraction(0)

    def is_positive(self) -> bool:
        """True iff every stored coefficient (maps and output) is >= 0."""
        if any(x < 0 for x in self.output):
            return False
        for vec in self.leaf_maps.values():
            if any(x < 0 for x in vec):
                return False
        for m in self.node_maps.values():
            for row in m.rows:
                if any(x < 0 for x in row):
                    return False
        return True

    def is_colinear_mta(self) -> bool:
        """True iff every transition-matrix column has at most one non-zero
        entry; leaf vectors count as single columns."""
        for vec in self.leaf_maps.values():
            if sum(1 for x in vec if x != 0) > 1:
                return False
        for m in self.node_maps.values():
            width = m.dim ** m.arity
            for col in range(width):
                if sum(1 for row in m.rows if row[col] != 0) > 1:
                    return False
        return True


def format_mta(a: MTA) -> str:
    """Text form: header, output vector, leaf vectors, per-rank matrices."""
    lines = [f"mta d={a.dim} p={a.alphabet.max_rank}"]
    lines.append("lambda: " + " ".join(format_scalar(x) for x in a.output))
    for tok in a.alphabet.leaf_symbols:
        lines.append(f"leaf {tok}: " + " ".join(format_scalar(x) for x in a.leaf_maps[tok]))
    for k in range(1, a.alphabet.max_rank + 1):
        lines.append(f"rank {k}:")
        for row in a.node_maps[k].rows:
            lines.append("  " + " ".join(format_scalar(x) for x in row))
    return "\n".join(lines) + "\n"


def parse_mta(text: str, exact: bool = True) -> MTA:
    """Parse the format produced by format_mta."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines or not lines[0].startswith("mta "):
        raise ValueError("missing 'mta d=<d> p=<p>' header")
    header = dict(part.split("=") for part in lines[0].split()[1:])
    dim, p = int(header["d"]), int(header["p"])

    output = None
    leaf_maps = {}
    rank_rows: dict[int, list] = {}
    current_rank = None
    for ln in lines[1:]:
        if ln.startswith("lambda:"):
            output = [parse_scalar(s, exact) for s in ln.split(":", 1)[1].split()]
            current_rank = None
        elif ln.startswith("leaf "):
            head, _, rest = ln.partition(":")
            tok = head.split(None, 1)[1].strip()
            leaf_maps[tok] = [parse_scalar(s, exact) for s in rest.split()]
            current_rank = None
        elif ln.startswith("rank "):
            current_rank = int(ln.split()[1].rstrip(":"))
            rank_rows[current_rank] = []
        elif current_rank is not None:
            rank_rows[current_rank].append([parse_scalar(s, exact) for s in ln.split()])
        else:
            raise ValueError(f"unexpected line in automaton file: {ln!r}")
    if output is None:
        raise ValueError("missing lambda line")
    if not leaf_maps:
        raise ValueError("automaton defines no leaf symbols")
    alphabet = RankedAlphabet(tuple(leaf_maps), max_rank=p)
    node_maps = {}
    for k in range(1, p + 1):
        rows = rank_rows.get(k, [])
        if dim and len(rows) != dim:
            raise ValueError(f"rank {k}: expected {dim} rows, got {len(rows)}")
        node_maps[k] = MultilinearMap(k, dim, rows) if dim else MultilinearMap.zero(k, 0)
    return MTA(alphabet, dim, leaf_maps, node_maps, output)


def random_cmta(rng, alphabet: RankedAlphabet, dim: int, positive: bool = False) -> MTA:
    """Random co-linear automaton: each column gets at most one non-zero entry."""
    def value():
        num = rng.randint(1 if positive else -5, 5)
        if num == 0:
            num = 1
        return Fraction(num, rng.randint(1, 4))

    leaf_maps = {}
    for tok in alphabet.leaf_symbols:
        vec = [Fraction(0)] * dim
        if dim and rng.random() < 0.9:
            vec[rng.randrange(dim)] = value()
        leaf_maps[tok] = vec
    node_maps = {}
    for k in range(1, alphabet.max_rank + 1):
        m = MultilinearMap.zero(k, dim)
        for col in range(dim ** k):
            if rng.random() < 0.7 and dim:
                m.rows[rng.randrange(dim)][col] = value()
        node_maps[k] = m
    output = [value() if rng.random() < 0.8 else Fraction(0) for _ in range(dim)]
    return MTA(alphabet, dim, leaf_maps, node_maps, output)


def random_pmta(rng, alphabet: RankedAlphabet, dim: int) -> MTA:
    """Random positive automaton (dense non-negative coefficients)."""
    def value():
        return Fraction(rng.randint(0, 4), rng.randint(1, 3))

    leaf_maps = {tok: [value() for _ in range(dim)] for tok in alphabet.leaf_symbols}
    node_maps = {}
    for k in range(1, alphabet.max_rank + 1):
        rows = [[value() if rng.random() < 0.5 else Fraction(0)
                 for _ in range(dim ** k)] for _ in range(dim)]
        node_maps[k] = MultilinearMap(k, dim, rows)
    output = [value() for _ in range(dim)]
    return MTA(alphabet, dim, leaf_maps, node_maps, output)
