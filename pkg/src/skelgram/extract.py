"""Build a co-linear automaton from a closed, consistent observation table.

Dimension = basis size.  The output vector reads the basis rows at the
identity column; each leaf and each basis-tuple column gets the classifying
(coefficient, basis index) of its observed row, so every column carries at
most one non-zero entry.
"""
from __future__ import annotations

from fractions import Fraction

from .multilinear import MultilinearMap
from .mta import MTA
from .table import ObservationTable, TableError
from .trees import Leaf, Node


def extract_cmta(table: ObservationTable) -> MTA:
    if not table.is_completed:
        raise TableError("table must be closed and consistent before extraction")
    d = len(table.basis)
    zero = Fraction(0) if table.exact else 0.0

    def unit(cls):
        vec = [zero] * d
        if not cls.is_zero:
            assert not cls.is_independent, "closed table cannot have independent rows"
            vec[cls.index] = cls.coeff
        return vec

    leaf_maps = {}
    for tok in table.alphabet.leaf_symbols:
        leaf_maps[tok] = unit(table.classify(Leaf(tok)))

    node_maps = {}
    for k in range(1, table.alphabet.max_rank + 1):
        m = MultilinearMap.zero(k, d)
        for row in m.rows:
            for j in range(len(row)):
                row[j] = zero
        for col_tuple in _tuples(d, k):
            tree = Node(tuple(table.basis[j - 1] for j in col_tuple))
            col_vec = unit(table.classify(tree))
            for i in range(d):
                if col_vec[i] != 0:
                    m.set_coefficient(i + 1, col_tuple, col_vec[i])
        node_maps[k] = m

    output = [table.rows[b][0] for b in table.basis]  # column 0 is the identity context
    return MTA(table.alphabet, d, leaf_maps, node_maps, output)


def _tuples(d: int, k: int):
    import itertools
    return itertools.product(range(1, d + 1), repeat=k)
