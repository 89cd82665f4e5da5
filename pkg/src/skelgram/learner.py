"""Top-level query-learning loop: complete the table, extract a hypothesis,
ask a structured equivalence query, fold counterexample subtrees back in.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Protocol

from .extract import extract_cmta
from .mta import MTA
from .scalars import DEFAULT_TOL
from .table import Budget, ObservationTable
from .trees import Leaf, RankedAlphabet, SkeletalTree


class TeacherOracle(Protocol):
    def smq(self, tree: SkeletalTree): ...
    def seq(self, hypothesis: MTA) -> Optional[tuple[SkeletalTree, object]]: ...


@dataclass
class LearnReport:
    hypothesis: MTA
    seq_count: int
    smq_count: int
    basis_size: int
    max_counterexample_size: int = 0


def default_iteration_cap(alphabet: RankedAlphabet) -> int:
    return 10 * len(alphabet.leaf_symbols) + 1000


def learn(oracle: TeacherOracle, alphabet: RankedAlphabet, *,
          exact: bool = True, tol: float = DEFAULT_TOL,
          max_iterations: int | None = None,
          observer: Callable[[ObservationTable, MTA], None] | None = None,
          ) -> LearnReport:
    """Learn a co-linear automaton for the oracle's skeletal tree series.

    The cap (default 10*|leaf alphabet| + 1000) counts basis additions,
    column additions, and equivalence queries; targets without finite
    co-linear rank exhaust it and raise CapExceeded.
    """
    cap = default_iteration_cap(alphabet) if max_iterations is None else max_iterations
    budget = Budget(cap)
    table = ObservationTable(alphabet, oracle, exact=exact, tol=tol, budget=budget)
    table.complete([Leaf(tok) for tok in alphabet.leaf_symbols])
    seq_count = 0
    max_cex = 0
    while True:
        hypothesis = extract_cmta(table)
        if observer is not None:
            observer(table, hypothesis)
        budget.charge("equivalence query")
        seq_count += 1
        answer = oracle.seq(hypothesis)
        if answer is None:
            return LearnReport(hypothesis=hypothesis, seq_count=seq_count,
                               smq_count=table.smq_count,
                               basis_size=len(table.basis),
                               max_counterexample_size=max_cex)
        counterexample, _value = answer
        max_cex = max(max_cex, counterexample.size)
        table.complete([counterexample])
