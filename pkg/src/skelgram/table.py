"""The learner's observation table: row trees, column contexts, a filled
sub-matrix of the Hankel matrix, and a co-linearly independent basis.

Rows cover T and all one-level extensions of T; the row set is kept
subtree-closed.  Filling is driven by structured membership queries,
memoized by the composed tree so repeated cells cost one query.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .multilinear import colinear_witness
from .scalars import DEFAULT_TOL, scalar_eq, scalar_is_zero, vector_is_zero
from .trees import (Context, HOLE, IDENTITY_CONTEXT, Leaf, Node, RankedAlphabet,
                    SkeletalTree, canonical_key, compose, compose_contexts, subtrees)


class CapExceeded(RuntimeError):
    """The learning budget ran out; the target may have unbounded rank."""


class TableError(RuntimeError):
    pass


ZERO_ROW = "zero"
INDEPENDENT = "independent"


@dataclass(frozen=True)
class ColinearClass:
    """Classification of a row: zero, co-linear to basis row `index` with
    coefficient `coeff`, or independent of the whole basis."""
    kind: str  # ZERO_ROW, INDEPENDENT, or "basis"
    index: int = -1  # 0-based basis position
    coeff: object = None

    @property
    def is_zero(self):
        return self.kind == ZERO_ROW

    @property
    def is_independent(self):
        return self.kind == INDEPENDENT


class Budget:
    """Counts rank/column/equivalence progress against a hard cap."""

    def __init__(self, cap: int | None):
        self.cap = cap
        self.used = 0

    def charge(self, what: str = "step"):
        self.used += 1
        if self.cap is not None and self.used > self.cap:
            raise CapExceeded(
                f"iteration cap {self.cap} exceeded at {what}; "
                "target may not have finite co-linear rank")


class ObservationTable:
    def __init__(self, alphabet: RankedAlphabet, oracle, exact: bool = True,
                 tol: float = DEFAULT_TOL, budget: Budget | None = None):
        self.alphabet = alphabet
        self.oracle = oracle
        self.exact = exact
        self.tol = tol
        self.budget = budget or Budget(None)
        self.trees: list[SkeletalTree] = []       # T, canonical order
        self.columns: list[Context] = [IDENTITY_CONTEXT]
        self.basis: list[SkeletalTree] = []       # B, insertion order
        self.rows: dict[SkeletalTree, list] = {}  # T and all one-level extensions
        self._tree_set: set[SkeletalTree] = set()
        self._smq_cache: dict[SkeletalTree, object] = {}
        self.smq_count = 0
        self._completed = False
        self._cls_cache: dict[SkeletalTree, tuple] = {}
        self._mask_cache = (None, None)
        for tok in alphabet.leaf_symbols:
            self._ensure_row(Leaf(tok))

    # -- filling -----------------------------------------------------------

    def _smq(self, tree: SkeletalTree):
        value = self._smq_cache.get(tree)
        if value is None:
            value = self.oracle.smq(tree)
            self._smq_cache[tree] = value
            self.smq_count += 1
        return value

    def _fill_row(self, tree: SkeletalTree):
        row = self.rows.get(tree)
        if row is None:
            row = []
            self.rows[tree] = row
        for ctx in self.columns[len(row):]:
            row.append(self._smq(compose(ctx, tree)))

    def _ensure_row(self, tree: SkeletalTree):
        if tree not in self.rows:
            self.rows[tree] = []
        self._fill_row(tree)

    def _add_tree(self, tree: SkeletalTree):
        """Add one tree to T (children must already be in T) and extend the
        one-level extension rows."""
        if tree in self._tree_set:
            return
        self._tree_set.add(tree)
        self.trees.append(tree)
        self.trees.sort(key=canonical_key)
        self._completed = False
        for k in range(1, self.alphabet.max_rank + 1):
            for combo in itertools.product(self.trees, repeat=k):
                if tree in combo:
                    self._ensure_row(Node(combo))
        self._ensure_row(tree)

    def add_subtree_closed(self, tree: SkeletalTree):
        for sub in subtrees(tree):
            self._add_tree(sub)

    def _add_column(self, ctx: Context):
        if ctx in self.columns:
            raise TableError(f"context already present: {ctx.text}")
        self.columns.append(ctx)
        self.budget.charge("column addition")
        self._completed = False
        for tree in self.rows:
            self._fill_row(tree)

    # -- classification ----------------------------------------------------

    def classify(self, tree: SkeletalTree) -> ColinearClass:
        """Zero, the unique (basis index, coefficient), or independent.

        Zero and basis classifications stay valid while the column set is
        unchanged; only independence must be rechecked as the basis grows.
        """
        colv, basv = len(self.columns), len(self.basis)
        cached = self._cls_cache.get(tree)
        if cached is not None:
            ccolv, cbasv, cls = cached
            if ccolv == colv and (not cls.is_independent or cbasv == basv):
                return cls
        cls = self._classify_fresh(tree)
        self._cls_cache[tree] = (colv, basv, cls)
        return cls

    def _classify_fresh(self, tree: SkeletalTree) -> ColinearClass:
        row = self.rows[tree]
        if self.exact:
            if all(x == 0 for x in row):
                return ColinearClass(ZERO_ROW)
            # co-linear rows share the exact non-zero support pattern
            mask = tuple(x != 0 for x in row)
            candidates = self._basis_by_mask().get(mask, ())
        else:
            if vector_is_zero(row, self.tol):
                return ColinearClass(ZERO_ROW)
            candidates = range(len(self.basis))
        matches = []
        for i in candidates:
            alpha = colinear_witness(row, self.rows[self.basis[i]], self.tol, self.exact)
            if alpha is not None:
                matches.append((i, alpha))
        if not matches:
            return ColinearClass(INDEPENDENT)
        assert len(matches) == 1, "basis rows must be pairwise co-linearly independent"
        i, alpha = matches[0]
        return ColinearClass("basis", i, alpha)

    def _basis_by_mask(self) -> dict:
        key = (len(self.columns), len(self.basis))
        if self._mask_cache[0] != key:
            buckets: dict[tuple, list] = {}
            for i, b in enumerate(self.basis):
                mask = tuple(x != 0 for x in self.rows[b])
                buckets.setdefault(mask, []).append(i)
            self._mask_cache = (key, buckets)
        return self._mask_cache[1]

    def _row_trees(self) -> list[SkeletalTree]:
        return sorted(self.rows, key=canonical_key)

    # -- the table procedures ----------------------------------------------

    def close(self):
        """Move co-linearly independent one-level rows into T and B until none
        remain; each pass adds exactly one basis row."""
        while True:
            candidate = None
            for tree in self._row_trees():
                cls = self.classify(tree)
                if cls.is_independent:
                    candidate = tree
                    break
            if candidate is None:
                return
            self.budget.charge("basis addition")
            self.basis.append(candidate)
            self._add_tree(candidate)

    def check_zero_consistency(self) -> Context | None:
        """A zero row must stay zero under every one-level extension; on
        violation return the separating composed context."""
        zero_trees = [t for t in self.trees if self.classify(t).is_zero]
        if not zero_trees:
            return None
        ncols = len(self.columns)
        for t in zero_trees:
            for ext in self._row_trees():
                if not isinstance(ext, Node) or t not in ext.children:
                    continue
                if not all(c in self._tree_set for c in ext.children):
                    continue
                row = self.rows[ext]
                for ci in range(ncols):
                    if not self._is_zero_scalar(row[ci]):
                        hole_at = ext.children.index(t)
                        kids = list(ext.children)
                        kids[hole_at] = HOLE
                        one_level = Context(Node(kids))
                        return compose_contexts(self.columns[ci], one_level)
        return None

    def check_colinear_consistency(self) -> Context | None:
        """Co-linear rows must stay co-linear with the same coefficient under
        every one-level context; on violation return the separating context."""
        groups: dict[int, list] = {}
        for t in self.trees:
            cls = self.classify(t)
            if cls.kind == "basis":
                groups.setdefault(cls.index, []).append((t, cls.coeff))
        one_level = self._one_level_contexts()
        ncols = len(self.columns)
        for i in sorted(groups):
            members = sorted(groups[i], key=lambda pair: canonical_key(pair[0]))
            for (t1, a1), (t2, a2) in itertools.combinations(members, 2):
                alpha = a1 / a2
                for ctx in one_level:
                    r1 = self.rows[compose(ctx, t1)]
                    r2 = self.rows[compose(ctx, t2)]
                    for ci in range(ncols):
                        if not self._scalar_eq(r1[ci], alpha * r2[ci]):
                            return compose_contexts(self.columns[ci], ctx)
        return None

    def _one_level_contexts(self) -> list[Context]:
        out = []
        for k in range(1, self.alphabet.max_rank + 1):
            for hole_at in range(k):
                pools = [self.trees] * k
                pools[hole_at] = [HOLE]
                for combo in itertools.product(*pools):
                    out.append(Context(Node(combo)))
        return sorted(out, key=canonical_key)

    def complete(self, new_trees=()):
        """Add the given trees (subtree-closed) and alternate closing with the
        two consistency checks until both hold."""
        for t in new_trees:
            self.add_subtree_closed(t)
        while True:
            self.close()
            violation = self.check_zero_consistency()
            if violation is not None:
                self._add_column(violation)
                continue
            violation = self.check_colinear_consistency()
            if violation is not None:
                self._add_column(violation)
                continue
            break
        self._completed = True

    @property
    def is_completed(self) -> bool:
        return self._completed

    # -- helpers -----------------------------------------------------------

    def _is_zero_scalar(self, x) -> bool:
        return x == 0 if self.exact else scalar_is_zero(x, self.tol)

    def _scalar_eq(self, a, b) -> bool:
        return a == b if self.exact else scalar_eq(a, b, self.tol)

    def dump_tsv(self) -> str:
        """Debug dump: rows x columns with serialized titles."""
        lines = ["\t" + "\t".join(c.text for c in self.columns)]
        for tree in self._row_trees():
            row = self.rows[tree]
            mark = "*" if tree in self.basis else ("T" if tree in self._tree_set else "")
            lines.append(tree.text + mark + "\t"
                         + "\t".join(str(x) for x in row))
        return "\n".join(lines) + "\n"
