"""Dense multilinear maps V^k -> V stored as d x d^k coefficient matrices.

Column index layout enumerates the argument index tuple (j1..jk)
lexicographically with jk varying fastest, so column 0 is (1,1,..,1),
column 1 is (1,..,1,2), and so on.
"""
from __future__ import annotations

import itertools

from .scalars import DEFAULT_TOL, scalar_is_zero


class MultilinearMap:
    """A k-linear map on d-vectors; k=0 degenerates to a constant d-vector."""

    __slots__ = ("arity", "dim", "rows")

    def __init__(self, arity: int, dim: int, rows):
        if arity < 0 or dim < 0:
            raise ValueError("arity and dim must be non-negative")
        width = dim ** arity
        rows = [list(r) for r in rows]
        if len(rows) != dim or any(len(r) != width for r in rows):
            raise ValueError(f"coefficient matrix must be {dim} x {width}")
        self.arity = arity
        self.dim = dim
        self.rows = rows

    @classmethod
    def zero(cls, arity: int, dim: int) -> "MultilinearMap":
        from fractions import Fraction
        width = dim ** arity
        return cls(arity, dim, [[Fraction(0)] * width for _ in range(dim)])

    def column_index(self, indices) -> int:
        """Flat column offset of a 1-based index tuple (j1..jk)."""
        idx = 0
        for j in indices:
            if not 1 <= j <= self.dim:
                raise IndexError(f"index {j} out of range 1..{self.dim}")
            idx = idx * self.dim + (j - 1)
        return idx

    def coefficient(self, i: int, indices):
        """c^i_{j1..jk} with all indices 1-based."""
        return self.rows[i - 1][self.column_index(indices)]

    def set_coefficient(self, i: int, indices, value) -> None:
        self.rows[i - 1][self.column_index(indices)] = value

    def column(self, indices) -> list:
        col = self.column_index(indices)
        return [r[col] for r in self.rows]

    def __eq__(self, other):
        return (isinstance(other, MultilinearMap) and self.arity == other.arity
                and self.dim == other.dim and self.rows == other.rows)


def apply(m: MultilinearMap, args) -> list:
    """Evaluate the map: y[i] = sum over (j1..jk) of c^i_{j1..jk} * prod args[u][ju]."""
    if len(args) != m.arity:
        raise ValueError(f"expected {m.arity} arguments, got {len(args)}")
    for v in args:
        if len(v) != m.dim:
            raise ValueError(f"argument dimension {len(v)} != {m.dim}")
    d = m.dim
    if d == 0:
        return []
    if m.arity == 0:
        return [r[0] for r in m.rows]

    # fast path: every argument has at most one non-zero coordinate, so only
    # a single column contributes (this is the common case for CMTA runs)
    sparse = []
    for v in args:
        nz = [(j, x) for j, x in enumerate(v, start=1) if x != 0]
        if len(nz) > 1:
            sparse = None
            break
        sparse.append(nz[0] if nz else None)
    if sparse is not None:
        if any(entry is None for entry in sparse):
            return [row[0] * 0 for row in m.rows]
        factor = 1
        for _, x in sparse:
            factor = factor * x
        col = m.column_index([j for j, _ in sparse])
        return [r[col] * factor for r in m.rows]

    out = []
    index_tuples = list(itertools.product(range(d), repeat=m.arity))
    for i in range(d):
        row = m.rows[i]
        acc = 0
        for col, tup in enumerate(index_tuples):
            c = row[col]
            if c == 0:
                continue
            prod = c
            for u, j in enumerate(tup):
                prod = prod * args[u][j]
                if prod == 0:
                    break
            acc = acc + prod
        out.append(acc)
    return out


def colinear_witness(v, w, tol: float = DEFAULT_TOL, exact: bool = True):
    """Return alpha != 0 with v = alpha*w, or None.

    Two all-zero vectors are co-linear with the canonical witness alpha = 1.
    """
    if len(v) != len(w):
        raise ValueError("dimension mismatch")
    if exact:
        w_zero = all(x == 0 for x in w)
        v_zero = all(x == 0 for x in v)
        if w_zero:
            return 1 if v_zero else None
        if v_zero:
            return None
        from fractions import Fraction
        pivot = next(j for j, x in enumerate(w) if x != 0)
        alpha = Fraction(v[pivot]) / Fraction(w[pivot])
        if alpha == 0:
            return None
        return alpha if all(v[j] == alpha * w[j] for j in range(len(v))) else None

    fv = [float(x) for x in v]
    fw = [float(x) for x in w]
    scale = max([1.0] + [abs(x) for x in fv] + [abs(x) for x in fw])
    w_zero = all(abs(x) <= tol * scale for x in fw)
    v_zero = all(abs(x) <= tol * scale for x in fv)
    if w_zero:
        return 1.0 if v_zero else None
    if v_zero:
        return None
    pivot = max(range(len(fw)), key=lambda j: abs(fw[j]))
    alpha = fv[pivot] / fw[pivot]
    if scalar_is_zero(alpha, tol):
        return None
    err_scale = max(1.0, max(abs(x) for x in fv), abs(alpha) * max(abs(x) for x in fw))
    ok = all(abs(fv[j] - alpha * fw[j]) <= tol * err_scale for j in range(len(fv)))
    return alpha if ok else None
