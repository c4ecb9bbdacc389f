"""Exact rational linear algebra with a compiled fast path.

The compiled kernel (``quiveralg._kernels``) does dense RREF with 64-bit
rational arithmetic; the pure-Python kernel (``quiveralg._kernels_py``) is the
reference implementation and the fallback on import failure, on overflow, and
when ``QUIVERALG_PURE=1`` is set.  Both produce the canonical reduced row
echelon form, so results are identical whichever backend runs.
"""

import os
from fractions import Fraction

from . import _kernels_py

try:
    from . import _kernels
except ImportError:  # extension not built
    _kernels = None

PURE = os.environ.get("QUIVERALG_PURE") == "1"

#: name of the backend used by default ("compiled" or "pure")
BACKEND = "compiled" if (_kernels is not None and not PURE) else "pure"


def rref(rows, ncols):
    """Canonical RREF of a dense rational matrix.

    Returns ``(reduced_rows, pivot_cols)``; zero rows are dropped and every
    entry is a Fraction.
    """
    if not rows:
        return [], []
    if BACKEND == "compiled":
        try:
            return _kernels.rref_dense(rows, ncols)
        except OverflowError:
            pass
    return _kernels_py.rref_dense(rows, ncols)


def rref_sparse(rows):
    """Canonical RREF of sparse rows (dicts col -> Fraction).

    Returns a dict ``pivot_col -> sparse row``.
    """
    return _kernels_py.rref_sparse(rows)


def nullspace(rows, ncols):
    """Basis of the right nullspace of the matrix with the given rows.

    Solutions x (length ``ncols``) of ``rows @ x = 0``, one canonical basis
    vector per free column: the free coordinate is 1, later free coordinates
    are 0, pivot coordinates are solved.  Returned in free-column order.
    """
    red, pivots = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for c in range(ncols):
        if c in pivset:
            continue
        vec = [Fraction(0)] * ncols
        vec[c] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -red[r][c]
        basis.append(vec)
    return basis


class RowSpace:
    """Incrementally built row space over the rationals.

    Maintains a fully reduced set of sparse pivot rows; supports reduction of
    vectors modulo the space and rank-extension tests.  Deterministic: the
    stored rows are the canonical RREF of everything added so far.
    """

    def __init__(self):
        self.pivrows = {}

    @property
    def rank(self):
        return len(self.pivrows)

    def reduce(self, vec):
        """Reduce a sparse vector (dict col -> Fraction) modulo the space."""
        vec = {c: Fraction(v) for c, v in vec.items() if v}
        while True:
            hit = None
            for c in vec:
                if c in self.pivrows and (hit is None or c < hit):
                    hit = c
            if hit is None:
                return vec
            f = vec.pop(hit)
            for cc, v in self.pivrows[hit].items():
                if cc == hit:
                    continue
                nv = vec.get(cc, 0) - f * v
                if nv:
                    vec[cc] = nv
                elif cc in vec:
                    del vec[cc]

    def add(self, vec):
        """Add a sparse vector to the space.

        Returns True if it enlarged the space (was independent).
        """
        red = self.reduce(vec)
        if not red:
            return False
        c = min(red)
        inv = Fraction(1) / red[c]
        if inv != 1:
            red = {cc: v * inv for cc, v in red.items()}
        for prow in self.pivrows.values():
            f = prow.get(c)
            if not f:
                continue
            del prow[c]
            for cc, v in red.items():
                if cc == c:
                    continue
                nv = prow.get(cc, 0) - f * v
                if nv:
                    prow[cc] = nv
                elif cc in prow:
                    del prow[cc]
        self.pivrows[c] = red
        return True

    def contains(self, vec):
        return not self.reduce(vec)


def mat_vec(rows, vec):
    """Multiply a dense matrix (list of rows) by a dense vector."""
    out = []
    for row in rows:
        s = Fraction(0)
        for a, b in zip(row, vec):
            if a and b:
                s += a * b
        out.append(s)
    return out


def solve_exact(rows, ncols, rhs):
    """Solve ``rows @ x = rhs`` exactly; returns one solution or None.

    Uses the canonical RREF of the augmented matrix.
    """
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x
