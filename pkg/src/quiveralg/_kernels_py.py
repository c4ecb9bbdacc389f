"""Pure-Python exact linear algebra kernels.

These mirror the compiled kernels in ``_kernels.pyx`` and are used when the
extension is unavailable, when ``QUIVERALG_PURE=1`` is set, or when a
computation overflows the compiled kernel's 64-bit arithmetic.
"""

from fractions import Fraction


def rref_dense(rows, ncols):
    """Reduced row echelon form of a dense rational matrix.

    ``rows`` is a list of length-``ncols`` lists of Fractions (or ints).
    Returns ``(reduced_rows, pivot_cols)`` where ``reduced_rows`` contains
    only the nonzero rows, each normalized to a leading 1 and fully reduced
    against the others.  The result is the canonical RREF of the row space.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    pivots = []
    nrows = len(mat)
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = Fraction(1) / mat[r][c]
        row_r = mat[r]
        if inv != 1:
            for j in range(c, ncols):
                if row_r[j]:
                    row_r[j] *= inv
        for i in range(nrows):
            if i == r:
                continue
            f = mat[i][c]
            if f:
                row_i = mat[i]
                for j in range(c, ncols):
                    if row_r[j]:
                        row_i[j] -= f * row_r[j]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat[:r], pivots


def rref_sparse(rows):
    """Reduced row echelon form of sparse rational rows.

    ``rows`` is an iterable of dicts mapping column index to Fraction.
    Returns a dict ``pivot_col -> row`` where each row is a sparse dict with
    coefficient 1 at its pivot and no entries at other pivot columns.
    """
    pivrows = {}
    for row in rows:
        row = {c: Fraction(v) for c, v in row.items() if v}
        while row:
            c = min(row)
            if c in pivrows:
                f = row.pop(c)
                for cc, v in pivrows[c].items():
                    if cc == c:
                        continue
                    nv = row.get(cc, 0) - f * v
                    if nv:
                        row[cc] = nv
                    elif cc in row:
                        del row[cc]
            else:
                inv = Fraction(1) / row[c]
                if inv != 1:
                    row = {cc: v * inv for cc, v in row.items()}
                # eliminate the new pivot column from the stored rows
                for prow in pivrows.values():
                    f = prow.get(c)
                    if not f:
                        continue
                    del prow[c]
                    for cc, v in row.items():
                        if cc == c:
                            continue
                        nv = prow.get(cc, 0) - f * v
                        if nv:
                            prow[cc] = nv
                        elif cc in prow:
                            del prow[cc]
                pivrows[c] = row
                break
    return pivrows
