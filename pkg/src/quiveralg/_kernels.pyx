# cython: language_level=3, boundscheck=False, wraparound=False, overflowcheck=True
"""Compiled exact linear algebra kernel.

Dense reduced row echelon form over the rationals, with numerators and
denominators held in 64-bit integers (reduced after every operation).  Raises
OverflowError when an intermediate value leaves the 64-bit range; callers fall
back to the pure-Python Fraction implementation in that case.
"""

from fractions import Fraction

from libc.stdlib cimport free, malloc

cdef long long MAXV = (<long long> 1) << 62


cdef long long llgcd(long long a, long long b):
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        a, b = b, a % b
    return a


cdef inline void reduce_entry(long long *n, long long *d) except *:
    cdef long long g
    if n[0] == 0:
        d[0] = 1
        return
    g = llgcd(n[0], d[0])
    if g > 1:
        n[0] //= g
        d[0] //= g
    if d[0] < 0:
        n[0] = -n[0]
        d[0] = -d[0]


def rref_dense(rows, int ncols):
    """Same contract as ``_kernels_py.rref_dense``.

    Raises OverflowError if any input or intermediate value exceeds 64 bits.
    """
    cdef int nrows = len(rows)
    cdef int i, j, c, r, pr
    cdef long long fn, fd, an, ad, bn, bd, g1, g2, tn, td
    if nrows == 0:
        return [], []

    cdef long long *num = <long long *> malloc(nrows * ncols * sizeof(long long))
    cdef long long *den = <long long *> malloc(nrows * ncols * sizeof(long long))
    if num == NULL or den == NULL:
        if num != NULL:
            free(num)
        if den != NULL:
            free(den)
        raise MemoryError()

    pivots = []
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                x = row[j]
                nn = x.numerator if not isinstance(x, int) else x
                dd = x.denominator if not isinstance(x, int) else 1
                if nn > MAXV or nn < -MAXV or dd > MAXV:
                    raise OverflowError("input exceeds 64-bit range")
                num[i * ncols + j] = nn
                den[i * ncols + j] = dd

        r = 0
        for c in range(ncols):
            pr = -1
            for i in range(r, nrows):
                if num[i * ncols + c] != 0:
                    pr = i
                    break
            if pr == -1:
                continue
            if pr != r:
                for j in range(ncols):
                    tn = num[r * ncols + j]
                    td = den[r * ncols + j]
                    num[r * ncols + j] = num[pr * ncols + j]
                    den[r * ncols + j] = den[pr * ncols + j]
                    num[pr * ncols + j] = tn
                    den[pr * ncols + j] = td
            # normalize pivot row to leading 1
            fn = num[r * ncols + c]
            fd = den[r * ncols + c]
            for j in range(c, ncols):
                an = num[r * ncols + j]
                ad = den[r * ncols + j]
                if an == 0:
                    continue
                # (an/ad) / (fn/fd) = (an*fd) / (ad*fn)
                g1 = llgcd(an, fn)
                g2 = llgcd(fd, ad)
                tn = (an // g1) * (fd // g2)
                td = (ad // g2) * (fn // g1)
                reduce_entry(&tn, &td)
                num[r * ncols + j] = tn
                den[r * ncols + j] = td
            # eliminate column c from all other rows
            for i in range(nrows):
                if i == r:
                    continue
                fn = num[i * ncols + c]
                if fn == 0:
                    continue
                fd = den[i * ncols + c]
                num[i * ncols + c] = 0
                den[i * ncols + c] = 1
                for j in range(c + 1, ncols):
                    bn = num[r * ncols + j]
                    if bn == 0:
                        continue
                    bd = den[r * ncols + j]
                    # subtract (fn/fd) * (bn/bd) from entry (i, j)
                    g1 = llgcd(fn, bd)
                    g2 = llgcd(bn, fd)
                    tn = (fn // g1) * (bn // g2)
                    td = (fd // g2) * (bd // g1)
                    an = num[i * ncols + j]
                    ad = den[i * ncols + j]
                    # an/ad - tn/td
                    g1 = llgcd(ad, td)
                    bd = td // g1
                    bn = an * bd - tn * (ad // g1)
                    td = ad * bd
                    reduce_entry(&bn, &td)
                    num[i * ncols + j] = bn
                    den[i * ncols + j] = td
            pivots.append(c)
            r += 1
            if r == nrows:
                break

        out = []
        for i in range(r):
            out.append([
                Fraction(num[i * ncols + j], den[i * ncols + j])
                for j in range(ncols)
            ])
        return out, pivots
    finally:
        free(num)
        free(den)
