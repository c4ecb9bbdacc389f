"""Truncated reduced bar model of a graded presentation.

For a presentation with algebra A (A_0 = the span of the node idempotents)
and positive part spanned by the degree-wise coset bases, the model stores,
per lower degree d <= D and component (i, j), the complex of linear duals of
composable words of positive-degree basis elements.  Two gradings appear:
the word length t (cohomological degree) and the lower degree d (sum of the
letters' degrees); both are preserved by everything below in the appropriate
sense (the differential raises t by one and fixes d).

Conventions, fixed once and verified exhaustively by the test suite:

* chain-level merge of a word: ``Dw = sum_s (-1)**(s-1) (.., w_s * w_{s+1}, ..)``
  with products re-expressed in the coset basis;
* differential on duals: ``b1 = (-1)**t * transpose(D)`` on length-t duals;
* concatenation product on duals: ``star(u', v') = (u|v)'`` (associative,
  unital), and its shifted twin ``b2(u', v') = (-1)**(s*(t-1)) (u|v)'`` which
  satisfies the degree-shifted Leibniz and associativity identities with b1;
* per-slot splitting: homology representatives H, complement L of the kernel,
  contraction ``h = -(b1|_L)^{-1} proj_im``; then ``p i = 1``,
  ``i p = 1 + b1 h + h b1``, ``h h = 0``, ``h i = 0``, ``p h = 0`` hold
  exactly by construction.

Basis elements of the positive part are referenced as ``be = (d, i, j, idx)``
(indexing ``presentation.basis_paths(d, i, j)[idx]``); a word is a tuple of
such references with matching endpoints.  Cochain vectors are dicts mapping
words to rational coefficients and may mix lengths within one (d, i, j) slot.
"""

from fractions import Fraction

from . import linalg
from .quivers import QuiverAlgError


def word_slot(word):
    """(d, i, j, t) of a word of basis-element references."""
    if word[0] == "unit":
        return (0, word[1], word[1], 0)
    d = sum(be[0] for be in word)
    return (d, word[0][1], word[-1][2], len(word))


class _Slice:
    """Splitting data for one (d, i, j, t) slice; filled lazily."""

    __slots__ = (
        "words", "index", "h_reps", "l_rows", "b_rows", "s_inv", "nullity"
    )

    def __init__(self):
        self.words = []
        self.index = {}
        self.h_reps = []
        self.l_rows = []
        self.b_rows = []
        self.s_inv = None
        self.nullity = 0


class BarModel:
    """Reduced bar model of ``presentation`` truncated at lower degree ``D``."""

    def __init__(self, presentation, max_degree):
        self.presentation = presentation
        self.quiver = presentation.quiver
        self.D = max_degree
        self._be_mult = {}
        self._words = {}
        self._dmat = {}
        self._slices = {}

    # -- algebra data -------------------------------------------------------

    def algebra_basis(self, d, i, j):
        return self.presentation.basis_paths(d, i, j)

    def basis_elements(self, d, i, j):
        """References (d, i, j, idx) for the degree-d coset basis."""
        return [
            (d, i, j, idx) for idx in range(len(self.algebra_basis(d, i, j)))
        ]

    def be_path(self, be):
        d, i, j, idx = be
        return self.presentation.basis_paths(d, i, j)[idx]

    def be_name(self, be):
        return self.quiver.path_str(self.be_path(be))

    def be_mult(self, a, b):
        """Product of two basis elements in coset coordinates.

        Returns a dict ``be -> Fraction``; empty when the product lies in the
        ideal (i.e. is zero in the quotient) or the endpoints do not match.
        """
        key = (a, b)
        cached = self._be_mult.get(key)
        if cached is not None:
            return cached
        out = {}
        if a[2] == b[1]:
            prod = self.be_path(a).compose(self.be_path(b))
            d, i, j = a[0] + b[0], a[1], b[2]
            paths = self.presentation.basis_paths(d, i, j)
            pos = {p: n for n, p in enumerate(paths)}
            from .quivers import NCPoly

            nf = self.presentation.normal_form(NCPoly.from_path(prod))
            out = {(d, i, j, pos[p]): c for p, c in nf.terms.items()}
        self._be_mult[key] = out
        return out

    # -- word spaces and the chain-level merge ------------------------------

    def words(self, d, i, j, t):
        """Composable words, canonical order, for one (d, i, j, t) slice."""
        key = (d, i, j, t)
        cached = self._words.get(key)
        if cached is not None:
            return cached
        if t > d or t < 0:
            out = []
        elif t == 0:
            out = [()] if (d == 0 and i == j) else []
        elif t == 1:
            out = [(be,) for be in self.basis_elements(d, i, j)]
        else:
            out = []
            for d1 in range(1, d - (t - 1) + 1):
                for k in range(self.quiver.node_count):
                    firsts = self.basis_elements(d1, i, k)
                    if not firsts:
                        continue
                    rests = self.words(d - d1, k, j, t - 1)
                    for be in firsts:
                        for rest in rests:
                            out.append((be,) + rest)
            out.sort()
        self._words[key] = out
        return out

    def merge_word(self, word):
        """Chain-level differential of a single word.

        ``D(w) = sum_s (-1)**(s-1) (w_1, .., w_s * w_{s+1}, .., w_t)`` with the
        product expanded in the coset basis.  Returns dict word -> Fraction.
        """
        out = {}
        sign = 1
        for s in range(len(word) - 1):
            prod = self.be_mult(word[s], word[s + 1])
            for be, coeff in prod.items():
                merged = word[:s] + (be,) + word[s + 2 :]
                cur = out.get(merged, 0) + sign * coeff
                if cur:
                    out[merged] = cur
                else:
                    out.pop(merged, None)
            sign = -sign
        return out

    def dmat(self, d, i, j, t):
        """Merge matrix rows: for each length-t word, its boundary.

        Entry format: list (over ``words(d,i,j,t)``) of dicts mapping the
        index of a length-(t-1) word to its coefficient.
        """
        key = (d, i, j, t)
        cached = self._dmat.get(key)
        if cached is not None:
            return cached
        lower = {w: n for n, w in enumerate(self.words(d, i, j, t - 1))}
        rows = []
        for w in self.words(d, i, j, t):
            rows.append(
                {lower[w2]: c for w2, c in self.merge_word(w).items()}
            )
        self._dmat[key] = rows
        return rows

    # -- cochain operators ---------------------------------------------------

    def b1(self, vec):
        """Shifted differential on a cochain vector (dict word -> coeff)."""
        pieces = {}
        for w, c in vec.items():
            pieces.setdefault(word_slot(w), {})[w] = c
        out = {}
        for (d, i, j, t), piece in pieces.items():
            if t == 0:
                continue  # empty-word duals are closed
            lower = self.words(d, i, j, t)
            index = {w: n for n, w in enumerate(lower)}
            sign = -1 if t % 2 else 1
            uppers = self.words(d, i, j, t + 1)
            rows = self.dmat(d, i, j, t + 1)
            coeffs = [Fraction(0)] * len(lower)
            for w, c in piece.items():
                coeffs[index[w]] = c
            for n, w2 in enumerate(uppers):
                s = sum(
                    boundary_coeff * coeffs[m]
                    for m, boundary_coeff in rows[n].items()
                    if coeffs[m]
                )
                if s:
                    cur = out.get(w2, 0) + sign * s
                    if cur:
                        out[w2] = cur
                    else:
                        out.pop(w2, None)
        return out

    def delta(self, vec):
        """Unshifted dual differential (transpose of the merge), no sign."""
        result = {}
        pieces = {}
        for w, c in vec.items():
            pieces.setdefault(word_slot(w)[3], {})[w] = c
        for t, piece in pieces.items():
            sign = -1 if t % 2 else 1
            for w2, c2 in self.b1(piece).items():
                cur = result.get(w2, 0) + sign * c2
                if cur:
                    result[w2] = cur
                else:
                    result.pop(w2, None)
        return result

    def star(self, vec_a, vec_b):
        """Concatenation-dual product (associative, unital, no signs)."""
        return self._concat(vec_a, vec_b, shifted=False)

    def b2(self, vec_a, vec_b):
        """Shifted product: concatenation with the Koszul twist."""
        return self._concat(vec_a, vec_b, shifted=True)

    def _concat(self, vec_a, vec_b, shifted):
        out = {}
        for u, cu in vec_a.items():
            for v, cv in vec_b.items():
                if u[0] == "unit":
                    if v[0] == "unit":
                        w = u if u[1] == v[1] else None
                    else:
                        w = v if v[0][1] == u[1] else None
                elif v[0] == "unit":
                    w = u if u[-1][2] == v[1] else None
                elif u[-1][2] != v[0][1]:
                    w = None
                else:
                    w = u + v
                if w is None:
                    continue
                coeff = cu * cv
                if shifted and u[0] != "unit" and v[0] != "unit":
                    if (len(u) * (len(v) - 1)) % 2:
                        coeff = -coeff
                cur = out.get(w, 0) + coeff
                if cur:
                    out[w] = cur
                else:
                    out.pop(w, None)
        return out

    def unit(self):
        """The star-product unit: the sum of the empty-word duals."""
        return {
            ("unit", i): Fraction(1) for i in range(self.quiver.node_count)
        }

    # -- splitting ------------------------------------------------------------

    def slice_data(self, d, i, j, t):
        """Homology representatives and contraction data for one slice."""
        key = (d, i, j, t)
        cached = self._slices.get(key)
        if cached is not None:
            return cached
        if d > self.D:
            raise QuiverAlgError(
                f"lower degree {d} exceeds the bar model window {self.D}"
            )
        sl = _Slice()
        sl.words = self.words(d, i, j, t)
        sl.index = {w: n for n, w in enumerate(sl.words)}
        n = len(sl.words)
        if n == 0:
            self._slices[key] = sl
            return sl
        # image rows from below: b1 of the previous slice's L basis
        b_rows = []
        if t >= 2:
            prev = self.slice_data(d, i, j, t - 1)
            for lrow in prev.l_rows:
                vec = {prev.words[m]: c for m, c in enumerate(lrow) if c}
                img = self.b1(vec)
                b_rows.append(
                    [img.get(w, Fraction(0)) for w in sl.words]
                )
        sl.b_rows = b_rows
        # kernel of b1 on this slice
        upper_rows = self._map_rows(d, i, j, t)
        zbasis = linalg.nullspace(upper_rows, n) if upper_rows else [
            [Fraction(1) if m == c else Fraction(0) for m in range(n)]
            for c in range(n)
        ]
        sl.nullity = len(zbasis)
        zspace = linalg.RowSpace()
        space = linalg.RowSpace()
        for row in b_rows:
            sparse = {m: c for m, c in enumerate(row) if c}
            space.add(sparse)
            zspace.add(sparse)
        for z in zbasis:
            sparse = {m: c for m, c in enumerate(z) if c}
            zspace.add(sparse)
            red = space.reduce(sparse)
            if not red:
                continue
            lead = min(red)
            inv = Fraction(1) / red[lead]
            rep = [Fraction(0)] * n
            for m, c in red.items():
                rep[m] = c * inv
            sl.h_reps.append(rep)
            space.add(red)
        # complement of the kernel, greedily from coordinate vectors
        for c in range(n):
            if zspace.add({c: Fraction(1)}):
                row = [Fraction(0)] * n
                row[c] = Fraction(1)
                sl.l_rows.append(row)
        self._slices[key] = sl
        return sl

    def _map_rows(self, d, i, j, t):
        """Rows (over the length-t words) of b1 into length t+1."""
        uppers = self.words(d, i, j, t + 1)
        if not uppers:
            return []
        n = len(self.words(d, i, j, t))
        rows = []
        sign = -1 if t % 2 else 1
        drows = self.dmat(d, i, j, t + 1)
        for nup in range(len(uppers)):
            row = [Fraction(0)] * n
            for m, c in drows[nup].items():
                row[m] = sign * c
            rows.append(row)
        return rows

    def _s_inv(self, d, i, j, t):
        sl = self.slice_data(d, i, j, t)
        if sl.s_inv is not None:
            return sl.s_inv
        n = len(sl.words)
        basis = sl.b_rows + sl.h_reps + sl.l_rows
        if len(basis) != n:
            raise QuiverAlgError(
                f"splitting rank mismatch in slice ({d},{i},{j},t={t}): "
                f"{len(basis)} basis rows for dimension {n}"
            )
        aug = []
        for c in range(n):
            # column c of the basis-change matrix S (basis vectors as columns)
            row = [basis[m][c] for m in range(n)]
            row += [Fraction(1) if m == c else Fraction(0) for m in range(n)]
            aug.append(row)
        red, pivots = linalg.rref(aug, 2 * n)
        if pivots[:n] != list(range(n)):
            raise QuiverAlgError(
                f"splitting basis is singular in slice ({d},{i},{j},t={t})"
            )
        # rows of S^{-1}: coordinates in the (B, H, L) basis
        sl.s_inv = [row[n:] for row in red]
        return sl.s_inv

    # -- homology interface ----------------------------------------------------

    def homology_dim(self, d, i, j, t):
        if d == 0:
            return 1 if (i == j and t == 0) else 0
        if t < 1 or t > d:
            return 0
        return len(self.slice_data(d, i, j, t).h_reps)

    def homology_reps(self, d, i, j, t):
        """Representative cochain vectors for one slice's homology basis."""
        sl = self.slice_data(d, i, j, t)
        out = []
        for rep in sl.h_reps:
            out.append({sl.words[m]: c for m, c in enumerate(rep) if c})
        return out

    def include(self, t_vectors):
        """Identity on representatives (they are already cochain vectors)."""
        return t_vectors

    def project(self, vec):
        """p: cochain vector -> homology coordinates.

        Returns dict ``(d, i, j, t, idx) -> Fraction``.
        """
        pieces = {}
        for w, c in vec.items():
            pieces.setdefault(word_slot(w), {})[w] = c
        out = {}
        for (d, i, j, t), piece in pieces.items():
            sl = self.slice_data(d, i, j, t)
            if not sl.h_reps:
                continue
            s_inv = self._s_inv(d, i, j, t)
            nb = len(sl.b_rows)
            nh = len(sl.h_reps)
            for w, c in piece.items():
                col = sl.index[w]
                for hidx in range(nh):
                    coeff = s_inv[nb + hidx][col]
                    if coeff:
                        key = (d, i, j, t, hidx)
                        cur = out.get(key, 0) + c * coeff
                        if cur:
                            out[key] = cur
                        else:
                            out.pop(key, None)
        return out

    def contract(self, vec):
        """h: cochain vector -> cochain vector one length lower."""
        pieces = {}
        for w, c in vec.items():
            pieces.setdefault(word_slot(w), {})[w] = c
        out = {}
        for (d, i, j, t), piece in pieces.items():
            if t < 2:
                continue
            sl = self.slice_data(d, i, j, t)
            if not sl.b_rows:
                continue
            s_inv = self._s_inv(d, i, j, t)
            prev = self.slice_data(d, i, j, t - 1)
            for w, c in piece.items():
                col = sl.index[w]
                for bidx in range(len(sl.b_rows)):
                    coeff = s_inv[bidx][col]
                    if not coeff:
                        continue
                    lrow = prev.l_rows[bidx]
                    for m, lc in enumerate(lrow):
                        if not lc:
                            continue
                        w2 = prev.words[m]
                        cur = out.get(w2, 0) - c * coeff * lc
                        if cur:
                            out[w2] = cur
                        else:
                            out.pop(w2, None)
        return out
