"""Nilpotent deformation targets and the Maurer-Cartan correspondence.

An Artinian target is an augmented algebra ``R = C^r + m`` with nilpotent
augmentation ideal m, stored by structure constants on a finite basis of m.
Basis elements carry path-style endpoints: an element in component (i, j)
composes on the left of one in (j, l), matching the quiver convention used
everywhere else.

A degree-one element of a minimal structure E with coefficients in m is a
map ``a: degree-one basis -> m``; the Maurer-Cartan sum evaluates the
unshifted products on it,

    MC(a)[eta] = sum_n (-1)^{n(n-1)/2} sum <eta, b_n(xi_1..xi_n)>
                 u_{xi_1} .. u_{xi_n},

truncated exactly by nilpotency.  Solutions correspond to algebra maps from
the reconstructed presentation to R (each arrow goes to its coefficient),
and the correspondence is verified directly: every reconstructed relation
must evaluate to zero in R.

Gauge directions are degree-zero elements with coefficients in m.  Since
the degree-zero part of a minimal structure is spanned by the (implicit,
strict) node units, a gauge direction is a family ``v_i in m(i, i)`` and
the displacement reduces to its arity-two part

    a  ->  -(1/2) sum_xi  xi * (v_src u_xi - u_xi v_tgt),

all higher terms vanishing by strict unitality.  The first-order contract
(a solution stays a solution over the square-zero extension) is checked in
the test suite against independent expansion.
"""

from fractions import Fraction

from .quivers import QuiverAlgError
from .ainf import msign, reconstruct, ext1_quiver


class ArtinAlgebra:
    """Structure constants on a basis of the augmentation ideal."""

    def __init__(self, node_count, basis, table, order):
        """``basis``: list of (label, i, j); ``table``: dict mapping index
        pairs to {index: Fraction}; ``order``: smallest o with m^o = 0."""
        self.node_count = node_count
        self.basis = list(basis)
        self.table = {
            key: dict(val) for key, val in table.items() if val
        }
        self.order = order
        self.index = {label: n for n, (label, _, _) in enumerate(self.basis)}
        if len(self.index) != len(self.basis):
            raise QuiverAlgError("duplicate basis labels in Artinian target")

    # -- element arithmetic (elements of m are dicts index -> Fraction) -----

    def mul(self, u, v):
        out = {}
        for a, ca in u.items():
            for b, cb in v.items():
                row = self.table.get((a, b))
                if not row:
                    continue
                c = ca * cb
                for m, cm in row.items():
                    cur = out.get(m, 0) + c * cm
                    if cur:
                        out[m] = cur
                    else:
                        out.pop(m, None)
        return out

    def add(self, u, v):
        out = dict(u)
        for m, c in v.items():
            cur = out.get(m, 0) + c
            if cur:
                out[m] = cur
            else:
                out.pop(m, None)
        return out

    def scale(self, u, c):
        if not c:
            return {}
        return {m: c * cm for m, cm in u.items()}

    def component(self, idx):
        _, i, j = self.basis[idx]
        return (i, j)

    def element_component_ok(self, u, i, j):
        return all(self.component(m) == (i, j) for m in u)

    def format_element(self, u):
        if not u:
            return "0"
        bits = []
        for m in sorted(u):
            label = self.basis[m][0]
            c = u[m]
            bits.append(f"{c}*{label}" if c != 1 else label)
        return " + ".join(bits)

    # -- structural checks ----------------------------------------------------

    def check(self):
        """Componentwise products, associativity, nilpotency at ``order``."""
        for (a, b), row in self.table.items():
            _, i1, j1 = self.basis[a]
            _, i2, j2 = self.basis[b]
            if j1 != i2:
                return False, f"product stored for incomposable pair {a},{b}"
            for m in row:
                _, i3, j3 = self.basis[m]
                if (i3, j3) != (i1, j2):
                    return False, f"product {a},{b} leaves component"
        n = len(self.basis)
        for a in range(n):
            for b in range(n):
                ab = self.mul({a: Fraction(1)}, {b: Fraction(1)})
                for c in range(n):
                    left = self.mul(ab, {c: Fraction(1)})
                    right = self.mul(
                        {a: Fraction(1)},
                        self.mul({b: Fraction(1)}, {c: Fraction(1)}),
                    )
                    if left != right:
                        return False, f"associativity fails at ({a},{b},{c})"
        # m^order = 0: products of `order` generators vanish
        layer = [{a: Fraction(1)} for a in range(n)]
        for _ in range(self.order - 1):
            new_layer = []
            for u in layer:
                for a in range(n):
                    prod = self.mul(u, {a: Fraction(1)})
                    if prod:
                        new_layer.append(prod)
            layer = new_layer
            if not layer:
                break
        if layer:
            return False, f"m^{self.order} != 0"
        return True, ""

    # -- constructors -----------------------------------------------------------

    @classmethod
    def truncate(cls, presentation, order):
        """Quotient of a presentation by all degrees >= order."""
        if order < 2:
            raise QuiverAlgError("truncation order must be at least 2")
        from .quivers import NCPoly

        quiver = presentation.quiver
        basis = []
        paths = []
        where = {}
        for d in range(1, order):
            for i in range(quiver.node_count):
                for j in range(quiver.node_count):
                    for path in presentation.basis_paths(d, i, j):
                        where[path] = len(basis)
                        basis.append((quiver.path_str(path), i, j))
                        paths.append(path)
        table = {}
        for a, pa in enumerate(paths):
            for b, pb in enumerate(paths):
                if pa.target != pb.source or pa.degree + pb.degree >= order:
                    continue
                nf = presentation.normal_form(
                    NCPoly.from_path(pa.compose(pb))
                )
                row = {where[p]: c for p, c in nf.terms.items()}
                if row:
                    table[(a, b)] = row
        return cls(quiver.node_count, basis, table, order)

    def eps_extension(self):
        """Square-zero extension R[eps]/(eps^2) as an Artinian target.

        Basis: (m, 0) for m in the old basis, node elements eps_i, and
        (m, 1) = eps * m; the old m-part multiplies as before, one eps
        factor is tracked, two kill the product.
        """
        n = len(self.basis)
        basis = []
        for label, i, j in self.basis:
            basis.append((label, i, j))
        eps_at = {}
        for i in range(self.node_count):
            eps_at[i] = len(basis)
            basis.append((f"eps{i}", i, i))
        for label, i, j in self.basis:
            basis.append((f"eps{i}*{label}", i, j))

        def old(m):
            return m

        def eps_part(m):
            return n + self.node_count + m

        table = {}
        for (a, b), row in self.table.items():
            table[(old(a), old(b))] = {old(m): c for m, c in row.items()}
            table[(eps_part(a), old(b))] = {
                eps_part(m): c for m, c in row.items()
            }
            table[(old(a), eps_part(b))] = {
                eps_part(m): c for m, c in row.items()
            }
        for m, (_, i, j) in enumerate(self.basis):
            table[(eps_at[i], old(m))] = {eps_part(m): Fraction(1)}
            table[(old(m), eps_at[j])] = {eps_part(m): Fraction(1)}
        return ArtinAlgebra(self.node_count, basis, table, self.order + 1)


# -- the Maurer-Cartan sum -------------------------------------------------------


def _check_mc_element(E, R, a):
    for pos, u in a.items():
        e = E.elements[pos]
        if e.k != 1:
            raise QuiverAlgError(
                f"coefficient on {e.label}, which is not degree one"
            )
        if not R.element_component_ok(u, e.source, e.target):
            raise QuiverAlgError(
                f"coefficient of {e.label} leaves component "
                f"({e.source},{e.target})"
            )


def mc_residual(E, R, a):
    """dict degree-two index -> m-element; empty iff a solves MC."""
    _check_mc_element(E, R, a)
    support = [pos for pos, u in a.items() if u]
    residual = {}
    top = min(E.max_arity, R.order - 1)
    for n in range(2, top + 1):
        sign = msign(n)
        for tup in E.composable_tuples(n, pool=support):
            row = E.product(tup)
            if not row:
                continue
            prod = a[tup[0]]
            for pos in tup[1:]:
                prod = R.mul(prod, a[pos])
                if not prod:
                    break
            if not prod:
                continue
            for out, coeff in row.items():
                if E.elements[out].k != 2:
                    continue
                add = R.scale(prod, sign * coeff)
                cur = R.add(residual.get(out, {}), add)
                if cur:
                    residual[out] = cur
                else:
                    residual.pop(out, None)
    return residual


def mc_check(E, R, a):
    residual = mc_residual(E, R, a)
    return (not residual), residual


def mc_to_algebra_map(E, R, a):
    """Arrow assignment of a Maurer-Cartan solution, with verification.

    Returns (mapping, verified, failures): mapping sends each arrow name of
    the reconstructed presentation to its m-coefficient; verification
    evaluates every reconstructed relation in R and requires zero.
    """
    ok, residual = mc_check(E, R, a)
    if not ok:
        raise QuiverAlgError("not a Maurer-Cartan solution")
    presentation = reconstruct(E)
    quiver, index_of_arrow = ext1_quiver(E)
    mapping = {}
    for name, pos in index_of_arrow.items():
        mapping[name] = dict(a.get(pos, {}))
    failures = []
    for rel_name, rel in zip(presentation.rel_names, presentation.relations):
        value = {}
        for path, coeff in rel.terms.items():
            prod = None
            for arrow_id in path.arrows:
                u = mapping[presentation.quiver.arrows[arrow_id].name]
                prod = dict(u) if prod is None else R.mul(prod, u)
                if not prod:
                    break
            if prod:
                value = R.add(value, R.scale(prod, coeff))
        if value:
            failures.append((rel_name, value))
    return mapping, (not failures), failures


def algebra_map_to_mc(E, mapping):
    """Inverse reading: arrow assignment back to a degree-one element."""
    _, index_of_arrow = ext1_quiver(E)
    a = {}
    for name, pos in index_of_arrow.items():
        u = mapping.get(name, {})
        if u:
            a[pos] = dict(u)
    return a


def tautological_mc(E, model, R):
    """Maurer-Cartan element of the identity deformation.

    Each degree-one class goes to the class of its own representative in
    the truncated algebra; classes of degree at or above the nilpotency
    order map to zero.  ``E`` must have been transferred from ``model``.
    """
    label_index = {label: m for m, (label, _i, _j) in enumerate(R.basis)}
    a = {}
    for pos in E.indices(k=1):
        e = E.elements[pos]
        if e.origin is None:
            raise QuiverAlgError(
                f"element {e.label} has no homology slot recorded"
            )
        t, d, i, j, idx = e.origin
        rep = model.homology_reps(d, i, j, t)[idx]
        u = {}
        for word, coeff in rep.items():
            path = model.be_path(word[0])
            m = label_index.get(model.quiver.path_str(path))
            if m is not None:
                u[m] = u.get(m, Fraction(0)) + coeff
        u = {m: c for m, c in u.items() if c}
        if u:
            a[pos] = u
    return a


def unit_conjugate(R, u, v_left, v_right):
    """(1 + v_left)^{-1} u (1 + v_right) inside the nilpotent algebra.

    Conjugating an arrow assignment by units of this shape composes an
    algebra map with an inner automorphism, so Maurer-Cartan solutions
    stay solutions.
    """
    out = dict(u)
    if v_left:
        term = dict(u)
        minus_v = R.scale(v_left, Fraction(-1))
        while True:
            term = R.mul(minus_v, term)
            if not term:
                break
            out = R.add(out, term)
    if v_right:
        out = R.add(out, R.mul(out, v_right))
    return out


def gauge_vector_field(E, R, b, a):
    """Displacement of ``a`` along the degree-zero direction ``b``.

    ``b`` maps node index -> m(i, i) element.  On a strictly unital minimal
    structure only the arity-two terms survive, giving the commutator-style
    flow -(1/2)(v u - u v) on each coefficient.
    """
    _check_mc_element(E, R, a)
    for i, v in b.items():
        if not R.element_component_ok(v, i, i):
            raise QuiverAlgError(f"gauge direction at node {i} not diagonal")
    out = {}
    half = Fraction(1, 2)
    for pos, u in a.items():
        e = E.elements[pos]
        left = R.mul(b.get(e.source, {}), u)
        right = R.mul(u, b.get(e.target, {}))
        disp = R.scale(R.add(left, R.scale(right, Fraction(-1))), -half)
        if disp:
            out[pos] = disp
    return out


def apply_gauge_first_order(E, R, b, a):
    """(R', a') with a' = a + eps * displacement over R' = R[eps]/eps^2."""
    n = len(R.basis)
    R2 = R.eps_extension()
    disp = gauge_vector_field(E, R, b, a)
    a2 = {}
    for pos, u in a.items():
        a2[pos] = dict(u)
    for pos, u in disp.items():
        shifted = {n + R.node_count + m: c for m, c in u.items()}
        a2[pos] = R2.add(a2.get(pos, {}), shifted)
    return R2, a2
