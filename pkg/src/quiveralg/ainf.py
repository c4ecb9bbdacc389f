"""Minimal A-infinity structures on Ext, homotopy transfer, reconstruction.

The structures here are minimal (no differential) and strictly unital; the
r identity classes in cohomological degree 0 are therefore kept implicit and
only positive-degree classes are stored.  Products are kept in the shifted
(degree-suspended) convention: every stored n-ary product b_n raises the
shifted degree ``k - 1`` by exactly one, the coherence identities read

    sum over r + s + t = n, s >= 2 of
    (-1)**(|x_1|' + .. + |x_r|')  b_{r+1+t}(x_1.., b_s(..), ..x_n)  =  0,

and no other signs appear anywhere in the transfer.  The unshifted products
``m_n = (-1)**(n(n-1)/2) b_n`` are used whenever outputs are read back into
path coefficients (reconstruction, superpotential words, deformation sums),
which is what makes the recovered relations come out with their conventional
signs.

Element slots carry two gradings: cohomological degree k and lower degree d
(the weight inherited from arrow degrees); all products preserve d.
Endpoints follow the path convention: an element in slot (i, j) composes on
the left of one in slot (j, l), like a path from i to j.
"""

from fractions import Fraction

from .quivers import NCPoly, Presentation, Quiver, QuiverAlgError
from .barmodel import BarModel


def msign(n):
    """Conversion sign between shifted and unshifted n-ary products."""
    return -1 if (n * (n - 1) // 2) % 2 else 1


class Bimod:
    """Graded bimodule over the node set: labeled basis per (k, d, i, j)."""

    def __init__(self, node_count):
        self.node_count = node_count
        self.slots = {}

    def add(self, k, d, i, j, labels):
        if labels:
            self.slots[(k, d, i, j)] = list(labels)

    def dim(self, k, d, i, j):
        return len(self.slots.get((k, d, i, j), ()))

    def labels(self, k, d, i, j):
        return list(self.slots.get((k, d, i, j), ()))

    def total_dim(self, k=None):
        return sum(
            len(v) for key, v in self.slots.items()
            if k is None or key[0] == k
        )


class AInfElement:
    """One basis vector of a minimal structure.

    ``origin`` optionally records the homology slot (t, d, i, j, idx) the
    element was transferred from; structures read back from JSON leave it
    unset.
    """

    __slots__ = ("label", "k", "d", "source", "target", "dual_of", "origin")

    def __init__(self, label, k, d, source, target, dual_of=None,
                 origin=None):
        self.label = label
        self.k = k
        self.d = d
        self.source = source
        self.target = target
        self.dual_of = dual_of
        self.origin = origin

    def shifted(self):
        return self.k - 1


class AInfStructure:
    """Minimal structure: basis elements plus sparse shifted products."""

    def __init__(self, node_count, max_degree, max_arity,
                 cy_dimension=None, weight=None):
        self.node_count = node_count
        self.max_degree = max_degree
        self.max_arity = max_arity
        self.cy_dimension = cy_dimension
        self.weight = weight
        self.elements = []
        self.products = {}
        self.pairing = None

    # -- construction -------------------------------------------------------

    def add_element(self, element):
        self.elements.append(element)
        return len(self.elements) - 1

    def set_product(self, inputs, output, coeff):
        if not coeff:
            return
        n = len(inputs)
        table = self.products.setdefault(n, {})
        row = table.setdefault(tuple(inputs), {})
        cur = row.get(output, 0) + coeff
        if cur:
            row[output] = cur
        else:
            row.pop(output, None)

    def product(self, inputs):
        """Shifted product value: dict element-index -> Fraction."""
        table = self.products.get(len(inputs))
        if not table:
            return {}
        return table.get(tuple(inputs), {})

    def pair(self, a, b):
        if self.pairing is None:
            return Fraction(0)
        return self.pairing.get((a, b), Fraction(0))

    # -- enumeration helpers --------------------------------------------------

    def indices(self, k=None):
        return [
            n for n, e in enumerate(self.elements) if k is None or e.k == k
        ]

    def composable_tuples(self, arity, max_total_d=None, closed=False,
                          pool=None):
        """All composable index tuples of the given arity, in index order."""
        cap = self.max_degree if max_total_d is None else max_total_d
        pool = list(range(len(self.elements))) if pool is None else pool
        by_source = {}
        for n in pool:
            by_source.setdefault(self.elements[n].source, []).append(n)
        out = []

        def extend(prefix, total_d):
            if len(prefix) == arity:
                if not closed or (
                    self.elements[prefix[0]].source
                    == self.elements[prefix[-1]].target
                ):
                    out.append(tuple(prefix))
                return
            node = (
                None if not prefix else self.elements[prefix[-1]].target
            )
            candidates = pool if node is None else by_source.get(node, ())
            for n in candidates:
                d = self.elements[n].d
                if total_d + d > cap:
                    continue
                prefix.append(n)
                extend(prefix, total_d + d)
                prefix.pop()

        extend([], 0)
        return out

    # -- validation -----------------------------------------------------------

    def check_gradings(self):
        """Degree/endpoint bookkeeping of every stored structure constant."""
        for n, table in self.products.items():
            for inputs, row in table.items():
                els = [self.elements[m] for m in inputs]
                for m in range(len(els) - 1):
                    if els[m].target != els[m + 1].source:
                        return False, f"incomposable inputs {inputs}"
                k_out = sum(e.k for e in els) - n + 2
                d_out = sum(e.d for e in els)
                for out, coeff in row.items():
                    e = self.elements[out]
                    if not coeff:
                        return False, f"stored zero at {inputs}"
                    if e.k != k_out or e.d != d_out:
                        return False, (
                            f"degree mismatch {inputs} -> {out}: "
                            f"({e.k},{e.d}) != ({k_out},{d_out})"
                        )
                    if (e.source != els[0].source
                            or e.target != els[-1].target):
                        return False, f"endpoint mismatch {inputs} -> {out}"
        return True, ""

    def stasheff_defect(self, inputs):
        """Coherence defect on one input tuple: dict index -> Fraction."""
        n = len(inputs)
        out = {}
        # the s = 1 and s = n terms carry the (zero) differential; on a
        # minimal structure only inner arities 2 <= s <= n-1 contribute
        for s in range(2, n):
            for r in range(0, n - s + 1):
                sign = 1
                for m in range(r):
                    if self.elements[inputs[m]].shifted() % 2:
                        sign = -sign
                inner = self.product(inputs[r:r + s])
                if not inner:
                    continue
                for mid, c in inner.items():
                    outer = inputs[:r] + (mid,) + inputs[r + s:]
                    for fin, c2 in self.product(outer).items():
                        cur = out.get(fin, 0) + sign * c * c2
                        if cur:
                            out[fin] = cur
                        else:
                            out.pop(fin, None)
        return out

    def stasheff_check(self, max_arity=None, max_total_d=None):
        """Exhaustive coherence check over in-window composable tuples."""
        cap = self.max_arity if max_arity is None else max_arity
        for n in range(2, cap + 1):
            for tup in self.composable_tuples(n, max_total_d=max_total_d):
                defect = self.stasheff_defect(tup)
                if defect:
                    labels = [self.elements[m].label for m in tup]
                    return False, f"arity {n} defect on ({', '.join(labels)})"
        return True, ""

    def cyclicity_check(self):
        """Pairing symmetry of the (n+1)-linear forms, all stored tuples."""
        if self.pairing is None:
            return False, "no pairing stored"
        for n in range(2, self.max_arity + 1):
            for tup in self.composable_tuples(n + 1, closed=True):
                a0, rest = tup[0], tup[1:]
                lhs = Fraction(0)
                for out, c in self.product(rest).items():
                    lhs += self.pair(a0, out) * c
                rot_rest = (a0,) + rest[:-1]
                an = rest[-1]
                rhs = Fraction(0)
                for out, c in self.product(rot_rest).items():
                    rhs += self.pair(an, out) * c
                sign = 1
                if self.elements[an].shifted() % 2:
                    if sum(self.elements[m].shifted() for m in tup[:-1]) % 2:
                        sign = -1
                if lhs != sign * rhs:
                    labels = [self.elements[m].label for m in tup]
                    return False, f"cyclicity fails on ({', '.join(labels)})"
        return True, ""

    def dual_vanishing_check(self):
        """Products with two or more dual-summand inputs vanish."""
        duals = [
            n for n, e in enumerate(self.elements) if e.dual_of is not None
        ]
        dual_set = set(duals)
        for n, table in self.products.items():
            for inputs, row in table.items():
                if sum(1 for m in inputs if m in dual_set) >= 2 and row:
                    return False, f"nonzero product on >=2 duals {inputs}"
        return True, ""

    # -- JSON interchange -------------------------------------------------------

    def to_json_dict(self):
        basis = []
        for n, e in enumerate(self.elements):
            basis.append({
                "index": n,
                "label": e.label,
                "k": e.k,
                "d": e.d,
                "source": e.source,
                "target": e.target,
                "dual_of": e.dual_of,
            })
        products = {}
        for n in sorted(self.products):
            rows = []
            for inputs in sorted(self.products[n]):
                row = self.products[n][inputs]
                for out in sorted(row):
                    rows.append({
                        "inputs": list(inputs),
                        "output": out,
                        "coeff": str(row[out]),
                    })
            if rows:
                products[str(n)] = rows
        pairing = None
        if self.pairing is not None:
            pairing = [
                {"left": a, "right": b, "coeff": str(c)}
                for (a, b), c in sorted(self.pairing.items())
            ]
        return {
            "format": "ainf-structure",
            "version": 1,
            "nodes": self.node_count,
            "max_degree": self.max_degree,
            "max_arity": self.max_arity,
            "cy_dimension": self.cy_dimension,
            "weight": self.weight,
            "basis": basis,
            "products": products,
            "pairing": pairing,
        }

    @classmethod
    def from_json_dict(cls, data):
        if data.get("format") != "ainf-structure":
            raise QuiverAlgError("not an A-infinity structure document")
        E = cls(
            data["nodes"], data["max_degree"], data["max_arity"],
            cy_dimension=data.get("cy_dimension"),
            weight=data.get("weight"),
        )
        for entry in data["basis"]:
            E.add_element(AInfElement(
                entry["label"], entry["k"], entry["d"],
                entry["source"], entry["target"], entry.get("dual_of"),
            ))
        for n_str, rows in data.get("products", {}).items():
            int(n_str)
            for row in rows:
                E.set_product(
                    tuple(row["inputs"]), row["output"],
                    Fraction(row["coeff"]),
                )
        pairing = data.get("pairing")
        if pairing is not None:
            E.pairing = {
                (row["left"], row["right"]): Fraction(row["coeff"])
                for row in pairing
            }
        return E


# -- Ext groups and homotopy transfer ----------------------------------------


def ext_groups(presentation, max_degree):
    """Homology of the bar model as a labeled graded bimodule."""
    model = BarModel(presentation, max_degree)
    bimod = Bimod(presentation.quiver.node_count)
    for i in range(presentation.quiver.node_count):
        bimod.add(0, 0, i, i, [f"e{i}"])
    for key, labels in _ext_labels(model).items():
        k, d, i, j = key
        bimod.add(k, d, i, j, labels)
    return bimod


def _rep_label(model, rep, fallback):
    if len(rep) == 1:
        (word, coeff), = rep.items()
        if coeff == 1:
            return "|".join(model.be_name(be) for be in word)
    return fallback


def _ext_labels(model):
    out = {}
    r = model.quiver.node_count
    for d in range(1, model.D + 1):
        for i in range(r):
            for j in range(r):
                for t in range(1, d + 1):
                    reps = model.homology_reps(d, i, j, t)
                    if not reps:
                        continue
                    labels = []
                    for idx, rep in enumerate(reps):
                        labels.append(_rep_label(
                            model, rep, f"h{t}.{d}.{i}.{j}.{idx}"
                        ))
                    out[(t, d, i, j)] = labels
    return out


class _Transfer:
    """Memoized Merkulov-style recursion over bar-model cochain vectors."""

    def __init__(self, model):
        self.model = model
        self.reps = {}
        self._phi = {}
        self._lam = {}

    def rep(self, key):
        vec = self.reps.get(key)
        if vec is None:
            t, d, i, j, idx = key
            vec = self.model.homology_reps(d, i, j, t)[idx]
            self.reps[key] = vec
        return vec

    def phi(self, keys):
        if len(keys) == 1:
            return self.rep(keys[0])
        cached = self._phi.get(keys)
        if cached is None:
            cached = self.model.contract(self.lam(keys))
            self._phi[keys] = cached
        return cached

    def lam(self, keys):
        cached = self._lam.get(keys)
        if cached is not None:
            return cached
        out = {}
        for cut in range(1, len(keys)):
            left = self.phi(keys[:cut])
            right = self.phi(keys[cut:])
            if not left or not right:
                continue
            for w, c in self.model.b2(left, right).items():
                cur = out.get(w, 0) + c
                if cur:
                    out[w] = cur
                else:
                    out.pop(w, None)
        self._lam[keys] = out
        return out

    def transferred_product(self, keys):
        return self.model.project(self.lam(keys))


def transfer_ainfinity(model, max_degree=None, max_arity=6):
    """Minimal structure on the bar model's homology (shifted products)."""
    D = model.D if max_degree is None else max_degree
    if D > model.D:
        raise QuiverAlgError(
            f"requested degree window {D} exceeds the model's {model.D}"
        )
    E = AInfStructure(model.quiver.node_count, D, max_arity)
    labels = _ext_labels(model)
    key_to_index = {}
    for (k, d, i, j) in sorted(labels):
        if d > D:
            continue
        for idx, label in enumerate(labels[(k, d, i, j)]):
            pos = E.add_element(AInfElement(
                label, k, d, i, j, origin=(k, d, i, j, idx)
            ))
            key_to_index[(k, d, i, j, idx)] = pos
    index_to_key = {pos: key for key, pos in key_to_index.items()}

    worker = _Transfer(model)
    for n in range(2, max_arity + 1):
        for tup in E.composable_tuples(n):
            keys = tuple(index_to_key[m] for m in tup)
            value = worker.transferred_product(keys)
            for (d, i, j, t, idx), coeff in value.items():
                out = key_to_index.get((t, d, i, j, idx))
                if out is None:
                    continue
                E.set_product(tup, out, coeff)
    return E


# -- reconstruction ------------------------------------------------------------


def _sanitize_label(label, taken, prefix):
    name = "".join(
        ch if (ch.isalnum() or ch == "_") else "_" for ch in label
    )
    if not name or not (name[0].isalpha() or name[0] == "_"):
        name = prefix + name
    base = name
    n = 2
    while name in taken:
        name = f"{base}_{n}"
        n += 1
    taken.add(name)
    return name


def ext1_quiver(E):
    """Quiver with one arrow per degree-one class, plus the name map."""
    taken = set()
    arrows = []
    index_of_arrow = {}
    for pos in E.indices(k=1):
        e = E.elements[pos]
        base = e.label
        if e.dual_of is not None:
            base = "d_" + E.elements[e.dual_of].label
        name = _sanitize_label(base, taken, "a")
        arrows.append((name, e.source, e.target, e.d))
        index_of_arrow[name] = pos
    quiver = Quiver(E.node_count, arrows)
    return quiver, index_of_arrow


def reconstruct(E):
    """Presentation with the degree-one classes as arrows and one relation
    per degree-two class, read off the unshifted products."""
    quiver, index_of_arrow = ext1_quiver(E)
    arrow_of_index = {pos: name for name, pos in index_of_arrow.items()}
    ext1 = E.indices(k=1)
    ext2 = E.indices(k=2)
    for pos in ext2:
        e = E.elements[pos]
        if e.d > E.max_arity:
            raise QuiverAlgError(
                f"arity cap {E.max_arity} cannot reach the degree-{e.d} "
                f"class {e.label}; raise the cap"
            )
        if e.d > E.max_degree:
            raise QuiverAlgError(
                f"degree window {E.max_degree} cannot reach {e.label}"
            )
    relations = []
    rel_names = []
    taken = set(index_of_arrow)
    for pos in ext2:
        e = E.elements[pos]
        poly = NCPoly.zero()
        for n in range(2, E.max_arity + 1):
            sign = msign(n)
            for tup in E.composable_tuples(
                n, max_total_d=e.d, pool=ext1
            ):
                if sum(E.elements[m].d for m in tup) != e.d:
                    continue
                if (E.elements[tup[0]].source != e.source
                        or E.elements[tup[-1]].target != e.target):
                    continue
                coeff = E.product(tup).get(pos)
                if not coeff:
                    continue
                path = quiver.path(*[arrow_of_index[m] for m in tup])
                poly = poly + NCPoly.from_path(path).scale(sign * coeff)
        if poly.is_zero():
            continue
        lead_path, lead_coeff = min(
            poly.terms.items(), key=lambda item: item[0].key()
        )
        if lead_coeff < 0:
            poly = poly.scale(Fraction(-1))
        relations.append(poly)
        rel_names.append(_sanitize_label("r_" + e.label, taken, "r"))
    return Presentation(quiver, relations, rel_names)


# -- cyclic completion ----------------------------------------------------------


def cyclic_complete_ainf(E, cy_dimension, weight=None):
    """Completion on the window 0 < k < n: adjoint duals and a pairing.

    Dual classes sit in cohomological degree ``n - k``, lower degree
    ``weight - d`` (weight defaults to n), with transposed endpoints.
    Products: original on original inputs; determined by rotation symmetry
    of the pairing-product forms on inputs with exactly one dual; zero on
    two or more duals.  Classes outside 0 < k < n are not carried (their
    duals would leave the stored window; the truncation is closed under
    every coherence identity because each intermediate output stays in
    the window whenever the final output does).
    """
    n_cy = cy_dimension
    w = n_cy if weight is None else weight
    keep = [p for p in range(len(E.elements))
            if 0 < E.elements[p].k < n_cy]
    for p in keep:
        e = E.elements[p]
        if w - e.d < 1:
            raise QuiverAlgError(
                f"pairing weight {w} leaves no room for the dual of "
                f"{e.label} (degree {e.d}); raise the weight"
            )
    C = AInfStructure(
        E.node_count, E.max_degree, E.max_arity,
        cy_dimension=n_cy, weight=w,
    )
    old_to_new = {}
    for p in keep:
        e = E.elements[p]
        old_to_new[p] = C.add_element(
            AInfElement(e.label, e.k, e.d, e.source, e.target)
        )
    taken = {e.label for e in C.elements}
    dual_of_old = {}
    for p in keep:
        e = E.elements[p]
        label = _sanitize_label("d_" + e.label, taken, "d")
        dual_of_old[p] = C.add_element(AInfElement(
            label, n_cy - e.k, w - e.d, e.target, e.source,
            dual_of=old_to_new[p],
        ))
    # original products on original inputs
    for n, table in E.products.items():
        for inputs, row in table.items():
            if any(p not in old_to_new for p in inputs):
                continue
            new_inputs = tuple(old_to_new[p] for p in inputs)
            for out, coeff in row.items():
                if out in old_to_new:
                    C.set_product(new_inputs, old_to_new[out], coeff)
    # one-dual products from rotation symmetry of the product forms
    new_to_old = {v: k for k, v in old_to_new.items()}
    dual_index = {dual_of_old[p]: p for p in keep}
    for m in range(2, E.max_arity + 1):
        for inputs in _one_dual_tuples(C, m, dual_index):
            p = next(
                idx for idx, x in enumerate(inputs) if x in dual_index
            )
            f_old = dual_index[inputs[p]]
            for q in keep:
                coeff = _rotation_form(
                    E, C, inputs, p, f_old, q, old_to_new, new_to_old
                )
                if coeff:
                    C.set_product(inputs, dual_of_old[q], coeff)
    # evaluation pairing
    pairing = {}
    for p in keep:
        a = old_to_new[p]
        b = dual_of_old[p]
        pairing[(a, b)] = Fraction(1)
        sign = (C.elements[a].shifted() * C.elements[b].shifted()) % 2
        pairing[(b, a)] = Fraction(-1 if sign else 1)
    C.pairing = pairing
    return C


def _one_dual_tuples(C, arity, dual_index):
    """Composable tuples of C with exactly one dual factor."""
    for tup in C.composable_tuples(arity, max_total_d=None):
        count = sum(1 for x in tup if x in dual_index)
        if count == 1:
            yield tup


def _rotation_form(E, C, inputs, p, f_old, w_old, old_to_new, new_to_old):
    """Coefficient of the dual of w in the one-dual product of ``inputs``.

    The (m+1)-form T(a_0, .., a_m) = <a_0, b_m(a_1..a_m)> is extended to
    one-dual cyclic arrangements by block-rotation symmetry with Koszul
    signs on shifted degrees; the product coefficient is T(w, inputs).
    Rotating the dual factor to the front reduces everything to a stored
    original product: T = sign * <dual(f), b_m(x_{p+1},..,x_m, w, x_1,..)>.
    """
    rotated = []
    for x in inputs[p + 1:]:
        rotated.append(new_to_old[x])
    rotated.append(w_old)
    for x in inputs[:p]:
        rotated.append(new_to_old[x])
    coeff = E.product(tuple(rotated)).get(f_old)
    if not coeff:
        return Fraction(0)
    # block rotation sign for (P, Q) -> (Q, P) with the dual leading Q:
    # P = (w, x_1, .., x_p), Q = (x_{p+1}, .., x_m), shifted degrees
    sp = E.elements[w_old].k - 1
    for x in inputs[:p]:
        sp += C.elements[x].shifted()
    sq = 0
    for x in inputs[p:]:
        sq += C.elements[x].shifted()
    sign = -1 if (sp % 2) and (sq % 2) else 1
    # graded symmetry of the evaluation pairing: <dual(f), f> picks up
    # (-1)^{|dual f|' |f|'} relative to <f, dual(f)> = 1
    sf = E.elements[f_old].k - 1
    sdual = C.elements[inputs[p]].shifted()
    if (sdual % 2) and (sf % 2):
        sign = -sign
    return sign * coeff


# -- superpotential extraction ---------------------------------------------


class SuperpotentialExtractor:
    """Reads a superpotential and its derivative identity off a completed
    structure.

    The quiver has one arrow per degree-one class.  The potential collects,
    for every closed composable tuple (a_1, .., a_t) of degree-one classes,
    the value (1/t) <a_1, m_{t-1}(a_2, .., a_t)> on the cyclic word a_1..a_t
    (products in the unshifted convention).  The companion ``hmc_dual`` is
    the pairing dual of the curvature sum restricted to degree-one classes;
    the cyclic derivative of the potential along any arrow equals it.
    """

    def __init__(self, E, max_arity=None):
        if E.pairing is None:
            raise QuiverAlgError("superpotential extraction needs a pairing")
        self.E = E
        self.max_arity = E.max_arity if max_arity is None else max_arity
        self.quiver, self.arrow_index = ext1_quiver(E)
        self.arrow_name = {
            pos: name for name, pos in self.arrow_index.items()
        }
        paired = set()
        for (a, b), c in E.pairing.items():
            if c:
                paired.add(a)
                paired.add(b)
        for pos in E.indices():
            if pos not in paired:
                raise QuiverAlgError(
                    f"pairing is degenerate: {E.elements[pos].label} "
                    "pairs to zero"
                )

    def _ext1(self):
        return self.E.indices(k=1)

    def superpotential(self):
        from .cyclic import CyclicWord, Superpotential

        E = self.E
        W = Superpotential()
        pool = self._ext1()
        for t in range(3, self.max_arity + 2):
            for tup in E.composable_tuples(t, closed=True, pool=pool):
                rest = tup[1:]
                value = Fraction(0)
                for out, c in E.product(rest).items():
                    value += E.pair(tup[0], out) * c
                if not value:
                    continue
                value *= msign(t - 1)
                path = self.quiver.path(
                    *[self.arrow_name[m] for m in tup]
                )
                W.add_word(
                    CyclicWord.from_path(self.quiver, path),
                    value / t,
                )
        return W

    def hmc_dual(self, arrow_name):
        """Pairing dual of the curvature sum along one arrow's class."""
        x = self.arrow_index[arrow_name]
        ex = self.E.elements[x]
        pool = self._ext1()
        poly = NCPoly.zero()
        for m in range(2, self.max_arity + 1):
            sign = msign(m)
            for tup in self.E.composable_tuples(m, pool=pool):
                if (self.E.elements[tup[0]].source != ex.target
                        or self.E.elements[tup[-1]].target != ex.source):
                    continue
                value = Fraction(0)
                for out, c in self.E.product(tup).items():
                    value += self.E.pair(x, out) * c
                if not value:
                    continue
                path = self.quiver.path(
                    *[self.arrow_name[n] for n in tup]
                )
                poly = poly + NCPoly.from_path(path).scale(sign * value)
        return poly


def superpotential_from_cyclic(E, max_arity=None):
    """Convenience wrapper: (degree-one quiver, superpotential)."""
    worker = SuperpotentialExtractor(E, max_arity)
    return worker.quiver, worker.superpotential()
