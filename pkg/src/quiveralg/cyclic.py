"""Cyclic words, superpotentials, cyclic derivatives, and completion.

A cyclic word is a closed path taken up to rotation, stored as its
lexicographically minimal arrow-id rotation.  A superpotential is a rational
combination of cyclic words; its cyclic derivative with respect to an arrow
``a`` sums, over occurrences of ``a``, the linear word obtained by rotating
that occurrence to the front and deleting it.
"""

from fractions import Fraction

from .quivers import NCPoly, Path, Presentation, Quiver, QuiverAlgError


class CyclicWord:
    """A closed path up to rotation; canonical rotation is stored."""

    __slots__ = ("arrows", "degree", "source")

    def __init__(self, arrows, degree, source):
        self.arrows = arrows
        self.degree = degree
        self.source = source

    @staticmethod
    def from_path(quiver, path):
        if path.source != path.target:
            raise QuiverAlgError("cyclic words require closed paths")
        if not path.arrows:
            raise QuiverAlgError("cyclic words require length >= 1")
        ids = path.arrows
        best = min(ids[s:] + ids[:s] for s in range(len(ids)))
        return CyclicWord(best, path.degree, quiver.arrows[best[0]].source)

    def to_path(self):
        return Path(self.arrows, self.source, self.source, self.degree)

    def rotations(self):
        ids = self.arrows
        return [ids[s:] + ids[:s] for s in range(len(ids))]

    def key(self):
        return (self.degree, len(self.arrows), self.arrows)

    def __eq__(self, other):
        return isinstance(other, CyclicWord) and self.arrows == other.arrows

    def __hash__(self):
        return hash(self.arrows)

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return f"CyclicWord({self.arrows}, deg {self.degree})"


class Superpotential:
    """Finite rational combination of cyclic words."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for word, coeff in (terms.items() if isinstance(terms, dict) else terms):
                self.add_word(word, coeff)

    def add_word(self, word, coeff):
        coeff = Fraction(coeff)
        if not coeff:
            return
        cur = self.terms.get(word, 0) + coeff
        if cur:
            self.terms[word] = cur
        else:
            self.terms.pop(word, None)

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0].key())

    def __add__(self, other):
        out = Superpotential(dict(self.terms))
        for word, coeff in other.terms.items():
            out.add_word(word, coeff)
        return out

    def scale(self, coeff):
        coeff = Fraction(coeff)
        out = Superpotential()
        if coeff:
            out.terms = {w: c * coeff for w, c in self.terms.items()}
        return out

    def __eq__(self, other):
        return isinstance(other, Superpotential) and self.terms == other.terms

    def homogeneous_degree(self):
        """Total degree if homogeneous, else None."""
        degs = {w.degree for w in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None

    def short_words(self):
        """Words of degree <= 2 (their derivatives cannot form relations)."""
        return sorted((w for w in self.terms if w.degree <= 2), key=CyclicWord.key)


def superpotential_from_closed_poly(quiver, poly):
    """Project an NCPoly of closed paths onto cyclic words."""
    out = Superpotential()
    for path, coeff in poly.terms.items():
        out.add_word(CyclicWord.from_path(quiver, path), coeff)
    return out


def cyclic_derivative(quiver, w, arrow_name):
    """Cyclic partial derivative of a superpotential with respect to an arrow.

    Linear in ``w``; the result has source = target(a) and target = source(a).
    """
    a = quiver.by_name[arrow_name]
    out = NCPoly.zero()
    for word, coeff in w.terms.items():
        ids = word.arrows
        for s, aid in enumerate(ids):
            if aid != a.id:
                continue
            rest = ids[s + 1 :] + ids[:s]
            degree = word.degree - a.degree
            path = Path(rest, a.target, a.source, degree)
            out = out + NCPoly.from_path(path, coeff)
    return out


def algebra_from_superpotential(quiver, w):
    """Presentation whose relations are the cyclic derivatives of ``w``.

    Zero derivatives are omitted.  Raises if some derivative has degree < 2
    (words of degree <= 2 cannot produce valid relations) or is inhomogeneous.
    """
    short = w.short_words()
    if short:
        labels = ", ".join("*".join(quiver.arrows[i].name for i in cw.arrows) for cw in short)
        raise QuiverAlgError(
            f"superpotential words of degree <= 2 ({labels}) yield invalid relations"
        )
    relations = []
    names = []
    for arrow in quiver.arrows:
        deriv = cyclic_derivative(quiver, w, arrow.name)
        if deriv.is_zero():
            continue
        relations.append(deriv)
        names.append(arrow.name)
    return Presentation(quiver, relations, names)


def cyclic_complete_presentation(presentation, total_deg=None):
    """Adjoin one arrow per relation and wrap the relations into cycles.

    For each relation ``rho: i -> j`` of degree ``d`` a new arrow named after
    the relation is added from ``j`` to ``i`` with degree ``total_deg - d``,
    and the output superpotential is the sum of the cyclic words ``rho *
    new_arrow``.  The derivative of the result with respect to each new arrow
    recovers its relation exactly.  ``total_deg`` defaults to the node count.
    """
    quiver = presentation.quiver
    if total_deg is None:
        total_deg = quiver.node_count
    specs = [(a.name, a.source, a.target, a.degree) for a in quiver.arrows]
    taken = set(quiver.by_name)
    new_names = []
    for k, rel in enumerate(presentation.relations):
        rdeg, rsrc, rtgt = presentation.relation_key(k)
        new_deg = total_deg - rdeg
        if new_deg < 1:
            raise QuiverAlgError(
                f"relation {presentation.rel_names[k]} has degree {rdeg}; "
                f"total degree {total_deg} leaves no room for a new arrow"
            )
        name = presentation.rel_names[k]
        while name in taken:
            name += "_c"
        taken.add(name)
        new_names.append(name)
        specs.append((name, rtgt, rsrc, new_deg))
    completed = Quiver(quiver.node_count, specs)
    w = Superpotential()
    for k, rel in enumerate(presentation.relations):
        y = completed.by_name[new_names[k]]
        for path, coeff in rel.terms.items():
            closed = Path(
                path.arrows + (y.id,),
                path.source,
                path.source,
                path.degree + y.degree,
            )
            w.add_word(CyclicWord.from_path(completed, closed), coeff)
    return completed, w
