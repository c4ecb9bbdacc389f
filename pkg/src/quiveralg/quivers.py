"""Quivers, paths, noncommutative polynomials, and graded presentations.

Coefficients are exact rationals throughout.  Path composition reads left to
right: ``p * q`` traverses ``p`` first, and is nonzero only when the target of
``p`` equals the source of ``q``.  Quotient-algebra bases are computed degree
by degree with exact row reduction; no Groebner machinery is involved.
"""

import os
from fractions import Fraction

from . import linalg

DEFAULT_PATH_CAP = 100000
PATH_CAP_ENV = "QF_MAX_PATHS"


class QuiverAlgError(Exception):
    """Base class for domain errors raised by this package."""


class PathCapError(QuiverAlgError):
    """Raised when a degree component has more paths than the configured cap."""


class InvalidRelation(QuiverAlgError):
    """Raised for relations that are not homogeneous or have degree < 2."""


def path_cap():
    value = os.environ.get(PATH_CAP_ENV)
    if value:
        return int(value)
    return DEFAULT_PATH_CAP


class Arrow:
    __slots__ = ("id", "name", "source", "target", "degree")

    def __init__(self, id, name, source, target, degree):
        self.id = id
        self.name = name
        self.source = source
        self.target = target
        self.degree = degree

    def __repr__(self):
        return f"Arrow({self.name}: {self.source}->{self.target} deg {self.degree})"


class Quiver:
    """A finite graded quiver: ``node_count`` nodes and a list of arrows."""

    def __init__(self, node_count, arrows):
        """``arrows``: iterable of (name, source, target, degree) tuples."""
        if node_count < 1:
            raise QuiverAlgError("node_count must be positive")
        self.node_count = node_count
        self.arrows = []
        self.by_name = {}
        for name, source, target, degree in arrows:
            if not (0 <= source < node_count and 0 <= target < node_count):
                raise QuiverAlgError(f"arrow {name}: endpoint out of range")
            if degree < 1:
                raise QuiverAlgError(f"arrow {name}: degree must be >= 1")
            if name in self.by_name:
                raise QuiverAlgError(f"duplicate arrow name {name}")
            arrow = Arrow(len(self.arrows), name, source, target, degree)
            self.arrows.append(arrow)
            self.by_name[name] = arrow

    def e(self, node):
        """Length-zero path at a node."""
        if not (0 <= node < self.node_count):
            raise QuiverAlgError(f"node {node} out of range")
        return Path((), node, node, 0)

    def arrow_path(self, name):
        a = self.by_name[name]
        return Path((a.id,), a.source, a.target, a.degree)

    def path(self, *names):
        """Path from a sequence of arrow names; raises if incomposable."""
        if not names:
            raise QuiverAlgError("empty path needs a node; use e(i)")
        first = self.by_name[names[0]]
        ids = [first.id]
        degree = first.degree
        node = first.target
        for name in names[1:]:
            a = self.by_name[name]
            if a.source != node:
                raise QuiverAlgError(f"incomposable at {name}")
            ids.append(a.id)
            node = a.target
            degree += a.degree
        return Path(tuple(ids), first.source, node, degree)

    def path_str(self, path):
        if not path.arrows:
            return f"e{path.source}"
        return "*".join(self.arrows[i].name for i in path.arrows)


class Path:
    """Immutable path: arrow-id sequence with cached endpoints and degree."""

    __slots__ = ("arrows", "source", "target", "degree")

    def __init__(self, arrows, source, target, degree):
        self.arrows = arrows
        self.source = source
        self.target = target
        self.degree = degree

    def key(self):
        """Canonical sort key: degree, then length, then arrow ids."""
        return (self.degree, len(self.arrows), self.arrows, self.source)

    def compose(self, other):
        """Concatenation, or None when the endpoints do not match."""
        if self.target != other.source:
            return None
        return Path(
            self.arrows + other.arrows,
            self.source,
            other.target,
            self.degree + other.degree,
        )

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.arrows == other.arrows
            and self.source == other.source
        )

    def __hash__(self):
        return hash((self.arrows, self.source))

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        return f"Path({self.arrows}, {self.source}->{self.target}, deg {self.degree})"


class NCPoly:
    """Finite rational linear combination of paths.

    Zero coefficients are never stored.  Addition, subtraction, scalar
    multiplication, and the bilinear concatenation product are supported;
    incomposable path pairs multiply to zero.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for path, coeff in (terms.items() if isinstance(terms, dict) else terms):
                coeff = Fraction(coeff)
                if not coeff:
                    continue
                cur = self.terms.get(path, 0) + coeff
                if cur:
                    self.terms[path] = cur
                else:
                    self.terms.pop(path, None)

    @staticmethod
    def from_path(path, coeff=1):
        return NCPoly([(path, Fraction(coeff))])

    @staticmethod
    def zero():
        return NCPoly()

    def is_zero(self):
        return not self.terms

    def items(self):
        """Terms in canonical path order."""
        return sorted(self.terms.items(), key=lambda kv: kv[0].key())

    def __add__(self, other):
        out = dict(self.terms)
        for path, coeff in other.terms.items():
            cur = out.get(path, 0) + coeff
            if cur:
                out[path] = cur
            else:
                out.pop(path, None)
        result = NCPoly()
        result.terms = out
        return result

    def __neg__(self):
        result = NCPoly()
        result.terms = {p: -c for p, c in self.terms.items()}
        return result

    def __sub__(self, other):
        return self + (-other)

    def scale(self, coeff):
        coeff = Fraction(coeff)
        result = NCPoly()
        if coeff:
            result.terms = {p: c * coeff for p, c in self.terms.items()}
        return result

    def __rmul__(self, coeff):
        return self.scale(coeff)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            return self.scale(other)
        return multiply(self, other)

    def __eq__(self, other):
        return isinstance(other, NCPoly) and self.terms == other.terms

    def components(self):
        """Split into endpoint-and-degree-homogeneous pieces.

        Returns a dict ``(degree, source, target) -> NCPoly``.
        """
        out = {}
        for path, coeff in self.terms.items():
            key = (path.degree, path.source, path.target)
            out.setdefault(key, {})[path] = coeff
        result = {}
        for key, terms in out.items():
            poly = NCPoly()
            poly.terms = terms
            result[key] = poly
        return result

    def homogeneous_key(self):
        """(degree, source, target) if homogeneous in all three, else None."""
        keys = {(p.degree, p.source, p.target) for p in self.terms}
        if len(keys) == 1:
            return keys.pop()
        return None

    def __repr__(self):
        return f"NCPoly({self.terms!r})"


def multiply(f, g):
    """Bilinear concatenation product of two NCPolys."""
    out = {}
    for p, a in f.terms.items():
        for q, b in g.terms.items():
            pq = p.compose(q)
            if pq is None:
                continue
            cur = out.get(pq, 0) + a * b
            if cur:
                out[pq] = cur
            else:
                out.pop(pq, None)
    result = NCPoly()
    result.terms = out
    return result


class Presentation:
    """A graded quiver together with homogeneous relations of degree >= 2.

    The underlying algebra is the path algebra modulo the two-sided ideal
    generated by the relations.  Degree components are computed on demand and
    cached; all results are deterministic in the fixed path order.
    """

    def __init__(self, quiver, relations=(), rel_names=None):
        self.quiver = quiver
        self.relations = []
        self.rel_names = []
        names = list(rel_names) if rel_names is not None else None
        for k, rel in enumerate(relations):
            key = rel.homogeneous_key()
            if rel.is_zero() or key is None:
                raise InvalidRelation(f"relation {k} is not homogeneous")
            if key[0] < 2:
                raise InvalidRelation(f"relation {k} has degree {key[0]} < 2")
            self.relations.append(rel)
            self.rel_names.append(names[k] if names else f"r{k}")
        self._paths_from = {}
        self._slots = {}

    def relation_key(self, k):
        """(degree, source, target) of relation k."""
        return self.relations[k].homogeneous_key()

    def _paths_from_node(self, degree, node):
        """All paths of the given degree starting at ``node``.

        Returns a list of (arrow-id tuple, target, length).  Deterministic.
        """
        key = (degree, node)
        cached = self._paths_from.get(key)
        if cached is not None:
            return cached
        if degree == 0:
            out = [((), node, 0)]
        else:
            out = []
            for a in self.quiver.arrows:
                if a.source != node or a.degree > degree:
                    continue
                for ids, target, length in self._paths_from_node(
                    degree - a.degree, a.target
                ):
                    out.append(((a.id,) + ids, target, length + 1))
        self._paths_from[key] = out
        return out

    def paths(self, degree, source, target):
        """Paths of a degree between two nodes, in canonical order."""
        found = [
            Path(ids, source, target, degree)
            for ids, tgt, _length in self._paths_from_node(degree, source)
            if tgt == target
        ]
        found.sort(key=lambda p: (len(p.arrows), p.arrows))
        cap = path_cap()
        if len(found) > cap:
            raise PathCapError(
                f"{len(found)} paths in component ({source},{target}) degree "
                f"{degree} exceed the cap {cap}; raise {PATH_CAP_ENV} to override"
            )
        return found

    def _slot(self, degree, source, target):
        """Cached quotient data for one (degree, source, target) component.

        Returns (paths, index of each path, RowSpace of the ideal component,
        basis paths).
        """
        key = (degree, source, target)
        cached = self._slots.get(key)
        if cached is not None:
            return cached
        paths = self.paths(degree, source, target)
        index = {p: n for n, p in enumerate(paths)}
        rows = []
        for k, rel in enumerate(self.relations):
            rdeg, rsrc, rtgt = self.relation_key(k)
            if rdeg > degree:
                continue
            for left_deg in range(degree - rdeg + 1):
                right_deg = degree - rdeg - left_deg
                lefts = self.paths(left_deg, source, rsrc)
                if not lefts:
                    continue
                rights = self.paths(right_deg, rtgt, target)
                if not rights:
                    continue
                for p in lefts:
                    for q in rights:
                        row = {}
                        for w, c in rel.terms.items():
                            full = p.compose(w).compose(q)
                            row[index[full]] = row.get(index[full], 0) + c
                        rows.append({c: v for c, v in row.items() if v})
        space = linalg.RowSpace()
        space.pivrows = linalg.rref_sparse(rows)
        basis = [p for n, p in enumerate(paths) if n not in space.pivrows]
        result = (paths, index, space, basis)
        self._slots[key] = result
        return result

    def degree_basis(self, degree, source, target):
        """Basis of the degree component of the quotient algebra.

        Returns a list of NCPoly coset representatives (the pivot-free paths).
        """
        if degree < 0:
            raise QuiverAlgError("degree must be >= 0")
        _paths, _index, _space, basis = self._slot(degree, source, target)
        return [NCPoly.from_path(p) for p in basis]

    def dimension(self, degree, source, target):
        _paths, _index, _space, basis = self._slot(degree, source, target)
        return len(basis)

    def basis_paths(self, degree, source, target):
        """The pivot-free paths themselves, in canonical order."""
        return self._slot(degree, source, target)[3]

    def hilbert_table(self, max_degree):
        """dim A_d(i,j) for all d <= max_degree; row 0 is the identity."""
        r = self.quiver.node_count
        table = {}
        for d in range(max_degree + 1):
            table[d] = [
                [self.dimension(d, i, j) for j in range(r)] for i in range(r)
            ]
        return table

    def normal_form(self, poly):
        """Canonical coset representative of an NCPoly, componentwise."""
        total = NCPoly.zero()
        for (degree, source, target), part in poly.components().items():
            paths, index, space, _basis = self._slot(degree, source, target)
            vec = {index[p]: c for p, c in part.terms.items()}
            red = space.reduce(vec)
            total = total + NCPoly([(paths[c], v) for c, v in red.items()])
        return total
