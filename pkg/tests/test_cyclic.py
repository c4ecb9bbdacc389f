"""Cyclic words, superpotentials, derivatives, and completion."""

import math
import random

import pytest

from quiveralg.cyclic import (
    CyclicWord,
    Superpotential,
    algebra_from_superpotential,
    cyclic_complete_presentation,
    cyclic_derivative,
)
from quiveralg.dsl import format_ncpoly, format_superpotential, parse_text
from quiveralg.quivers import QuiverAlgError


def test_rotation_canonicalization(p2):
    quiver, _w = p2
    path = quiver.path("y1", "z2", "x0")
    rotated = quiver.path("x0", "y1", "z2")
    assert CyclicWord.from_path(quiver, path) == CyclicWord.from_path(
        quiver, rotated
    )


def test_random_rotations_agree(p2):
    quiver, w = p2
    rng = random.Random(0)
    for word in w.terms:
        for _ in range(3):
            ids = word.arrows
            s = rng.randrange(len(ids))
            rot = ids[s:] + ids[:s]
            src = quiver.arrows[rot[0]].source
            from quiveralg.quivers import Path

            path = Path(rot, src, src, word.degree)
            assert CyclicWord.from_path(quiver, path) == word


def test_open_path_rejected(beilinson):
    q = beilinson.quiver
    with pytest.raises(QuiverAlgError):
        CyclicWord.from_path(q, q.path("x0"))


def test_superpotential_cancellation(p2):
    quiver, w = p2
    total = w + w.scale(-1)
    assert total.is_zero()


def test_cube_derivative():
    parsed = parse_text(
        "nodes: 1\narrow x: 0 -> 0 deg 1\nsuper W: x*x*x\n"
    )
    w = parsed.superpotential("W")
    deriv = cyclic_derivative(parsed.quiver, w, "x")
    assert format_ncpoly(parsed.quiver, deriv) == "3*x*x"


def test_p2_derivatives(p2, beilinson):
    quiver, w = p2
    # the new arrows recover the three original relations
    by_name = dict(zip(beilinson.rel_names, beilinson.relations))
    for name in ("z2", "y2", "x2"):
        deriv = cyclic_derivative(quiver, w, name)
        assert format_ncpoly(quiver, deriv) == format_ncpoly(
            beilinson.quiver, by_name[name]
        )
    # and every arrow's derivative is nonzero: 9 relations total
    nonzero = [
        a.name
        for a in quiver.arrows
        if not cyclic_derivative(quiver, w, a.name).is_zero()
    ]
    assert len(nonzero) == 9


def test_derivative_linear(p2):
    quiver, w = p2
    doubled = w + w
    d1 = cyclic_derivative(quiver, w, "x0")
    d2 = cyclic_derivative(quiver, doubled, "x0")
    assert d2 == d1 + d1


def test_completion_shape(beilinson):
    quiver, w = cyclic_complete_presentation(beilinson, 3)
    new = quiver.arrows[6:]
    assert [(a.source, a.target, a.degree) for a in new] == [(2, 0, 1)] * 3
    assert w.homogeneous_degree() == 3
    assert len(w.terms) == 6


def test_completion_requires_room(beilinson):
    with pytest.raises(QuiverAlgError):
        cyclic_complete_presentation(beilinson, 2)


def test_jacobi_algebra_hilbert(p2):
    quiver, w = p2
    jacobi = algebra_from_superpotential(quiver, w)
    assert len(jacobi.relations) == 9
    table = jacobi.hilbert_table(6)
    # every component matches the three-variable monomial count: the
    # degree-d component (i, j) is nonzero only when d = j - i mod 3,
    # with dimension C(d + 2, 2)
    for d in range(7):
        for i in range(3):
            for j in range(3):
                if d == 0:
                    expect = 1 if i == j else 0
                elif (j - i) % 3 == d % 3:
                    expect = math.comb(d + 2, 2)
                else:
                    expect = 0
                assert table[d][i][j] == expect


def test_short_words_rejected():
    parsed = parse_text(
        "nodes: 1\narrow x: 0 -> 0 deg 1\nsuper W: x*x\n"
    )
    with pytest.raises(QuiverAlgError):
        algebra_from_superpotential(
            parsed.quiver, parsed.superpotential("W")
        )


def test_superpotential_formatting(p2):
    quiver, w = p2
    assert format_superpotential(quiver, w) == (
        "x0*y1*z2 - x0*z1*y2 - y0*x1*z2 + y0*z1*x2 "
        "+ z0*x1*y2 - z0*y1*x2"
    )
