"""Representation points, trace potentials, and weight stability."""

import random
from fractions import Fraction

import pytest

from quiveralg.dsl import parse_text
from quiveralg.quivers import Path, QuiverAlgError
from quiveralg.reps import (
    RepPoint,
    child_seed,
    critical_identity_check,
    evaluate,
    evaluate_single,
    mat_add,
    mat_identity,
    mat_inverse,
    mat_mul,
    mat_scale,
    mat_trace,
    mat_transpose,
    theta_stability_ones,
    trace_superpotential,
)

ONE_LOOP = "nodes: 1\narrow x: 0 -> 0 deg 1\n"


def _loop_super(body):
    parsed = parse_text(ONE_LOOP + f"super W: {body}\n")
    return parsed.quiver, parsed.superpotential()


def _random_block_group(rng, dims):
    gs = []
    for d in dims:
        while True:
            g = [[Fraction(rng.randint(-5, 5)) for _ in range(d)]
                 for _ in range(d)]
            try:
                mat_inverse(g)
            except QuiverAlgError:
                continue
            gs.append(g)
            break
    return gs


def test_seed_stream():
    assert child_seed(5, 7) == 5_000_022
    a = RepPoint.random(parse_text(ONE_LOOP).quiver, (3,), 9)
    b = RepPoint.random(parse_text(ONE_LOOP).quiver, (3,), 9)
    assert a.matrices == b.matrices


def test_matrix_shape_validation(beilinson):
    bad = {a.name: [[Fraction(1)]] for a in beilinson.quiver.arrows}
    with pytest.raises(QuiverAlgError):
        RepPoint(beilinson.quiver, (1, 2, 1), bad)
    with pytest.raises(QuiverAlgError):
        RepPoint(beilinson.quiver, (0, 0, 0), bad)


def test_trivial_path_evaluates_to_identity(beilinson):
    rho = RepPoint.random(beilinson.quiver, (2, 3, 2), 1)
    assert rho.path_value(Path((), 1, 1, 0)) == mat_identity(3)


def test_path_value_reverses_matrices(beilinson):
    quiver = beilinson.quiver
    rho = RepPoint.random(quiver, (2, 2, 2), 42)
    x0, y0 = rho.matrices["x0"], rho.matrices["y0"]
    x1, y1 = rho.matrices["x1"], rho.matrices["y1"]
    rel = beilinson.relations[beilinson.rel_names.index("z2")]
    value = evaluate(rel, rho)
    assert set(value) == {(0, 2)}
    by_hand = mat_add(mat_mul(y1, x0), mat_mul(x1, y0), -1)
    assert value[(0, 2)] == by_hand


def test_evaluate_single_defaults_to_zero(beilinson):
    rho = RepPoint.random(beilinson.quiver, (1, 1, 1), 3)
    rel = beilinson.relations[0]
    zero = evaluate_single(rel, rho, 1, 0)
    assert zero == [[Fraction(0)]]


def test_scalar_cubic_derivative():
    quiver, w = _loop_super("x*x*x")
    rho = RepPoint(quiver, (1,), {"x": [[Fraction(5)]]})
    assert trace_superpotential(w, rho) == 125
    from quiveralg.cyclic import cyclic_derivative

    dw = cyclic_derivative(quiver, w, "x")
    assert evaluate_single(dw, rho, 0, 0) == [[Fraction(75)]]


def test_trace_rotation_invariance(p2):
    quiver, w = p2
    rho = RepPoint.random(quiver, (2, 2, 2), 8)
    for word, _coeff in w.items():
        ids = list(word.arrows)
        values = []
        for r in range(len(ids)):
            rot = tuple(ids[r:] + ids[:r])
            src = quiver.arrows[rot[0]].source
            tgt = quiver.arrows[rot[-1]].target
            deg = sum(quiver.arrows[a].degree for a in rot)
            assert src == tgt
            values.append(mat_trace(rho.path_value(
                Path(rot, src, tgt, deg)
            )))
        assert len(set(values)) == 1


def test_trace_gauge_invariance(p2):
    quiver, w = p2
    for dims, seed in [((1, 1, 1), 5), ((2, 2, 2), 6)]:
        rho = RepPoint.random(quiver, dims, seed)
        base = trace_superpotential(w, rho)
        rng = random.Random(seed + 100)
        for _ in range(5):
            g = _random_block_group(rng, dims)
            assert trace_superpotential(w, rho.conjugated(g)) == base


def test_conjugation_transforms_path_values(beilinson):
    """A closed-word trace is basis independent because every evaluated
    path transforms by g_target M g_source^{-1}."""
    quiver = beilinson.quiver
    rho = RepPoint.random(quiver, (2, 2, 2), 12)
    rng = random.Random(2)
    g = _random_block_group(rng, (2, 2, 2))
    tau = rho.conjugated(g)
    rel = beilinson.relations[0]
    lhs = evaluate_single(rel, tau, 0, 2)
    rhs = mat_mul(
        mat_mul(g[2], evaluate_single(rel, rho, 0, 2)),
        mat_inverse(g[0]),
    )
    assert lhs == rhs


def test_critical_identity_zero_superpotential():
    from quiveralg.cyclic import Superpotential

    quiver = parse_text(ONE_LOOP).quiver
    report = critical_identity_check(quiver, Superpotential(), (2,),
                                     samples=2, seed=0)
    assert report["hessian_symmetric"]
    assert report["symbolic_gradient_ok"]
    assert report["finite_difference_ok"]
    assert report["counterexamples"] == []


def test_critical_identity_scalar_cubic():
    quiver, w = _loop_super("x*x*x")
    report = critical_identity_check(quiver, w, (1,), samples=4, seed=1)
    assert report["symbolic_gradient_ok"]
    assert report["hessian_symmetric"]
    assert report["finite_difference_ok"]


@pytest.mark.parametrize("dims, samples", [((1, 1, 1), 4), ((2, 2, 2), 2)])
def test_critical_identity_completed_quiver(p2, dims, samples):
    quiver, w = p2
    report = critical_identity_check(quiver, w, dims, samples=samples,
                                     seed=0)
    assert report["symbolic_gradient_ok"], report["counterexamples"]
    assert report["hessian_symmetric"]
    assert report["finite_difference_ok"]
    assert report["max_fd_relative_error"] < 1e-8
    assert report["counterexamples"] == []


def test_critical_identity_catches_wrong_transpose(p2):
    """Dropping the transpose is detected: compare against the raw
    (untransposed) evaluation by hand at one sample."""
    from quiveralg.cyclic import cyclic_derivative

    quiver, w = p2
    rho = RepPoint.random(quiver, (2, 2, 2), child_seed(0, 0))
    arrow = quiver.by_name["x0"]
    dw = cyclic_derivative(quiver, w, "x0")
    value = evaluate_single(dw, rho, arrow.target, arrow.source)
    assert mat_transpose(value) != value  # generic point: not symmetric


# -- stability ------------------------------------------------------------------


def _ones_point(quiver, values):
    mats = {name: [[Fraction(v)]] for name, v in values.items()}
    return RepPoint(quiver, tuple([1] * quiver.node_count), mats)


def test_stability_requires_ones(beilinson):
    rho = RepPoint.random(beilinson.quiver, (2, 2, 2), 0)
    with pytest.raises(QuiverAlgError):
        theta_stability_ones(beilinson.quiver, rho, (0, 0, 0))


def test_stability_nonzero_total_weight(p2):
    quiver, _w = p2
    rho = RepPoint.random(quiver, (1, 1, 1), 0)
    report = theta_stability_ones(quiver, rho, (1, 1, 1))
    assert report["verdict"] == "unstable"
    assert report["reason"] == "nonzero total weight"
    assert report["total_weight"] == 3


def test_stability_zero_theta_all_arrows_nonzero(p2):
    """theta = 0 is always semistable; with every arrow nonzero on the
    completed quiver no proper closed subset exists, so it is stable."""
    quiver, _w = p2
    values = {a.name: 1 for a in quiver.arrows}
    rho = _ones_point(quiver, values)
    report = theta_stability_ones(quiver, rho, (0, 0, 0))
    assert report["verdict"] == "stable"


def test_stability_zero_representation(p2):
    """rho = 0 makes every subset closed; complementary singleton weights
    sum to zero, so a zero representation is never stable for r >= 2."""
    quiver, _w = p2
    rho = _ones_point(quiver, {a.name: 0 for a in quiver.arrows})
    for theta in [(0, 0, 0), (-2, 1, 1), (1, -2, 1)]:
        report = theta_stability_ones(quiver, rho, theta)
        assert report["verdict"] != "stable"
        if theta == (0, 0, 0):
            assert report["verdict"] == "semistable"
            assert report["witness"] is not None
        else:
            assert report["verdict"] == "unstable"
            assert report["reason"] == "negative weight on a closed subset"


def test_stability_completed_quiver_generic(p2):
    quiver, _w = p2
    values = {a.name: 1 for a in quiver.arrows}
    rho = _ones_point(quiver, values)
    report = theta_stability_ones(quiver, rho, (-2, 1, 1))
    assert report == {"verdict": "stable", "reason": None, "witness": None}


def test_stability_witness_identifies_violator(beilinson):
    """On the uncompleted quiver node 2 is a sink: {2} is closed, so a
    negative weight there destabilizes."""
    quiver = beilinson.quiver
    values = {a.name: 1 for a in quiver.arrows}
    rho = _ones_point(quiver, values)
    report = theta_stability_ones(quiver, rho, (1, 0, -1))
    assert report["verdict"] == "unstable"
    assert report["witness"] == [2]
    report = theta_stability_ones(quiver, rho, (1, -1, 0))
    assert report["verdict"] == "unstable"
    assert report["witness"] in ([2], [1, 2])


def test_stability_positive_scaling_invariance(p2):
    quiver, _w = p2
    rng = random.Random(0)
    for k in range(20):
        values = {a.name: rng.randint(-2, 2) for a in quiver.arrows}
        rho = _ones_point(quiver, values)
        t1, t2 = rng.randint(-3, 3), rng.randint(-3, 3)
        theta = (t1, t2, -t1 - t2)
        base = theta_stability_ones(quiver, rho, theta)
        for c in (2, 5):
            scaled = theta_stability_ones(
                quiver, rho, tuple(c * t for t in theta)
            )
            assert scaled["verdict"] == base["verdict"]
