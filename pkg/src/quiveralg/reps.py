"""Representation spaces: evaluation, trace potentials, stability.

A representation point assigns to each arrow i -> j a d_j x d_i matrix.
Path evaluation follows the global left-to-right composition convention,
so matrices compose in reverse: the path ``a1*a2`` (traverse a1, then a2)
evaluates to ``M(a2) @ M(a1)``.

Exact mode keeps every entry rational; the inexact mode mirrors the same
computations in floating point and exists only for the finite-difference
cross-check of the critical-locus identity.
"""

import random
from fractions import Fraction

from .quivers import QuiverAlgError


# -- small exact matrix helpers (dimensions here are tiny) ------------------


def mat_zero(rows, cols, exact=True):
    z = Fraction(0) if exact else 0.0
    return [[z for _ in range(cols)] for _ in range(rows)]


def mat_identity(n, exact=True):
    one = Fraction(1) if exact else 1.0
    z = Fraction(0) if exact else 0.0
    return [[one if r == c else z for c in range(n)] for r in range(n)]


def mat_mul(a, b):
    rows, inner, cols = len(a), len(b), len(b[0]) if b else 0
    if a and len(a[0]) != inner:
        raise QuiverAlgError("matrix shape mismatch in product")
    out = []
    for r in range(rows):
        row = []
        ar = a[r]
        for c in range(cols):
            acc = ar[0] * b[0][c]
            for m in range(1, inner):
                acc += ar[m] * b[m][c]
            row.append(acc)
        out.append(row)
    return out


def mat_add(a, b, coeff=1):
    return [
        [a[r][c] + coeff * b[r][c] for c in range(len(a[0]))]
        for r in range(len(a))
    ]


def mat_scale(a, coeff):
    return [[coeff * v for v in row] for row in a]


def mat_trace(a):
    return sum(a[r][r] for r in range(len(a)))


def mat_transpose(a):
    return [list(col) for col in zip(*a)]


def mat_inverse(a):
    from . import linalg

    n = len(a)
    aug = [list(a[r]) + [Fraction(1 if c == r else 0) for c in range(n)]
           for r in range(n)]
    red, pivots = linalg.rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise QuiverAlgError("matrix is singular")
    return [row[n:] for row in red]


class RepPoint:
    """Matrices for every arrow, over a fixed dimension vector."""

    def __init__(self, quiver, dims, matrices, exact=True):
        if len(dims) != quiver.node_count:
            raise QuiverAlgError("dimension vector length mismatch")
        if not any(dims) or any(d < 0 for d in dims):
            raise QuiverAlgError("dimension vector must be nonnegative, "
                                 "not all zero")
        self.quiver = quiver
        self.dims = tuple(dims)
        self.exact = exact
        self.matrices = {}
        for arrow in quiver.arrows:
            mat = matrices[arrow.name]
            want = (dims[arrow.target], dims[arrow.source])
            got = (len(mat), len(mat[0]) if mat else 0)
            if want[0] > 0 and got != want:
                raise QuiverAlgError(
                    f"matrix for {arrow.name} has shape {got}, "
                    f"expected {want}"
                )
            self.matrices[arrow.name] = [list(row) for row in mat]

    @classmethod
    def random(cls, quiver, dims, seed):
        """Entries uniform over the integers -9..9, deterministically."""
        rng = random.Random(seed)
        matrices = {}
        for arrow in quiver.arrows:
            rows, cols = dims[arrow.target], dims[arrow.source]
            matrices[arrow.name] = [
                [Fraction(rng.randint(-9, 9)) for _ in range(cols)]
                for _ in range(rows)
            ]
        return cls(quiver, dims, matrices)

    def to_float(self):
        matrices = {
            name: [[float(v) for v in row] for row in mat]
            for name, mat in self.matrices.items()
        }
        return RepPoint(self.quiver, self.dims, matrices, exact=False)

    def conjugated(self, g):
        """Act by the block-diagonal group element ``g`` (one invertible
        matrix per node): each arrow matrix becomes g_j M g_i^{-1}."""
        g_inv = [mat_inverse(gi) for gi in g]
        matrices = {}
        for arrow in self.quiver.arrows:
            m = self.matrices[arrow.name]
            matrices[arrow.name] = mat_mul(
                mat_mul(g[arrow.target], m), g_inv[arrow.source]
            )
        return RepPoint(self.quiver, self.dims, matrices, exact=self.exact)

    def path_value(self, path):
        mat = mat_identity(self.dims[path.source], self.exact)
        for arrow_id in path.arrows:
            arrow = self.quiver.arrows[arrow_id]
            mat = mat_mul(self.matrices[arrow.name], mat)
        return mat


def evaluate(poly, rho):
    """Matrix value per (source, target) component of an exact polynomial."""
    out = {}
    for path, coeff in poly.terms.items():
        key = (path.source, path.target)
        value = mat_scale(rho.path_value(path), coeff)
        if key in out:
            out[key] = mat_add(out[key], value)
        else:
            out[key] = value
    return out


def evaluate_single(poly, rho, source, target):
    """Single-component evaluation, defaulting to the zero matrix."""
    out = evaluate(poly, rho)
    got = out.get((source, target))
    if got is None:
        return mat_zero(rho.dims[target], rho.dims[source], rho.exact)
    return got


def trace_superpotential(w, rho):
    """Sum over cyclic words of coefficient times the trace of any rotation."""
    total = Fraction(0) if rho.exact else 0.0
    for word, coeff in w.items():
        value = mat_trace(rho.path_value(word.to_path()))
        total += (coeff if rho.exact else float(coeff)) * value
    return total


# -- critical-locus identity ---------------------------------------------------


def child_seed(seed, k):
    return seed * 1_000_003 + k


def _symbolic_setup(quiver, w, dims):
    import sympy

    symbols = {}
    mats = {}
    for arrow in quiver.arrows:
        rows, cols = dims[arrow.target], dims[arrow.source]
        grid = [
            [
                sympy.Symbol(f"{arrow.name}__{r}_{c}")
                for c in range(cols)
            ]
            for r in range(rows)
        ]
        symbols[arrow.name] = grid
        mats[arrow.name] = sympy.Matrix(grid)
    expr = sympy.Integer(0)
    for word, coeff in w.items():
        path = word.to_path()
        prod = sympy.eye(dims[path.source])
        for arrow_id in path.arrows:
            prod = mats[quiver.arrows[arrow_id].name] * prod
        expr += sympy.Rational(coeff.numerator, coeff.denominator) \
            * prod.trace()
    expr = sympy.expand(expr)
    return symbols, expr


def critical_identity_check(quiver, w, dims, samples=20, seed=0,
                            finite_difference=True, fd_tolerance=1e-8):
    """Check that the gradient of the trace potential is the transposed
    evaluation of the cyclic derivatives, and that the Hessian is symmetric.

    The symbolic side is computed independently with sympy; samples are
    exact rational points.  The optional finite-difference mode repeats the
    gradient comparison numerically with a 5-point stencil.
    """
    import sympy

    from .cyclic import cyclic_derivative

    symbols, expr = _symbolic_setup(quiver, w, dims)
    flat_symbols = [
        s for arrow in quiver.arrows for row in symbols[arrow.name]
        for s in row
    ]
    gradients = {
        s: sympy.expand(sympy.diff(expr, s)) for s in flat_symbols
    }
    hessian_symmetric = True
    for a_idx, sa in enumerate(flat_symbols):
        ga = gradients[sa]
        for sb in flat_symbols[a_idx + 1:]:
            if sympy.expand(sympy.diff(ga, sb)
                            - sympy.diff(gradients[sb], sa)) != 0:
                hessian_symmetric = False

    derivatives = {
        arrow.name: cyclic_derivative(quiver, w, arrow.name)
        for arrow in quiver.arrows
    }

    report = {
        "dim": list(dims),
        "samples": samples,
        "seed": seed,
        "hessian_symmetric": hessian_symmetric,
        "symbolic_gradient_ok": True,
        "finite_difference_ok": None,
        "max_fd_relative_error": None,
        "counterexamples": [],
    }
    max_fd_err = 0.0
    fd_ok = True
    for k in range(samples):
        rho = RepPoint.random(quiver, dims, child_seed(seed, k))
        subs = {}
        for arrow in quiver.arrows:
            grid = symbols[arrow.name]
            mat = rho.matrices[arrow.name]
            for r, row in enumerate(grid):
                for c, s in enumerate(row):
                    v = mat[r][c]
                    subs[s] = sympy.Rational(v.numerator, v.denominator)
        for arrow in quiver.arrows:
            # exact evaluation of the cyclic derivative, transposed
            value = mat_transpose(evaluate_single(
                derivatives[arrow.name], rho, arrow.target, arrow.source
            ))
            grid = symbols[arrow.name]
            for r, row in enumerate(grid):
                for c, s in enumerate(row):
                    got = gradients[s].xreplace(subs)
                    want = value[r][c]
                    if sympy.Rational(want.numerator,
                                      want.denominator) != got:
                        report["symbolic_gradient_ok"] = False
                        report["counterexamples"].append({
                            "sample": k,
                            "arrow": arrow.name,
                            "entry": [r, c],
                            "symbolic": str(got),
                            "evaluated_transpose": str(want),
                        })
        if finite_difference:
            rho_f = rho.to_float()
            h = 1e-3
            for arrow in quiver.arrows:
                value = mat_transpose(evaluate_single(
                    derivatives[arrow.name], rho,
                    arrow.target, arrow.source,
                ))
                mat = rho_f.matrices[arrow.name]
                for r in range(len(mat)):
                    for c in range(len(mat[0])):
                        base = mat[r][c]
                        samples_at = []
                        for step in (-2, -1, 1, 2):
                            mat[r][c] = base + step * h
                            samples_at.append(
                                trace_superpotential(w, rho_f)
                            )
                        mat[r][c] = base
                        fm2, fm1, fp1, fp2 = samples_at
                        fd = (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h)
                        exact = float(value[r][c])
                        err = abs(fd - exact) / max(1.0, abs(exact))
                        max_fd_err = max(max_fd_err, err)
                        if err > fd_tolerance:
                            fd_ok = False
                            report["counterexamples"].append({
                                "sample": k,
                                "arrow": arrow.name,
                                "entry": [r, c],
                                "finite_difference": fd,
                                "exact": exact,
                            })
    if finite_difference:
        report["finite_difference_ok"] = fd_ok
        report["max_fd_relative_error"] = max_fd_err
    return report


# -- King stability for dimension vector (1, .., 1) -----------------------------


def theta_stability_ones(quiver, rho, theta):
    """Verdict for a representation with every node dimension equal to one.

    Submodules correspond to node subsets closed under following arrows
    with nonzero value; the verdict scans all proper nonempty closed
    subsets.  A nonzero total weight fails immediately, with a distinct
    reason in the report.
    """
    r = quiver.node_count
    if rho.dims != tuple([1] * r):
        raise QuiverAlgError("stability scan requires all dimensions one")
    if len(theta) != r:
        raise QuiverAlgError("theta length mismatch")
    total = sum(theta)
    if total != 0:
        return {
            "verdict": "unstable",
            "reason": "nonzero total weight",
            "total_weight": total,
            "witness": None,
        }
    nonzero = [
        (arrow.source, arrow.target)
        for arrow in quiver.arrows
        if rho.matrices[arrow.name][0][0] != 0
    ]
    semistable = True
    stable = True
    witness_unstable = None
    witness_strict = None
    for mask in range(1, (1 << r) - 1):
        subset = [i for i in range(r) if mask & (1 << i)]
        inside = set(subset)
        if any(i in inside and j not in inside for i, j in nonzero):
            continue
        weight = sum(theta[i] for i in subset)
        if weight < 0:
            semistable = False
            stable = False
            if witness_unstable is None:
                witness_unstable = subset
        elif weight == 0:
            stable = False
            if witness_strict is None:
                witness_strict = subset
    if not semistable:
        return {
            "verdict": "unstable",
            "reason": "negative weight on a closed subset",
            "witness": witness_unstable,
        }
    if not stable:
        return {
            "verdict": "semistable",
            "reason": "zero weight on a closed subset",
            "witness": witness_strict,
        }
    return {"verdict": "stable", "reason": None, "witness": None}
