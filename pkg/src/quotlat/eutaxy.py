"""Eutaxy classification with exact certificates.

A well-rounded Gram matrix G is weakly eutactic when its inverse is a real
combination of the projections x x^t over the minimal vectors, eutactic
when a strictly positive combination exists, and strongly eutactic when the
all-equal combination works.  Each answer here comes with rational
coefficients that reconstruct G^{-1} exactly; strict positivity is decided
by an exact LP maximizing the smallest coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    Q, QONE, QZERO, det, kernel_basis, mat_inverse, mat_scale, solve,
    sym_to_vec,
)
from .lattices import GramMatrix
from .simplex import OPTIMAL, ExactLP


@dataclass
class EutaxyResult:
    klass: str                      # none | weak | eutactic | strong
    coefficients: dict | None       # halfset representative -> coefficient

    def is_at_least(self, level: str) -> bool:
        order = ["none", "weak", "eutactic", "strong"]
        return order.index(self.klass) >= order.index(level)


def _projection_column(x, n):
    mat = [[Q(x[i] * x[j]) for j in range(n)] for i in range(n)]
    return sym_to_vec(mat)


def _orbits(count, perms):
    parent = list(range(count))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for p in perms:
        for i, j in enumerate(p):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    groups = {}
    for i in range(count):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def eutaxy_class(G, half_perms=None) -> EutaxyResult:
    """Classify G; half_perms (permutations of the halfset under known
    automorphisms) shrink the linear system by orbit averaging and never
    change the answer, since averaging a solution over the group yields an
    invariant one."""
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    n = gram.n
    half = gram.half_set()
    # columns grouped into orbits when a group action is available
    orbits = _orbits(len(half), half_perms or [])
    target = sym_to_vec(mat_inverse(gram.mat))
    N = len(target)
    cols = []
    for orb in orbits:
        col = [QZERO] * N
        for idx in orb:
            pc = _projection_column(half[idx], n)
            col = [a + b for a, b in zip(col, pc)]
        cols.append(col)
    rows = [[cols[c][r] for c in range(len(cols))] for r in range(N)]

    mu0 = solve(rows, target)
    if mu0 is None:
        return EutaxyResult("none", None)

    # strong: the single coefficient n / (2 s min) per vector of the full
    # antipodal set, i.e. n / (s min) per halfset representative
    const = Q(n) / (gram.s() * gram.minimum())
    if all(sum(rows[r][c] * const for c in range(len(cols))) == target[r]
           for r in range(N)):
        coeffs = {half[i]: const for i in range(len(half))}
        return EutaxyResult("strong", coeffs)

    kern = kernel_basis(rows)
    if not kern:
        best = mu0
        t_opt = min(mu0)
    else:
        lp = ExactLP(len(kern) + 1, [QZERO] * len(kern) + [QONE])
        for r in range(len(mu0)):
            coeffs = [kv[r] for kv in kern] + [-QONE]
            lp.add_ge(coeffs, -mu0[r])
        res = lp.solve()
        assert res.status == OPTIMAL, "eutaxy LP must be bounded"
        t_opt = res.value
        best = [mu0[r] + sum(res.point[j] * kern[j][r] for j in range(len(kern)))
                for r in range(len(mu0))]
    coeffs = {}
    for orb, mu in zip(orbits, best):
        for idx in orb:
            coeffs[half[idx]] = mu
    return EutaxyResult("eutactic" if t_opt > 0 else "weak", coeffs)


def reconstruct_inverse(G, coefficients):
    """Sum of coef * x x^t over the halfset; equals G^{-1} for valid output."""
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    n = gram.n
    acc = [[QZERO] * n for _ in range(n)]
    for x, c in coefficients.items():
        for i in range(n):
            for j in range(n):
                acc[i][j] += c * x[i] * x[j]
    return acc


# ---------------------------------------------------------------------------
# the distinguished point of a face
# ---------------------------------------------------------------------------

def _adjugate(rows):
    d = det(rows)
    if d == 0:
        raise ZeroDivisionError
    inv = mat_inverse(rows)
    return mat_scale(inv, d)


def _poly_from_samples(samples):
    """Exact Lagrange interpolation: list of (t, f(t)) -> coefficients."""
    k = len(samples)
    coeffs = [QZERO] * k
    for i, (ti, fi) in enumerate(samples):
        basis = [QONE]
        denom = QONE
        for j, (tj, _) in enumerate(samples):
            if i == j:
                continue
            new = [QZERO] * (len(basis) + 1)
            for p, c in enumerate(basis):
                new[p] -= c * tj
                new[p + 1] += c
            basis = new
            denom *= (ti - tj)
        scale = fi / denom
        for p, c in enumerate(basis):
            coeffs[p] += scale * c
    return coeffs


def _rational_roots_in_unit_interval(coeffs):
    """Rational roots of the polynomial strictly inside (0, 1).

    Floating root estimates only seed candidates; every candidate is
    verified exactly, so no root with denominator below the search limit
    is missed and nothing unverified is reported."""
    import numpy as np

    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    floats = np.roots([float(c) for c in reversed(coeffs)])
    out = []
    for z in floats:
        if abs(z.imag) > 1e-9 or not (1e-12 < z.real < 1 - 1e-12):
            continue
        cand = Fraction(z.real).limit_denominator(10 ** 9)
        t = Q(cand.numerator, cand.denominator)
        if 0 < t < 1 and sum(c * t ** p for p, c in enumerate(coeffs)) == 0:
            out.append(t)
    return sorted(set(out))


def weakly_eutactic_point(face) -> GramMatrix | None:
    """The unique weakly eutactic matrix in the face's relative interior,
    when it exists and is rational.

    The barycenter is tested first (it settles every symmetric face, where
    uniqueness forces the invariant point).  On one-dimensional faces the
    critical-point condition reduces to a polynomial in the edge parameter
    whose rational roots are found exactly; faces of higher dimension with
    an asymmetric critical point are out of scope and yield None.
    """
    bary = face.barycenter
    if eutaxy_class(bary).klass != "none":
        return bary
    if face.polytope_dim != 1:
        return None
    v0, v1 = face.vertex_ys[0], face.vertex_ys[-1]
    space = face.space
    dvec = [b - a for a, b in zip(v0, v1)]
    dir_rows = _dir_rows(space, dvec)
    samples = []
    t = 0
    n = bary.n
    while len(samples) < n + 1:
        t += 1
        tq = Q(1, 2) + Q(t, 2 * (n + 3))
        rows = space.gram_rows([a + tq * d for a, d in zip(v0, dvec)])
        try:
            adj = _adjugate(rows)
        except ZeroDivisionError:
            continue
        val = sum(adj[i][j] * dir_rows[i][j] for i in range(n) for j in range(n))
        samples.append((tq, val))
    coeffs = _poly_from_samples(samples)
    for root in _rational_roots_in_unit_interval(coeffs):
        y = [a + root * d for a, d in zip(v0, dvec)]
        cand = GramMatrix(space.gram_rows(y), check=False)
        if sorted(cand.half_set()) != sorted(bary.half_set()):
            continue
        if eutaxy_class(cand).klass != "none":
            return cand
    return None


def _dir_rows(space, dvec):
    from .exact import vec_to_sym
    g = [QZERO] * len(space.offset)
    for c, Z in zip(dvec, space.directions):
        if c:
            g = [a + c * b for a, b in zip(g, Z)]
    return vec_to_sym(g, space.n)
