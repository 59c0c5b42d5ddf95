"""Deciding whether a code is realized by a lattice pair.

Given a code, the candidate lattice is presented by an unknown Gram matrix
G of a canonical basis; the basis vectors of the designated sublattice have
known integer coordinate rows, and realizability of the code says exactly
that the affine slice {G : G[ebar_i] = 1} meets the region where all
nonzero integer vectors have G[x] >= 1, with equality achieved only by
norm-1 vectors.  The search alternates exact LP solves over a growing
outer approximation with exact separation: either an indefiniteness
witness or the current set of too-short vectors is added as new cuts.

Optionally the search is restricted to the subspace of matrices invariant
under the automorphisms of the coordinate frame (the permutations of the
ebar vectors induced by symmetries of the code), which shrinks the LP
drastically and cannot change the feasibility answer: the barycenter of
the face is itself invariant.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import lcm

from .codes import Code
from .exact import (
    Q, QONE, QZERO, det, evaluate, hnf_basis, kernel_basis, ldlt, mat_inverse,
    mat_mul, qify, quad_functional, solve, sym_to_vec, trace_functional,
    vec_to_sym,
)
from .lattices import GramMatrix, shortest_vectors
from .simplex import INFEASIBLE, OPTIMAL, UNBOUNDED, ExactLP


@dataclass
class CodeGeometry:
    """Coordinate data of a code: basis, sublattice rows, quotient size."""

    code: Code
    basis: list          # rows of the canonical lattice basis over the e_i
    ebar: list           # integer coordinate rows of the e_i in that basis
    index: int           # the quotient group order

    @property
    def n(self) -> int:
        return self.code.n


def build_geometry(code: Code) -> CodeGeometry:
    """Canonical basis of <Z^n, words/d> and the e_i coordinates in it."""
    if not code.independent_generators():
        raise ValueError("generator words are not independent")
    n = code.n
    gens = [[QONE if i == j else QZERO for j in range(n)] for i in range(n)]
    for d, w in zip(code.moduli, code.words):
        gens.append([Q(a, d) for a in w])
    basis = hnf_basis(gens)
    binv = mat_inverse(basis)
    ebar = []
    for i in range(n):
        row = [binv[i][j] for j in range(n)]
        if any(x.denominator != 1 for x in row):
            raise AssertionError("sublattice coordinates must be integral")
        ebar.append([int(x) for x in row])
    index = abs(int(1 / det(basis)))
    return CodeGeometry(code, basis, ebar, index)


def initial_vector_set(geom: CodeGeometry):
    """Seed vectors: the ebar rows and their pairwise sums and differences.

    These pin every inner product of the e_i into [-1/2, 1/2] on the outer
    polyhedron, which bounds each entry of G and hence the trace objective.
    """
    vs = [tuple(e) for e in geom.ebar]
    n = geom.n
    for i in range(n):
        for j in range(i + 1, n):
            vs.append(tuple(a + b for a, b in zip(geom.ebar[i], geom.ebar[j])))
            vs.append(tuple(a - b for a, b in zip(geom.ebar[i], geom.ebar[j])))
    return vs


# ---------------------------------------------------------------------------
# symmetries of the coordinate frame
# ---------------------------------------------------------------------------

def code_permutation_group(code: Code, budget=200000):
    """Generators of the coordinate permutations preserving the code.

    Identical columns of the element matrix commute freely, so adjacent
    transpositions inside blocks of equal columns are emitted directly; the
    remaining symmetry (maps between distinct columns) is found by a
    backtrack over one representative column per distinct content.
    """
    els = code.elements()
    n = code.n
    cols = [tuple(w[j] for w in els) for j in range(n)]
    gens = []
    by_content = {}
    for j, c in enumerate(cols):
        by_content.setdefault(c, []).append(j)
    for group in by_content.values():
        for a, b in zip(group, group[1:]):
            perm = list(range(n))
            perm[a], perm[b] = b, a
            gens.append(tuple(perm))

    # representative search across distinct column contents
    reps = [group[0] for group in by_content.values()]
    if len(reps) > 1:
        colset = {}
        for j in reps:
            colset[j] = cols[j]
        elset = set(els)
        found = []
        nodes = 0

        def extend(mapping, used):
            nonlocal nodes
            nodes += 1
            if nodes > budget:
                return
            if len(mapping) == len(reps):
                found.append(dict(mapping))
                return
            src = reps[len(mapping)]
            for dst in reps:
                if dst in used:
                    continue
                # partial multiset check on the mapped coordinates
                srcs = [reps[i] for i in range(len(mapping) + 1)]
                dsts = [mapping.get(s, dst) for s in srcs]
                proj_src = sorted(tuple(w[j] for j in srcs) for w in els)
                proj_dst = sorted(tuple(w[j] for j in dsts) for w in els)
                if proj_src != proj_dst:
                    continue
                mapping[src] = dst
                used.add(dst)
                extend(mapping, used)
                del mapping[src]
                used.discard(dst)

        extend({}, set())
        for mp in found:
            if all(mp[s] == s for s in reps):
                continue
            # expand the representative map to a full permutation by sending
            # each block to the image block in order
            perm = [None] * n
            ok = True
            for src_rep, dst_rep in mp.items():
                src_block = by_content[cols[src_rep]]
                dst_block = by_content[cols[dst_rep]]
                if len(src_block) != len(dst_block):
                    ok = False
                    break
                for a, b in zip(src_block, dst_block):
                    perm[a] = b
            if ok and None not in perm:
                as_tuple = tuple(perm)
                # the induced map must preserve the element set
                img = sorted(tuple(w[perm.index(j)] for j in range(n)) for w in els)
                if img == sorted(els) and as_tuple not in gens:
                    gens.append(as_tuple)
    return gens


def face_automorphisms(geom: CodeGeometry):
    """Integer matrices M (row action x -> xM) permuting the ebar rows."""
    mats = []
    binv = mat_inverse(geom.basis)
    for perm in code_permutation_group(geom.code):
        n = geom.n
        P = [[QONE if perm[i] == j else QZERO for j in range(n)] for i in range(n)]
        M = mat_mul(geom.basis, mat_mul(P, binv))
        rows = []
        for row in M:
            if any(x.denominator != 1 for x in row):
                raise AssertionError("code symmetry must preserve the lattice")
            rows.append([int(x) for x in row])
        mats.append(rows)
    return mats


def invariant_subspace(mats, n):
    """Basis of the symmetric matrices fixed by all maps G -> M G M^t."""
    N = n * (n + 1) // 2
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    rows = []
    for M in mats:
        M = [[qify(x) for x in row] for row in M]
        for r, (i, j) in enumerate(pairs):
            row = [QZERO] * N
            for c, (k, l) in enumerate(pairs):
                coeff = M[i][k] * M[j][l] + (M[i][l] * M[j][k] if k != l else QZERO)
                row[c] = coeff
            row[r] -= QONE
            rows.append(row)
    if not rows:
        return [vec for vec in _unit_vectors(N)]
    return kernel_basis(rows)


def _unit_vectors(N):
    for i in range(N):
        v = [QZERO] * N
        v[i] = QONE
        yield v


# ---------------------------------------------------------------------------
# the affine search space
# ---------------------------------------------------------------------------

@dataclass
class FaceSpace:
    """Affine parametrization g(y) = g0 + sum y_j Z_j of the search slice."""

    n: int
    offset: list              # g0, length n(n+1)/2
    directions: list          # the Z_j, each length n(n+1)/2
    equalities: list          # the vectors whose form value is pinned to 1

    @property
    def dim(self) -> int:
        return len(self.directions)

    def gram_rows(self, y):
        g = list(self.offset)
        for yj, Zj in zip(y, self.directions):
            if yj:
                g = [a + yj * b for a, b in zip(g, Zj)]
        return vec_to_sym(g, self.n)

    def constraint(self, v):
        """(coefficients, rhs) of G[v] >= 1 in the y coordinates."""
        ell = quad_functional(v)
        coeffs = [sum(a * b for a, b in zip(ell, Z)) for Z in self.directions]
        rhs = QONE - sum(a * b for a, b in zip(ell, self.offset))
        return coeffs, rhs

    def functional(self, ell):
        """Linear functional ell . vec(G) as (coefficients, constant)."""
        coeffs = [sum(a * b for a, b in zip(ell, Z)) for Z in self.directions]
        const = sum(a * b for a, b in zip(ell, self.offset))
        return coeffs, const

    def coords_of(self, gram_rows):
        """y with g(y) = vec(gram_rows); None if the point is off the slice."""
        target = sym_to_vec(gram_rows)
        cols = self.directions
        rows = [[cols[j][i] for j in range(len(cols))] for i in range(len(target))]
        rhs = [t - o for t, o in zip(target, self.offset)]
        return solve(rows, rhs)


def face_space(vectors, n, mats=None) -> FaceSpace | None:
    """Affine slice {G : G[v] = 1 for the given vectors}, optionally within
    the subspace invariant under the given maps.  None when the slice is
    empty (which certifies non-realizability)."""
    W = invariant_subspace(mats or [], n)
    if not W:
        return None
    rows = []
    rhs = []
    for v in vectors:
        ell = quad_functional(v)
        rows.append([sum(a * b for a, b in zip(ell, w)) for w in W])
        rhs.append(QONE)
    u0 = solve(rows, rhs)
    if u0 is None:
        return None
    kern = kernel_basis(rows)
    N = n * (n + 1) // 2
    offset = [sum(u0[t] * W[t][i] for t in range(len(W))) for i in range(N)]
    dirs = []
    for kv in kern:
        dirs.append([sum(kv[t] * W[t][i] for t in range(len(W))) for i in range(N)])
    return FaceSpace(n, offset, dirs, [tuple(v) for v in vectors])


# ---------------------------------------------------------------------------
# the feasibility loop
# ---------------------------------------------------------------------------

def _round_half(x):
    # floor(x + 1/2), exact on rationals
    num, den = x.numerator, x.denominator
    return int((2 * num + den) // (2 * den))


def separation_cut(rows, witness):
    """A short integer vector v with rows[v] < 1, preferring tiny entries.

    The exact indefiniteness witness can carry enormous coordinates when
    the search corners itself against a thin cone; any integer vector whose
    form value is below 1 is an equally sound cut, so the witness direction
    is rounded at growing scales until one violates the norm bound."""
    mx = max(abs(c) for c in witness)
    if mx <= 64:
        return list(witness)
    direction = [Q(c, mx) for c in witness]
    for q in range(1, 65):
        v = [_round_half(q * d) for d in direction]
        if any(v) and evaluate(rows, v) < 1:
            return v
    return list(witness)


@dataclass
class FeasibilityOutcome:
    status: str                       # feasible | infeasible | inconclusive
    witness: GramMatrix | None
    vectors: list                     # the cut set V at exit
    iterations: int
    geometry: CodeGeometry | None = None
    space: FaceSpace | None = None
    note: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"


def feasibility(code_or_geom, symmetrize=True, coord_cap=10 ** 6,
                max_rounds=500) -> FeasibilityOutcome:
    """Realizability of a code, with an exact witness either way.

    The returned Gram matrix (feasible case) has minimum exactly 1 and
    value 1 on every ebar row; the vector set (infeasible case) spans an
    empty outer polyhedron re-checkable by any LP solver.  Exceeding the
    coordinate cap or the round limit yields the distinct status
    'inconclusive', never a silent answer.
    """
    geom = code_or_geom if isinstance(code_or_geom, CodeGeometry) \
        else build_geometry(code_or_geom)
    mats = face_automorphisms(geom) if symmetrize else []
    space = face_space(geom.ebar, geom.n, mats)
    if space is None:
        return FeasibilityOutcome("infeasible", None, [], 0, geom, None,
                                  note="empty affine slice")
    tr_coeffs, tr_const = space.functional(trace_functional(geom.n))
    lp = ExactLP(space.dim, tr_coeffs, tr_const)
    V = []
    seen = set()

    def add_vector(v):
        v = tuple(v)
        assert v not in seen, "separation produced a duplicate cut"
        seen.add(v)
        V.append(v)
        coeffs, rhs = space.constraint(v)
        lp.add_ge(coeffs, rhs)

    for v in initial_vector_set(geom):
        if tuple(v) not in seen:
            add_vector(v)

    for rounds in range(1, max_rounds + 1):
        res = lp.solve()
        if res.status == INFEASIBLE:
            return FeasibilityOutcome("infeasible", None, V, rounds, geom, space)
        if res.status == UNBOUNDED:
            return FeasibilityOutcome("inconclusive", None, V, rounds, geom,
                                      space, note="unbounded objective")
        rows = space.gram_rows(res.point)
        fac = ldlt(rows)
        if fac.status != "posdef":
            w = separation_cut(rows, fac.witness)
            if max(abs(c) for c in w) > coord_cap:
                return FeasibilityOutcome("inconclusive", None, V, rounds,
                                          geom, space, note="coordinate cap")
            add_vector(w)
            continue
        gram = GramMatrix(rows, check=False)
        try:
            short = shortest_vectors(gram, QONE, node_budget=4 * 10 ** 6)
        except RuntimeError:
            # pathologically thin optimum: a partial set of violated cuts
            # is enough to keep the search moving
            short = shortest_vectors(gram, QONE, stop_below=QONE)
        mn = min(val for _, val in short)
        if mn == QONE:
            return FeasibilityOutcome("feasible", gram, V, rounds, geom, space)
        too_short = [x for x, val in short if val == mn]
        if any(max(abs(c) for c in x) > coord_cap for x in too_short):
            return FeasibilityOutcome("inconclusive", None, V, rounds, geom,
                                      space, note="coordinate cap")
        for x in too_short:
            add_vector(x)
    return FeasibilityOutcome("inconclusive", None, V, max_rounds, geom, space,
                              note="round limit")
