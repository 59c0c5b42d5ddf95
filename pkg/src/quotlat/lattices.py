"""Lattices given by positive definite Gram matrices.

A lattice is handled purely through a Gram matrix of one of its bases, with
exact rational entries.  Shortest vectors are enumerated exactly (no floats
in any bound), so minimum, kissing number, perfection rank and isometry
answers are certificates rather than estimates.
"""

from __future__ import annotations

from math import isqrt, lcm

import numpy as np

from .exact import (
    Q, QONE, QZERO, det, dot, evaluate, freeze, identity, ldlt, mat,
    mat_inverse, mat_mul, mat_vec, qify, rank, transpose,
)

# floor(gamma_n^(n/2)): exact for n <= 8 and n = 24, proven upper bounds for
# n = 9, 10 (sphere-packing bounds 30.21 and 59.44)
_INDEX_BOUNDS = {1: 1, 2: 1, 3: 1, 4: 2, 5: 2, 6: 4, 7: 8, 8: 16,
                 9: 30, 10: 59, 24: 2 ** 24}


def max_index_bound(n: int) -> int:
    """Largest possible index of a sublattice generated by minimal vectors."""
    try:
        return _INDEX_BOUNDS[n]
    except KeyError:
        raise ValueError("no stored index bound for dimension %d" % n) from None


class GramMatrix:
    """A positive definite symmetric rational matrix with cached invariants."""

    __slots__ = ("mat", "n", "_ldlt", "_det", "_min", "_halfset")

    def __init__(self, rows, check=True):
        self.mat = [[qify(x) for x in row] for row in rows]
        self.n = len(self.mat)
        self._ldlt = None
        self._det = None
        self._min = None
        self._halfset = None
        if check:
            for i in range(self.n):
                if len(self.mat[i]) != self.n:
                    raise ValueError("Gram matrix must be square")
                for j in range(i + 1, self.n):
                    if self.mat[i][j] != self.mat[j][i]:
                        raise ValueError("Gram matrix must be symmetric")
            if self.factorization().status != "posdef":
                raise ValueError("Gram matrix must be positive definite")

    def factorization(self):
        if self._ldlt is None:
            self._ldlt = ldlt(self.mat)
        return self._ldlt

    def det(self):
        if self._det is None:
            d = QONE
            for piv in self.factorization().D:
                d *= piv
            self._det = d
        return self._det

    def scaled(self, c) -> "GramMatrix":
        c = qify(c)
        return GramMatrix([[c * x for x in row] for row in self.mat], check=False)

    def minimum(self):
        if self._min is None:
            self._populate_min()
        return self._min

    def half_set(self):
        """One representative per antipodal pair of minimal vectors."""
        if self._halfset is None:
            self._populate_min()
        return self._halfset

    def s(self) -> int:
        return len(self.half_set())

    def _populate_min(self):
        bound = min(self.mat[i][i] for i in range(self.n))
        found = shortest_vectors(self, bound)
        m = min(v for _, v in found)
        self._min = m
        self._halfset = sorted(x for x, v in found if v == m)

    def key(self):
        return freeze(self.mat)

    def __eq__(self, other):
        return isinstance(other, GramMatrix) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "GramMatrix(%dx%d, min=%s)" % (self.n, self.n, self._min)


def _as_rows(G):
    return G.mat if isinstance(G, GramMatrix) else G


# ---------------------------------------------------------------------------
# exact shortest-vector enumeration
# ---------------------------------------------------------------------------

def _floor_sqrt_shift(a, b, p, q):
    """floor(sqrt(a/b) - p/q) for integers a >= 0, b > 0, q > 0."""
    s = isqrt(a * b * q * q)
    den = b * q
    z = (s - p * b) // den
    # s is only the floor of an irrational root; correct a possible off-by-one
    while (((z + 1) * q + p) ** 2) * b <= a * q * q:
        z += 1
    return z


def _coord_range(c, t):
    """All integers z with (z + c)^2 <= t, as an inclusive (lo, hi) pair."""
    if t < 0:
        return 1, 0
    a, b = int(t.numerator), int(t.denominator)
    p, q = int(c.numerator), int(c.denominator)
    hi = _floor_sqrt_shift(a, b, p, q)
    lo = -_floor_sqrt_shift(a, b, -p, q)
    return lo, hi


class _EnumStop(Exception):
    pass


def shortest_vectors(G, bound, stop_below=None, node_budget=None):
    """All antipodal representatives x with 0 < G[x] <= bound.

    Exact Fincke-Pohst enumeration on the pivoted LDL^t of G: every interval
    endpoint is computed by integer square roots, so the returned list is
    provably complete when neither cutoff fires.  With stop_below set, the
    search aborts as soon as a vector of value strictly below it appears
    (near-degenerate matrices outside the norm-1 region make the full tree
    enormous, but such a short vector is all their callers need); with a
    node_budget, exceeding it raises RuntimeError unless an early hit was
    requested and found.  Representatives are normalized so that the first
    nonzero coordinate is positive, and sorted by (value, vector).
    """
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    bound = qify(bound)
    if bound <= 0:
        raise ValueError("enumeration bound must be positive")
    fac = gram.factorization()
    n = gram.n
    L, D, perm = fac.L, fac.D, fac.perm
    # value of the permuted form: sum_k D[k] * (z_k + sum_{j>k} L[j][k] z_j)^2
    z = [0] * n
    carry = [[QZERO] * n for _ in range(n + 1)]  # carry[level][k]: partial sums
    out = []
    nodes = [0]

    def emit(val):
        x = [0] * n
        for i in range(n):
            x[perm[i]] = z[i]
        for xi in x:
            if xi:
                if xi < 0:
                    x = [-v for v in x]
                break
        out.append((tuple(x), val))
        if stop_below is not None and val < stop_below:
            raise _EnumStop

    def descend(k, rem, zero_prefix):
        nodes[0] += 1
        if node_budget is not None and nodes[0] > node_budget:
            raise RuntimeError("enumeration node budget exceeded")
        ck = carry[k + 1][k]
        lo, hi = _coord_range(ck, rem / D[k])
        if zero_prefix and lo < 0:
            lo = 0
        for zk in range(lo, hi + 1):
            z[k] = zk
            term = D[k] * (zk + ck) ** 2
            if k == 0:
                val = bound - (rem - term)
                if val > 0 and not (zero_prefix and zk == 0):
                    emit(val)
            else:
                row = carry[k]
                prev = carry[k + 1]
                if zk:
                    for j in range(k):
                        row[j] = prev[j] + L[k][j] * zk
                else:
                    row[:k] = prev[:k]
                descend(k - 1, rem - term, zero_prefix and zk == 0)
        z[k] = 0

    try:
        descend(n - 1, bound, True)
    except _EnumStop:
        out.sort()
        out.sort(key=lambda p: p[1])
        return out
    out.sort()
    out.sort(key=lambda p: p[1])
    return out


def minimum(G):
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    return gram.minimum()


def kissing_half(G) -> int:
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    return gram.s()


def perfection_rank(G) -> int:
    """Rank of the span of the projections x x^t over the minimal vectors."""
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    rows = []
    for x in gram.half_set():
        rows.append([Q(x[i] * x[j]) for i in range(gram.n) for j in range(i, gram.n)])
    return rank(rows)


def hermite_power(G):
    """min(G)^n / det(G), the n-th power of the Hermite invariant."""
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    return gram.minimum() ** gram.n / gram.det()


def dual(G) -> GramMatrix:
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    return GramMatrix(mat_inverse(gram.mat), check=False)


def direct_sum(G1, G2) -> GramMatrix:
    a, b = _as_rows(G1), _as_rows(G2)
    na, nb = len(a), len(b)
    rows = []
    for i in range(na):
        rows.append(list(a[i]) + [QZERO] * nb)
    for i in range(nb):
        rows.append([QZERO] * na + list(b[i]))
    return GramMatrix(rows, check=False)


def sublattice_gram(G, basis_rows) -> GramMatrix:
    """Gram matrix M G M^t of the sublattice spanned by the given rows."""
    g = _as_rows(G)
    m = mat(basis_rows)
    gm = mat_mul(m, mat_mul(g, transpose(m)))
    return GramMatrix(gm)


# ---------------------------------------------------------------------------
# isometry and automorphisms via backtracking over minimal vectors
# ---------------------------------------------------------------------------

def _signed_vector_table(gram, norms):
    """Signed lattice vectors of each required norm plus their dot matrix."""
    bound = max(norms)
    half = [x for x, _ in shortest_vectors(gram, bound)]
    vecs = []
    for x in half:
        vecs.append(x)
        vecs.append(tuple(-c for c in x))
    V = np.array(vecs, dtype=np.int64)
    den = lcm(*[int(x.denominator) for row in gram.mat for x in row])
    Gint = np.array([[int(x * den) for x in row] for row in gram.mat], dtype=object)
    dots = V @ Gint @ V.T  # object dtype: exact integer dot products * den
    return vecs, dots, den


def _gram_backtrack(G1, G2, find_all):
    """Unimodular U with U^t G1 U = G2, by mapping basis vectors of the
    second lattice onto vectors of the first with matching inner products."""
    g1 = G1 if isinstance(G1, GramMatrix) else GramMatrix(G1)
    g2 = G2 if isinstance(G2, GramMatrix) else GramMatrix(G2)
    n = g1.n
    if g2.n != n or g1.det() != g2.det() or g1.minimum() != g2.minimum():
        return []
    if g1.s() != g2.s():
        return []

    norms = sorted(set(g2.mat[i][i] for i in range(n)))
    vecs, dots, den = _signed_vector_table(g1, norms)
    m = len(vecs)

    # fingerprint of a vector: multiset of its inner products against all
    # minimal vectors; preserved by isometries, so candidates for the image
    # of a basis vector must match that basis vector's fingerprint
    smin1 = g1.minimum() * den
    min_cols = [i for i in range(m) if dots[i, i] == smin1]
    fp1 = [tuple(sorted(Q(int(dots[i, c]), den) for c in min_cols))
           for i in range(m)]

    half2 = g2.half_set()
    signed2 = [v for x in half2 for v in (x, tuple(-c for c in x))]
    basis_fp = []
    for j in range(n):
        row = g2.mat[j]
        vals = [dot(row, v) for v in signed2]
        basis_fp.append(tuple(sorted(vals)))

    target = [[den * x for x in row] for row in g2.mat]
    cand0 = []
    for j in range(n):
        mask = [i for i in range(m)
                if dots[i, i] == target[j][j] and fp1[i] == basis_fp[j]]
        if not mask:
            return []
        cand0.append(np.array(mask, dtype=np.int64))

    order = sorted(range(n), key=lambda j: len(cand0[j]))
    results = []
    chosen = [0] * n

    def extend(depth, cands):
        if depth == n:
            U = [[0] * n for _ in range(n)]
            for j in range(n):
                col = vecs[chosen[j]]
                for i in range(n):
                    U[i][j] = col[i]
            results.append(U)
            return not find_all
        pos = order[depth]
        for c in cands[depth]:
            chosen[pos] = c
            nxt = []
            ok = True
            for d2 in range(depth + 1, n):
                pos2 = order[d2]
                want = target[pos][pos2]
                sub = cands[d2][np.asarray(dots[c][cands[d2]] == want,
                                           dtype=bool)]
                if len(sub) == 0:
                    ok = False
                    break
                nxt.append(sub)
            if ok:
                if extend(depth + 1, cands[:depth + 1] + nxt):
                    return True
        return False

    extend(0, [cand0[j] for j in order])
    return results


def isometry_test(G1, G2):
    """A unimodular witness U with U^t G1 U = G2, or None."""
    res = _gram_backtrack(G1, G2, find_all=False)
    return res[0] if res else None


def automorphisms(G):
    """All U in GL_n(Z) with U^t G U = G (the full automorphism group)."""
    return _gram_backtrack(G, G, find_all=True)


def half_set_permutations(G, mats=None):
    """The permutation group induced on the antipodal minimal-vector pairs.

    Returns (halfset, sorted list of permutation tuples).  Central -1 acts
    trivially, so for indecomposable lattices the group has |Aut|/2 elements.
    """
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    half = gram.half_set()
    index = {x: i for i, x in enumerate(half)}
    if mats is None:
        mats = automorphisms(gram)
    perms = set()
    for U in mats:
        img = []
        for x in half:
            y = [sum(U[i][j] * x[j] for j in range(gram.n)) for i in range(gram.n)]
            for c in y:
                if c:
                    if c < 0:
                        y = [-v for v in y]
                    break
            img.append(index[tuple(y)])
        perms.add(tuple(img))
    return half, sorted(perms)


# ---------------------------------------------------------------------------
# text format: first line n, then n rows of entries (ints or p/q)
# ---------------------------------------------------------------------------

def parse_gram(text: str) -> GramMatrix:
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(line.split())
    if not tokens:
        raise ValueError("empty Gram matrix input")
    n = int(tokens[0])
    need = n * n
    if len(tokens) - 1 != need:
        raise ValueError("expected %d entries for a %dx%d Gram matrix, got %d"
                         % (need, n, n, len(tokens) - 1))
    vals = [qify(t) for t in tokens[1:]]
    rows = [vals[i * n:(i + 1) * n] for i in range(n)]
    return GramMatrix(rows)


def format_gram(G) -> str:
    rows = _as_rows(G)
    lines = [str(len(rows))]
    for row in rows:
        lines.append(" ".join(str(x) for x in row))
    return "\n".join(lines) + "\n"
