"""Exact rational arithmetic and dense linear algebra.

Everything downstream (shortest-vector enumeration, feasibility testing,
polyhedral traversal) makes yes/no claims, so every routine here is exact:
rationals are gmpy2.mpq, matrices are plain lists of lists of mpq, and no
routine ever rounds.  Matrices are small (n <= 24), so simplicity beats
asymptotics throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, lcm

from gmpy2 import mpq, mpz

Q = mpq

QZERO = mpq(0)
QONE = mpq(1)


def qify(x) -> mpq:
    """Coerce ints, strings like '3/4', and rationals to mpq."""
    if isinstance(x, mpq):
        return x
    return mpq(x)


# ---------------------------------------------------------------------------
# basic matrix/vector helpers (row-major lists of lists)
# ---------------------------------------------------------------------------

def mat(rows):
    return [[qify(x) for x in row] for row in rows]


def identity(n):
    return [[QONE if i == j else QZERO for j in range(n)] for i in range(n)]


def zeros(r, c):
    return [[QZERO] * c for _ in range(r)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v, m):
    return [sum(v[i] * m[i][j] for i in range(len(v))) for j in range(len(m[0]))]


def mat_add(a, b, scale=QONE):
    return [[x + scale * y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, c):
    c = qify(c)
    return [[c * x for x in row] for row in a]


def mat_eq(a, b):
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def freeze(m):
    """Hashable snapshot of a matrix."""
    return tuple(tuple(row) for row in m)


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def evaluate(G, x):
    """The quadratic form value x^t G x.

    Equals the trace inner product of G with the rank-one projection x x^t.
    """
    n = len(G)
    if len(x) != n:
        raise ValueError("dimension mismatch: %d-dim form, %d-dim vector" % (n, len(x)))
    total = QZERO
    for i in range(n):
        xi = x[i]
        if not xi:
            continue
        row = G[i]
        total += xi * xi * row[i]
        for j in range(i + 1, n):
            if x[j]:
                total += 2 * xi * x[j] * row[j]
    return total


def trace_inner(A, B):
    """<A,B> = Tr(AB) for symmetric A, B."""
    n = len(A)
    total = QZERO
    for i in range(n):
        total += A[i][i] * B[i][i]
        for j in range(i + 1, n):
            total += 2 * A[i][j] * B[i][j]
    return total


# ---------------------------------------------------------------------------
# symmetric matrices as vectors over the n(n+1)/2 upper-triangle coordinates
# ---------------------------------------------------------------------------

def sym_pairs(n):
    return [(i, j) for i in range(n) for j in range(i, n)]


def sym_to_vec(G):
    n = len(G)
    return [G[i][j] for i in range(n) for j in range(i, n)]


def vec_to_sym(v, n):
    G = zeros(n, n)
    k = 0
    for i in range(n):
        for j in range(i, n):
            G[i][j] = v[k]
            G[j][i] = v[k]
            k += 1
    return G


def quad_functional(x):
    """Row vector f with f . vec(G) = G[x] for every symmetric G."""
    n = len(x)
    out = []
    for i in range(n):
        for j in range(i, n):
            out.append(qify(x[i] * x[i]) if i == j else qify(2 * x[i] * x[j]))
    return out


def trace_functional(n):
    out = []
    for i in range(n):
        for j in range(i, n):
            out.append(QONE if i == j else QZERO)
    return out


# ---------------------------------------------------------------------------
# elimination: rref, rank, kernel, solving
# ---------------------------------------------------------------------------

def rref(m):
    """Reduced row echelon form (copy) and its pivot columns."""
    a = [[qify(x) for x in row] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m):
    if not m:
        return 0
    return len(rref(m)[1])


def kernel_basis(m):
    """Basis of the right kernel {x : m x = 0}."""
    cols = len(m[0])
    a, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [QZERO] * cols
        v[fc] = QONE
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(v)
    return basis


def solve(m, b):
    """One solution of m x = b, or None if inconsistent."""
    rows = len(m)
    cols = len(m[0])
    aug = [m[i][:] + [qify(b[i])] for i in range(rows)]
    a, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [QZERO] * cols
    for r, pc in enumerate(pivots):
        x[pc] = a[r][cols]
    return x


def mat_inverse(m):
    n = len(m)
    aug = [m[i][:] + identity(n)[i] for i in range(n)]
    a, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in a]


def det(m):
    """Determinant by Gaussian elimination."""
    a = [[qify(x) for x in row] for row in m]
    n = len(a)
    sign = 1
    d = QONE
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return QZERO
        if p != c:
            a[c], a[p] = a[p], a[c]
            sign = -sign
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d if sign > 0 else -d


# ---------------------------------------------------------------------------
# LDL^t with symmetric pivoting
# ---------------------------------------------------------------------------

@dataclass
class LDLT:
    """Outcome of the pivoted LDL^t attempt on a symmetric matrix.

    status is 'posdef', 'semidefinite' or 'indefinite'.  When status is not
    'posdef', witness is a nonzero integer vector v with G[v] <= 0 (strictly
    negative in the indefinite case).  For 'posdef', perm/L/D reconstruct the
    input: with P the permutation matrix of perm, P G P^t = L D L^t.
    """

    status: str
    perm: list
    L: list
    D: list
    witness: list | None


def _ldlt_lift_witness(a_orig, L, perm, k, y_reduced):
    # y_reduced lives on reduced coordinates k..n-1 (in permuted order); the
    # leading block is eliminated by back-substituting through L, which keeps
    # the quadratic form value of the reduced vector.
    n = len(a_orig)
    y = [QZERO] * n
    for i, val in enumerate(y_reduced):
        y[k + i] = qify(val)
    # solve for leading permuted coordinates: x_lead = -sum L columns action
    for i in range(k - 1, -1, -1):
        s = QZERO
        for j in range(i + 1, n):
            s += L[j][i] * y[j]
        y[i] = -s
    x = [QZERO] * n
    for i in range(n):
        x[perm[i]] = y[i]
    mult = lcm(*[int(v.denominator) for v in x]) if any(x) else 1
    out = [int(v * mult) for v in x]
    g = gcd(*[abs(v) for v in out]) if any(out) else 1
    return [v // g for v in out]


def ldlt(G, want_witness=True):
    """Pivoted exact LDL^t, deciding definiteness of a symmetric matrix.

    Pivot choice is the first nonzero diagonal entry (lowest index), so the
    factorization is deterministic.  Callers that only probe definiteness
    can pass want_witness=False to skip the (potentially expensive) integer
    witness construction.
    """
    n = len(G)
    a = [[qify(x) for x in row] for row in G]
    L = identity(n)
    D = [QZERO] * n
    perm = list(range(n))

    def swap(i, j):
        perm[i], perm[j] = perm[j], perm[i]
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        L[i], L[j] = L[j], L[i]
        for row in L:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        p = next((i for i in range(k, n) if a[i][i]), None)
        if p is None:
            # remaining diagonal all zero: either the block vanishes (PSD,
            # singular) or an off-diagonal entry makes the form indefinite
            off = next(((i, j) for i in range(k, n) for j in range(i + 1, n)
                        if a[i][j]), None)
            if off is None:
                if not want_witness:
                    return LDLT("semidefinite", perm, L, D, None)
                y = [QZERO] * (n - k)
                y[0] = QONE
                w = _ldlt_lift_witness(G, L, perm, k, y)
                return LDLT("semidefinite", perm, L, D, w)
            i, j = off
            if not want_witness:
                return LDLT("indefinite", perm, L, D, None)
            y = [QZERO] * (n - k)
            y[i - k] = QONE
            y[j - k] = QONE if a[i][j] < 0 else -QONE
            w = _ldlt_lift_witness(G, L, perm, k, y)
            return LDLT("indefinite", perm, L, D, w)
        if p != k:
            swap(k, p)
        piv = a[k][k]
        if piv < 0:
            if not want_witness:
                return LDLT("indefinite", perm, L, D, None)
            y = [QZERO] * (n - k)
            y[0] = QONE
            w = _ldlt_lift_witness(G, L, perm, k, y)
            return LDLT("indefinite", perm, L, D, w)
        D[k] = piv
        inv = 1 / piv
        for i in range(k + 1, n):
            f = a[i][k] * inv
            L[i][k] = f
            if f:
                for j in range(k + 1, n):
                    a[i][j] -= f * a[k][j]
                a[i][k] = QZERO
    return LDLT("posdef", perm, L, D, None)


# ---------------------------------------------------------------------------
# integer normal forms
# ---------------------------------------------------------------------------

def hnf_int(rows):
    """Row-style Hermite normal form of integer generators.

    Returns the canonical lower-triangular basis of the row lattice: positive
    diagonal, and below-diagonal entries reduced into [0, diagonal).  The
    input rows must generate a full-rank sublattice of Z^n.
    """
    n = len(rows[0])
    work = [[int(x) for x in row] for row in rows]
    basis = []
    for c in range(n):
        live = [r for r in work if r[c] != 0]
        rest = [r for r in work if r[c] == 0]
        if not live:
            raise ValueError("generators are rank deficient (column %d)" % c)
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            pivot = live[0]
            reduced = []
            for r in live[1:]:
                q = r[c] // pivot[c]
                r = [x - q * y for x, y in zip(r, pivot)]
                (reduced if r[c] != 0 else rest).append(r)
            live = [pivot] + reduced
        pivot = live[0]
        if pivot[c] < 0:
            pivot = [-x for x in pivot]
        basis.append(pivot)
        work = rest
    # canonical residues below the diagonal
    for i in range(n):
        for j in range(i):
            q = basis[i][j] // basis[j][j]
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], basis[j])]
    return basis


def hnf_basis(rows):
    """Canonical basis of the Z-module generated by rational row vectors.

    Clears the common denominator, runs the integer HNF and scales back, so
    the result does not depend on the order or redundancy of the generators.
    """
    rows = [[qify(x) for x in row] for row in rows]
    den = lcm(*[int(x.denominator) for row in rows for x in row])
    ints = [[int(x * den) for x in row] for row in rows]
    basis = hnf_int(ints)
    return [[Q(x, den) for x in row] for row in basis]


def snf_divisors(rows):
    """Elementary divisors d1 | d2 | ... of an integer matrix.

    Iterated gcd elimination with smallest-magnitude pivot selection; trivial
    divisors (= 1) are kept so that the product over a square matrix equals
    |det|.  Zero rows/columns contribute nothing.
    """
    a = [[int(x) for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    divisors = []
    t = 0
    while True:
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        bi, bj = best
        a[t], a[bi] = a[bi], a[t]
        for row in a:
            row[t], row[bj] = row[bj], row[t]
        while True:
            piv = a[t][t]
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        a[t], a[i] = a[i], a[t]
                        piv = a[t][t]
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // piv
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        piv = a[t][t]
                        dirty = True
            if not dirty:
                break
        # divisibility repair: pivot must divide every later entry
        piv = a[t][t]
        bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                    if a[i][j] % piv), None)
        if bad is not None:
            i = bad[0]
            a[t] = [x + y for x, y in zip(a[t], a[i])]
            continue
        divisors.append(abs(piv))
        t += 1
        if t == m or t == n:
            break
    return divisors
