"""Catalog of named lattices used throughout the classification.

Root lattices are built from explicit vector models, the special
9-dimensional lattices from their published integral Gram matrices.  Every
entry stores its documented invariants (minimum, half kissing number s,
perfection rank, determinant); a self-check recomputes them on demand.
All catalog matrices are scaled to the smallest minimum making them
integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .exact import Q, hnf_basis, identity, mat_mul, transpose
from .lattices import GramMatrix


def _gram_of_rows(rows):
    return mat_mul(rows, transpose(rows))


def zn_gram(n: int) -> GramMatrix:
    return GramMatrix(identity(n), check=False)


def an_gram(n: int) -> GramMatrix:
    """Root lattice A_n: basis e_i = v_0 - v_i, norms 2, inner products 1."""
    return GramMatrix([[2 if i == j else 1 for j in range(n)] for i in range(n)],
                      check=False)


def dn_rows(n: int):
    rows = []
    for i in range(n - 1):
        row = [0] * n
        row[i], row[i + 1] = 1, -1
        rows.append(row)
    last = [0] * n
    last[n - 2], last[n - 1] = 1, 1
    rows.append(last)
    return rows


def dn_gram(n: int) -> GramMatrix:
    """Root lattice D_n (even coordinate sums in Z^n), minimum 2."""
    if n < 2:
        raise ValueError("D_n needs n >= 2")
    return GramMatrix(_gram_of_rows(dn_rows(n)))


def dn_plus_basis(n: int):
    """Basis of D_n^+ = <D_n, (1/2,...,1/2)> for even n, as rational rows."""
    gens = [[Q(x) for x in row] for row in dn_rows(n)]
    gens.append([Q(1, 2)] * n)
    return hnf_basis(gens)


def e8_gram() -> GramMatrix:
    return GramMatrix(_gram_of_rows(dn_plus_basis(8)))


def _dynkin_gram(edges, n):
    g = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    return GramMatrix(g)


def e7_gram() -> GramMatrix:
    return _dynkin_gram([(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)], 7)


def e6_gram() -> GramMatrix:
    return _dynkin_gram([(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)], 6)


def lambda9_gram() -> GramMatrix:
    """The 9-dimensional laminated lattice <E8, D9>, scaled to minimum 4."""
    gens = [[Q(x) for x in row] for row in dn_rows(9)]
    gens.append([Q(1, 2)] * 8 + [Q(0)])
    basis = hnf_basis(gens)
    g = _gram_of_rows(basis)
    return GramMatrix([[2 * x for x in row] for row in g])


L87_ROWS = [
    [4, 2, -2, 2, -2, 0, 2, -2, 2],
    [2, 4, -1, 0, -2, 2, 0, 0, 2],
    [-2, -1, 4, -2, 2, -1, -1, 1, -2],
    [2, 0, -2, 4, 0, 0, 2, -1, 2],
    [-2, -2, 2, 0, 4, -2, 0, 1, -2],
    [0, 2, -1, 0, -2, 4, 0, 1, 2],
    [2, 0, -1, 2, 0, 0, 4, -2, 0],
    [-2, 0, 1, -1, 1, 1, -2, 4, 0],
    [2, 2, -2, 2, -2, 2, 0, 0, 4],
]


def _sym_perturbation(entries, n=9):
    m = [[0] * n for _ in range(n)]
    for (i, j), v in entries.items():
        m[i][j] = v
        m[j][i] = v
    return m

# Directions along which the face of L87 reaches its six vertices (1-indexed
# positions (3,2),(3,6),(3,7) / (8,4),(8,5),(8,6) / (3,8) in the text).
L87_RAY_R = _sym_perturbation({(2, 1): 1, (2, 5): 1, (2, 6): 1})
L87_RAY_RP = _sym_perturbation({(7, 3): 1, (7, 4): 1, (7, 5): -1})
L87_RAY_RPP = _sym_perturbation({(2, 7): 1})


def l87_gram() -> GramMatrix:
    return GramMatrix(L87_ROWS)


def l99_gram() -> GramMatrix:
    rows = [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(L87_ROWS, L87_RAY_RPP)]
    return GramMatrix(rows)


L81_ROWS = [
    [4, 1, 1, 1, 2, 2, 2, 0, 2],
    [1, 4, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 4, 0, 0, 0, 0, 0, -1],
    [1, 0, 0, 4, 0, 0, 0, 0, 2],
    [2, 0, 0, 0, 4, 0, 0, 0, 2],
    [2, 0, 0, 0, 0, 4, 0, 0, 0],
    [2, 0, 0, 0, 0, 0, 4, 0, 1],
    [0, 0, 0, 0, 0, 0, 0, 4, 2],
    [2, 1, -1, 2, 2, 0, 1, 2, 4],
]


def l81_gram() -> GramMatrix:
    return GramMatrix(L81_ROWS)


# The three 9-dimensional lattices with a quotient of type (3,3), in the
# order of their classification rows: s = 27, 50 and 15.
TERNARY_33_ROWS = [
    [
        [94, 47, 47, 47, 47, 47, 0, 0, 47],
        [47, 90, 18, 5, 5, 5, -5, -5, 0],
        [47, 18, 90, 5, 5, 5, -5, -5, 0],
        [47, 5, 5, 90, 18, 18, 5, 5, 47],
        [47, 5, 5, 18, 90, 18, 5, 5, 47],
        [47, 5, 5, 18, 18, 90, 5, 5, 47],
        [0, -5, -5, 5, 5, 5, 90, 18, 47],
        [0, -5, -5, 5, 5, 5, 18, 90, 47],
        [47, 0, 0, 47, 47, 47, 47, 47, 94],
    ],
    [
        [18, 9, 9, 9, 9, 9, -3, -3, 0],
        [9, 18, 3, 3, 0, 0, -2, -2, -3],
        [9, 3, 18, 3, 0, 0, -2, -2, -3],
        [9, 3, 3, 18, 0, 0, -3, -3, -9],
        [9, 0, 0, 0, 18, 9, 0, 0, 9],
        [9, 0, 0, 0, 9, 18, 0, 0, 9],
        [-3, -2, -2, -3, 0, 0, 18, 3, 9],
        [-3, -2, -2, -3, 0, 0, 3, 18, 9],
        [0, -3, -3, -9, 9, 9, 9, 9, 18],
    ],
    [
        [120, 60, 60, 60, 60, 60, 0, 0, 0],
        [60, 108, 9, 9, 9, 9, 0, 0, 0],
        [60, 9, 108, 36, 9, 9, 0, 0, 42],
        [60, 9, 36, 108, 9, 9, 0, 0, 42],
        [60, 9, 9, 9, 108, 36, 0, 0, -42],
        [60, 9, 9, 9, 36, 108, 0, 0, -42],
        [0, 0, 0, 0, 0, 0, 108, 27, 54],
        [0, 0, 0, 0, 0, 0, 27, 108, 54],
        [0, 0, 42, 42, -42, -42, 54, 54, 110],
    ],
]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    gram: GramMatrix
    minimum: int
    s: int
    perfection: int
    det: int


def _entries():
    specs = []
    for n in range(1, 10):
        specs.append(("A%d" % n, an_gram(n), 2, n * (n + 1) // 2,
                      n * (n + 1) // 2, n + 1))
    for n in range(4, 10):
        specs.append(("D%d" % n, dn_gram(n), 2, n * (n - 1),
                      n * (n + 1) // 2, 4))
    specs.append(("E6", e6_gram(), 2, 36, 21, 3))
    specs.append(("E7", e7_gram(), 2, 63, 28, 2))
    specs.append(("E8", e8_gram(), 2, 120, 36, 1))
    specs.append(("Lambda9", lambda9_gram(), 4, 136, 45, 512))
    specs.append(("L87", l87_gram(), 4, 87, 42, 1024))
    specs.append(("L99", l99_gram(), 4, 99, 45, 768))
    specs.append(("L81", l81_gram(), 4, 81, 45, 1024))
    specs.append(("T27", GramMatrix(TERNARY_33_ROWS[0]), 90, 27, 23, 3282610981699584))
    specs.append(("T50", GramMatrix(TERNARY_33_ROWS[1]), 18, 50, 37, 1328602500))
    specs.append(("T15", GramMatrix(TERNARY_33_ROWS[2]), 108, 15, 14, 13996231528366080))
    return specs


_CATALOG: dict[str, CatalogEntry] | None = None


def catalog() -> dict[str, CatalogEntry]:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = {}
        for name, gram, mn, s, perf, d in _entries():
            _CATALOG[name] = CatalogEntry(name, gram, mn, s, perf, d)
    return _CATALOG


def entry(name: str) -> CatalogEntry:
    try:
        return catalog()[name]
    except KeyError:
        raise KeyError("unknown catalog lattice %r" % name) from None
