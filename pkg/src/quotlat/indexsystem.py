"""Index systems: quotient structures over sublattices of minimal vectors.

Every choice of n independent minimal vectors spans a finite-index
sublattice; the multiset of quotient group structures over all such
choices is the index system.  Two engines compute it: plain depth-first
enumeration of independent subsets (small kissing numbers), and orderly
generation keeping one lexicographically minimal representative per orbit
of the induced permutation group on antipodal pairs (large, symmetric
lattices).  Group structures come from exact integer determinants plus
residue ranks, with the full Smith form as the tie-breaking fallback.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .exact import snf_divisors
from .lattices import GramMatrix, automorphisms, half_set_permutations

try:
    from numba import njit

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba is a hard dependency in practice
    _HAVE_NUMBA = False

    def njit(*a, **k):
        def wrap(f):
            return f
        return wrap(a[0]) if a and callable(a[0]) else wrap


# ---------------------------------------------------------------------------
# quotient structure of an integer matrix with small determinant
# ---------------------------------------------------------------------------

def _rank_mod_p(rows, p):
    a = [[x % p for x in row] for row in rows]
    m, n = len(a), len(a[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] % p), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def _int_det(rows):
    a = [list(map(int, row)) for row in rows]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][k]), None)
            if piv is None:
                return 0
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def group_structure_from_matrix(rows):
    """Nontrivial elementary divisors (largest first) of Z^n / rowspan."""
    d = abs(_int_det(rows))
    if d == 0:
        return None
    if d == 1:
        return ()
    n = len(rows)
    # squarefree determinants force a cyclic quotient; prime powers are
    # resolved by the rank deficiency modulo p; the rest falls back to SNF
    struct = _structure_by_ranks(rows, d, n)
    if struct is not None:
        return struct
    divs = [x for x in snf_divisors(rows) if x > 1]
    return tuple(sorted(divs, reverse=True))


def _factor_small(d):
    out = {}
    x = d
    p = 2
    while p * p <= x:
        while x % p == 0:
            out[p] = out.get(p, 0) + 1
            x //= p
        p += 1
    if x > 1:
        out[x] = out.get(x, 0) + 1
    return out


def _structure_by_ranks(rows, d, n):
    fac = _factor_small(d)
    per_prime = {}
    for p, e in fac.items():
        if e == 1:
            per_prime[p] = [1]
            continue
        deficiency = n - _rank_mod_p(rows, p)
        # partition e into `deficiency` parts, each >= 1: unique for most
        # small cases; bail out (to SNF) when ambiguous
        parts = _unique_partition(e, deficiency)
        if parts is None:
            return None
        per_prime[p] = parts
    width = max(len(v) for v in per_prime.values())
    divisors = []
    for i in range(width):
        val = 1
        for p, parts in per_prime.items():
            padded = [0] * (width - len(parts)) + sorted(parts)
            val *= p ** padded[i]
        divisors.append(val)
    return tuple(sorted((x for x in divisors if x > 1), reverse=True))


def _unique_partition(e, parts):
    if parts <= 0 or parts > e:
        return None
    if parts == 1:
        return [e]
    if parts == e:
        return [1] * e
    if e - parts == 1:
        return [2] + [1] * (parts - 1)
    return None  # ambiguous (e.g. 2^4 into 2 parts: 8*2 vs 4*4)


def quotient_type_of_subset(G, subset):
    """Quotient structure of the span of a size-n subset of the halfset."""
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    rows = [list(x) for x in subset]
    if len(rows) != gram.n:
        raise ValueError("subset must have exactly n vectors")
    return group_structure_from_matrix(rows)


# ---------------------------------------------------------------------------
# result container
# ---------------------------------------------------------------------------

@dataclass
class IndexSystem:
    mode: str                   # brute | orderly
    counts: dict                # quotient type tuple -> count
    group_order: int | None = None
    subsets_seen: int = 0

    @property
    def types(self):
        return set(self.counts)

    def max_index(self) -> int:
        best = 1
        for t in self.counts:
            size = 1
            for d in t:
                size *= d
            best = max(best, size)
        return best

    def sorted_items(self):
        def key(t):
            size = 1
            for d in t:
                size *= d
            return (size, len(t), t)
        return sorted(self.counts.items(), key=lambda kv: key(kv[0]))


# ---------------------------------------------------------------------------
# brute force over all independent subsets
# ---------------------------------------------------------------------------

def index_system_bruteforce(G, budget=10 ** 7) -> IndexSystem:
    """Count every independent n-subset of the halfset by quotient type.

    Depth-first search over sorted indices with incremental fraction-free
    elimination, so dependent prefixes are cut early.  The budget bounds
    the number of visited nodes; exceeding it raises rather than returning
    a partial answer.
    """
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    n = gram.n
    half = gram.half_set()
    s = len(half)
    if comb(s, n) > budget * 8:
        raise RuntimeError("halfset too large for brute force: C(%d,%d)" % (s, n))
    vecs = np.array(half, dtype=np.int64)
    counts = {}
    seen = 0
    chosen = []

    # echelon stack: list of reduced matrices (fraction-free rows)
    def extend(start, echelon):
        nonlocal seen
        k = len(chosen)
        if k == n:
            rows = [list(half[i]) for i in chosen]
            t = group_structure_from_matrix(rows)
            counts[t] = counts.get(t, 0) + 1
            return
        for t in range(start, s - (n - k) + 1):
            seen += 1
            if seen > budget:
                raise RuntimeError("brute-force budget exceeded")
            red = _reduce_against(echelon, vecs[t])
            if red is None:
                continue
            chosen.append(t)
            extend(t + 1, echelon + [red])
            chosen.pop()

    extend(0, [])
    return IndexSystem("brute", counts, None, seen)


def _reduce_against(echelon, v):
    w = [int(x) for x in v]
    for row, lead in echelon:
        if w[lead]:
            piv = row[lead]
            f = w[lead]
            w = [piv * a - f * b for a, b in zip(w, row)]
    lead = next((i for i, x in enumerate(w) if x), None)
    if lead is None:
        return None
    g = np.gcd.reduce([abs(x) for x in w if x]) or 1
    w = [x // g for x in w]
    if w[lead] < 0:
        w = [-x for x in w]
    return (w, lead)


# ---------------------------------------------------------------------------
# the induced permutation group on the halfset
# ---------------------------------------------------------------------------

@dataclass
class HalfSetAction:
    """The halfset with all elements of the induced permutation group."""

    halfset: list
    perms: np.ndarray           # (group order, s) int32, full element list
    generators: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.perms)

    @property
    def s(self) -> int:
        return len(self.halfset)


def close_group(s, gen_perms, limit=10 ** 6):
    """All elements generated by the given permutation tuples."""
    ident = tuple(range(s))
    seen = {ident}
    frontier = [ident]
    while frontier:
        cur = frontier.pop()
        for g in gen_perms:
            nxt = tuple(g[c] for c in cur)
            if nxt not in seen:
                if len(seen) >= limit:
                    raise RuntimeError("group order exceeds the configured limit")
                seen.add(nxt)
                frontier.append(nxt)
    return sorted(seen)


def half_set_action(G, max_order=10 ** 6) -> HalfSetAction:
    """Full induced permutation group of Aut on the halfset of G."""
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    half, perms = half_set_permutations(gram)
    if len(perms) > max_order:
        raise RuntimeError("group order exceeds the configured limit")
    arr = np.array(perms, dtype=np.int32)
    return HalfSetAction(half, arr, generators=list(perms[:0]))


def save_group(action: HalfSetAction, path):
    with open(path, "w") as fh:
        for p in np.asarray(action.perms):
            fh.write(" ".join(str(int(x)) for x in p) + "\n")


def load_group(halfset, path) -> HalfSetAction:
    perms = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                perms.append(tuple(int(t) for t in line.split()))
    return HalfSetAction(list(halfset), np.array(perms, dtype=np.int32))


# ---------------------------------------------------------------------------
# orderly generation of lexicographically minimal independent subsets
# ---------------------------------------------------------------------------

@njit(cache=True)
def _extend_chunk(bases, vecs, perms, trans_off, trans_dat, orbmin,
                  out_rows, out_base, echelon_buf):
    """Extend each sorted base set by one index, keeping extensions that are
    independent and lexicographically minimal in their orbit.

    Returns the number of accepted rows written into out_rows.  Layout:
    bases is (m, k); out_rows is (cap, k+1); echelon_buf is (k+1, n)."""
    m, k = bases.shape
    s, n = vecs.shape
    ngroup = perms.shape[0]
    written = 0
    img = np.empty(k + 1, dtype=np.int32)
    for b in range(m):
        # fraction-free echelon of the base vectors
        rank = 0
        for i in range(k):
            v = vecs[bases[b, i]]
            for j in range(n):
                echelon_buf[rank, j] = v[j]
            for r in range(rank):
                lead = -1
                for j in range(n):
                    if echelon_buf[r, j] != 0:
                        lead = j
                        break
                f = echelon_buf[rank, lead]
                if f != 0:
                    piv = echelon_buf[r, lead]
                    for j in range(n):
                        echelon_buf[rank, j] = (piv * echelon_buf[rank, j]
                                                - f * echelon_buf[r, j])
                    # keep entries small
                    g = 0
                    for j in range(n):
                        a = echelon_buf[rank, j]
                        if a < 0:
                            a = -a
                        if a != 0:
                            if g == 0:
                                g = a
                            else:
                                while a != 0:
                                    g, a = a, g % a
                    if g > 1:
                        for j in range(n):
                            echelon_buf[rank, j] //= g
            nz = False
            for j in range(n):
                if echelon_buf[rank, j] != 0:
                    nz = True
                    break
            if nz:
                rank += 1
        first = bases[b, 0]
        start = bases[b, k - 1] + 1
        for t in range(start, s):
            if orbmin[t] < first:
                continue
            # independence: reduce vecs[t] against the echelon
            ok = False
            for j in range(n):
                echelon_buf[k, j] = vecs[t, j]
            for r in range(rank):
                lead = -1
                for j in range(n):
                    if echelon_buf[r, j] != 0:
                        lead = j
                        break
                f = echelon_buf[k, lead]
                if f != 0:
                    piv = echelon_buf[r, lead]
                    for j in range(n):
                        echelon_buf[k, j] = (piv * echelon_buf[k, j]
                                             - f * echelon_buf[r, j])
            for j in range(n):
                if echelon_buf[k, j] != 0:
                    ok = True
                    break
            if not ok:
                continue
            # minimality: only group elements sending some member to the
            # first element of the candidate can produce a smaller image
            minimal = True
            for pos in range(k + 1):
                p = bases[b, pos] if pos < k else t
                lo = trans_off[first * s + p]
                hi = trans_off[first * s + p + 1]
                for e in range(lo, hi):
                    g = trans_dat[e]
                    for i in range(k):
                        img[i] = perms[g, bases[b, i]]
                    img[k] = perms[g, t]
                    # insertion sort
                    for i in range(1, k + 1):
                        key = img[i]
                        jj = i - 1
                        while jj >= 0 and img[jj] > key:
                            img[jj + 1] = img[jj]
                            jj -= 1
                        img[jj + 1] = key
                    # lexicographic compare img vs base+t
                    smaller = False
                    equal = True
                    for i in range(k + 1):
                        ref = bases[b, i] if i < k else t
                        if img[i] != ref:
                            equal = False
                            smaller = img[i] < ref
                            break
                    if smaller:
                        minimal = False
                        break
                if not minimal:
                    break
            if not minimal:
                continue
            for i in range(k):
                out_rows[written, i] = bases[b, i]
            out_rows[written, k] = t
            out_base[written] = b
            written += 1
    return written


@njit(cache=True)
def _type_keys_chunk(rows, vecs, out_det, out_r2, out_r3):
    """|det|, rank deficiency mod 2 and mod 3 for each size-n subset."""
    m, n = rows.shape
    a = np.empty((n, n), dtype=np.int64)
    b = np.empty((n, n), dtype=np.int64)
    for idx in range(m):
        for i in range(n):
            for j in range(n):
                a[i, j] = vecs[rows[idx, i], j]
        # Bareiss determinant
        sign = 1
        prev = 1
        detv = 0
        singular = False
        for i in range(n):
            for j in range(n):
                b[i, j] = a[i, j]
        for kk in range(n - 1):
            if b[kk, kk] == 0:
                piv = -1
                for i in range(kk + 1, n):
                    if b[i, kk] != 0:
                        piv = i
                        break
                if piv == -1:
                    singular = True
                    break
                for j in range(n):
                    tmp = b[kk, j]
                    b[kk, j] = b[piv, j]
                    b[piv, j] = tmp
                sign = -sign
            for i in range(kk + 1, n):
                for j in range(kk + 1, n):
                    b[i, j] = (b[i, j] * b[kk, kk] - b[i, kk] * b[kk, j]) // prev
                b[i, kk] = 0
            prev = b[kk, kk]
        if singular:
            out_det[idx] = 0
            out_r2[idx] = 0
            out_r3[idx] = 0
            continue
        detv = sign * b[n - 1, n - 1]
        if detv < 0:
            detv = -detv
        out_det[idx] = detv
        for p in (2, 3):
            if detv % (p * p) != 0:
                if p == 2:
                    out_r2[idx] = 0
                else:
                    out_r3[idx] = 0
                continue
            for i in range(n):
                for j in range(n):
                    b[i, j] = a[i, j] % p
            r = 0
            for c in range(n):
                piv = -1
                for i in range(r, n):
                    if b[i, c] % p != 0:
                        piv = i
                        break
                if piv == -1:
                    continue
                for j in range(n):
                    tmp = b[r, j]
                    b[r, j] = b[piv, j]
                    b[piv, j] = tmp
                inv = 1
                for cand in range(1, p):
                    if (b[r, c] * cand) % p == 1:
                        inv = cand
                        break
                for j in range(n):
                    b[r, j] = (b[r, j] * inv) % p
                for i in range(n):
                    if i != r and b[i, c] != 0:
                        f = b[i, c]
                        for j in range(n):
                            b[i, j] = (b[i, j] - f * b[r, j]) % p
                r += 1
            if p == 2:
                out_r2[idx] = n - r
            else:
                out_r3[idx] = n - r
    return 0


def _build_transporters(perms: np.ndarray, orbmin: np.ndarray):
    """CSR lists of group elements g with g(p) == x, for x an orbit minimum."""
    ngroup, s = perms.shape
    counts = np.zeros(s * s + 1, dtype=np.int64)
    mins = set(int(x) for x in np.unique(orbmin))
    for g in range(ngroup):
        row = perms[g]
        for p in range(s):
            x = int(row[p])
            if x in mins:
                counts[x * s + p + 1] += 1
    off = np.cumsum(counts).astype(np.int64)
    dat = np.empty(off[-1], dtype=np.int32)
    cursor = off[:-1].copy()
    for g in range(ngroup):
        row = perms[g]
        for p in range(s):
            x = int(row[p])
            if x in mins:
                dat[cursor[x * s + p]] = g
                cursor[x * s + p] += 1
    return off, dat


def index_system_orderly(G, action: HalfSetAction | None = None,
                         workdir=None, chunk=2048,
                         max_group_order=10 ** 6,
                         progress=None) -> IndexSystem:
    """Orbit counts of quotient types via orderly generation.

    Level by level, sorted independent subsets that are lexicographically
    minimal in their orbit are extended by one larger index; minimality is
    decided against the full element list of the group, restricted to the
    provably sufficient transporters onto the first element.  With a
    workdir, finished levels are streamed to sorted block files.
    """
    gram = G if isinstance(G, GramMatrix) else GramMatrix(G)
    if action is None:
        action = half_set_action(gram, max_order=max_group_order)
    if action.order > max_group_order:
        raise RuntimeError("group order exceeds the configured limit")
    n = gram.n
    half = action.halfset
    s = len(half)
    vecs = np.array(half, dtype=np.int64)
    if np.abs(vecs).max() >= 1 << 18:
        raise RuntimeError("halfset coordinates too large for the fast path")
    perms = np.asarray(action.perms, dtype=np.int32)
    orbmin = perms.min(axis=0).astype(np.int32)
    trans_off, trans_dat = _build_transporters(perms, orbmin)

    level = np.array([[p] for p in sorted(set(int(x) for x in orbmin))],
                     dtype=np.int32)
    store = _BlockStore(workdir, gram) if workdir else None
    if store:
        store.write_level(1, level)
    for k in range(1, n):
        outs = []
        cap = chunk * s
        out_rows = np.empty((cap, k + 1), dtype=np.int32)
        out_base = np.empty(cap, dtype=np.int32)
        ech = np.empty((k + 1, n), dtype=np.int64)
        for lo in range(0, len(level), chunk):
            part = level[lo:lo + chunk]
            wrote = _extend_chunk(part, vecs, perms, trans_off, trans_dat,
                                  orbmin, out_rows, out_base, ech)
            outs.append(out_rows[:wrote].copy())
            if progress:
                progress(k + 1, lo + len(part), len(level),
                         sum(len(o) for o in outs))
        level = np.concatenate(outs) if outs else np.empty((0, k + 1), np.int32)
        if store:
            store.write_level(k + 1, level)

    counts = {}
    m = len(level)
    out_det = np.empty(m, dtype=np.int64)
    out_r2 = np.empty(m, dtype=np.int32)
    out_r3 = np.empty(m, dtype=np.int32)
    _type_keys_chunk(level, vecs, out_det, out_r2, out_r3)
    for i in range(m):
        t = _type_from_keys(int(out_det[i]), int(out_r2[i]), int(out_r3[i]))
        if t is None:
            rows = [list(half[j]) for j in level[i]]
            t = group_structure_from_matrix(rows)
        counts[t] = counts.get(t, 0) + 1
    return IndexSystem("orderly", counts, action.order, int(m))


def _type_from_keys(d, r2def, r3def):
    """Quotient type from |det| and rank deficiencies, None if ambiguous."""
    if d == 0:
        raise AssertionError("singular subset escaped the independence test")
    if d == 1:
        return ()
    fac = _factor_small(d)
    per_prime = {}
    for p, e in fac.items():
        if e == 1:
            per_prime[p] = [1]
            continue
        if p == 2:
            deficiency = r2def
        elif p == 3:
            deficiency = r3def
        else:
            deficiency = None
        parts = _unique_partition(e, deficiency) if deficiency else None
        if parts is None:
            return None
        per_prime[p] = parts
    width = max(len(v) for v in per_prime.values())
    divisors = []
    for i in range(width):
        val = 1
        for p, parts in per_prime.items():
            padded = [0] * (width - len(parts)) + sorted(parts)
            val *= p ** padded[i]
        divisors.append(val)
    return tuple(sorted((x for x in divisors if x > 1), reverse=True))


# ---------------------------------------------------------------------------
# block files
# ---------------------------------------------------------------------------

class _BlockStore:
    """Sorted level blocks on disk: a JSON header plus raw int32 rows."""

    def __init__(self, workdir, gram: GramMatrix):
        self.dir = workdir
        os.makedirs(workdir, exist_ok=True)
        digest = hashlib.sha256(repr(gram.key()).encode()).hexdigest()[:16]
        self.tag = digest

    def path(self, k):
        return os.path.join(self.dir, "level_%02d_%s.blk" % (k, self.tag))

    def write_level(self, k, rows: np.ndarray):
        header = {"lattice": self.tag, "k": k, "count": int(len(rows))}
        with open(self.path(k), "wb") as fh:
            fh.write((json.dumps(header) + "\n").encode())
            fh.write(np.ascontiguousarray(rows, dtype=np.int32).tobytes())

    def read_level(self, k):
        with open(self.path(k), "rb") as fh:
            header = json.loads(fh.readline().decode())
            data = np.frombuffer(fh.read(), dtype=np.int32)
        return data.reshape(header["count"], header["k"])
