"""Codes over Z/dZ attached to lattice quotients.

A code is a finite list of generator words a^(i) in (Z/d_iZ)^n; the lattice
it describes is generated by Z^n together with the fractional vectors
(sum_j a_j^(i) e_j) / d_i.  This module owns the purely combinatorial side:
admissibility filters from the classical norm identity, generation of
candidate codes, the closed-form small-index classification, binary-code
invariants, and equivalence of codes under coordinate permutations, sign
changes and regeneration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd, lcm, prod

from .exact import Q, evaluate, hnf_basis, mat_inverse, snf_divisors


# ---------------------------------------------------------------------------
# codes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Code:
    """Generator words of a quotient code; moduli[i] is the modulus of words[i]."""

    n: int
    moduli: tuple
    words: tuple

    def __post_init__(self):
        if len(self.moduli) != len(self.words) or not self.words:
            raise ValueError("need one modulus per generator word")
        norm = tuple(tuple(int(a) % d for a in w)
                     for d, w in zip(self.moduli, self.words))
        object.__setattr__(self, "words", norm)
        for d, w in zip(self.moduli, self.words):
            if d < 2:
                raise ValueError("modulus must be >= 2")
            if len(w) != self.n:
                raise ValueError("word length must be n")
            g = gcd(d, *w)
            if g != 1:
                raise ValueError("word %s has order %d < %d" % (w, d // g, d))

    @property
    def k(self) -> int:
        return len(self.words)

    def span_modulus(self) -> int:
        return lcm(*self.moduli)

    def elements(self):
        """All members of the generated subgroup of (Z/DZ)^n, D = lcm."""
        D = self.span_modulus()
        lifted = [tuple(a * (D // d) % D for a in w)
                  for d, w in zip(self.moduli, self.words)]
        seen = {(0,) * self.n}
        frontier = [(0,) * self.n]
        while frontier:
            cur = frontier.pop()
            for g in lifted:
                nxt = tuple((a + b) % D for a, b in zip(cur, g))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return sorted(seen)

    def order(self) -> int:
        return len(self.elements())

    def independent_generators(self) -> bool:
        return self.order() == prod(self.moduli)

    def trivially_extends(self) -> bool:
        """True when some coordinate is zero in every generator."""
        return any(all(w[j] == 0 for w in self.words) for j in range(self.n))

    def quotient_type(self):
        return subgroup_type(self.elements(), self.span_modulus(), self.n)


def subgroup_type(elements, D, n):
    """Elementary divisors (descending, nontrivial) of a subgroup of (Z/D)^n."""
    rows = [[D if i == j else 0 for j in range(n)] for i in range(n)]
    rows += [list(w) for w in elements]
    basis = hnf_basis(rows)
    binv = mat_inverse(basis)
    coords = [[D * binv[i][j] for i in range(n)] for j in range(n)]
    ints = [[int(x) for x in row] for row in coords]
    divs = [d for d in snf_divisors(ints) if d > 1]
    return tuple(sorted(divs, reverse=True))


def parse_code(text: str) -> Code:
    tokens = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            tokens.append(line.split())
    if not tokens:
        raise ValueError("empty code input")
    head = [int(t) for t in tokens[0]]
    n, moduli = head[0], tuple(head[1:])
    words = tuple(tuple(int(t) for t in row) for row in tokens[1:])
    if len(words) != len(moduli):
        raise ValueError("expected %d generator lines" % len(moduli))
    return Code(n, moduli, words)


def format_code(code: Code) -> str:
    lines = [" ".join(str(x) for x in (code.n,) + code.moduli)]
    for w in code.words:
        lines.append(" ".join(str(a) for a in w))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Watson's identity and criterion
# ---------------------------------------------------------------------------

def watson_identity_check(e_gram, a, d):
    """Both sides of the norm identity for f = (sum a_i e_i)/d.

    With s_i the sign of a_i:
      (sum |a_i| - 2d) N(f)  =  sum |a_i| (N(f - s_i e_i) - N(e_i)).
    The two returned rationals agree for every Gram matrix of independent
    vectors e_1..e_n; callers use the pair as an exactness check.
    """
    n = len(a)
    d = int(d)
    fa = [Q(ai, d) for ai in a]
    nf = evaluate(e_gram, fa)
    lhs = (sum(abs(ai) for ai in a) - 2 * d) * nf
    rhs = Q(0)
    for i in range(n):
        if a[i] == 0:
            continue
        sgn = 1 if a[i] > 0 else -1
        shifted = list(fa)
        shifted[i] -= sgn
        rhs += abs(a[i]) * (evaluate(e_gram, shifted) - e_gram[i][i])
    return lhs, rhs


def fold(a, d):
    """Residue representative in 0..floor(d/2) up to sign."""
    r = a % d
    return min(r, d - r)


def type_of_word(word, d):
    """Cyclic type (m_1,...,m_{d//2}) of a word with no zero residues."""
    m = [0] * (d // 2)
    for a in word:
        r = fold(a, d)
        if r == 0:
            raise ValueError("cyclic type requires nonzero residues")
        m[r - 1] += 1
    return tuple(m)


def word_of_type(t):
    out = []
    for i, m in enumerate(t):
        out.extend([i + 1] * m)
    return tuple(out)


def units_half(d):
    """Representatives of (Z/dZ)^x / {+-1}."""
    return [u for u in range(1, d // 2 + 1) if gcd(u, d) == 1]


def unit_images(t, d):
    """All images of a cyclic type under the unit action."""
    out = []
    for u in units_half(d):
        m = [0] * (d // 2)
        for i, mult in enumerate(t):
            if mult:
                m[fold(u * (i + 1), d) - 1] += mult
        out.append(tuple(m))
    return out


def unit_orbit(t, d):
    """Lexicographically smallest type in the unit orbit."""
    return min(unit_images(t, d))


def watson_sum(t) -> int:
    return sum((i + 1) * m for i, m in enumerate(t))


def watson_filter(t, d) -> bool:
    """True when every unit image satisfies sum |a_i| >= 2d."""
    return all(watson_sum(img) >= 2 * d for img in unit_images(t, d))


def cyclic_subquotients(word, d):
    """(support size, order, type) of every proper cyclic subquotient.

    The order-e subgroup element of a word of order d is the word reduced
    mod e, for each divisor e of d; realizability of each reduced word on
    its own support is necessary for the full code."""
    out = []
    e = 2
    while e < d:
        if d % e == 0:
            reduced = [a % e for a in word]
            support = [a for a in reduced if a]
            out.append((len(support), e, type_of_word(support, e)))
        e += 1
    return out


def generate_cyclic_candidates(n, d):
    """Admissible cyclic types for dimension n and order d.

    All coordinates carry a nonzero residue (zero columns would extend a
    shorter code trivially), the residues are jointly coprime to d so the
    order really is d, the criterion above holds on the whole unit orbit,
    and one canonical representative per orbit is kept.
    """
    half = d // 2
    seen = set()
    out = []
    for t in _compositions(n, half):
        residues = [i + 1 for i, m in enumerate(t) if m]
        if not residues or gcd(d, *residues) != 1:
            continue
        if not watson_filter(t, d):
            continue
        canon = unit_orbit(t, d)
        if canon not in seen:
            seen.add(canon)
            out.append(canon)
    return sorted(out)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


# ---------------------------------------------------------------------------
# closed forms for cyclic quotients of order 2..6
# ---------------------------------------------------------------------------

# For order 6 in dimension 8 exactly six types exist; five carry exceptional
# invariants listed below, the remaining one follows the generic rules.
_D6_N8_SETS = {(3, 4, 1), (4, 3, 1), (5, 2, 1), (2, 4, 2), (4, 2, 2), (3, 3, 2)}

_EXCEPTIONS_D4 = {(4, 3): (23, 19), (6, 1): (21, 19), (8, 0): (16, 15)}
_EXCEPTIONS_D6 = {
    8: {(3, 4, 1): (31, 26), (4, 3, 1): (27, 25), (5, 2, 1): (120, 36),
        (2, 4, 2): (28, 22), (4, 2, 2): (36, 28)},
    9: {(4, 5, 0): (23, 20), (6, 3, 0): (18, 17), (7, 1, 1): (27, 25),
        (1, 5, 3): (23, 20), (5, 1, 3): (23, 20)},
}


def cyclic_closed_form(n, d):
    """Existence and (s, r) for every cyclic type of order d <= 6, dim n <= 9.

    This is the hand-derivable side of the classification, used as an oracle
    against the feasibility pipeline.  Types are keyed by their canonical
    unit-orbit representative.
    """
    if d > 6 or n > 9:
        raise ValueError("closed form covers d <= 6 and n <= 9 only")
    out = {}

    def put(t, s, r):
        out[unit_orbit(t, d)] = (s, r)

    if d == 2:
        if n >= 4:
            put((n,), *((12, 10) if n == 4 else (n, n)))
    elif d == 3:
        if n >= 6:
            put((n,), *((12, 11) if n == 6 else (n, n)))
    elif d == 4:
        if n >= 7:
            for m1 in range(4, n + 1):
                m2 = n - m1
                if (m1, m2) == (7, 0):
                    continue
                if (m1, m2) in _EXCEPTIONS_D4:
                    put((m1, m2), *_EXCEPTIONS_D4[(m1, m2)])
                elif m1 == 4:
                    put((m1, m2), n + 8, n + 6)
                else:
                    put((m1, m2), n, n)
    elif d == 5:
        if n >= 8:
            for m1 in range((n + 1) // 2, n + 1):
                m2 = n - m1
                if m1 + 2 * m2 < 10 or m2 + 2 * m1 < 10:
                    continue
                if (m1, m2) in {(4, 4), (6, 2), (8, 1), (10, 0)}:
                    put((m1, m2), 2 * n, 2 * n - 1)
                else:
                    put((m1, m2), n, n)
    elif d == 6:
        if n == 8:
            types = _D6_N8_SETS
        elif n == 9:
            types = set()
            for t in _compositions(9, 3):
                residues = [i + 1 for i, m in enumerate(t) if m]
                if not residues or gcd(6, *residues) != 1:
                    continue
                if watson_sum(t) >= 12 and t[0] + t[1] >= 6 and t[0] + t[2] >= 4:
                    types.add(t)
        else:
            types = set()
        for t in types:
            exc = _EXCEPTIONS_D6.get(n, {}).get(t)
            if exc is not None:
                put(t, *exc)
            elif t[0] + t[1] == 6:
                put(t, n + 6, n + 5)
            elif t[0] + t[2] == 4:
                put(t, n + 8, n + 6)
            else:
                put(t, n, n)
    return out


# ---------------------------------------------------------------------------
# binary codes: counting weight-4 words, completeness, predicted invariants
# ---------------------------------------------------------------------------

def _binary_check(code: Code):
    if any(d != 2 for d in code.moduli):
        raise ValueError("binary operations need modulus 2 throughout")
    els = code.elements()
    wmin = min((sum(1 for a in w if a) for w in els if any(w)), default=None)
    if wmin is not None and wmin < 4:
        raise ValueError("code has a word of weight %d < 4" % wmin)
    return els


def weight4_words(code: Code) -> int:
    els = _binary_check(code)
    return sum(1 for w in els if sum(w) == 4)


def uncovered_pairs(code: Code) -> int:
    els = _binary_check(code)
    n = code.n
    covered = set()
    for w in els:
        if sum(w) == 4:
            sup = [j for j in range(n) if w[j]]
            covered.update(itertools.combinations(sup, 2))
    return n * (n - 1) // 2 - len(covered)


def is_complete(code: Code) -> bool:
    return uncovered_pairs(code) == 0


def predicted_invariants(code: Code):
    """(s, r) of the lattice lifted from a binary code over Z^n."""
    w4 = weight4_words(code)
    t = uncovered_pairs(code)
    n = code.n
    return n + 8 * w4, n * (n + 1) // 2 - t


# ---------------------------------------------------------------------------
# equivalence of codes under signed coordinate permutations + regeneration
# ---------------------------------------------------------------------------

def canonical_form(code: Code):
    """Canonical matrix of the code class.

    Equivalence moves: permuting coordinates, negating coordinates, and
    re-choosing generators of the same subgroup.  The subgroup's element
    set is canonicalized column by column: at each depth keep the signed
    column choices minimizing the sorted row list so far.  The sequence of
    those depth-wise minima is a total invariant; the value returned is the
    final sorted element matrix of the winning assignment.
    """
    D = code.span_modulus()
    els = code.elements()
    n = code.n
    ncand = []
    for j in range(n):
        for sign in (1, -1):
            col = tuple((sign * w[j]) % D for w in els)
            ncand.append((j, sign, col))

    # branch: (used column set, rows built so far in reference element order)
    branches = [(frozenset(), tuple(() for _ in els))]
    for _ in range(n):
        scored = {}
        best = None
        for used, rows in branches:
            seen_cols = set()
            for j, sign, col in ncand:
                if j in used or col in seen_cols:
                    continue
                seen_cols.add(col)
                new_rows = tuple(r + (c,) for r, c in zip(rows, col))
                score = tuple(sorted(new_rows))
                if best is None or score < best:
                    best = score
                    scored = {(used | {j}, new_rows)}
                elif score == best:
                    scored.add((used | {j}, new_rows))
        branches = list(scored)
    return tuple(sorted(branches[0][1]))


def codes_equivalent(c1: Code, c2: Code) -> bool:
    if c1.n != c2.n or c1.span_modulus() != c2.span_modulus():
        return False
    if c1.quotient_type() != c2.quotient_type():
        return False
    return canonical_form(c1) == canonical_form(c2)


def dedupe_codes(codes):
    """One representative per equivalence class, preserving input order."""
    seen = set()
    out = []
    for c in codes:
        key = (c.n, c.quotient_type(), canonical_form(c))
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# candidate generation for two-generator (and iterated) quotient types
# ---------------------------------------------------------------------------

class CyclicOracle:
    """Realizability lookup for cyclic types, used to prune candidates.

    Orders 2..6 answer from the closed form; higher orders consult results
    handed over from pipeline runs, and unknown cases count as realizable
    so that pruning never discards a possible code.
    """

    def __init__(self, known=None):
        self.known = dict(known or {})

    def add(self, n, d, t, feasible: bool):
        self.known[(n, d, unit_orbit(t, d))] = feasible

    def realizable(self, n, d, t):
        if n < 1:
            return False
        t = unit_orbit(t, d)
        if not watson_filter(t, d):
            return False
        if d <= 6 and n <= 9:
            return t in cyclic_closed_form(n, d)
        return self.known.get((n, d, t), True)


def _word_combination_ok(words_lifted, D, coeffs, oracle: CyclicOracle):
    w = [sum(c * a for c, a in zip(coeffs, col)) % D
         for col in zip(*words_lifted)]
    g = gcd(D, *w)
    e = D // g
    if e <= 1:
        return True
    reduced = [(a // g) % e for a in w]
    support = [a for a in reduced if a != 0]
    t = type_of_word(support, e)
    return oracle.realizable(len(support), e, t)


def combination_prefilter(code: Code, oracle: CyclicOracle) -> bool:
    """Every cyclic subquotient generated by one element must be realizable."""
    D = code.span_modulus()
    lifted = [tuple(a * (D // d) % D for a in w)
              for d, w in zip(code.moduli, code.words)]
    ranges = [range(d) for d in code.moduli]
    for coeffs in itertools.product(*ranges):
        if not any(coeffs):
            continue
        if not _word_combination_ok(lifted, D, coeffs, oracle):
            return False
    return True


def _b_patterns(prev_words, prev_moduli, d2, n):
    """Next-generator words compatible with already normalized ones.

    Where every earlier word is sign-neutral (entry 0 or d/2) the new entry
    keeps its sign freedom and is folded into 0..d2/2; elsewhere the full
    residue range must be scanned since the signs were already spent.
    Within maximal blocks of coordinates on which all earlier words agree,
    entries are taken non-decreasing.
    """
    neutral = [all(w[j] == 0 or 2 * w[j] == d for w, d in zip(prev_words, prev_moduli))
               for j in range(n)]
    choices = [tuple(range(d2 // 2 + 1)) if neutral[j] else tuple(range(d2))
               for j in range(n)]
    same_block = [j > 0 and all(w[j - 1] == w[j] for w in prev_words)
                  for j in range(n)]
    out = []

    def rec(j, cur):
        if j == n:
            out.append(tuple(cur))
            return
        for v in choices[j]:
            if same_block[j] and v < cur[-1]:
                continue
            cur.append(v)
            rec(j + 1, cur)
            cur.pop()

    rec(0, [])
    return out


def generate_noncyclic_candidates(n, qtype, oracle: CyclicOracle | None = None,
                                  base_codes=None):
    """Candidate codes for a two-generator quotient type (d1, d2), d2 | d1.

    The first word is a non-decreasing arrangement (zeros first) of a
    realizable cyclic type of order d1 on its support; the second runs over
    the reduced residue patterns above.  Candidates whose one-generator
    subquotients fail the realizability check are dropped; so are those not
    producing the requested group type or extending a shorter code trivially.

    For three or more generators pass base_codes: the already classified
    codes of type qtype[:-1], which get extended by one more word of modulus
    qtype[-1].
    """
    oracle = oracle or CyclicOracle()
    if len(qtype) < 2:
        raise ValueError("need a non-cyclic type")
    d2 = qtype[-1]
    if any(qtype[i + 1] > qtype[i] or qtype[i] % qtype[i + 1]
           for i in range(len(qtype) - 1)):
        raise ValueError("type must be a divisibility chain, largest first")

    if base_codes is None:
        if len(qtype) != 2:
            raise ValueError("pass base_codes for types with 3+ generators")
        d1 = qtype[0]
        base_codes = []
        for n0 in range(1, n + 1):
            for t in generate_cyclic_candidates(n0, d1):
                if not oracle.realizable(n0, d1, t):
                    continue
                word = (0,) * (n - n0) + word_of_type(t)
                base_codes.append(Code(n, (d1,), (word,)))

    out = []
    for base in base_codes:
        for b in _b_patterns(base.words, base.moduli, d2, n):
            if not any(b):
                continue
            try:
                cand = Code(n, base.moduli + (d2,), base.words + (b,))
            except ValueError:
                continue
            if cand.quotient_type() != tuple(qtype):
                continue
            if cand.trivially_extends():
                continue
            if not combination_prefilter(cand, oracle):
                continue
            out.append(cand)
    return out
