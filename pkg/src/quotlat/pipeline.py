"""Classification drivers: candidates -> feasibility -> face invariants.

These functions chain the combinatorial candidate generation with the
exact search and the face traversal, producing the classification rows
(generator words plus the class invariants s, r, s') for a dimension and
quotient type.  Rows are canonically ordered and deterministic, so two
runs with the same inputs emit identical reports.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .codes import (
    Code, CyclicOracle, _compositions, cyclic_closed_form,
    cyclic_subquotients, dedupe_codes, generate_cyclic_candidates,
    generate_noncyclic_candidates, type_of_word, unit_orbit, watson_filter,
    word_of_type,
)
from .faces import class_invariants
from .feasibility import feasibility


@dataclass
class Row:
    """One classified code."""

    n: int
    qtype: tuple                    # quotient type, largest divisor first
    code: Code
    status: str                     # feasible | infeasible | inconclusive
    s: int | None = None
    r: int | None = None
    s_prime: int | None = None

    def sort_key(self):
        return (self.qtype, self.code.words)

    def as_dict(self):
        return {
            "n": self.n,
            "type": list(self.qtype),
            "moduli": list(self.code.moduli),
            "generators": [list(w) for w in self.code.words],
            "status": self.status,
            "s": self.s,
            "r": self.r,
            "s_prime": self.s_prime,
        }


@dataclass
class Report:
    n: int
    kind: str
    rows: list
    candidates_total: int = 0
    candidates_admissible: int = 0
    meta: dict = field(default_factory=dict)

    def feasible_rows(self):
        return [r for r in self.rows if r.status == "feasible"]

    def has_inconclusive(self) -> bool:
        return any(r.status == "inconclusive" for r in self.rows)


def _evaluate_code(args):
    code, symmetrize, budget_vertices, max_rounds = args
    out = feasibility(code, symmetrize=symmetrize, max_rounds=max_rounds)
    if out.status != "feasible":
        return Row(code.n, code.quotient_type(), code, out.status)
    ci = class_invariants(out)
    return Row(code.n, code.quotient_type(), code, "feasible",
               ci.s, ci.r, ci.s_prime)


def _run_all(codes, symmetrize, threads, budget_vertices, max_rounds=500):
    jobs = [(c, symmetrize, budget_vertices, max_rounds) for c in codes]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_evaluate_code, jobs, chunksize=1))
    return [_evaluate_code(j) for j in jobs]


def classify_cyclic(n, d, symmetrize=True, threads=1, budget_vertices=512,
                    max_rounds=500, oracle: CyclicOracle | None = None) -> Report:
    """All realizable cyclic codes of order d in dimension n, with their
    minimal-class invariants.

    With an oracle, candidates whose cyclic subquotients (the word reduced
    modulo each proper divisor of d) are already known unrealizable are
    discarded before the exact search; this is what keeps composite orders
    up to the dimension-9 index bound tractable."""
    types = generate_cyclic_candidates(n, d)
    total = sum(1 for _ in _compositions(n, d // 2))
    kept = []
    for t in types:
        word = word_of_type(t)
        if oracle is not None and any(
                not oracle.realizable(n0, e, sub)
                for n0, e, sub in cyclic_subquotients(word, d)):
            continue
        kept.append(t)
    codes = [Code(n, (d,), (word_of_type(t),)) for t in kept]
    rows = _run_all(codes, symmetrize, threads, budget_vertices, max_rounds)
    rows.sort(key=Row.sort_key)
    rep = Report(n, "cyclic d=%d" % d, rows, total, len(types))
    rep.meta["after_divisor_filter"] = len(kept)
    return rep


def cyclic_oracle_for(n, ds, symmetrize=True, threads=1, cache=None,
                      max_rounds=500) -> CyclicOracle:
    """Realizability oracle over all supports n0 <= n for the given orders.

    Orders up to 6 come from the closed form; higher orders are decided by
    pipeline runs, processed in increasing order (with divisor closure) so
    that each sweep can prune through its own subquotients."""
    oracle = CyclicOracle()
    cache = cache if cache is not None else {}
    needed = set()
    for d in ds:
        e = 2
        while e <= d:
            if d % e == 0 and e > 6:
                needed.add(e)
            e += 1
    for d in sorted(needed):
        for n0 in range(1, n + 1):
            key = (n0, d)
            if key not in cache:
                cache[key] = classify_cyclic(n0, d, symmetrize=symmetrize,
                                             threads=threads,
                                             max_rounds=max_rounds,
                                             oracle=oracle)
            for row in cache[key].rows:
                oracle.add(n0, d, type_of_word(row.code.words[0], d),
                           row.status == "feasible")
            # everything filtered out pre-search is unrealizable as well
            for t in generate_cyclic_candidates(n0, d):
                if (n0, d, unit_orbit(t, d)) not in oracle.known:
                    oracle.add(n0, d, t, False)
    return oracle


def _cyclic_base_codes(n, d, oracle: CyclicOracle):
    """Single-generator codes of order d and length n, zero columns allowed,
    whose nonzero part is realizable in its own dimension."""
    out = []
    for n0 in range(1, n + 1):
        for t in generate_cyclic_candidates(n0, d):
            if not oracle.realizable(n0, d, t):
                continue
            word = (0,) * (n - n0) + word_of_type(t)
            out.append(Code(n, (d,), (word,)))
    return out


def classify_noncyclic(n, qtype, symmetrize=True, threads=1,
                       budget_vertices=512, oracle=None, max_rounds=500,
                       keep_raw=False) -> Report:
    """All realizable codes of a non-cyclic quotient type in dimension n.

    Types with k generators are classified by extending the classified
    codes of the parent type (one generator less) by all compatible words;
    candidates are pruned by the single-generator realizability check, the
    survivors decided exactly, and the feasible codes reduced to one
    representative per equivalence class.
    """
    qtype = tuple(qtype)
    oracle = oracle or CyclicOracle()
    if len(qtype) < 2:
        raise ValueError("use classify_cyclic for cyclic types")
    if len(qtype) == 2:
        bases = _cyclic_base_codes(n, qtype[0], oracle)
    else:
        parent = classify_noncyclic(n, qtype[:-1], symmetrize, threads,
                                    budget_vertices, oracle, max_rounds,
                                    keep_raw=True)
        bases = [r.code for r in parent.feasible_rows()]
    cands = generate_noncyclic_candidates(n, qtype, oracle, base_codes=bases)
    rows = _run_all(cands, symmetrize, threads, budget_vertices, max_rounds)
    raw_feasible = [r for r in rows if r.status == "feasible"]
    reps = dedupe_codes([r.code for r in raw_feasible])
    rep_keys = {(c.moduli, c.words) for c in reps}
    final = [r for r in rows if r.status != "feasible"
             or (r.code.moduli, r.code.words) in rep_keys]
    if not keep_raw:
        final = [r for r in final
                 if r.status != "feasible" or not r.code.trivially_extends()]
    final.sort(key=Row.sort_key)
    rep = Report(n, "type %s" % "x".join(map(str, qtype)), final,
                 len(cands), len(cands))
    rep.meta["raw_feasible"] = len(raw_feasible)
    return rep
