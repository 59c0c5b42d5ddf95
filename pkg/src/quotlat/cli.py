"""Command-line interface.

Subcommands cover the classification sweeps (cyclic and non-cyclic), single
code checks, invariant reports for Gram matrices, index-system runs and the
admissibility filter.  Reports are emitted as text tables, JSON or CSV;
reruns with identical inputs produce byte-identical JSON/CSV.

Exit codes: 0 success; 1 the answer was "not realizable" (still a clean
run, distinguishable for scripting); 2 some result was inconclusive;
3 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import catalog
from .codes import (
    Code, generate_cyclic_candidates, parse_code, type_of_word, unit_orbit,
    watson_filter, word_of_type,
)
from .eutaxy import eutaxy_class
from .faces import class_invariants, face_invariants
from .feasibility import feasibility
from .indexsystem import (
    half_set_action, index_system_bruteforce, index_system_orderly,
)
from .lattices import (
    GramMatrix, hermite_power, kissing_half, minimum, parse_gram,
    perfection_rank,
)
from .pipeline import Report, classify_cyclic, classify_noncyclic, \
    cyclic_oracle_for


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(args, payload_rows, header, text_title):
    fmt = args.format
    out = io.StringIO()
    if fmt == "json":
        json.dump(payload_rows, out, indent=2, sort_keys=True, default=str)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in payload_rows:
            w.writerow([row.get(h, "") for h in header])
    else:
        out.write(text_title + "\n")
        widths = {h: max(len(h), *(len(str(r.get(h, ""))) for r in payload_rows))
                  for h in header} if payload_rows else {h: len(h) for h in header}
        out.write("  ".join(h.ljust(widths[h]) for h in header) + "\n")
        for row in payload_rows:
            out.write("  ".join(str(row.get(h, "")).ljust(widths[h])
                                for h in header) + "\n")
    text = out.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_payload(report: Report):
    rows = []
    for r in report.rows:
        d = r.as_dict()
        rows.append({
            "d_structure": ".".join(str(x) for x in (r.qtype or (1,))),
            "generators": " | ".join(",".join(str(a) for a in w)
                                     for w in r.code.words),
            "feasible": r.status if r.status != "feasible" else "yes",
            "s": "" if d["s"] is None else d["s"],
            "r": "" if d["r"] is None else d["r"],
            "s_prime": "" if d["s_prime"] is None else d["s_prime"],
        })
    return rows


_REPORT_HEADER = ["d_structure", "generators", "feasible", "s", "r", "s_prime"]


def _finish_report(args, report: Report, title):
    payload = _report_payload(report)
    title = "%s  [candidates: %d admissible of %d]" % (
        title, report.candidates_admissible, report.candidates_total)
    _emit(args, payload, _REPORT_HEADER, title)
    if report.has_inconclusive():
        return 2
    return 0


def cmd_classify_cyclic(args):
    code = 0
    for d in range(args.d, (args.d_max or args.d) + 1):
        rep = classify_cyclic(args.n, d, symmetrize=args.symmetrize,
                              threads=args.threads,
                              budget_vertices=args.budget_vertices)
        rc = _finish_report(args, rep, "cyclic order %d, dimension %d" % (d, args.n))
        code = max(code, rc)
    return code


def _parse_type(text):
    parts = tuple(int(t) for t in text.replace("x", ".").split("."))
    if len(parts) < 2:
        raise ValueError("quotient type needs at least two factors, e.g. 6.2")
    return parts


def cmd_classify_noncyclic(args):
    qtype = _parse_type(args.type)
    oracle = cyclic_oracle_for(args.n, [d for d in qtype if d > 6],
                               threads=args.threads)
    rep = classify_noncyclic(args.n, qtype, symmetrize=args.symmetrize,
                             threads=args.threads,
                             budget_vertices=args.budget_vertices,
                             oracle=oracle)
    return _finish_report(args, rep, "type %s, dimension %d"
                          % (args.type, args.n))


def cmd_check_code(args):
    code = parse_code(_read_text(args.file))
    out = feasibility(code, symmetrize=args.symmetrize)
    result = {"status": out.status, "rounds": out.iterations,
              "cut_vectors": len(out.vectors)}
    if out.status == "feasible":
        ci = class_invariants(out)
        result.update(s=ci.s, r=ci.r, s_prime=ci.s_prime,
                      face_dim=ci.face_dim)
        result["quotient_type"] = ".".join(map(str, code.quotient_type()))
    _emit(args, [result], sorted(result), "code check")
    if out.status == "feasible":
        return 0
    if out.status == "infeasible":
        return 1
    return 2


def cmd_invariants(args):
    gram = parse_gram(_read_text(args.file))
    eut = eutaxy_class(gram)
    result = {
        "n": gram.n,
        "min": str(gram.minimum()),
        "s": gram.s(),
        "r": perfection_rank(gram),
        "det": str(gram.det()),
        "hermite_power": str(hermite_power(gram)),
        "eutaxy": eut.klass,
    }
    _emit(args, [result], ["n", "min", "s", "r", "det", "hermite_power",
                           "eutaxy"], "lattice invariants")
    return 0


def cmd_index_system(args):
    gram = parse_gram(_read_text(args.file))
    if args.mode == "brute":
        isys = index_system_bruteforce(gram, budget=args.budget_subsets)
    else:
        workdir = args.workdir or os.environ.get("QUOTLAT_DATA")
        action = half_set_action(gram)
        isys = index_system_orderly(gram, action, workdir=workdir)
    rows = [{"type": ".".join(map(str, t)) if t else "1", "count": c}
            for t, c in isys.sorted_items()]
    _emit(args, rows, ["type", "count"],
          "index system (%s mode)" % isys.mode)
    return 0


def cmd_watson(args):
    from .codes import _compositions
    from math import gcd
    rows = []
    total = 0
    for t in _compositions(args.n, args.d // 2):
        residues = [i + 1 for i, m in enumerate(t) if m]
        if not residues or gcd(args.d, *residues) != 1:
            continue
        total += 1
    kept = generate_cyclic_candidates(args.n, args.d)
    for t in kept:
        rows.append({"type": ",".join(map(str, t)),
                     "generator": ",".join(map(str, word_of_type(t)))})
    _emit(args, rows, ["type", "generator"],
          "admissible cyclic types n=%d d=%d (%d of %d)"
          % (args.n, args.d, len(kept), total))
    return 0


def cmd_catalog(args):
    rows = []
    for name, e in sorted(catalog.catalog().items()):
        rows.append({"name": name, "min": e.minimum, "s": e.s,
                     "r": e.perfection, "det": e.det})
    _emit(args, rows, ["name", "min", "s", "r", "det"], "catalog lattices")
    return 0


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="quotlat",
        description="Classify quotient codes of lattices by sublattices "
                    "of minimal vectors, exactly.")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.add_argument("--out", help="write the report to this file")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--symmetrize", dest="symmetrize", action="store_true",
                   default=True)
    p.add_argument("--no-symmetrize", dest="symmetrize", action="store_false")
    p.add_argument("--budget-vertices", type=int, default=512)
    p.add_argument("--budget-subsets", type=int, default=10 ** 7)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify-cyclic", help="sweep cyclic orders")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--d-max", type=int)
    s.set_defaults(fn=cmd_classify_cyclic)

    s = sub.add_parser("classify-noncyclic", help="classify one quotient type")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--type", required=True, help="e.g. 2.2, 6.2, 4.2.2")
    s.set_defaults(fn=cmd_classify_noncyclic)

    s = sub.add_parser("check-code", help="decide one code from a file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_check_code)

    s = sub.add_parser("invariants", help="invariants of a Gram matrix file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_invariants)

    s = sub.add_parser("index-system", help="index system of a Gram matrix")
    s.add_argument("file")
    s.add_argument("--mode", choices=["brute", "orderly"], default="brute")
    s.add_argument("--workdir", help="block storage directory "
                                     "(default: $QUOTLAT_DATA)")
    s.set_defaults(fn=cmd_index_system)

    s = sub.add_parser("watson", help="admissible cyclic types")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.set_defaults(fn=cmd_watson)

    s = sub.add_parser("catalog", help="list the built-in lattices")
    s.set_defaults(fn=cmd_catalog)

    args = p.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
