"""Command-line entry point: ``bpm <subcommand> ...``.

Exit codes: 0 ok, 1 input error, 2 budget exceeded, 3 invariant violated.
Reports are JSON with sorted keys, so equal inputs give equal bytes.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import geometry as geo
from . import genred, obdd, roster, tep, tseitin
from .boolfn import TruthTable, format_tt, read_tt
from .errors import BudgetExceeded, InvariantViolation, set_cell_budget
from .measures import (
    measure_C,
    measure_C_hat,
    measure_CC,
    measure_NCC,
    measure_P,
    measure_P_hat,
    measure_P_plus,
    measure_P_plus_hat,
    measure_S,
    measure_S_hat,
    measure_S_star,
    relation_suite,
)
from .suites import SUITES, _plain

SCHEMA = 1

MEASURES = {
    "S": measure_S,
    "Shat": measure_S_hat,
    "Sstar": measure_S_star,
    "C": measure_C,
    "Chat": measure_C_hat,
    "P": measure_P,
    "Phat": measure_P_hat,
    "Pplus": measure_P_plus,
    "Pplushat": measure_P_plus_hat,
    "CC": measure_CC,
    "NCC": measure_NCC,
}


class InputError(Exception):
    pass


def _emit(obj, out=None):
    text = json.dumps(_plain({"schema": SCHEMA, **obj}), sort_keys=True, indent=1) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_text(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"expected a comma-separated integer list, got {text!r}") from None


def _headline(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    if isinstance(value, float):
        return None if value == float("-inf") else value
    return int(value)


# -- subcommands -----------------------------------------------------------------


def cmd_measure(args):
    f = read_tt(args.input)
    names = [m.strip() for m in args.measures.split(",") if m.strip()]
    unknown = [m for m in names if m not in MEASURES]
    if unknown:
        raise InputError(f"unknown measures {unknown}; choose from {sorted(MEASURES)}")
    values, reports = {}, []
    for name in names:
        rep = MEASURES[name](f)
        values[name] = _headline(rep.value)
        d = rep.to_dict()
        if not args.certificates:
            d.pop("certificate", None)
            d.pop("parts", None)
        reports.append(d)
    _emit({"command": "measure", "values": values, "reports": reports}, args.out)


def cmd_roster(args):
    spec = roster.spec_for(args.family, args.size)
    _write_text(format_tt(spec.table()), args.out)


def _all_functions(n):
    for v in range(1 << (1 << n)):
        bits = [(v >> ((1 << n) - 1 - i)) & 1 for i in range(1 << n)]
        yield TruthTable(n, 2, np.array(bits, dtype=np.uint8))


def _parse_overrides(items):
    out = {}
    for item in items or []:
        key, _, val = item.partition("=")
        if not _:
            raise InputError(f"override must look like NAME=VALUE, got {item!r}")
        out[key] = Fraction(val) if "/" in val else int(val)
    return out


def cmd_relations(args):
    n = args.n
    overrides = _parse_overrides(args.corrupt)
    if args.sample is None:
        if n > 3:
            raise InputError("exhaustive mode covers n <= 3; use --sample for larger n")
        funcs = _all_functions(n)
        mode = "exhaustive"
    else:
        if n > 5:
            raise InputError("sampled mode covers n <= 5")
        rng = np.random.default_rng(args.seed)
        funcs = (TruthTable(n, 2, rng.integers(0, 2, 1 << n, dtype=np.uint8)) for _ in range(args.sample))
        mode = f"sample {args.sample}"
    passed = total = 0
    violations = []
    for f in funcs:
        total += 1
        rep = relation_suite(f, overrides=overrides, strict=False)
        if rep.ok:
            passed += 1
        else:
            violations.append({"table": "".join(map(str, f.values.tolist())), "failures": rep.failures()})
    _emit({"command": "relations", "n": n, "mode": mode, "passed": passed, "total": total, "violations": violations[:20]}, args.out)
    if violations:
        raise InvariantViolation(f"{len(violations)} of {total} functions violate a relation")


def cmd_obdd(args):
    f = read_tt(args.input)
    if args.minimize:
        size, order = obdd.min_obdd_size(f)
    else:
        order = [i - 1 for i in _int_list(args.order)] if args.order else list(range(f.n))
        if sorted(order) != list(range(f.n)):
            raise InputError(f"order must be a permutation of 1..{f.n}")
    B = obdd.build_obdd(f, order)
    prof = obdd.level_profile(f, order)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(B.to_dot())
    _emit({"command": "obdd", "order": [i + 1 for i in order], "size": B.size, "profile": prof.to_dict()}, args.out)


def cmd_tep(args):
    if args.action == "profile":
        ells = _int_list(args.ell) if args.ell else None
        budget = args.budget if args.budget is not None else _env_budget()
        prof = tep.s_tep_profile(args.h, args.k, ells=ells, budget_secs=budget, symmetry=args.symmetry)
        _emit({"command": "tep profile", "h": args.h, "k": args.k, "profile": prof}, args.out)
        if not all(p["complete"] for p in prof):
            exc = BudgetExceeded("profile incomplete; partial results reported above")
            exc.reported = True
            raise exc
    elif args.action == "shat":
        _emit({"command": "tep shat", **tep.s_hat_tep(args.h, args.k)}, args.out)
    else:
        rep = tep.tep_lemma_suite(args.h, args.k, am_small_max=args.am_small_max)
        _emit({"command": "tep lemmas", "h": args.h, "k": args.k, "report": rep}, args.out)


def cmd_tseitin(args):
    inst = tseitin.load_instance(args.graph, args.charge)
    out = {"command": "tseitin", "n": inst.n, "m": inst.m, "kappa": inst.kappa, "satisfiable": inst.satisfiable()}
    if args.fact:
        out["count"] = tseitin.count_sat(inst)
        out["predicted"] = 2 ** (inst.m - inst.n + inst.kappa) if inst.satisfiable() else 0
    if args.bound:
        out["kappa_profile"] = tseitin.kappa_profile(inst.n, inst.edges)
        out["bound"], out["bound_ell"] = tseitin.tseitin_bound(inst)
    if args.crosscheck:
        out["crosscheck"] = tseitin.crosscheck_chat(inst)
    if args.table:
        with open(args.table, "w") as fh:
            fh.write(format_tt(tseitin.tseitin_table(inst)))
    _emit(out, args.out)


def _read_mask(path, pl):
    with open(path) as fh:
        tokens = fh.read().split()
    if len(tokens) != pl.N or any(t not in ("0", "1") for t in tokens):
        raise InputError(f"mask file must hold {pl.N} bits, point (a,b) at position a*p+b")
    return sum(1 << i for i, t in enumerate(tokens) if t == "1")


def cmd_plane(args):
    pl = geo.plane(args.p)
    if args.action == "mbs":
        found = geo.enumerate_mbs(pl, args.max_size)
        sets = {k: [[list(pt) for pt in pl.points_of(m)] for m in v] for k, v in found.items()}
        hist = {k: len(v) for k, v in found.items()}
        _emit({"command": "plane mbs", "p": args.p, "histogram": hist, "sets": sets if args.list else None}, args.out)
    elif args.action == "blocking-count":
        if args.mask:
            M = _read_mask(args.mask, pl)
            res = geo.count_blocking_within(pl, M)
            _emit({"command": "plane blocking-count", "p": args.p, "mode": "exact", "count": res, "size": bin(M).count("1")}, args.out)
        else:
            res = geo.count_blocking_within(pl, pl.all_lines, "sample", samples=args.random, seed=args.seed)
            _emit({"command": "plane blocking-count", "p": args.p, "mode": "sample", **res}, args.out)
    elif args.action == "construct":
        mask = geo.mbs_constructor(pl, args.case)
        _emit({"command": "plane construct", "p": args.p, "case": args.case, "size": bin(mask).count("1"),
               "points": [list(pt) for pt in pl.points_of(mask)], "minimal_blocking": True}, args.out)
    else:
        out = {"command": "plane lemmas", "p": args.p, "identity": geo.lemma_identity_check(args.p)}
        if args.p >= 3:
            ok, info = geo.intersecting_points_check(args.p)
            out["colinear_triples"] = {"ok": ok, **info}
        _emit(out, args.out)


def cmd_gen(args):
    if args.action == "brs":
        _write_text(genred.format_circuit(genred.brs_circuit(args.d)), args.out)
        return
    if args.action == "eval":
        with open(args.table) as fh:
            tokens = fh.read().split()
        try:
            m = int(tokens[0])
            flat = [int(t) for t in tokens[1:]]
        except (ValueError, IndexError):
            raise InputError("GEN table file: m followed by m(m-1)/2 entries") from None
        if len(flat) != m * (m - 1) // 2:
            raise InputError(f"GEN table with m={m} needs {m * (m - 1) // 2} entries")
        X = np.zeros((m - 1, m - 1), dtype=np.int64)
        iu = np.triu_indices(m - 1)
        X[iu] = flat
        X = X + np.triu(X, 1).T
        _emit({"command": "gen eval", "m": m, "value": genred.gen_eval(genred.GenTable(m, X))}, args.out)
        return
    with open(args.circuit) as fh:
        C = genred.parse_circuit(fh.read())
    if args.action == "project":
        _emit({"command": "gen project", **genred.project_to_gen(C).to_dict()}, args.out)
    else:
        rep = genred.verify_projection(C)
        _emit({"command": "gen verify", **rep}, args.out)
        if not rep["ok"]:
            raise InvariantViolation("projection disagrees with the circuit")


def cmd_suite(args):
    card = SUITES[args.name]()
    _emit({"command": "suite", **card.to_dict()}, args.out)
    if not card.ok:
        raise InvariantViolation(f"suite {args.name} has failing checks")


# -- parser ----------------------------------------------------------------------


def _env_budget():
    v = os.environ.get("BPM_BUDGET_SECS")
    return float(v) if v else None


def build_parser():
    ap = argparse.ArgumentParser(prog="bpm", description="Exact branching-program measures on small functions.")
    ap.add_argument("--cell-budget", type=int, help="maximum truth-table cells (also BPM_CELL_BUDGET)")
    ap.add_argument("--threads", type=int, help="accepted for compatibility; work runs on one thread")
    sub = ap.add_subparsers(dest="command", required=True)

    def with_out(p):
        p.add_argument("-o", "--out", help="write the report here instead of stdout")
        return p

    p = with_out(sub.add_parser("measure", help="compute measures of a TT file"))
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-m", "--measures", required=True, help="comma list: " + ",".join(MEASURES))
    p.add_argument("--certificates", action="store_true", help="include rectangle certificates")
    p.set_defaults(func=cmd_measure)

    p = with_out(sub.add_parser("roster", help="emit a named function as a TT file"))
    p.add_argument("family", choices=sorted(roster.FAMILIES))
    p.add_argument("size", type=int, help="n, or d for brs, or m for and-parity")
    p.set_defaults(func=cmd_roster)

    p = with_out(sub.add_parser("relations", help="check the measure inequalities"))
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--sample", type=int, help="random functions instead of all of them")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--corrupt", action="append", metavar="NAME=VALUE", help="override a computed value (self-test)")
    p.set_defaults(func=cmd_relations)

    p = with_out(sub.add_parser("obdd", help="build or minimise an OBDD"))
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--order", help="1-based comma list, x_1 first by default")
    p.add_argument("--minimize", action="store_true")
    p.add_argument("--dot", help="also write a DOT diagram here")
    p.set_defaults(func=cmd_obdd)

    p = with_out(sub.add_parser("tep", help="tree evaluation experiments"))
    p.add_argument("action", choices=["profile", "shat", "lemmas"])
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=float, help="seconds (also BPM_BUDGET_SECS)")
    p.add_argument("--ell", help="comma list of subset sizes")
    p.add_argument("--symmetry", action="store_true", help="prune by the subtree-swap symmetry")
    p.add_argument("--am-small-max", type=int, help="exhaust the A_M-small check up to this |A|")
    p.set_defaults(func=cmd_tep)

    p = with_out(sub.add_parser("tseitin", help="Tseitin formula facts and bounds"))
    p.add_argument("--graph", required=True)
    p.add_argument("--charge", required=True)
    p.add_argument("--fact", action="store_true")
    p.add_argument("--bound", action="store_true")
    p.add_argument("--crosscheck", action="store_true")
    p.add_argument("--table", help="also write the formula as a TT file")
    p.set_defaults(func=cmd_tseitin)

    p = with_out(sub.add_parser("plane", help="blocking sets in F_p^2"))
    p.add_argument("--p", type=int, required=True)
    ps = p.add_subparsers(dest="action", required=True)
    q = ps.add_parser("mbs")
    q.add_argument("--max-size", type=int, required=True)
    q.add_argument("--list", action="store_true", help="include the sets themselves")
    q = ps.add_parser("blocking-count")
    g = q.add_mutually_exclusive_group(required=True)
    g.add_argument("--mask", help="file of p^2 bits")
    g.add_argument("--random", type=int, help="sample this many subsets of the plane")
    q.add_argument("--seed", type=int, default=0)
    q = ps.add_parser("construct")
    q.add_argument("--case", type=int, required=True, choices=range(3, 8))
    ps.add_parser("lemmas")
    p.set_defaults(func=cmd_plane)

    p = with_out(sub.add_parser("gen", help="GEN evaluation and the circuit projection"))
    p.add_argument("action", choices=["project", "verify", "brs", "eval"])
    p.add_argument("--circuit", help="netlist file (project, verify)")
    p.add_argument("--d", type=int, default=1, help="BRS dimension (brs)")
    p.add_argument("--table", help="GEN table file (eval)")
    p.set_defaults(func=cmd_gen)

    p = with_out(sub.add_parser("suite", help="run a named battery"))
    p.add_argument("name", choices=sorted(SUITES))
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.cell_budget:
        set_cell_budget(args.cell_budget)
    if args.command == "gen" and args.action in ("project", "verify") and not args.circuit:
        ap.error("gen project/verify need --circuit")
    if args.command == "gen" and args.action == "eval" and not args.table:
        ap.error("gen eval needs --table")
    try:
        args.func(args)
    except (InputError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BudgetExceeded as exc:
        if not getattr(exc, "reported", False):
            _emit({"error": "budget", "message": str(exc), "bounds": _plain(exc.bounds)})
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
