"""Named experiment batteries with machine-readable scorecards."""

import time
from fractions import Fraction

import numpy as np

from . import geometry as geo
from . import genred, tep, tseitin
from .boolfn import TruthTable
from .errors import InvariantViolation
from .measures import is_m_mixed, measure_S_hat
from .obdd import batch_min_obdd_dp, batch_min_obdd_enum, check_sandwich, min_obdd_size, min_obdd_size_enum
from .roster import gen_nand


class Scorecard:
    def __init__(self, name):
        self.name = name
        self.checks = []
        self._t = time.monotonic()

    def add(self, label, ok, **detail):
        self.checks.append({"check": label, "ok": bool(ok), **_plain(detail)})
        return ok

    @property
    def ok(self):
        return all(c["ok"] for c in self.checks)

    def to_dict(self, timing=False):
        out = {"suite": self.name, "ok": self.ok, "checks": self.checks}
        if timing:
            out["seconds"] = round(time.monotonic() - self._t, 3)
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def random_table(rng, n):
    return TruthTable(n, 2, rng.integers(0, 2, size=1 << n, dtype=np.uint8))


# -- batteries -------------------------------------------------------------------


def suite_tep(full=True):
    card = Scorecard("tep")
    for k in (2, 3):
        prof = tep.s_tep_profile(2, k)
        vals = [p["S_value"] for p in prof]
        closed = [tep.min_rows_closed_form(k, ell) for ell in range(1, len(vals) + 1)]
        top = max(vals)
        arg = [p["ell"] for p in prof if p["S_value"] == top]
        card.add(f"S(TEP,2)=k^2 at k={k}", top == k * k and set(arg) <= {k + 1, k + 2}, value=top, argmax=arg)
        card.add(f"profile matches closed forms at k={k}", vals == closed, profile=vals)
        card.add(f"pattern values at k={k}", all(r[2] for r in tep.pattern_checks(k)))
    card.add("mirror symmetry at (2,2)", tep.validate_mirror_symmetry(2, 2))
    for hk in [(1, 2), (2, 2), (2, 3)] + ([(3, 2)] if full else []):
        r = tep.s_hat_tep(*hk)
        card.add(f"S_hat(TEP,{hk[0]}) >= k at k={hk[1]}", r["value"] >= hk[1], value=r["value"])
    rep = tep.tep_lemma_suite(2, 2)
    card.add("lemmas at (2,2)", _lemmas_ok(rep), report=rep)
    if full:
        top, arg, prof = tep.s_tep(3, 2)
        card.add("S(TEP,3) <= 8 at k=2", top <= tep.s_upper_bound(3, 2), value=top, argmax=arg)
        rep = tep.tep_lemma_suite(3, 2, am_small_max=8)
        card.add("lemmas at (3,2)", _lemmas_ok(rep), report=rep)
    return card


def _lemmas_ok(rep):
    flags = [v for k, v in rep.items() if isinstance(v, bool)]
    return all(flags) and all(ok for _, ok in rep["half_size"])


def suite_tseitin():
    card = Scorecard("tseitin")
    total = sat = 0
    ok = True
    for n in range(1, 5):
        for G in tseitin.all_graphs(n):
            for c in tseitin.all_charges(n):
                inst = tseitin.TseitinInstance(n, tuple(G), c)
                total += 1
                try:
                    cnt = tseitin.count_sat(inst)
                except InvariantViolation:
                    ok = False
                    continue
                sat += inst.satisfiable()
                ok &= (cnt > 0) == inst.satisfiable()
    card.add("count = 2^(m-n+kappa) on graphs with <= 4 vertices", ok, instances=total, satisfiable=sat)
    for name, n, edges in [("C4", 4, tseitin.cycle(4)), ("K3", 3, tseitin.complete(3))]:
        for c in tseitin.all_charges(n):
            inst = tseitin.TseitinInstance(n, tuple(edges), c)
            if inst.satisfiable():
                r = tseitin.crosscheck_chat(inst)
                card.add(f"bound <= C_hat on {name} charge {''.join(map(str, c))}", r["ok"], bound=r["bound"], C_hat=r["C_hat"])
    return card


def suite_geometry(p5=True):
    card = Scorecard("geometry")
    pl3 = geo.plane(3)
    hist = geo.mbs_histogram(pl3, 9)
    verticals = sorted(pl3.line_mask(geo.Line(3, a)) for a in range(3))
    card.add(
        "p=3 minimal blocking sets: none below 3, verticals at 3, none at 4",
        all(hist[k] == 0 for k in range(3)) and sorted(geo.enumerate_mbs(pl3, 3, 3)[3]) == verticals and hist[4] == 0,
        histogram=hist,
    )
    if p5:
        pl5 = geo.plane(5)
        found = geo.enumerate_mbs(pl5, 6)
        verticals = sorted(pl5.line_mask(geo.Line(5, a)) for a in range(5))
        card.add(
            "p=5 minimal blocking sets: none below 5, verticals at 5, none at 6",
            all(not found[k] for k in range(5)) and sorted(found[5]) == verticals and not found[6],
            histogram={k: len(v) for k, v in found.items()},
        )
    for p in (3, 5, 7):
        pl = geo.plane(p)
        for case in range(3, 8):
            try:
                mask = geo.mbs_constructor(pl, case)
                card.add(f"constructor {case} at p={p}", True, size=bin(mask).count("1"))
            except (InvariantViolation, ValueError) as exc:
                card.add(f"constructor {case} at p={p}", False, error=str(exc))
    for p in (3, 5, 7, 11):
        card.add(f"identity lemma at p={p}", geo.lemma_identity_check(p))
    for p in (3, 5):
        ok, info = geo.intersecting_points_check(p)
        card.add(f"colinear triples at p={p}", ok, **info)
    f = geo.gal_table(pl3)
    card.add("GAL over p=3 is 2-mixed", is_m_mixed(f, 2))
    sh = measure_S_hat(f).value
    card.add("S_hat(GAL, p=3) >= 4", sh >= 4, value=sh)
    for p in (2, 3):
        pl = geo.plane(p)
        bw = geo.bw_table(pl)
        for t in range(1, p + 1):
            r = geo.bw_mult_witness(pl, t, bw)
            card.add(f"BW multiplicity witness p={p} t={t}", r["ok"], mult=r["mult"], size=r["size"])
    card.add("GAL/BW bridge at p=2", geo.gal_bw_bridge(geo.plane(2)))
    return card


def suite_genred(seed=0, count=100):
    card = Scorecard("genred")
    for name, C in _atoms():
        r = genred.verify_projection(C)
        card.add(f"atom {name}", r["ok"], m=r["m"], q=r["q"])
    for h in range(4):
        C = genred.nand_tree(h)
        agree = bool((genred.circuit_table(C) == gen_nand(1 << h).values).all())
        r = genred.verify_projection(C)
        card.add(f"NAND tree on {1 << h} inputs", r["ok"] and agree, m=r["m"])
    rng = np.random.default_rng(seed)
    bad = []
    reads = True
    for i in range(count):
        n = int(rng.integers(1, 5))
        C = genred.random_circuit(rng, n, int(rng.integers(1, 11)))
        r = genred.verify_projection(C)
        reads &= r["read_once"]
        if not r["ok"]:
            bad.append(i)
    card.add(f"{count} random circuits", not bad, mismatched=bad, read_once=reads)
    return card


def _atoms():
    out = []
    b = genred.CircuitBuilder(2)
    out.append(("AND", b.circuit(b.AND(*b.inputs))))
    b = genred.CircuitBuilder(2)
    out.append(("OR", b.circuit(b.OR(*b.inputs))))
    b = genred.CircuitBuilder(1)
    out.append(("NOT", b.circuit(b.NOT(b.inputs[0]))))
    return out


def suite_obdd(seed=0, random_n8=1000, random_n5=2000):
    card = Scorecard("obdd")
    ok = True
    for v in range(256):
        bits = np.array([(v >> (7 - i)) & 1 for i in range(8)], dtype=np.uint8)
        ok &= check_sandwich(TruthTable(3, 2, bits), strict=False)["ok"]
    card.add("sandwich on all n=3 functions", ok)
    rng = np.random.default_rng(seed)
    ok = True
    for _ in range(random_n8):
        ok &= check_sandwich(random_table(rng, 8), strict=False)["ok"]
    card.add(f"sandwich on {random_n8} random n=8 functions", ok)
    for n in (1, 2, 3, 4):
        F = _all_functions(n)
        card.add(f"DP = enumeration on all n={n} functions", bool((batch_min_obdd_dp(F, n) == batch_min_obdd_enum(F, n)).all()))
    F = rng.integers(0, 2, size=(random_n5, 32), dtype=np.uint8)
    card.add(f"DP = enumeration on {random_n5} random n=5 functions", bool((batch_min_obdd_dp(F, 5) == batch_min_obdd_enum(F, 5)).all()))
    return card


def _all_functions(n):
    N = 1 << n
    v = np.arange(1 << N, dtype=np.int64)
    return ((v[:, None] >> (N - 1 - np.arange(N))) & 1).astype(np.uint8)


def suite_random_shat(seed=0, count=100, n=12, need=95):
    card = Scorecard("random-shat")
    rng = np.random.default_rng(seed)
    threshold = Fraction(2**n, n * n)
    hits = 0
    values = []
    for _ in range(count):
        v = measure_S_hat(random_table(rng, n)).value
        values.append(v)
        hits += v >= threshold
    card.add(f"S_hat >= 2^n/n^2 for >= {need} of {count} at n={n}", hits >= need, hits=hits, minimum=min(values), threshold=threshold)
    return card


SUITES = {
    "tep": suite_tep,
    "tseitin": suite_tseitin,
    "geometry": suite_geometry,
    "genred": suite_genred,
    "obdd": suite_obdd,
    "random-shat": suite_random_shat,
}
