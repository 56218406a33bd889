"""Tseitin parity formulas, then blocking sets in the plane over F_p."""

from bpmeasures.geometry import (
    MBS_SIZES,
    admissible_census,
    bw_mult_witness,
    enumerate_mbs,
    mbs_constructor,
    plane,
)
from bpmeasures import InvariantViolation
from bpmeasures.tseitin import TseitinInstance, count_sat, crosscheck_chat, cycle, kappa_profile

c4 = TseitinInstance(4, cycle(4), (0, 0, 0, 0))
print("C4: satisfying points", count_sat(c4), "kappa profile", kappa_profile(4, cycle(4)))
print("C4: bound vs exact C_hat", crosscheck_chat(c4))

odd = TseitinInstance(4, cycle(4), (1, 0, 0, 0))
print("odd charge satisfiable?", odd.satisfiable(), "count", count_sat(odd))

# Minimal blocking sets of the non-vertical lines at p = 3, by size.
found = enumerate_mbs(plane(3), 6)
print("p=3 histogram:", {k: len(v) for k, v in found.items()})

for p in (3, 5, 7):
    pl = plane(p)
    row = []
    for case in sorted(MBS_SIZES):
        try:
            mask = mbs_constructor(pl, case)
            row.append(f"({case}) {bin(mask).count('1')}")
        except InvariantViolation:
            row.append(f"({case}) none")
    print(f"p={p}:", ", ".join(row))

# The case-(6) side conditions let through many non-minimal sets.
print("case (6) admissible choices that verify at p=5:", admissible_census(plane(5), 6))

for t in (1, 2, 3):
    r = bw_mult_witness(plane(3), t)
    print(f"BW p=3 t={t}: mult {r['mult']} >= {r['threshold']}")
