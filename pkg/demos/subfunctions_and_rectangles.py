"""Counting subfunctions and rectangles on a few classic functions."""

import numpy as np

from bpmeasures import TruthTable, split
from bpmeasures.measures import (
    measure_C,
    measure_C_hat,
    measure_CC,
    measure_P,
    measure_S,
    measure_S_hat,
    measure_S_star,
    prefix_profile,
    relation_suite,
)
from bpmeasures.obdd import check_sandwich, min_obdd_size
from bpmeasures.roster import gen_eq, gen_parity, gen_seq

# Equality on 2+2 bits: under the split (x, y) the matrix is the identity.
eq2 = gen_eq(2)
print(split(eq2, (0, 1)).matrix())

# Reading x1,x2 first forces 4 distinct rows; interleaving keeps it at 3.
print("natural order :", prefix_profile(eq2, (0, 1, 2, 3)))
print("interleaved   :", prefix_profile(eq2, (0, 2, 1, 3)))
rep = measure_S_star(eq2)
print("S* =", rep.value, "via order", [i + 1 for i in rep.order])

for name, f in [("PARITY_4", gen_parity(4)), ("EQ_2", eq2), ("SEQ_2", gen_seq(2))]:
    vals = {
        "S": measure_S(f).value,
        "S_hat": measure_S_hat(f).value,
        "C": measure_C(f).value,
        "C_hat": measure_C_hat(f).value,
        "P": measure_P(f).value,
        "CC": measure_CC(f).value,
    }
    print(f"{name:9s}", "  ".join(f"{k}={v}" for k, v in vals.items()))

# The measures sit in a chain; every inequality is checked on exact integers.
rep = relation_suite(eq2)
print("relations hold on EQ_2:", rep.ok)

# OBDD size is squeezed between S* and 1 + n S*.
for f in (gen_parity(5), eq2, gen_seq(2)):
    s = check_sandwich(f)
    print(f"S={s['S']} <= S*={s['S_star']} <= OBDD={s['OBDD']} <= {s['upper']}")

size, order = min_obdd_size(gen_eq(3))
print("EQ_3 minimum OBDD", size, "order", [i + 1 for i in order])

rng = np.random.default_rng(7)
random_fns = [TruthTable(6, 2, rng.integers(0, 2, 64, dtype=np.uint8)) for _ in range(5)]
print("random n=6 S_hat:", [str(measure_S_hat(f).value) for f in random_fns])
