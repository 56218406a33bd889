"""Projecting De Morgan circuits onto GEN and checking every input."""

import numpy as np

from bpmeasures.genred import (
    CircuitBuilder,
    GenTable,
    brs_circuit,
    circuit_table,
    format_circuit,
    gen_eval,
    project_to_gen,
    random_circuit,
    verify_projection,
)
from bpmeasures.roster import gen_brs

# 1*1 = 2, then 1*2 = 3 = m, so the top element is generated.
X = GenTable.from_cells(3, {(1, 1): 2, (1, 2): 3, (2, 2): 1})
print("small GEN instance ->", gen_eval(X))

b = CircuitBuilder(2)
C = b.circuit(b.AND(*b.inputs))
print(format_circuit(C))
proj = project_to_gen(C)
print("elements:", proj.elements)
for (i, j), rule in sorted(proj.provenance.items()):
    print(f"  cell ({i},{j}) = {proj.cells[(i, j)]}  [{rule}]")
print(verify_projection(C))

rng = np.random.default_rng(3)
bad = 0
for _ in range(50):
    bad += not verify_projection(random_circuit(rng, 4, 10))["ok"]
print("random circuits with a mismatch:", bad)

C = brs_circuit(1)
print("BRS d=1 circuit:", C.size, "gates; agrees with table:", circuit_table(C).tolist() == gen_brs(1).values.tolist())
print(verify_projection(C))
