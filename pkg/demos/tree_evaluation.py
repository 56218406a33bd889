"""Subfunction profiles of the tree evaluation problem."""

from bpmeasures.tep import (
    tep_lemma_suite,
    s_hat_tep,
    s_tep,
    s_tep_profile,
    min_rows_closed_form,
    tep_eval,
    tep_size,
)

# Height 2, k = 2: a 2x2 root matrix followed by two leaves.
print("M=[[1,2],[2,1]], leaves (1,2) ->", tep_eval(2, 2, [1, 2, 2, 1, 1, 2]))

for k in (2, 3):
    top, argmax, prof = s_tep(2, k)
    got = [p["S_value"] for p in prof]
    closed = [min_rows_closed_form(k, ell) for ell in range(1, tep_size(2, k) + 1)]
    print(f"k={k}: profile {got}")
    print(f"      closed form agrees: {got == closed}; S = {top} at l = {argmax}")

# Height 3 is still exhaustive at k = 2 (16 variables, a few seconds per large l).
prof = s_tep_profile(3, 2, ells=range(1, 9))
print("h=3, k=2, l=1..8:", [p["S_value"] for p in prof])

for h, k in ((2, 2), (2, 3)):
    r = s_hat_tep(h, k)
    print(f"S_hat(TEP,{h}) at k={k} = {r['value']}  (reported upper {r['upper_reported']})")

rep = tep_lemma_suite(2, 3)
print({key: val for key, val in rep.items() if key != "half_size"})
