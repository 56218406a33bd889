"""The max over k, min over |A| = k pattern shared by most measures."""

from ..boolfn import mask_indices, subsets_of_size


def max_min(n, inner, ks=None):
    """Return ``(value, k, mask)`` for ``max_k min_{|A|=k} inner(mask)``.

    Ties go to the smallest k, then to the first A in lexicographic order of
    its sorted index tuple.  For n = 0 the single subset is A = {} and k = 0.
    """
    if n == 0:
        return inner(0), 0, 0
    best = None
    for k in ks if ks is not None else range(1, n + 1):
        low = None
        for mask in subsets_of_size(n, k):
            v = inner(mask)
            if low is None or v < low[0]:
                low = (v, mask)
        if best is None or low[0] > best[0]:
            best = (low[0], k, low[1])
    return best


def max_min_array(n, values, masks_by_k=None):
    """Vectorised :func:`max_min` over a per-mask array ``values``."""
    import numpy as np

    if n == 0:
        return values[0], 0, 0
    best = None
    for k in range(1, n + 1):
        masks = masks_by_k[k] if masks_by_k else np.fromiter(subsets_of_size(n, k), dtype=np.int64)
        vals = values[masks]
        j = int(np.argmin(vals))
        if best is None or vals[j] > best[0]:
            best = (vals[j], k, int(masks[j]))
    return best


def witness(n, mask):
    return mask_indices(mask, n)
