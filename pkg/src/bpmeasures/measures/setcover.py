"""Exact minimum set cover and exact cover by branch and bound.

Sets and the target are Python ints used as bitmasks over element ids.
The lower bound packs uncovered elements no two of which share a usable
set (a fooling set): each of them needs its own set.
"""

from ..errors import BudgetExceeded

DEFAULT_NODE_BUDGET = 2_000_000


def _bits(mask):
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class _Search:
    def __init__(self, target, sets, exact, budget):
        self.target = target
        self.sets = [s & target for s in sets] if not exact else list(sets)
        self.exact = exact
        self.budget = budget
        self.nodes = 0
        self.elements = _bits(target)
        holders = {e: [] for e in self.elements}
        for sid, s in enumerate(self.sets):
            if exact and s & ~target:
                continue
            for e in _bits(s):
                holders[e].append(sid)
        self.holders = holders
        self.holder_mask = {e: sum(1 << sid for sid in ids) for e, ids in holders.items()}
        # static order for the packing bound: rarest elements first
        self.pack_order = sorted(self.elements, key=lambda e: len(holders[e]))
        self.best = None
        self.best_choice = None

    def packing_bound(self, uncovered, usable=-1):
        blocked = 0
        count = 0
        for e in self.pack_order:
            if uncovered >> e & 1:
                hm = self.holder_mask[e] & usable
                if not hm & blocked:
                    blocked |= hm
                    count += 1
        return count

    def greedy(self):
        uncovered = self.target
        chosen = []
        while uncovered:
            best_sid, best_gain = None, 0
            for sid, s in enumerate(self.sets):
                if self.exact and s & ~uncovered:
                    continue
                gain = bin(s & uncovered).count("1")
                if gain > best_gain:
                    best_sid, best_gain = sid, gain
            if best_sid is None:
                return None
            chosen.append(best_sid)
            uncovered &= ~self.sets[best_sid]
        return chosen

    def run(self):
        for e in self.elements:
            if not self.holders[e]:
                raise ValueError(f"element {e} is not contained in any candidate set")
        greedy = self.greedy()
        if greedy is not None:
            self.best = len(greedy)
            self.best_choice = greedy
        else:
            self.best = len(self.elements) + 1
        self.root_bound = self.packing_bound(self.target)
        if self.best > self.root_bound:
            self._dfs(self.target, [])
        if self.best_choice is None:
            raise ValueError("no exact cover exists with the given candidate sets")
        return self.best_choice

    def _dfs(self, uncovered, chosen):
        self.nodes += 1
        if self.nodes > self.budget:
            raise BudgetExceeded(
                f"set cover search exceeded {self.budget} nodes",
                bounds=(self.root_bound, self.best),
            )
        if not uncovered:
            if len(chosen) < self.best:
                self.best = len(chosen)
                self.best_choice = list(chosen)
            return
        if self.exact:
            usable = 0
            for sid, s in enumerate(self.sets):
                if not s & ~uncovered:
                    usable |= 1 << sid
        else:
            usable = -1
        if len(chosen) + max(1, self.packing_bound(uncovered, usable)) >= self.best:
            return
        # branch on the uncovered element with the fewest usable sets
        pick, pick_ids = None, None
        for e in self.pack_order:
            if uncovered >> e & 1:
                ids = [sid for sid in self.holders[e] if usable >> sid & 1]
                if pick is None or len(ids) < len(pick_ids):
                    pick, pick_ids = e, ids
                    if len(ids) <= 1:
                        break
        if not pick_ids:
            return
        pick_ids.sort(key=lambda sid: -bin(self.sets[sid] & uncovered).count("1"))
        for sid in pick_ids:
            chosen.append(sid)
            self._dfs(uncovered & ~self.sets[sid], chosen)
            chosen.pop()


def min_set_cover(target, sets, budget=DEFAULT_NODE_BUDGET):
    """Indices of a minimum family of ``sets`` whose union contains ``target``."""
    if not target:
        return []
    return _Search(target, sets, exact=False, budget=budget).run()


def min_exact_cover(target, sets, budget=DEFAULT_NODE_BUDGET):
    """Indices of a minimum family of pairwise disjoint sets with union ``target``.

    Sets that stick out of ``target`` are ignored.
    """
    if not target:
        return []
    return _Search(target, sets, exact=True, budget=budget).run()
