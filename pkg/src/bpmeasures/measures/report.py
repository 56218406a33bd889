"""Result objects shared by all measures."""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..boolfn import TruthTable, VarSet, unsplit


@dataclass
class MeasureReport:
    """Value of a max-min measure plus the (k, A) that attains it.

    ``witness_A`` holds 0-based indices; :meth:`to_dict` prints them 1-based.
    """

    measure: str
    value: object
    witness_k: int | None = None
    witness_A: tuple | None = None
    certificate: object = None
    order: tuple | None = None
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"measure": self.measure}
        v = self.value
        if isinstance(v, Fraction):
            out["value_num"] = v.numerator
            out["value_den"] = v.denominator
        elif isinstance(v, float):
            out["value_num"] = None if math.isinf(v) else v
        else:
            out["value_num"] = int(v)
        out["witness_k"] = self.witness_k
        out["witness_A"] = None if self.witness_A is None else [i + 1 for i in self.witness_A]
        if self.order is not None:
            out["order"] = [i + 1 for i in self.order]
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        for key, val in self.extra.items():
            out[key] = val
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class RectCertificate:
    """An explicit cover (OR) or orthogonal partition (sum) of ``target``."""

    kind: str
    parts: list
    target: TruthTable

    def part_table(self, i) -> TruthTable:
        A, g, h = self.parts[i]
        f = self.target
        mat = np.outer(g.values.astype(np.int64), h.values.astype(np.int64))
        return TruthTable(f.n, f.d, unsplit(mat, f.n, f.d, A))

    def verify(self):
        """Rebuild every part and check it against the target; returns bool."""
        f = self.target
        if self.kind not in ("cover", "partition"):
            return False
        acc = np.zeros(f.d**f.n, dtype=np.int64)
        for i, (A, g, h) in enumerate(self.parts):
            if not isinstance(A, VarSet) or not g.is_boolean:
                return False
            if g.n != len(A) or h.n != f.n - len(A):
                return False
            vals = self.part_table(i).values.astype(np.int64)
            if self.kind == "cover":
                if not h.is_boolean:
                    return False
                acc |= vals
            else:
                if np.any((acc != 0) & (vals != 0)):
                    return False
                acc += vals
        return bool(np.array_equal(acc, f.values.astype(np.int64)))

    def to_dict(self):
        parts = []
        for A, g, h in self.parts:
            parts.append(
                {
                    "A": A.one_based,
                    "g": g.values.tolist(),
                    "h": h.values.tolist(),
                }
            )
        return {"kind": self.kind, "size": len(self.parts), "parts": parts}
