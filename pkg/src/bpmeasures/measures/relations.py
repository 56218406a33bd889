"""Check the inequalities tying the measures together on one function.

All comparisons are done on exact integers: ``log log S <= log C`` becomes
``S <= 2^C``, ``log P <= CC`` becomes ``P <= 2^CC`` and so on.  This also
gives the right answer when C = 0 (both logs are minus infinity).
"""

from dataclasses import dataclass, field

from ..boolfn import TruthTable, combine
from ..errors import InvariantViolation
from .comm import measure_CC, measure_NCC
from .rectangles import measure_C, measure_C_hat, measure_P, measure_P_hat
from .subfun import measure_S, measure_S_hat


@dataclass
class RelationReport:
    values: dict
    checks: list = field(default_factory=list)

    @property
    def ok(self):
        return all(passed for _, passed in self.checks)

    def failures(self):
        return [name for name, passed in self.checks if not passed]

    def to_dict(self):
        vals = {}
        for key, v in self.values.items():
            vals[key] = [v.numerator, v.denominator] if hasattr(v, "denominator") and not isinstance(v, int) else v
        return {"values": vals, "checks": {name: passed for name, passed in self.checks}, "ok": self.ok}


def _s_upper(n):
    # max_k min(2^k, 2^(2^(n-k))) as an exact integer
    return max(min(2**k, 2 ** (2 ** (n - k))) for k in range(1, n + 1)) if n else 1


def relation_values(f: TruthTable):
    return {
        "S": measure_S(f).value,
        "S_hat": measure_S_hat(f).value,
        "S_hat_neg": measure_S_hat(combine("negate", f)).value,
        "C": measure_C(f).value,
        "C_hat": measure_C_hat(f, check=False).value,
        "P": measure_P(f).value,
        "P_hat": measure_P_hat(f).value,
        "CC": measure_CC(f).value,
        "NCC_log2_of": measure_NCC(f).extra["log2_of"],
    }


def check_relations(n, v):
    S, Sh, C, Ch, P, Ph, CC = (v[k] for k in ("S", "S_hat", "C", "C_hat", "P", "P_hat", "CC"))
    return [
        ("S_hat <= S", Sh <= S),
        ("C_hat <= C", Ch <= C),
        ("P_hat <= P", Ph <= P),
        ("C_hat <= P_hat", Ch <= Ph),
        ("C <= P", C <= P),
        ("P/2 <= S", P <= 2 * S),
        ("S <= 2^C", S <= 2**C),
        ("S <= max_k min(2^k, 2^2^(n-k))", S <= _s_upper(n)),
        ("P <= 2^(n/2+1)", P * P <= 2 ** (n + 2)),
        ("CC <= n/2+1", 2 * CC <= n + 2),
        ("NCC <= CC", v["NCC_log2_of"] <= 2**CC),
        ("log log S <= log C", S <= 2**C),
        ("log C = NCC", v["NCC_log2_of"] == C),
        ("log C <= log P", C <= P),
        ("log P <= CC", P <= 2**CC),
        ("CC <= 1 + log S", 2**CC <= 2 * S),
        ("S_hat(f) = S_hat(not f)", Sh == v["S_hat_neg"]),
    ]


def relation_suite(f: TruthTable, overrides=None, strict=True) -> RelationReport:
    """Evaluate all measures of a Boolean f and every inequality between them.

    ``overrides`` replaces computed values (used to test that a violation is
    actually caught).  With ``strict`` a failing inequality raises
    :class:`InvariantViolation` carrying the report.
    """
    if not f.is_boolean or f.d != 2:
        raise ValueError("relation suite needs a Boolean function on bits")
    values = relation_values(f)
    if overrides:
        unknown = set(overrides) - set(values)
        if unknown:
            raise ValueError(f"unknown measures in overrides: {sorted(unknown)}")
        values.update(overrides)
    report = RelationReport(values, check_relations(f.n, values))
    if strict and not report.ok:
        raise InvariantViolation(f"relations violated: {report.failures()}", report)
    return report
