"""Exact complexity measures of explicit functions."""

from .comm import ProtocolNode, ccm, measure_CC, measure_NCC, nccm
from .maxmin import max_min
from .rectangles import (
    cover_number_fixed,
    cover_number_k,
    measure_C,
    measure_C_hat,
    measure_P,
    measure_P_hat,
    measure_P_plus,
    measure_P_plus_hat,
    monochromatic_partition_ilp,
    partition_plus_fixed,
    partition_plus_k,
)
from .relations import RelationReport, relation_suite
from .report import MeasureReport, RectCertificate
from .subfun import is_m_mixed, measure_S, measure_S_hat, measure_S_star, prefix_profile
from .twolevel import cnf_size, dnf_size, prime_implicants, weight
