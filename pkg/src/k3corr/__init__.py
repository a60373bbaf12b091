"""Exact lattice arithmetic for Mukai vectors: when is M_X(r, H, s) = X?"""

from .bqf import Bqf, represents, represents_value
from .criteria import (
    Rank2Input,
    necessary_condition,
    rank1_self_iso,
    rank2_series_check,
    search_critical_rank2,
    sufficient_high_rank,
    verify_rank3_example,
)
from .errors import K3CorrError
from .lattice import GramLattice, LatticeVector, discriminant_group, smith_normal_form
from .mukai import MukaiType, MukaiVector, invariants, mukai_element, recover_ab, reduce_rank1

__all__ = [
    "Bqf", "represents", "represents_value",
    "Rank2Input", "necessary_condition", "rank1_self_iso", "rank2_series_check",
    "search_critical_rank2", "sufficient_high_rank", "verify_rank3_example",
    "K3CorrError", "GramLattice", "LatticeVector", "discriminant_group", "smith_normal_form",
    "MukaiType", "MukaiVector", "invariants", "mukai_element", "recover_ab", "reduce_rank1",
]
