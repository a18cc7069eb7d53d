"""Sum-rank metric codes, q-systems and sum-rank saturating systems over small finite fields."""

from .field import FieldContext, arith, context_for, field_create, fq_coords
from .codes import (SumRankCode, covering_radius, dual_code, is_minimal_code, min_distance,
                    rank_support, rank_weight, sumrank_weight, weight_via_system)
from .systems import (LinearSet, QSystem, code_from_system, is_cutting, is_saturating,
                      linear_set, saturation_radius, sphere_set_size, system_from_code)

__version__ = "0.1.0"

__all__ = ["FieldContext", "arith", "context_for", "field_create", "fq_coords",
           "SumRankCode", "covering_radius", "dual_code", "is_minimal_code", "min_distance",
           "rank_support", "rank_weight", "sumrank_weight", "weight_via_system",
           "LinearSet", "QSystem", "code_from_system", "is_cutting", "is_saturating",
           "linear_set", "saturation_radius", "sphere_set_size", "system_from_code"]
