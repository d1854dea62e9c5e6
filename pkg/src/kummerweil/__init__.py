"""Generalised Kummer models of Weil restrictions of CM elliptic curves,
point counts over prime fields and CM newform coefficients."""

from .cmhecke import QuadIdeal, QuadOrder, class_group, newform_ap, prime_above
from .exactnum import MinPoly, NFElem
from .fpcount import count_double_cover, elliptic_trace
from .kummer import KummerModel, WeierstrassCurve, build_kummer, expected_invariants
from .multipoly import MPoly, galois_norm_poly
from .verify import get_scenario, run_cy3, run_k3

__version__ = "0.1.0"

__all__ = [
    "MinPoly",
    "NFElem",
    "MPoly",
    "galois_norm_poly",
    "WeierstrassCurve",
    "KummerModel",
    "build_kummer",
    "expected_invariants",
    "count_double_cover",
    "elliptic_trace",
    "QuadOrder",
    "QuadIdeal",
    "class_group",
    "prime_above",
    "newform_ap",
    "get_scenario",
    "run_cy3",
    "run_k3",
]
