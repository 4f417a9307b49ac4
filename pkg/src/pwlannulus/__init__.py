"""Decision of crossing period annuli in planar two-zone piecewise linear systems.

The package computes Poincaré half-maps through their integral
characterization, builds the displacement function, decides the existence of
a crossing period annulus by exact arithmetic on the parameters, and
cross-validates everything against an exact-flow simulation oracle.
"""

from .classifier import (Classification, ConditionRecord, Verdict, annulus_family,
                         check_H, classify, sliding_set, trivial_centers)
from .displacement import (CrossingOrbit, DisplacementContext, OrbitKind, delta,
                           delta_prime, f_value, find_crossing_orbits, make_context,
                           sign_delta_prime_at_zero, sign_delta_second_at_critical)
from .errors import (CanonicalizationError, ConditioningWarning, ContractError,
                     ConvergenceError, DomainError, EmptyDomainError, NoReturnError,
                     PreconditionError, PwlError, SlidingEncounteredError,
                     TangencyError)
from .halfmap import (HalfMapDomain, HalfSystem, Orientation, WPolynomial, derivative,
                      domain, evaluate, exists, pv_integral, puiseux_at_lambda,
                      q_value, sign_relation, taylor_at_zero, wpoly)
from .oracle import (CrossingEvent, SpectralCase, ZoneFlow, flow, next_crossing,
                     oracle_halfmap, sample_trajectory, verify_periodic)
from .params import (CanonicalSystem, DerivedQuantities, SystemParams,
                     derive_invariants, from_canonical, to_canonical)

__version__ = "0.1.0"

__all__ = [
    "CanonicalSystem", "CanonicalizationError", "Classification",
    "ConditionRecord", "ConditioningWarning", "ContractError",
    "ConvergenceError", "CrossingEvent", "CrossingOrbit", "DerivedQuantities",
    "DisplacementContext", "DomainError", "EmptyDomainError", "HalfMapDomain",
    "HalfSystem", "NoReturnError", "OrbitKind", "Orientation",
    "PreconditionError", "PwlError", "SlidingEncounteredError", "SpectralCase",
    "SystemParams", "TangencyError", "Verdict", "WPolynomial", "ZoneFlow",
    "annulus_family", "check_H", "classify", "delta", "delta_prime",
    "derivative", "derive_invariants", "domain", "evaluate", "exists",
    "f_value", "find_crossing_orbits", "flow", "from_canonical",
    "make_context", "next_crossing", "oracle_halfmap", "pv_integral",
    "puiseux_at_lambda", "q_value", "sample_trajectory",
    "sign_delta_prime_at_zero", "sign_delta_second_at_critical",
    "sign_relation", "sliding_set", "taylor_at_zero", "to_canonical",
    "trivial_centers", "verify_periodic", "wpoly",
]
