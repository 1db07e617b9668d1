"""Exact laws, certified bounds, and search tools for the minimum absolute
coordinate of centered Gaussian vectors with unit variances.

The pieces fit together like this: `corrmat` builds and validates the
correlation-matrix families; `exactlaw` carries the closed-form law of
the minimum for the cosine family; `interval` proves the second-moment
separation between the cosine and simplex families with outward-rounded
arithmetic; `montecarlo` and `zones` gather seeded statistical evidence
for the dominance and zone-measure conjectures; `search` reruns the
optimization experiments that rediscover the cosine matrix; `cli` wraps
everything in one executable.
"""

from .corrmat import (CorrelationMatrix, GramFactor, SignedPermutation,
                      ValidationReport, canonical_distance,
                      canonical_distance_heuristic, cosine_covariance,
                      gram_factor, identity_covariance, random_correlation,
                      simplex_covariance, validate)
from .exactlaw import (CosineLaw, cos_moment, cos_moment_p2, cos_tail,
                       identity_tail, sample_cos_min)
from .interval import (CounterexampleCertificate, Interval,
                       cosine_p2_enclosure, simplex_p2_enclosure,
                       verify_counterexample)
from .montecarlo import (DominanceReport, MomentEstimate, TailCurve,
                         dominance_check, estimate_moment,
                         estimate_tail_curve, sample_min)
from .quadrature import QuadratureResult, integrate
from .search import (CampaignConfig, CampaignSummary, Objective, SearchReport,
                     SearchSpace, differential_evolution, evaluate_objective,
                     local_search, run_campaign)
from .streams import RngStream
from .zones import (MeasureEstimate, ZoneConfig, ZoneScanReport, alpha_of,
                    evenly_spaced_config, single_zone_measure,
                    slab_prob_via_zones, union_measure_d2_exact,
                    union_measure_mc, zone_conjecture_scan)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "CorrelationMatrix", "GramFactor", "SignedPermutation", "ValidationReport",
    "canonical_distance", "canonical_distance_heuristic", "cosine_covariance",
    "gram_factor", "identity_covariance", "random_correlation",
    "simplex_covariance", "validate",
    "CosineLaw", "cos_moment", "cos_moment_p2", "cos_tail", "identity_tail",
    "sample_cos_min",
    "CounterexampleCertificate", "Interval", "cosine_p2_enclosure",
    "simplex_p2_enclosure", "verify_counterexample",
    "DominanceReport", "MomentEstimate", "TailCurve", "dominance_check",
    "estimate_moment", "estimate_tail_curve", "sample_min",
    "QuadratureResult", "integrate",
    "CampaignConfig", "CampaignSummary", "Objective", "SearchReport",
    "SearchSpace", "differential_evolution", "evaluate_objective",
    "local_search", "run_campaign",
    "RngStream",
    "MeasureEstimate", "ZoneConfig", "ZoneScanReport", "alpha_of",
    "evenly_spaced_config", "single_zone_measure", "slab_prob_via_zones",
    "union_measure_d2_exact", "union_measure_mc", "zone_conjecture_scan",
]
