"""Approximate equilibria in Hotelling spatial competition on [0, 1]."""

from hotelling.constructors import (equipartition, log_tail_full, median_pair,
                                    three_candidate_sixth, variant_seventh)
from hotelling.density import (LogTailDensity, PiecewisePolyDensity, cut, eval_cdf,
                               log_tail_density, max_mass_window, random_density,
                               sawtooth_witness, uniform)
from hotelling.game import Mode, Profile, VoteBreakdown, utilities, utilities_distinct, utilities_shared
from hotelling.solver import (ANALYTIC, DeltaMode, DeviationOutcome, EpsilonReport, Grid, Side,
                              best_response, deviation_payoff, epsilon_of)
from hotelling.verify import (GridSpec, ScanResult, bound_certificate, claim_diagnostics_three,
                              scan_min_epsilon)

__version__ = "0.1.0"
