"""Flipped alpha-continued fraction dynamics.

Exact expansions and matching intervals, infinite invariant densities with
transfer-operator verification, Krengel entropy and wandering rates, and
planar natural-extension simulation for the one-parameter family of
flipped Gauss maps on [min(alpha, 1-alpha), 1].
"""

from .adaptive import AdaptiveReal
from .cf import (ConvergentPair, RcfWord, SemiRegularWord, alternating_compare,
                 convergents, one_minus, parse_rcf, parse_semiregular,
                 periodic_cf_value, r_word, rcf_expand, semiregular_expand,
                 tower_value)
from .dilog import dilog
from .errors import (BreakpointHitError, CfdynError, DomainError,
                     EmptyWindowError, FiberAmbiguityError,
                     InsufficientDigitsError, PrecisionError,
                     VerificationError)
from .exactreal import ExactReal, ex_cmp, ex_floor, ex_sign, format_exact, parse_exact
from .maps import (Alpha, BranchInfo, Orbit, SignedDigit, branches, digit,
                   folded, gauss, in_flip_region, nakada, orbit, renyi, t_alpha)
from .matching import (MatchingResult, MatchingWindow, PseudoCenter,
                       detect_matching, entry_time_targets, entry_times,
                       enumerate_windows, interior_samples, is_maximal,
                       matching_window, pseudocenters, quadratic_interval,
                       scan_parameters, simplest_rational_between)
from .measure import (AsymptoticRates, BasisTerm, PiecewiseDensity,
                      asymptotics, birkhoff_demo, density, integrate,
                      krengel_entropy, krengel_entropy_quadrature,
                      transfer_apply, wandering_constant)
from .natext import (Box, PointCloud, Region, explicit_domain, measure_check,
                     ne_inverse, ne_map, nu_box_exact, preimage_rectangles,
                     simulate)
from .surd import GOLDEN_G, INV_SQRT2, QuadraticSurd, surd, surd_floor

__version__ = "0.1.0"
