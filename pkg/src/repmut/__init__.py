"""Explicit solutions, reductions and a direct solver for the
replicator-mutator equation ``u_t = u_xx + (x - u_bar(t)) u``."""
from .closedform import (SolutionFrame, SolveStatus, Status, deviation,
                         deviation_bound, evaluate_u, extinction_profile,
                         gaussian_solution, mean_fitness, solution_grid,
                         solve_frame, solve_status)
from .errors import (BlowUp, DomainEscape, DomainError, GridMismatch,
                     NeverDefined, NoSolitaryWave, NonIntegrable, NotCompact,
                     NumericFailure, OutOfLifespan, RepmutError, StepTooLarge,
                     TransformOverflow, Unstable)
from .oracle import OracleConfig, compare, integrate
from .profiles import (AlgebraicTail, CompactSampled, Dirac, ExponentialTail,
                       Gaussian, GridFunction, ModifiedExponentialTail, Profile,
                       TailClass, TailKind, classify_tail, exp_moment,
                       normalize, profile_from_dict, profile_to_dict)
from .reductions import (FundamentalPair, Weight, avron_herbst,
                         fundamental_pair, gauge_external, heat_flow,
                         lens_transform, mehler_kernel, momentum_invert,
                         quad_weight_solution, resolve_mehler_sign)
from .special import SpecialFnConfig, airy_ai, erf_upper, heat_kernel
from .waves import (WaveProfile, sign_changes, solitary_wave, translated_wave,
                    wave_from_fourier, wave_residual)

__version__ = "0.1.0"
