"""Sylvester equations ``AX - XB = C``: ADI and factored ADI, Zolotarev
bounds, unitary-dilation lifting, singular value decay, and a structured
integro-differential application."""
from . import decay, dilation, linalg, pide, sylvester, zolotarev
from .decay import bt_decay_check, fastdecay_bound, fastdecay_check, singvaldil_ratio_bound
from .dilation import (counterexample_instance, defect_pair, finite_unitary_dilation,
                       lift_finite, lift_truncated_infinite)
from .errors import (CapacityError, HypothesisError, SingularMatrixError, SylvliftError,
                     ValidationError)
from .pide import (PideProblem, discretize, iterations_required, s_prime_norm,
                   semiseparable_solve, solve_pide, spectral_window, table1)
from .sylvester import (FactoredPair, ShiftSchedule, adi, apply_sylvester, fadi,
                        fixed_shift_schedule, norm_bound_gamma, solve_kron, solve_neumann)
from .zolotarev import (CircleIntervalConfig, Interval, cross_ratio_gamma, elliptic_k,
                        z_circle_bound_corollary, z_circle_bound_simple,
                        z_circle_bound_theorem, z_exact_intervals, z_upper_intervals)

__version__ = "0.1.0"
