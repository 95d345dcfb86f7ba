"""Computable behavioral theory of discrete-time LTI stochastic processes.

Exact Laurent polynomial matrix algebra (rank, unimodularity, canonical
forms), kernel representations of behaviors, interconnection of processes
driven by white noise, rational spectral densities and a scale-invariant
spectral distance.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .laurent import (LaurentMatrix, LaurentPolynomial, HermiteResult, Z,  # noqa: F401
                      determinant, hermite_form, is_unimodular, normal_rank,
                      rank_estimate, star, unimodular_inverse)
from .textio import format_matrix, parse_matrix  # noqa: F401
from .behavior import (KernelRepresentation, TrajectoryWindow, apply_shift,  # noqa: F401
                       behaviors_equivalent, intersect, is_member, kernel_new,
                       kernel_reduce)
from .process import (LtiProcessModel, NoiseSpec, complementary,  # noqa: F401
                      has_full_event_algebra, interconnect)
from .spectral import (RationalMatrix, SpectralDensity, SpectralFactor,  # noqa: F401
                       density_eval, density_from_kernel, scalar_spectral_factor,
                       shape_distance, unimodular_equivalent)
from .sim import (SimConfig, SpectrumEstimate, Trajectory, compare_spectrum,  # noqa: F401
                  residual_noise, simulate, stability_check, welch_spectrum)
