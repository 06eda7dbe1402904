"""Zeros of generalized hypergeometric polynomials.

Construction of the degree-N monic families, their zeros, the algebraic
system those zeros satisfy, and the interaction matrices whose spectra are
known in closed form (isospectral in the alpha parameters, integer for
integer betas), including the Jacobi-polynomial specializations.
"""

from .core import (CoefficientBundle, ParameterSet, ab_expand, alpha_coeffs,
                   beta_coeffs, cancel_pairs, coefficient_bundle, eval_monic,
                   eval_monic_derivative, gamma_closed, gamma_recursive,
                   jacobi_to_hypergeometric, pochhammer, x_of_z, z_of_x)
from .errors import (CaseArityMismatch, ClusterWarning, DegenerateBeta,
                     DegenerateZeros, HypzeroError, MapSingularity,
                     NoConvergence, PairMismatch, SamplingExhausted)
from .rootfind import (ZeroSet, companion_matrix, find_zeros, verify_zeroset,
                       vieta_coefficients, zeroset_from_zeros)
from .sampling import SampleLimits, SplitMix64, sample_params
from .spectral import (IsospectralityReport, SpectrumReport,
                       assemble_interaction_matrix, build_L, build_Lambda,
                       eigenvalues, expected_spectrum, fd_jacobian,
                       isospectrality_scan, jacobi_G, jacobi_L_big,
                       jacobi_L_small, jacobi_polynomial_value, jacobi_sigma,
                       jacobi_zeros, pair_spectra, spectrum_report,
                       verify_reduced_case, verify_spectrum, verify_stationary)
from .zerofunc import (FGVectors, SigmaTable, f_closed, f_jacobian,
                       f_recursive, fg_vectors, g_closed, g_from_f,
                       g_jacobian, residual, residual_report,
                       residual_special, sigma, sigma_partial, sigma_table,
                       sigma_vector)

__version__ = "0.1.0"
