"""Weyl functions, spectral transforms, and inverse spectral checks for
Jacobi operators on truncated lattices."""

from ._core import backend_name
from .coeffs import CoefficientModel
from .debranges import (DeBrangesDescriptor, chain_inclusion_check,
                        db_inner_product, de_branges_e, embedding_check,
                        kernel_identity_defect, reproducing_kernel)
from .inverse import (ReconstructionResult, borg_marchenko_rate,
                      hochstadt_liebermann_probe, reconstruct_from_measure,
                      shift_equivalence)
from .krein import (InterlacedSpectra, ProductRepresentation,
                    construct_phi_from_spectra, disc_disjoint_check,
                    elementary_factor, krein_fit)
from .lattice import (LatticeWindow, SolutionSample, apply_tau,
                      phi_fundamental, phi_zeros, solve_recurrence,
                      theta_fundamental, wronskian)
from .spectra import (SpectralMeasure, SpectrumResult, convergence_exponent,
                      discreteness_probe, eigen_tridiagonal, genus,
                      norming_constants, restriction_spectra, spectral_measure)
from .transform import (TransformPair, forward_transform, inverse_transform,
                        transform_pair)
from .weyl import (GaugeTransform, WeylFunction, classify_support,
                   free_halfline_m, gauge_apply, green_function,
                   herglotz_normalize, integral_representation_residual,
                   m_half_line, pole_residue_form, singular_m,
                   stieltjes_inversion, u_plus, weyl_m_sampler, weyl_psi)

__version__ = "0.1.0"

__all__ = [
    "CoefficientModel", "LatticeWindow", "SolutionSample", "SpectralMeasure",
    "SpectrumResult", "WeylFunction", "GaugeTransform", "InterlacedSpectra",
    "ProductRepresentation", "ReconstructionResult", "DeBrangesDescriptor",
    "TransformPair", "apply_tau", "wronskian", "solve_recurrence",
    "phi_fundamental", "theta_fundamental", "phi_zeros", "eigen_tridiagonal",
    "restriction_spectra", "norming_constants", "spectral_measure",
    "convergence_exponent", "genus", "discreteness_probe", "u_plus",
    "m_half_line", "singular_m", "weyl_m_sampler", "pole_residue_form",
    "weyl_psi", "green_function", "stieltjes_inversion", "gauge_apply",
    "herglotz_normalize", "integral_representation_residual",
    "classify_support", "free_halfline_m", "forward_transform",
    "inverse_transform", "transform_pair", "elementary_factor", "krein_fit",
    "construct_phi_from_spectra", "disc_disjoint_check",
    "reconstruct_from_measure", "borg_marchenko_rate",
    "hochstadt_liebermann_probe", "shift_equivalence", "de_branges_e",
    "reproducing_kernel", "db_inner_product", "embedding_check",
    "chain_inclusion_check", "kernel_identity_defect", "backend_name",
]
