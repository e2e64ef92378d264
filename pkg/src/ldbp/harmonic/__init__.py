"""Fourier analysis of homogeneous extensions of spherical profiles."""
from .construct import GConstruction, certify_g, construct_g
from .expansion import SimplexExpansion, ZonalTransform, harmonic_multiplier, spectral_filter
from .scan import INDETERMINATE, NEGATIVE, POSITIVE, PDScanResult, hplane_ft_invariance, parseval_residual, pd_scan
from .transforms import (
    FTResult,
    HomogeneousProfile,
    homog_ft,
    homog_ft_constant,
    parallel_section_function,
    section_laplacian,
)

__all__ = [
    "GConstruction",
    "certify_g",
    "construct_g",
    "SimplexExpansion",
    "ZonalTransform",
    "harmonic_multiplier",
    "spectral_filter",
    "INDETERMINATE",
    "NEGATIVE",
    "POSITIVE",
    "PDScanResult",
    "hplane_ft_invariance",
    "parseval_residual",
    "pd_scan",
    "FTResult",
    "HomogeneousProfile",
    "homog_ft",
    "homog_ft_constant",
    "parallel_section_function",
    "section_laplacian",
]
