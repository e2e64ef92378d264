"""Lower dimensional sections and volumes of phase-invariant bodies in complex hyperbolic space."""
from .bodies import (
    ComplexEllipsoid,
    Cotent,
    Dilate,
    EuclideanBall,
    LqBall,
    Perturbed,
    PhaseTestBody,
    Tent,
    TwoEllipseBody,
    perturbed_radial,
    radial,
)
from .counterexample import build_pair, one_dim_affirmative_check, seed_nonpd_body, verify_pair
from .ellipsoid import Quadric, circular_plane, section_conic, similarity_ratio
from .errors import (
    AccuracyError,
    BodyNotContainedError,
    ConstructionError,
    DegenerateInputError,
    EpsilonTooLargeError,
    InputDomainError,
    LDBPError,
    MethodMismatchError,
    NumericalInstabilityError,
    PreconditionError,
    SeedRejectedError,
    SpecParseError,
    SpecValidationError,
)
from .harmonic import construct_g, homog_ft, homog_ft_constant, hplane_ft_invariance, parseval_residual, pd_scan
from .hyperbolic import bergman_geodesic, h_convex_test, hvol, hyper_moment, section_hvol

__version__ = "0.1.0"

__all__ = [
    "ComplexEllipsoid",
    "Cotent",
    "Dilate",
    "EuclideanBall",
    "LqBall",
    "Perturbed",
    "PhaseTestBody",
    "Tent",
    "TwoEllipseBody",
    "perturbed_radial",
    "radial",
    "build_pair",
    "one_dim_affirmative_check",
    "seed_nonpd_body",
    "verify_pair",
    "Quadric",
    "circular_plane",
    "section_conic",
    "similarity_ratio",
    "AccuracyError",
    "BodyNotContainedError",
    "ConstructionError",
    "DegenerateInputError",
    "EpsilonTooLargeError",
    "InputDomainError",
    "LDBPError",
    "MethodMismatchError",
    "NumericalInstabilityError",
    "PreconditionError",
    "SeedRejectedError",
    "SpecParseError",
    "SpecValidationError",
    "construct_g",
    "homog_ft",
    "homog_ft_constant",
    "hplane_ft_invariance",
    "parseval_residual",
    "pd_scan",
    "bergman_geodesic",
    "h_convex_test",
    "hvol",
    "hyper_moment",
    "section_hvol",
]
