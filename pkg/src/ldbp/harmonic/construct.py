"""Construction of a phase-invariant g with positive pairing against f and non-positive sections.

Given a profile ``f`` whose transform at degree ``-2l`` is negative somewhere,
we look for ``h = -q^2`` (``q`` a polynomial in the squared moduli) with
``int FT(f) h > 0``.  Since the transform is self-adjoint on harmonic shells
this equals ``int f g`` for ``g`` the transform of ``h |x|^{-2l}``, while
``int_{S∩H} g`` is a positive multiple of ``int_{S∩H^perp} h <= 0``.
Maximizing ``int FT(f) h / int q^2`` over ``q`` of degree ``J`` is a small
symmetric-definite eigenproblem.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

from ..bodies import BodySpec
from ..errors import ConstructionError, MethodMismatchError, PreconditionError
from ..polynomials import SimplexBasis, simplex_gauss_rule
from ..profiles import AXIAL, TORUS, PolynomialProfile
from ..quadrature import (
    axial_reduced_rule,
    sample_complex_subspace,
    subspace_sphere_rule,
    torus_reduced_rule,
)
from ..reports import VerificationReport
from .expansion import SimplexExpansion, harmonic_multiplier
from .scan import NEGATIVE, pd_scan

__all__ = ["GConstruction", "construct_g", "default_g_degree", "certify_g"]

SECTION_RTOL = 1e-8
PLANCHEREL_RTOL = 1e-2


def default_g_degree(profile):
    return 12 if profile.symmetry >= AXIAL else 4


@dataclass
class GConstruction:
    """Result of :func:`construct_g`.

    ``g`` and ``h`` are polynomial profiles of degree ``2*degree`` in the
    squared moduli; ``eigenvalue`` is the Rayleigh quotient of ``q`` (negative).
    """

    g: PolynomialProfile
    h: PolynomialProfile
    l: int
    degree: int
    eigenvalue: float
    pairing: float
    certificate: VerificationReport
    scan: object = None
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {"l": self.l, "degree": self.degree, "eigenvalue": self.eigenvalue,
                "pairing": self.pairing, "certificate": self.certificate.as_dict(),
                "scan": self.scan.as_dict() if self.scan is not None else None,
                "details": self.details}


def _matrix_rule(n, J, axial):
    """Sphere-measure rule on moduli, exact for polynomials of degree ``4J`` in ``w``."""
    m = 2 * J + 2
    r = axial_reduced_rule(n, m) if axial else torus_reduced_rule(n, m)
    return r.moduli, r.weights


def _project(basis, w, W, values):
    B = basis.evaluate(w)
    return (B @ (W * values)) / ((B ** 2) @ W)


def _integral_rule(n, axial, order):
    r = axial_reduced_rule(n, order) if axial else torus_reduced_rule(n, order)
    return r.moduli, r.weights


def certify_g(f, g, h, l, num_subspaces=200, seed=0, pairing=None, section_size=None):
    """Check the three properties of a constructed ``g``.

    (i) ``int f g > 0`` beyond its quadrature error; (ii) ``int_{S∩H} g <= tol``
    for random complex ``H`` of dimension ``n - l``; (iii) the Plancherel
    relation ``(2pi)^{2l} int_{S∩H} g = (2pi)^{2n} int_{S∩H^perp} h``.
    """
    n = f.n
    axial = g.axial
    # (i) direct quadrature at two resolutions
    hi, lo = (2000, 1000) if axial else ({2: 400, 3: 120}.get(n, 48), {2: 200, 3: 60}.get(n, 32))
    vals = []
    for order in (hi, lo):
        w, W = _integral_rule(n, axial, order)
        vals.append(float(W @ (f.on_moduli(w) * g.on_moduli(w))))
    fg, fg_err = vals[0], abs(vals[0] - vals[1])
    if pairing is not None:
        fg_err = max(fg_err, abs(fg - pairing))
    fg_ok = fg > 3.0 * fg_err

    # (ii), (iii) on random complex subspaces
    # g restricted to H has phase frequencies up to 2*deg and degree deg in the moduli
    size = section_size or g.degree // 2 + 2
    phases = 2 * g.degree + 4
    margins, scales, residuals = [], [], []
    for j in range(int(num_subspaces)):
        H = sample_complex_subspace(n, n - l, seed=[int(seed), j])
        rg = subspace_sphere_rule(H, size, phases=phases)
        gv = g(rg.nodes, check=False)
        sec = rg.integrate(gv)
        scale = rg.integrate(np.abs(gv))
        rh = subspace_sphere_rule(H.perp, max(size, 2), phases=phases)
        lhs = (2 * math.pi) ** (2 * l) * sec
        rhs = (2 * math.pi) ** (2 * n) * rh.integrate(h(rh.nodes, check=False))
        margins.append(sec)
        scales.append(scale)
        residuals.append(abs(lhs - rhs) / max(abs(rhs), 1e-300))
    margins, scales = np.array(margins), np.array(scales)
    residuals = np.array(residuals)
    sec_ok = bool(np.all(margins <= SECTION_RTOL * scales))
    plan_ok = bool(np.all(residuals <= PLANCHEREL_RTOL))
    worst = int(np.argmax(margins / scales))
    return VerificationReport(
        name="g-certificate",
        passed=bool(fg_ok and sec_ok and plan_ok),
        margin=fg,
        tol=SECTION_RTOL,
        seed=seed,
        num_checks=int(num_subspaces),
        margins=margins,
        details={
            "pairing": {"value": fg, "error": fg_err, "spectral": pairing, "passed": bool(fg_ok)},
            "sections": {"max": float(margins.max()), "max_relative": float((margins / scales)[worst]),
                         "scale_at_max": float(scales[worst]), "passed": sec_ok,
                         "rule_size": int(size), "phases": int(phases)},
            "plancherel": {"max_residual": float(residuals.max()), "tol": PLANCHEREL_RTOL,
                           "passed": plan_ok},
        },
    )


def construct_g(f, n=None, l=1, degree=None, num_subspaces=200, seed=0, scan=None,
                fit_degree=None, raise_on_failure=True):
    """Build ``g`` for the profile ``f`` (or body ``rho^{2l}``) at degree ``-2l``.

    Requires a torus-invariant profile whose transform was found negative by
    :func:`pd_scan` (run here unless ``scan`` is given).
    """
    if isinstance(f, BodySpec):
        f = f.profile(2.0 * l)
    if n is not None and n != f.n:
        raise PreconditionError(f"n={n} does not match the profile dimension {f.n}")
    n = f.n
    if f.symmetry < TORUS:
        raise MethodMismatchError("construct_g works on torus-invariant profiles")
    scan = scan or pd_scan(f, l)
    if scan.status != NEGATIVE:
        raise PreconditionError(
            f"transform at degree -{2 * l} has no certified negative region "
            f"(min {scan.min_value:.4g} +- {scan.error:.3g}, status {scan.status})")
    axial = f.symmetry >= AXIAL and n >= 2
    J = int(degree or default_g_degree(f))
    p = 2.0 * l
    N = 2 * n

    # transform of f truncated to the shells that pair with h
    D = 2 * J
    eng = SimplexExpansion(n, max(D, fit_degree or D), axial=axial).fit(f)
    w, W = _matrix_rule(n, J, axial)
    ft = eng.fourier(w, p, cutoff=D)

    qb = SimplexBasis(n, J, axial=axial)
    Phi = qb.evaluate(w)
    A = (Phi * (W * ft)) @ Phi.T
    G = (Phi * W) @ Phi.T
    lam, vec = eigh(A, G, subset_by_index=[0, 0])
    lam, c = float(lam[0]), vec[:, 0]
    if not lam < 0:
        raise ConstructionError(f"no degree-{J} square pairs negatively with the transform "
                                f"(smallest Rayleigh quotient {lam:.4g})", {"eigenvalue": lam})
    q = c @ Phi
    hb = SimplexBasis(n, D, axial=axial)
    hcoef = _project(hb, w, W, -(q ** 2))
    h = PolynomialProfile(n, D, hcoef, axial)
    g = PolynomialProfile(n, D, harmonic_multiplier(N, p, 2 * hb.degree) * hcoef, axial)
    pairing = -lam * float(W @ q ** 2)

    cert = certify_g(f, g, h, l, num_subspaces=num_subspaces, seed=seed, pairing=pairing)
    out = GConstruction(g, h, int(l), J, lam, pairing, cert, scan,
                        {"axial": axial, "harmonic_degree": 2 * D, "q_coef": c})
    if raise_on_failure and not cert.passed:
        raise ConstructionError("g certificate failed", cert.as_dict())
    return out
