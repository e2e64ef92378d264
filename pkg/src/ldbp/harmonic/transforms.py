"""Fourier transforms of homogeneous extensions of spherical profiles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import null_space

from .._validation import as_complex, as_real, check_directions
from ..bodies import BodyPowerProfile, BodySpec
from ..errors import AccuracyError, InputDomainError, MethodMismatchError
from ..profiles import AXIAL, TORUS, SphericalProfile, moduli
from ..polynomials import simplex_gauss_rule
from ..quadrature import fd_laplacian, product_rule
from .expansion import SimplexExpansion, ZonalTransform, harmonic_multiplier

__all__ = [
    "homog_ft_constant",
    "HomogeneousProfile",
    "FTResult",
    "homog_ft",
    "expansion_for",
    "default_degree",
    "parallel_section_function",
    "section_laplacian",
]

MULTIPLIER = "multiplier"
SECTION_LAPLACIAN = "section-laplacian"

# default truncation, total degree in the squared moduli (harmonic degree is twice this)
TORUS_DEGREE = {2: 48, 3: 24, 4: 16}
AXIAL_DEGREE = 240
ZONAL_DEGREE = 6


def homog_ft_constant(N, p):
    """``c(N,p)`` with ``(|x|^{-p})^ = c(N,p) |xi|^{p-N}`` for ``0 < p < N``."""
    if not 0 < p < N:
        raise InputDomainError(f"need 0 < p < N, got p={p}, N={N}")
    return float(harmonic_multiplier(N, p, 0))


@dataclass(frozen=True)
class HomogeneousProfile:
    """``f(x/|x|) |x|^{-p}`` on R^{2n}."""

    profile: SphericalProfile
    p: float

    def __post_init__(self):
        if not 0 < self.p < self.N:
            raise InputDomainError(f"homogeneity degree must satisfy 0 < p < {self.N}, got {self.p}")

    @property
    def N(self):
        return 2 * self.profile.n


@dataclass
class FTResult:
    xi: np.ndarray
    value: float
    method: str
    error: float
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {"xi": self.xi, "value": self.value, "method": self.method,
                "error": self.error, "details": self.details}


def default_degree(profile):
    if profile.symmetry >= AXIAL:
        return AXIAL_DEGREE
    if profile.symmetry >= TORUS:
        return TORUS_DEGREE.get(profile.n, 10)
    return ZONAL_DEGREE


@lru_cache(maxsize=32)
def expansion_for(profile, degree=None, quad_order=None):
    """Fitted expansion engine matching the symmetry of ``profile`` (cached)."""
    degree = degree or default_degree(profile)
    if profile.symmetry >= AXIAL and profile.n >= 2:
        return SimplexExpansion(profile.n, degree, quad_order, axial=True).fit(profile)
    if profile.symmetry >= TORUS:
        return SimplexExpansion(profile.n, degree, quad_order).fit(profile)
    return ZonalTransform(profile.n, degree, quad_order or 10).fit(profile)


def _coerce(profile, p):
    if isinstance(profile, HomogeneousProfile):
        return profile
    if isinstance(profile, BodySpec):
        return HomogeneousProfile(profile.profile(p), p)
    return HomogeneousProfile(profile, p)


def _multiplier_ft(hp, xi, degree, quad_order, max_rel_error):
    f = hp.profile
    eng = expansion_for(f, degree, quad_order)
    if isinstance(eng, SimplexExpansion):
        filtered = math.isfinite(f.smoothness)
        vals, errs = eng.fourier_with_error(moduli(xi), hp.p, filtered=filtered)
        details = {"engine": "axial" if eng.axial else "torus", "degree": eng.degree,
                   "filtered": filtered}
        scale = abs(harmonic_multiplier(hp.N, hp.p, 0) * eng.mean_)
    else:
        vals, errs = eng.fourier_with_error(xi, hp.p)
        details = {"engine": "zonal", "degree": eng.degree, "filtered": False}
        scale = abs(harmonic_multiplier(hp.N, hp.p, 0) * eng.weights_.sum()) / (
            2 * math.pi ** f.n / math.factorial(f.n - 1))
    if max_rel_error is not None and np.any(errs > max_rel_error * scale):
        raise AccuracyError(
            f"harmonic truncation not converged: error {float(np.max(errs)):.3g} "
            f"exceeds {max_rel_error:g} x scale {scale:.3g}")
    details["scale"] = scale
    return vals, errs, details


def homog_ft(profile, xi, method=MULTIPLIER, p=None, degree=None, quad_order=None,
             max_rel_error=1e-2, **section_opts):
    """Transform of ``f(x/|x|)|x|^{-p}`` at the unit vector ``xi``.

    ``profile`` is a :class:`HomogeneousProfile`, or a spherical profile/body
    together with ``p`` (a body stands for ``rho^p``).  ``method`` is
    ``"multiplier"`` (harmonic expansion, any symmetry) or
    ``"section-laplacian"`` (bodies invariant under a common phase, with
    ``p = 2n - 2m - 2``).
    """
    hp = _coerce(profile, p if p is not None else getattr(profile, "p", None))
    xi = check_directions(xi, hp.N, name="xi")
    single = xi.ndim == 1
    xs = np.atleast_2d(xi)
    if method == MULTIPLIER:
        vals, errs, details = _multiplier_ft(hp, xs, degree, quad_order, max_rel_error)
    elif method == SECTION_LAPLACIAN:
        if not isinstance(hp.profile, BodyPowerProfile) or hp.profile.p != hp.p:
            raise MethodMismatchError("the section-Laplacian method needs a body profile rho^p")
        out = [section_laplacian(hp.profile.body, x, hp.p, **section_opts) for x in xs]
        vals = np.array([o[0] for o in out])
        errs = np.array([o[1] for o in out])
        details = out[0][2]
    else:
        raise InputDomainError(f"unknown transform method {method!r}")
    res = [FTResult(x, float(v), method, float(e), dict(details)) for x, v, e in zip(xs, vals, errs)]
    return res[0] if single else res


def _complex_line_complement(xi):
    """Orthonormal complex frame of ``(C xi)^perp``."""
    z = as_complex(xi)
    return null_space(z.conj()[None, :])


def _axis_index(spec, xi, tol=1e-14):
    """Index j if ``xi`` is a phase multiple of ``e_j`` and the body is torus invariant."""
    if spec.symmetry < TORUS:
        return None
    w = moduli(xi)
    j = int(np.argmax(w))
    return j if abs(w[j] - 1.0) <= tol else None


def _ray_radius(norm_at, t_hi, iters=80, ftol=4e-16):
    """Solve ``norm_at(t) = 1`` on ``[0, t_hi]`` per ray (Illinois false position, bracket kept).

    ``norm_at(t, idx)`` evaluates the rays ``idx`` only.
    """
    a = np.zeros_like(t_hi)
    b = t_hi.copy()
    every = np.arange(len(b))
    fa = norm_at(a, every) - 1.0
    fb = norm_at(b, every) - 1.0
    side = np.zeros(len(b), dtype=int)
    root = np.full(len(b), np.nan)
    act = every
    for _ in range(iters):
        aa, bb, ga, gb = a[act], b[act], fa[act], fb[act]
        with np.errstate(invalid="ignore", divide="ignore"):
            x = bb - gb * (bb - aa) / (gb - ga)
        x = np.where(np.isfinite(x) & (x > aa) & (x < bb), x, 0.5 * (aa + bb))
        fx = norm_at(x, act) - 1.0
        left = fx < 0
        # keep the bracket a (inside) < root < b (outside); halve the stale end value
        a[act], fa[act] = np.where(left, x, aa), np.where(left, fx, ga)
        b[act], fb[act] = np.where(left, bb, x), np.where(left, gb, fx)
        s = side[act]
        fb[act] = np.where(left & (s == 1), 0.5 * fb[act], fb[act])
        fa[act] = np.where(~left & (s == -1), 0.5 * fa[act], fa[act])
        side[act] = np.where(left, 1, -1)
        done = (np.abs(fx) <= ftol) | (b[act] - a[act] <= 1e-15 * np.maximum(b[act], 1.0))
        root[act[done]] = x[done]
        act = act[~done]
        if not len(act):
            break
    rest = np.isnan(root)
    root[rest] = 0.5 * (a[rest] + b[rest])
    return root


class _SliceGeometry:
    """Quadrature on the slice sphere of ``(C xi)^perp`` for repeated slice volumes."""

    def __init__(self, spec, xi, order, phases):
        self.spec = spec
        self.xi = np.asarray(xi, dtype=float)
        self.n = spec.n
        self.dim = 2 * self.n - 2
        self.axis = _axis_index(spec, self.xi)
        if self.axis is not None:
            w, W = simplex_gauss_rule(self.n - 2, order) if self.n > 2 else (np.ones((1, 1)), np.ones(1))
            self.moduli = w
            self.weights = W * 2.0 * math.pi ** (self.n - 1)
        else:
            _, y, self.weights = product_rule(self.n - 1, order, phases, rtheta=False)
            F = _complex_line_complement(self.xi)
            self.dirs = as_real(y @ F.T)
        self.rmax = spec.outer_radius()
        if not math.isfinite(self.rmax):
            self.rmax = 10.0

    def volume(self, u):
        spec = self.spec
        c = u[0] * self.xi + u[1] * as_real(1j * as_complex(self.xi))
        cn = float(spec.norm(c))
        if cn >= 1.0:
            return 0.0
        r2 = float(u[0] ** 2 + u[1] ** 2)
        if self.axis is not None:
            def norm_at(t, idx):
                w = np.empty((len(idx), self.n))
                others = [i for i in range(self.n) if i != self.axis]
                w[:, others] = (t * t)[:, None] * self.moduli[idx]
                w[:, self.axis] = r2
                return spec.norm_moduli(w)
            t_hi = np.full(len(self.moduli), 1.01 * (self.rmax + math.sqrt(r2)))
        else:
            def norm_at(t, idx):
                return spec.norm(c[None, :] + t[:, None] * self.dirs[idx])
            t_hi = np.full(len(self.dirs), 1.01 * (self.rmax + math.sqrt(r2)))
        R = _ray_radius(norm_at, t_hi)
        return float(self.weights @ R ** self.dim) / self.dim


def parallel_section_function(spec, xi, u, order=24, phases=24):
    """``(2n-2)``-volume of ``K ∩ ((C xi)^perp + u_1 xi + u_2 i xi)``.

    ``u`` is a point of R^2 or an array of them.  Slices are integrated in
    polar coordinates about their centre, so ``K`` must be star-shaped with
    respect to every slice centre used (true for convex bodies).
    """
    xi = check_directions(xi, 2 * spec.n, name="xi")
    geo = _SliceGeometry(spec, xi, order, phases)
    u = np.asarray(u, dtype=float)
    if u.ndim == 1:
        return geo.volume(u)
    return np.array([geo.volume(x) for x in u])


def section_laplacian(spec, xi, p, h0=None, order=24, phases=24, levels=5, rtol=1e-6):
    """Transform of ``||x||_K^{-p}`` at ``xi`` from the Laplacian of the parallel section function.

    Returns ``(value, error, details)``.
    """
    n = spec.n
    m2 = 2 * n - 2 - p
    if m2 < 0 or abs(m2 - round(m2)) > 1e-12 or round(m2) % 2 or round(m2) // 2 >= n - 1:
        raise MethodMismatchError(
            f"degree -{p} is not of the form -(2n-2m-2) with 0 <= m < n-1 for n={n}")
    m = int(round(m2)) // 2
    if spec.symmetry < 1:
        raise MethodMismatchError("the section-Laplacian method needs a phase-invariant body")
    geo = _SliceGeometry(spec, xi, order, phases)
    k = 2 * n - 2 * m - 2
    if m == 0:
        a0 = geo.volume(np.zeros(2))
        coarse = _SliceGeometry(spec, xi, order - max(order // 4, 2),
                                phases - max(phases // 4, 2)).volume(np.zeros(2))
        return 2 * math.pi * k * a0, 2 * math.pi * k * abs(a0 - coarse), {"m": 0, "order": order}
    if h0 is None:
        h0 = 0.1 * float(spec.radial(xi))
    scale = geo.volume(np.zeros(2)) / h0 ** (2 * m)

    def laplacian(g):
        F = lambda pts: np.array([g.volume(q) for q in pts])
        return fd_laplacian(F, m, h0, levels=levels, rtol=rtol, atol=1e-9 * scale)

    res = laplacian(geo)
    # slice quadrature error from a coarser rule
    co, cp = order - max(order // 4, 2), phases - max(phases // 4, 2)
    coarse = laplacian(_SliceGeometry(spec, xi, co, cp))
    factor = (-1) ** m * 2 * math.pi * k
    err = abs(factor) * (res.error + abs(res.value - coarse.value))
    return factor * res.value, err, {"m": m, "h0": h0, "order": order, "coarse_order": co,
                                     "steps": res.steps}
