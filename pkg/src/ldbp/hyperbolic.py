"""Volumes, complex sections and geodesics for the ball model of complex hyperbolic space."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._validation import as_complex, as_real, check_open_interval, check_positive
from .bodies import t_of_rho
from .errors import BodyNotContainedError, DegenerateInputError, InputDomainError
from .profiles import AXIAL, TORUS
from .quadrature import (
    ComplexSubspaceFrame,
    axial_reduced_rule,
    sphere_rule,
    subspace_sphere_rule,
    torus_reduced_rule,
)
from .reports import VerificationReport

__all__ = [
    "hyper_moment",
    "hyper_kernel",
    "hvol",
    "section_hvol",
    "default_rule",
    "coarser_rule",
    "hvol_with_error",
    "GeodesicArc",
    "bergman_geodesic",
    "bergman_distance",
    "h_convex_test",
    "dilation_factor",
    "moment_gap",
]


def hyper_kernel(p, r):
    """Radial density ``r^{2p-1} / (1 - r^2)^{p+1}`` whose integral is :func:`hyper_moment`."""
    r = np.asarray(r, dtype=float)
    return r ** (2 * p - 1) / (1.0 - r * r) ** (p + 1)


def hyper_moment(p, rho):
    """``mu_p(rho) = (rho^2 / (1 - rho^2))^p / (2p)`` for ``0 <= rho < 1``."""
    p = check_positive(p, "p")
    rho = np.asarray(rho, dtype=float)
    if np.any(rho < 0) or np.any(rho >= 1):
        raise InputDomainError("hyper_moment needs 0 <= rho < 1")
    r2 = rho * rho
    out = (r2 / (1.0 - r2)) ** p / (2.0 * p)
    return out if out.ndim else float(out)


def _moment_checked(p, rho):
    if np.any(rho >= 1):
        raise BodyNotContainedError(
            f"body reaches the unit sphere (max radial value {float(np.max(rho)):.6g})")
    return hyper_moment(p, rho)


def default_rule(spec, size=None, seed=0):
    """Reduced product rule when the body allows it, else 2^18 Sobol nodes."""
    n = spec.n
    if spec.symmetry >= AXIAL and n >= 2:
        return axial_reduced_rule(n, size or 2000)
    if spec.symmetry >= TORUS:
        return torus_reduced_rule(n, size or {1: 1, 2: 400, 3: 120}.get(n, 40))
    return sphere_rule(2 * n, size or 2 ** 18, "quasi-monte-carlo", seed)


def coarser_rule(rule, seed=1):
    """A rule of the same family with about half the resolution, for error estimates."""
    n = rule.N // 2
    if rule.method == "axial-reduced":
        return axial_reduced_rule(n, max(len(rule.weights) // 2, 2))
    if rule.method == "torus-reduced":
        per_axis = round(len(rule.weights) ** (1.0 / max(n - 1, 1)))
        return torus_reduced_rule(n, max(per_axis // 2 + 4, 1) if n > 1 else 1)
    return sphere_rule(rule.N, max(len(rule.weights) // 2, 2), rule.method, seed)


def hvol_with_error(spec, rule=None):
    """``(hvol, error)`` with the error from a coarser rule (and the sampling error if random)."""
    rule = rule or default_rule(spec)
    v = hvol(spec, rule=rule)
    err = abs(v - hvol(spec, rule=coarser_rule(rule)))
    if rule.is_random:
        err = max(err, 8.0 ** spec.n * rule.std_error(
            _moment_checked(spec.n, _radial_on_rule(spec, rule))))
    return v, err


def _radial_on_rule(spec, rule):
    if rule.method in ("torus-reduced", "axial-reduced"):
        return spec.radial_moduli(rule.moduli)
    return spec._radial(rule.nodes)


def hvol(spec, n=None, rule=None):
    """Hyperbolic volume ``8^n int_S mu_n(rho)`` of a body inside the unit ball."""
    if n is not None and n != spec.n:
        raise InputDomainError(f"n={n} does not match the body dimension {spec.n}")
    n = spec.n
    rule = rule or default_rule(spec)
    return 8.0 ** n * rule.integrate(_moment_checked(n, _radial_on_rule(spec, rule)))


def section_hvol(spec, H, rule=None, order=None):
    """Hyperbolic volume of ``K ∩ H`` for a complex subspace frame ``H``."""
    if not isinstance(H, ComplexSubspaceFrame):
        raise InputDomainError("H must be a ComplexSubspaceFrame")
    if H.n != spec.n:
        raise InputDomainError("frame and body dimensions differ")
    d = H.d
    rule = rule or subspace_sphere_rule(H, order or {1: 1, 2: 64, 3: 24}.get(d, 12))
    return 8.0 ** d * rule.integrate(_moment_checked(d, spec._radial(rule.nodes)))


def moment_gap(a, b, n, l):
    """Both sides of ``t_a^l (t_b^{n-l} - t_a^{n-l}) / (2(n-l)) <= (t_b^n - t_a^n) / (2n)``.

    Returns ``(lhs, rhs)`` with ``t_x = x^2 / (1 - x^2)``.
    """
    ta, tb = t_of_rho(a), t_of_rho(b)
    lhs = ta ** l * (tb ** (n - l) - ta ** (n - l)) / (2.0 * (n - l))
    rhs = (tb ** n - ta ** n) / (2.0 * n)
    return lhs, rhs


@dataclass(frozen=True, eq=False)
class GeodesicArc:
    """Bergman geodesic between two points of the unit ball of C^n.

    The carrier is the complex line ``center + zeta * radius * direction``
    with ``|zeta| < 1``; ``zeta`` holds the disc coordinates of the samples.
    """

    x: np.ndarray
    y: np.ndarray
    center: np.ndarray
    radius: float
    direction: np.ndarray
    params: np.ndarray
    zeta: np.ndarray
    points: np.ndarray

    @property
    def is_diameter(self):
        zx, zy = self.zeta[0], self.zeta[-1]
        return abs((zx * np.conj(zy)).imag) <= 1e-12 * max(abs(zx), abs(zy), 1e-300)

    def real_points(self):
        return as_real(self.points)


def _as_cvec(x):
    x = np.asarray(x)
    if np.iscomplexobj(x):
        return x.astype(complex)
    return as_complex(x.astype(float))


def _hdot(a, b):
    return np.sum(a * np.conj(b), axis=-1)


def bergman_geodesic(x, y, m=64):
    """Sample ``m`` points of the geodesic from ``x`` to ``y`` (uniform in arclength).

    Points are complex vectors; real input is read in interleaved coordinates.
    """
    x, y = _as_cvec(x), _as_cvec(y)
    if x.shape != y.shape or x.ndim != 1:
        raise InputDomainError(f"endpoints must be vectors of equal length, got {x.shape} and {y.shape}")
    if np.linalg.norm(x) >= 1 or np.linalg.norm(y) >= 1:
        raise InputDomainError("geodesic endpoints must lie in the open unit ball")
    diff = y - x
    dist = np.linalg.norm(diff)
    if dist <= 1e-14:
        raise DegenerateInputError("geodesic endpoints coincide")
    v = diff / dist
    c = x - _hdot(x, v) * v
    R = math.sqrt(max(1.0 - float(np.vdot(c, c).real), 0.0))
    zx = _hdot(x - c, v) / R
    zy = _hdot(y - c, v) / R
    # move zx to 0, follow the ray, move back
    w = (zy - zx) / (1.0 - np.conj(zx) * zy)
    s = np.linspace(0.0, 1.0, int(m))
    aw = abs(w)
    ray = np.tanh(s * math.atanh(min(aw, 1 - 1e-16))) * (w / aw)
    zeta = (ray + zx) / (1.0 + np.conj(zx) * ray)
    zeta[0], zeta[-1] = zx, zy
    pts = c[None, :] + (R * zeta)[:, None] * v[None, :]
    pts[0], pts[-1] = x, y
    return GeodesicArc(x, y, c, R, v, s, zeta, pts)


def bergman_distance(x, y):
    """Distance in the ball normalized to holomorphic sectional curvature -1."""
    x, y = _as_cvec(x), _as_cvec(y)
    d = y - x
    # |1 - <x,y>|^2 - (1 - |x|^2)(1 - |y|^2) as a sum of non-negative terms
    gap = np.sum(np.abs(d) ** 2, axis=-1) * (1.0 - np.sum(np.abs(x) ** 2, axis=-1)) \
        + np.abs(_hdot(d, x)) ** 2
    den = np.abs(1.0 - _hdot(x, y)) ** 2
    return 2.0 * np.arctanh(np.sqrt(np.clip(gap / den, 0.0, 1.0)))


def _boundary_points(spec, dirs, radii):
    return dirs * (spec._radial(dirs) * radii)[:, None]


def _random_dirs(rng, k, N):
    g = rng.standard_normal((k, N))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def h_convex_test(spec, n=None, num_pairs=1000, samples_per_arc=32, seed=0, tol=1e-9,
                  containment_samples=4096):
    """Randomized search for Bergman geodesics that leave the body.

    Pairs mix independent boundary points, nearby boundary points at
    logarithmically spread separations and interior points.  The margin of
    a pair is ``min(1 - ||p||_K)`` over its arc samples; the test passes iff
    the worst margin is ``>= -tol``.
    """
    if n is not None and n != spec.n:
        raise InputDomainError(f"n={n} does not match the body dimension {spec.n}")
    N = 2 * spec.n
    rng = np.random.default_rng(seed)
    probe = _random_dirs(rng, containment_samples, N)
    rmax = float(np.max(spec._radial(probe)))
    if rmax >= 1:
        raise BodyNotContainedError(f"body touches the unit sphere (radial value {rmax:.6g})")

    k = int(num_pairs)
    u = _random_dirs(rng, k, N)
    kind = rng.integers(0, 3, k)
    v = _random_dirs(rng, k, N)
    sep = 10.0 ** rng.uniform(-3, -0.3, k)
    near = u + sep[:, None] * v
    near /= np.linalg.norm(near, axis=1, keepdims=True)
    v = np.where((kind == 1)[:, None], near, v)
    ru = np.ones(k)
    rv = np.where(kind == 2, rng.uniform(0, 1, k) ** (1.0 / N), 1.0)
    xs = _boundary_points(spec, u, ru)
    ys = _boundary_points(spec, v, rv)

    margins = np.empty(k)
    worst_point = None
    worst = np.inf
    for i in range(k):
        if np.linalg.norm(xs[i] - ys[i]) < 1e-13:
            margins[i] = 0.0
            continue
        arc = bergman_geodesic(xs[i], ys[i], samples_per_arc)
        pts = arc.real_points()
        m = 1.0 - spec.norm(pts)
        j = int(np.argmin(m))
        margins[i] = m[j]
        if m[j] < worst:
            worst = float(m[j])
            worst_point = {"x": xs[i].tolist(), "y": ys[i].tolist(), "arc_param": float(arc.params[j])}
    worst = float(np.min(margins))
    return VerificationReport(
        name="h-convexity",
        passed=bool(worst >= -tol),
        margin=worst,
        tol=tol,
        seed=seed,
        num_checks=k,
        margins=margins,
        details={"samples_per_arc": int(samples_per_arc), "max_radial": rmax,
                 "pair_kinds": {"far": int(np.sum(kind == 0)), "near": int(np.sum(kind == 1)),
                                "interior": int(np.sum(kind == 2))},
                 "worst_pair": worst_point},
    )


def dilation_factor(d, r):
    """Half of the largest dilation keeping normal curvature above the geodesic bound.

    A body of minimal normal curvature ``d`` scaled by ``a`` has curvature
    ``d/a``; inside the ball of radius ``r`` geodesics curve at most
    ``2r/(1-r^2)``.  The bound is ``a < d(1-r^2)/(2r)`` and half of it is returned.
    """
    if not d > 0:
        raise InputDomainError(f"curvature must be positive, got {d}")
    r = check_open_interval(r, 0.0, 1.0, "r")
    return 0.5 * d * (1.0 - r * r) / (2.0 * r)
