"""Star bodies in C^n = R^{2n} invariant under a common phase rotation.

Every body exposes its radial function ``rho(u) = 1/||u||_K`` on unit
vectors.  Torus-invariant bodies also evaluate directly on the squared
moduli ``w`` (see :mod:`ldbp.profiles`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from ._validation import as_complex, check_directions
from .errors import (
    BodyNotContainedError,
    ConstructionError,
    EpsilonTooLargeError,
    InputDomainError,
)
from .profiles import AXIAL, NONE, RTHETA, TORUS, SphericalProfile, moduli

__all__ = [
    "BodySpec",
    "LqBall",
    "ComplexEllipsoid",
    "TwoEllipseBody",
    "EuclideanBall",
    "PhaseTestBody",
    "Dilate",
    "Tent",
    "Cotent",
    "Perturbed",
    "BodyPowerProfile",
    "radial",
    "tent_radial",
    "cotent_radial",
    "two_ellipse_radial",
    "perturbed_radial",
    "t_of_rho",
    "rho_of_t",
]


def tent_radial(rho):
    """``sqrt(rho^2 / (1 + rho^2))``; maps (0, inf) onto (0, 1)."""
    rho = np.asarray(rho, dtype=float)
    return np.sqrt(rho * rho / (1.0 + rho * rho))


def cotent_radial(rho):
    """``sqrt(rho^2 / (1 - rho^2))``, the inverse of :func:`tent_radial`."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho >= 1.0) or np.any(rho < 0.0):
        raise InputDomainError("cotent_radial needs 0 <= rho < 1")
    return np.sqrt(rho * rho / (1.0 - rho * rho))


def t_of_rho(rho):
    """``rho^2 / (1 - rho^2)``, the natural variable of the hyperbolic kernels."""
    rho = np.asarray(rho, dtype=float)
    if np.any(rho >= 1.0):
        raise BodyNotContainedError("radial value >= 1 (body not inside the unit ball)")
    r2 = rho * rho
    return r2 / (1.0 - r2)


def rho_of_t(t):
    t = np.asarray(t, dtype=float)
    return np.sqrt(t / (1.0 + t))


class BodySpec:
    """Immutable star body descriptor.  Subclasses are frozen dataclasses."""

    symmetry: int = RTHETA
    smoothness: float = math.inf

    def radial(self, u, check=True):
        u = np.asarray(u, dtype=float)
        if check:
            check_directions(u, 2 * self.n)
        return self._radial(u)

    def _radial(self, u):
        return self.radial_moduli(moduli(u))

    def radial_moduli(self, w):
        raise NotImplementedError(f"{type(self).__name__} is not torus invariant")

    def norm(self, x):
        """Minkowski functional at arbitrary points ``x`` (..., 2n)."""
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        safe = np.where(r > 0, r, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = self._radial(x / safe[..., None])
            return np.where(r > 0, r / rho, 0.0)

    def norm_moduli(self, w):
        """Minkowski functional from unnormalized squared moduli (torus bodies)."""
        w = np.asarray(w, dtype=float)
        r2 = w.sum(axis=-1)
        safe = np.where(r2 > 0, r2, 1.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            rho = self.radial_moduli(w / safe[..., None])
            return np.where(r2 > 0, np.sqrt(r2) / rho, 0.0)

    def outer_radius(self):
        """An upper bound for the radial function."""
        raise NotImplementedError

    def profile(self, p):
        """The profile ``rho^p`` of ``||x||^{-p}``."""
        return BodyPowerProfile(self, float(p))


@dataclass(frozen=True)
class BodyPowerProfile(SphericalProfile):
    body: BodySpec
    p: float

    @property
    def n(self):
        return self.body.n

    @property
    def symmetry(self):
        return self.body.symmetry

    @property
    def smoothness(self):
        return self.body.smoothness

    def _evaluate(self, u):
        return self.body._radial(u) ** self.p

    def on_moduli(self, w):
        return self.body.radial_moduli(np.atleast_2d(w)) ** self.p


def _check_n(n, minimum=1):
    if int(n) != n or n < minimum:
        raise ConstructionError(f"complex dimension must be an integer >= {minimum}, got {n}")
    return int(n)


@dataclass(frozen=True)
class LqBall(BodySpec):
    """Unit ball of ``(sum |z_j|^q)^{1/q}``."""

    n: int
    q: float

    symmetry = TORUS

    def __post_init__(self):
        _check_n(self.n)
        if not self.q >= 1:
            raise ConstructionError(f"LqBall needs q >= 1, got {self.q}")

    @property
    def smoothness(self):
        return math.inf if float(self.q) % 2 == 0 else math.floor(self.q)

    def radial_moduli(self, w):
        w = np.asarray(w, dtype=float)
        return np.sum(np.maximum(w, 0.0) ** (0.5 * self.q), axis=-1) ** (-1.0 / self.q)

    def outer_radius(self):
        return self.n ** max(0.5 - 1.0 / self.q, 0.0)


@dataclass(frozen=True)
class ComplexEllipsoid(BodySpec):
    """``sum |z_j|^2 / a_j^2 <= 1``."""

    a: tuple

    symmetry = TORUS

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        if len(a) < 1 or min(a) <= 0:
            raise ConstructionError("ComplexEllipsoid semi-axes must be positive")
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return len(self.a)

    def radial_moduli(self, w):
        inv = 1.0 / np.asarray(self.a) ** 2
        return (np.asarray(w, dtype=float) @ inv) ** -0.5

    def outer_radius(self):
        return max(self.a)


def _smoothstep_integral(order):
    """Polynomial psi on [-1, 1] with psi'' ~ (1 - t^2)^order, psi = psi' = 0 at -1, psi'(1) = 1."""
    b = np.array([1.0])
    for _ in range(order):
        b = P.polymul(b, [1.0, 0.0, -1.0])
    anti = P.polyint(b)
    b = b / (P.polyval(1.0, anti) - P.polyval(-1.0, anti))
    d1 = P.polyint(b, lbnd=-1)
    return P.polyint(d1, lbnd=-1)


def _blend(r, width, order):
    """Convex ``Phi`` with ``Phi(r) = max(r, 1)`` outside ``|r - 1| < width``."""
    r = np.asarray(r, dtype=float)
    if width == 0:
        return np.maximum(r, 1.0)
    c = _smoothstep_integral(order)
    t = (r - 1.0) / width
    inner = 1.0 + width * P.polyval(np.clip(t, -1.0, 1.0), c)
    return np.where(t >= 1.0, r, np.where(t <= -1.0, 1.0, inner))


def two_ellipse_radial(s, b, n, u, blend_width=0.02, blend_order=4):
    """Radial function of the blended intersection of two complex ellipsoids.

    In the modulus plane ``X = |(z_1..z_{n-1})|``, ``Y = |z_n|`` the two
    constraints are ``X^2 + Y^2/s^2 <= 1`` and ``X^2/s^2 + Y^2/b^2 <= 1``.
    Writing ``N_h, N_v`` for the two gauge functions, the body gauge is
    ``N_v * Phi(N_h / N_v)`` which equals ``max(N_h, N_v)`` away from the
    crease and is a convex, smooth norm.
    """
    u = check_directions(u, 2 * n)
    return _two_ellipse_wn(s, b, moduli(u)[..., -1], blend_width, blend_order)


def _two_ellipse_wn(s, b, wn, width, order):
    wn = np.clip(np.asarray(wn, dtype=float), 0.0, 1.0)
    X2, Y2 = 1.0 - wn, wn
    Nh = np.sqrt(X2 + Y2 / s ** 2)
    Nv = np.sqrt(X2 / s ** 2 + Y2 / b ** 2)
    return 1.0 / (Nv * _blend(Nh / Nv, width, order))


@dataclass(frozen=True)
class TwoEllipseBody(BodySpec):
    n: int
    s: float
    b: float
    blend_width: float = 0.02
    blend_order: int = 4

    symmetry = AXIAL

    def __post_init__(self):
        _check_n(self.n, 2)
        if not 0 < self.s < 0.5:
            raise ConstructionError(f"TwoEllipseBody needs 0 < s < 1/2, got s={self.s}")
        if not self.b > 1:
            raise ConstructionError(f"TwoEllipseBody needs b > 1, got b={self.b}")
        if not 0 <= self.blend_width < 0.5:
            raise ConstructionError("blend_width must lie in [0, 0.5)")
        if int(self.blend_order) != self.blend_order or self.blend_order < 1:
            raise ConstructionError("blend_order must be a positive integer")

    @property
    def smoothness(self):
        return self.blend_order + 1 if self.blend_width > 0 else 0

    def radial_moduli(self, w):
        w = np.asarray(w, dtype=float)
        return _two_ellipse_wn(self.s, self.b, w[..., -1], self.blend_width, self.blend_order)

    def outer_radius(self):
        # both constraints together force |z'| <= s and |z_n| <= s
        return math.sqrt(2.0) * self.s


@dataclass(frozen=True)
class EuclideanBall(BodySpec):
    n: int
    radius: float

    symmetry = AXIAL

    def __post_init__(self):
        _check_n(self.n)
        if not self.radius > 0:
            raise ConstructionError("ball radius must be positive")

    def radial_moduli(self, w):
        w = np.asarray(w, dtype=float)
        return np.full(w.shape[:-1], float(self.radius))

    def outer_radius(self):
        return float(self.radius)


@dataclass(frozen=True)
class PhaseTestBody(BodySpec):
    """``rho(z) = 1 / (1 + delta Re(z_1 conj z_2))`` on the sphere.

    Invariant under a common phase but not under independent phases.
    """

    n: int
    delta: float

    symmetry = RTHETA

    def __post_init__(self):
        _check_n(self.n, 2)
        if not abs(self.delta) < 2:
            raise ConstructionError("PhaseTestBody needs |delta| < 2")

    def _radial(self, u):
        z = as_complex(u)
        return 1.0 / (1.0 + self.delta * (z[..., 0] * z[..., 1].conj()).real)

    def outer_radius(self):
        return 1.0 / (1.0 - 0.5 * abs(self.delta))


@dataclass(frozen=True)
class Dilate(BodySpec):
    alpha: float
    base: BodySpec

    def __post_init__(self):
        if not self.alpha > 0:
            raise ConstructionError("dilation factor must be positive")

    @property
    def n(self):
        return self.base.n

    @property
    def symmetry(self):
        return self.base.symmetry

    @property
    def smoothness(self):
        return self.base.smoothness

    def _radial(self, u):
        return self.alpha * self.base._radial(u)

    def radial_moduli(self, w):
        return self.alpha * self.base.radial_moduli(w)

    def outer_radius(self):
        return self.alpha * self.base.outer_radius()


@dataclass(frozen=True)
class Tent(BodySpec):
    base: BodySpec

    @property
    def n(self):
        return self.base.n

    @property
    def symmetry(self):
        return self.base.symmetry

    @property
    def smoothness(self):
        return self.base.smoothness

    def _radial(self, u):
        return tent_radial(self.base._radial(u))

    def radial_moduli(self, w):
        return tent_radial(self.base.radial_moduli(w))

    def outer_radius(self):
        return float(tent_radial(self.base.outer_radius()))


@dataclass(frozen=True)
class Cotent(BodySpec):
    base: BodySpec

    @property
    def n(self):
        return self.base.n

    @property
    def symmetry(self):
        return self.base.symmetry

    @property
    def smoothness(self):
        return self.base.smoothness

    def _radial(self, u):
        return cotent_radial(self.base._radial(u))

    def radial_moduli(self, w):
        return cotent_radial(self.base.radial_moduli(w))

    def outer_radius(self):
        r = self.base.outer_radius()
        return float(cotent_radial(r)) if r < 1 else math.inf


def _perturb(rho_l, gval, eps, n, l):
    t_l = t_of_rho(rho_l)
    if eps == 0:
        return np.asarray(rho_l, dtype=float)
    k = n - l
    rhs = t_l ** k + 2.0 * k * eps * gval
    if np.any(rhs <= 0):
        raise EpsilonTooLargeError(
            f"perturbation eps={eps:g} makes the defining equation unsolvable "
            f"(min right-hand side {float(np.min(rhs)):.3g})"
        )
    return rho_of_t(rhs ** (1.0 / k))


@dataclass(frozen=True)
class Perturbed(BodySpec):
    """Body K with ``mu_{n-l}(rho_K) = mu_{n-l}(rho_L) + eps * g`` pointwise."""

    base: BodySpec
    g: SphericalProfile
    eps: float
    l: int

    def __post_init__(self):
        if self.g.n != self.base.n:
            raise ConstructionError("profile and body dimensions differ")
        if not self.eps >= 0:
            raise ConstructionError("eps must be non-negative")
        if not 1 <= self.l <= self.base.n - 1:
            raise ConstructionError(f"need 1 <= l <= n-1, got l={self.l}")

    @property
    def n(self):
        return self.base.n

    @property
    def symmetry(self):
        return min(self.base.symmetry, self.g.symmetry)

    @property
    def smoothness(self):
        return min(self.base.smoothness, self.g.smoothness)

    def _radial(self, u):
        gval = np.asarray(self.g._evaluate(u), dtype=float).reshape(u.shape[:-1])
        return _perturb(self.base._radial(u), gval, self.eps, self.n, self.l)

    def radial_moduli(self, w):
        w = np.asarray(w, dtype=float)
        gval = self.g.on_moduli(np.atleast_2d(w)).reshape(w.shape[:-1])
        return _perturb(self.base.radial_moduli(w), gval, self.eps, self.n, self.l)

    def outer_radius(self):
        return 1.0


def radial(spec, u):
    """Radial function of ``spec`` at unit vectors ``u``."""
    return spec.radial(u)


def perturbed_radial(L, g, eps, l, u):
    """Radial function of ``Perturbed(L, g, eps, l)`` at ``u``."""
    return Perturbed(L, g, eps, l).radial(u)
