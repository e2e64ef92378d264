"""Circular and parallel sections of axis-aligned ellipsoids ``sum x_i^2 / a_i^2 = 1``.

Slices are described in orthonormal in-plane coordinates: a slice through
``center`` spanned by the orthonormal columns of ``frame`` is the set
``(s - s0)^T A (s - s0) = kappa``.  ``A`` does not depend on the offset, so
parallel slices are similar with ratio ``sqrt(kappa(d) / kappa(0))``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space

from .errors import DegenerateInputError, InputDomainError

__all__ = [
    "Quadric",
    "CircularPlane",
    "SectionConic",
    "circular_plane",
    "circular_plane_nd",
    "section_conic",
    "similarity_ratio",
    "displayed_beta_squared",
    "beta_squared",
]

CIRCLE_RTOL = 1e-12


@dataclass(frozen=True)
class Quadric:
    """Centered, axis-aligned ellipsoid with semi-axes ``axes``."""

    axes: tuple

    def __post_init__(self):
        a = tuple(float(x) for x in self.axes)
        if len(a) < 2 or not all(x > 0 and math.isfinite(x) for x in a):
            raise InputDomainError(f"semi-axes must be positive and finite, got {self.axes}")
        object.__setattr__(self, "axes", a)

    @property
    def dim(self):
        return len(self.axes)

    @property
    def D(self):
        return np.diag(1.0 / np.asarray(self.axes) ** 2)

    def value(self, x):
        """``sum x_i^2 / a_i^2`` at points ``x`` (..., dim)."""
        x = np.asarray(x, dtype=float)
        return np.sum(x * x / np.asarray(self.axes) ** 2, axis=-1)


def _as_quadric(q):
    return q if isinstance(q, Quadric) else Quadric(tuple(q))


def beta_squared(a, b, c):
    """``beta^2 = a^2 (b^2 - c^2) / (b^2 (a^2 - c^2))`` from ``beta^2/a^2 + alpha^2/c^2 = 1/b^2``."""
    return a * a * (b * b - c * c) / (b * b * (a * a - c * c))


def displayed_beta_squared(a, b, c):
    """The alternative closed form ``a^2 (c^2 - b^2) / (a^2 (c^2 - b^2) + b^2 c^2)``.

    Kept for comparison only: it does not lie in ``[0, 1]`` for ``a > b > c``.
    """
    return a * a * (c * c - b * b) / (a * a * (c * c - b * b) + b * b * c * c)


@dataclass(frozen=True)
class CircularPlane:
    """Plane ``alpha x + beta z = 0`` (normal ``(alpha, 0, beta)``) cutting a circle of ``radius``."""

    normal: np.ndarray
    radius: float
    alpha: float
    beta: float


def circular_plane(a, b, c):
    """Both central planes of ``x^2/a^2 + y^2/b^2 + z^2/c^2 = 1`` with circular sections.

    Requires ``a >= b >= c > 0`` not all equal.  The planes contain the
    ``y`` axis and the circles have radius ``b``.
    """
    a, b, c = float(a), float(b), float(c)
    if not c > 0:
        raise InputDomainError("semi-axes must be positive")
    if not (a >= b >= c):
        raise DegenerateInputError(f"need a >= b >= c, got {(a, b, c)}")
    if a == c:
        raise DegenerateInputError("a sphere has a circular section in every plane")
    b2 = beta_squared(a, b, c)
    beta = math.sqrt(b2)
    alpha = math.sqrt(max(1.0 - b2, 0.0))
    return [CircularPlane(np.array([alpha, 0.0, sgn * beta]), b, alpha, sgn * beta) for sgn in (1.0, -1.0)]


def circular_plane_nd(axes, indices=None):
    """Orthonormal 2-frame in ``span{e_i, e_j, e_k}`` whose central slice is a circle.

    ``indices`` picks ``i, j, k`` with ``a_i >= a_j >= a_k`` (default: the
    first three axes after sorting in decreasing order).  Returns
    ``(frame, radius)`` with ``radius = a_j``.
    """
    q = _as_quadric(axes)
    if q.dim < 3:
        raise InputDomainError("need at least three axes")
    ax = np.asarray(q.axes)
    i, j, k = indices if indices is not None else np.argsort(-ax, kind="stable")[:3]
    plane = circular_plane(ax[i], ax[j], ax[k])[0]
    frame = np.zeros((q.dim, 2))
    frame[j, 0] = 1.0
    # in-plane direction orthogonal to e_j and to the normal alpha e_i + beta e_k
    frame[i, 1], frame[k, 1] = plane.beta, -plane.alpha
    return frame, plane.radius


@dataclass(frozen=True)
class SectionConic:
    """Slice of a quadric by an affine plane, in orthonormal in-plane coordinates."""

    kind: str
    frame: np.ndarray
    origin: np.ndarray
    center: np.ndarray
    semi_axes: np.ndarray
    directions: np.ndarray
    kappa: float

    @property
    def is_empty(self):
        return self.kind == "empty"

    @property
    def center_point(self):
        return self.origin + self.frame @ self.center

    @property
    def axis_ratio(self):
        return float(self.semi_axes[-1] / self.semi_axes[0]) if len(self.semi_axes) else math.nan

    def boundary(self, m=200):
        """``m`` points on the slice boundary (ambient coordinates), planar slices only."""
        if self.kind in ("empty",):
            return np.zeros((0, len(self.origin)))
        if self.frame.shape[1] != 2:
            raise InputDomainError("boundary sampling is for planar slices")
        t = 2 * np.pi * np.arange(m) / m
        s = self.center[None, :] + (np.cos(t)[:, None] * self.semi_axes[0] * self.directions[:, 0]
                                    + np.sin(t)[:, None] * self.semi_axes[1] * self.directions[:, 1])
        return self.origin[None, :] + s @ self.frame.T

    def as_dict(self):
        return {"kind": self.kind, "center": self.center, "center_point": self.center_point,
                "semi_axes": self.semi_axes, "kappa": self.kappa, "axis_ratio": self.axis_ratio}


def _frame_from_normal(normal):
    n = np.asarray(normal, dtype=float)
    nrm = np.linalg.norm(n)
    if nrm == 0:
        raise InputDomainError("plane normal must be nonzero")
    n = n / nrm
    return null_space(n[None, :]), n


def section_conic(quadric, normal=None, d=0.0, frame=None, origin=None):
    """Slice of ``quadric`` by the plane ``<normal, x> = d`` (or ``origin + span(frame)``).

    With ``normal`` the plane is a hyperplane (a conic in R^3); with ``frame``
    any orthonormal ``k``-frame and an ``origin`` point may be given.
    """
    q = _as_quadric(quadric)
    if frame is None:
        if normal is None:
            raise InputDomainError("give a plane normal or a frame")
        U, nu = _frame_from_normal(normal)
        if len(nu) != q.dim:
            raise InputDomainError("normal dimension differs from the quadric")
        c = float(d) * nu
    else:
        U = np.asarray(frame, dtype=float)
        if U.shape[0] != q.dim or np.max(np.abs(U.T @ U - np.eye(U.shape[1]))) > 1e-10:
            raise InputDomainError("frame must have orthonormal columns in the quadric's space")
        c = np.zeros(q.dim) if origin is None else np.asarray(origin, dtype=float)
        c = c - U @ (U.T @ c)
    D = q.D
    A = U.T @ D @ U
    bvec = U.T @ D @ c
    s0 = -np.linalg.solve(A, bvec)
    kappa = float(1.0 - c @ D @ c + bvec @ (-s0))
    lam, vecs = np.linalg.eigh(A)
    scale = float(np.max(lam))
    if kappa < -1e-14:
        return SectionConic("empty", U, c, s0, np.zeros(0), vecs, kappa)
    if kappa <= 1e-14:
        return SectionConic("point", U, c, s0, np.zeros(len(lam)), vecs, 0.0)
    semi = np.sqrt(kappa / lam)
    kind = "circle" if (lam[-1] - lam[0]) <= CIRCLE_RTOL * scale else "ellipse"
    if U.shape[1] != 2:
        kind = "sphere" if kind == "circle" else "ellipsoid"
    return SectionConic(kind, U, c, s0, semi, vecs, kappa)


def similarity_ratio(quadric, normal, d):
    """Linear scale of the slice at offset ``d`` relative to the central slice."""
    sd = section_conic(quadric, normal, d)
    if sd.kind == "empty":
        raise InputDomainError(f"plane at offset {d} misses the quadric")
    s0 = section_conic(quadric, normal, 0.0)
    return math.sqrt(sd.kappa / s0.kappa)
