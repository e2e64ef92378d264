"""Small input validation helpers in the spirit of ``sklearn.utils``."""
from __future__ import annotations

import numpy as np

from .errors import InputDomainError

__all__ = [
    "check_directions",
    "check_positive",
    "check_open_interval",
    "as_complex",
    "as_real",
]

UNIT_TOL = 1e-12


def check_directions(u, dim=None, tol=UNIT_TOL, name="u"):
    """Return ``u`` as a float array of shape ``(..., dim)`` of unit vectors.

    Raises :class:`InputDomainError` if any row deviates from unit length by
    more than ``tol``.
    """
    u = np.asarray(u, dtype=float)
    if u.ndim == 0:
        raise InputDomainError(f"{name} must be a vector, got a scalar")
    if dim is not None and u.shape[-1] != dim:
        raise InputDomainError(f"{name} has last dimension {u.shape[-1]}, expected {dim}")
    if not np.all(np.isfinite(u)):
        raise InputDomainError(f"{name} contains non-finite entries")
    norms = np.linalg.norm(u, axis=-1)
    if np.any(np.abs(norms - 1.0) > tol):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise InputDomainError(f"{name} is not a unit vector (| |u| - 1 | = {worst:.3g})")
    return u


def check_positive(value, name, strict=True):
    value = float(value)
    if not np.isfinite(value) or (value <= 0 if strict else value < 0):
        raise InputDomainError(f"{name} must be {'>' if strict else '>='} 0, got {value}")
    return value


def check_open_interval(value, lo, hi, name):
    value = float(value)
    if not (lo < value < hi):
        raise InputDomainError(f"{name} must lie in ({lo}, {hi}), got {value}")
    return value


def as_complex(x):
    """Map real coordinates ``(x11, x12, ..., xn1, xn2)`` to complex ``(z1, ..., zn)``."""
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def as_real(z):
    """Inverse of :func:`as_complex`."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape[:-1] + (2 * z.shape[-1],))
    out[..., 0::2] = z.real
    out[..., 1::2] = z.imag
    return out
