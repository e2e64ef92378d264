"""Orthogonal polynomial tables on intervals and on the standard simplex.

Functions on the sphere of C^n that are invariant under independent phase
rotations of every coordinate depend only on the squared moduli
``w = (|z_1|^2, ..., |z_n|^2)``, a point of the simplex ``sum(w) = 1``.  The
uniform measure on the sphere pushes forward to the uniform measure on that
simplex, and polynomials in ``w`` of total degree ``k`` that are orthogonal
to all lower degrees are exactly the invariant spherical harmonics of degree
``2k``.  The collapsed-coordinate (Dubiner) basis below gives an explicit
orthogonal basis for them.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "jacobi_table",
    "gegenbauer_table",
    "multi_indices",
    "collapse",
    "uncollapse",
    "SimplexBasis",
    "simplex_gauss_rule",
]


def jacobi_table(K, a, b, x):
    """Jacobi polynomials ``P_k^{(a,b)}(x)`` for ``k = 0..K`` stacked on axis 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty((K + 1,) + x.shape)
    out[0] = 1.0
    if K == 0:
        return out
    out[1] = 0.5 * (a - b + (a + b + 2) * x)
    for k in range(2, K + 1):
        c = 2 * k + a + b
        a1 = 2 * k * (k + a + b) * (c - 2)
        a2 = (c - 1) * (a * a - b * b)
        a3 = (c - 2) * (c - 1) * c
        a4 = 2 * (k + a - 1) * (k + b - 1) * c
        out[k] = ((a2 + a3 * x) * out[k - 1] - a4 * out[k - 2]) / a1
    return out


def gegenbauer_table(K, lam, x):
    """Gegenbauer polynomials ``C_k^lam(x)`` for ``k = 0..K``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((K + 1,) + x.shape)
    out[0] = 1.0
    if K == 0:
        return out
    out[1] = 2.0 * lam * x
    for k in range(2, K + 1):
        out[k] = (2.0 * (k + lam - 1) * x * out[k - 1] - (k + 2 * lam - 2) * out[k - 2]) / k
    return out


@lru_cache(maxsize=64)
def _multi_indices(d, K):
    rows = []
    for k in range(K + 1):
        # stars and bars: compositions of k into d non-negative parts
        for bars in itertools.combinations(range(k + d - 1), d - 1):
            prev = -1
            parts = []
            for b in bars:
                parts.append(b - prev - 1)
                prev = b
            parts.append(k + d - 2 - prev)
            rows.append(parts)
    return np.array(rows, dtype=int).reshape(-1, d)


def multi_indices(d, K):
    """All ``alpha`` in N^d with ``|alpha| <= K``, ordered by total degree."""
    if d == 0:
        return np.zeros((1, 0), dtype=int)
    return _multi_indices(d, K).copy()


def collapse(w):
    """Map simplex points ``w`` of shape (M, n) to collapsed coordinates in [0,1]^(n-1).

    The coordinates are taken in the order ``w_n, w_{n-1}, ..., w_2``;
    ``t_0 = w_n`` and ``t_i = w_{n-i} / (1 - w_n - ... - w_{n-i+1})``.
    """
    w = np.atleast_2d(np.asarray(w, dtype=float))
    M, n = w.shape
    d = n - 1
    t = np.zeros((M, d))
    rem = np.ones(M)
    for i in range(d):
        wi = w[:, n - 1 - i]
        with np.errstate(invalid="ignore", divide="ignore"):
            ti = np.where(rem > 1e-300, wi / rem, 0.0)
        t[:, i] = np.clip(ti, 0.0, 1.0)
        rem = np.maximum(rem - wi, 0.0)
    return t


def uncollapse(t):
    """Inverse of :func:`collapse`."""
    t = np.atleast_2d(np.asarray(t, dtype=float))
    M, d = t.shape
    n = d + 1
    w = np.zeros((M, n))
    rem = np.ones(M)
    for i in range(d):
        w[:, n - 1 - i] = rem * t[:, i]
        rem = rem * (1.0 - t[:, i])
    w[:, 0] = rem
    return w


@lru_cache(maxsize=32)
def _gauss_jacobi(q, a):
    x, wt = roots_jacobi(q, a, 0)
    return (x + 1.0) / 2.0, wt / 2.0 ** (a + 1)


def simplex_gauss_rule(d, q):
    """Collapsed Gauss-Jacobi rule on the d-simplex with ``q`` points per axis.

    Returns ``(w, weights)`` with ``w`` of shape (q^d, d+1) on the simplex and
    weights summing to ``1/d!`` (Lebesgue measure in d of the coordinates).
    Exact for polynomials of total degree ``2q - 1``.
    """
    if d == 0:
        return np.ones((1, 1)), np.ones(1)
    ts, ws = [], []
    for i in range(d):
        x, wt = _gauss_jacobi(q, d - 1 - i)
        ts.append(x)
        ws.append(wt)
    T = np.array(list(itertools.product(*ts)))
    W = np.prod(np.array(list(itertools.product(*ws))), axis=1)
    return uncollapse(T), W


class SimplexBasis:
    """Orthogonal polynomial basis on the simplex up to total degree ``K``.

    Parameters
    ----------
    n : int
        Number of simplex coordinates (complex dimension of the sphere).
    K : int
        Maximal total degree in ``w``.
    axial : bool
        Keep only polynomials in ``w_n``; these are Jacobi polynomials
        ``P_k^{(n-2,0)}(2 w_n - 1)``.
    """

    def __init__(self, n, K, axial=False):
        self.n = int(n)
        self.d = self.n - 1
        self.K = int(K)
        self.axial = bool(axial)
        if self.d == 0:
            self.alpha = np.zeros((1, 0), dtype=int)
        elif axial:
            self.alpha = np.zeros((self.K + 1, self.d), dtype=int)
            self.alpha[:, 0] = np.arange(self.K + 1)
        else:
            self.alpha = multi_indices(self.d, self.K)
        self.degree = self.alpha.sum(axis=1)
        self.norms = self._norms()

    def __len__(self):
        return len(self.alpha)

    def _norms(self):
        if self.axial and self.d:
            # marginal of w_n on the d-simplex has density (1 - t)^(d-1) / (d-1)!
            t, W = _gauss_jacobi(self.K + 2, self.d - 1)
            w = np.zeros((len(t), self.n))
            w[:, -1], w[:, 0] = t, 1.0 - t
            W = W / math.factorial(self.d - 1)
        else:
            w, W = simplex_gauss_rule(self.d, self.K + 2) if self.d else (np.ones((1, 1)), np.ones(1))
        return (self.evaluate(w) ** 2) @ W

    def evaluate(self, w):
        """Basis values, shape (len(basis), M), at simplex points ``w`` (M, n)."""
        w = np.atleast_2d(np.asarray(w, dtype=float))
        if self.d == 0:
            return np.ones((1, w.shape[0]))
        if self.axial:
            return jacobi_table(self.K, self.d - 1, 0, 2.0 * w[:, -1] - 1.0)
        t = collapse(w)
        alpha = self.alpha
        vals = np.ones((len(alpha), t.shape[0]))
        d = self.d
        for i in range(d):
            J = alpha[:, i + 1:].sum(axis=1) if i + 1 < d else np.zeros(len(alpha), dtype=int)
            x = 2.0 * t[:, i] - 1.0
            om = 1.0 - t[:, i]
            for Jv in np.unique(J):
                sel = J == Jv
                tab = jacobi_table(self.K - Jv, 2 * Jv + d - 1 - i, 0, x)
                vals[sel] *= tab[alpha[sel, i]] * om ** Jv
        return vals

    def project(self, w, weights, values, chunk=8192, return_noise=False):
        """Orthogonal coefficients of sampled ``values`` under the given simplex rule.

        With ``return_noise`` also returns a rounding-error scale for each
        coefficient, ``eps (K + sqrt(M)) sum |P_a w v| / ||P_a||^2``.
        """
        values = np.asarray(values, dtype=float)
        acc = np.zeros(len(self))
        mag = np.zeros(len(self))
        for s in range(0, len(weights), chunk):
            B = self.evaluate(w[s:s + chunk])
            wv = weights[s:s + chunk] * values[s:s + chunk]
            acc += B @ wv
            if return_noise:
                mag += np.abs(B) @ np.abs(wv)
        if not return_noise:
            return acc / self.norms
        eps = np.finfo(float).eps * (self.K + math.sqrt(len(weights)))
        return acc / self.norms, eps * mag / self.norms

    def synthesize(self, coef, w, chunk=8192):
        """Evaluate ``sum_a coef[a] P_a(w)`` at simplex points ``w``."""
        w = np.atleast_2d(np.asarray(w, dtype=float))
        out = np.empty(w.shape[0])
        for s in range(0, w.shape[0], chunk):
            out[s:s + chunk] = np.asarray(coef) @ self.evaluate(w[s:s + chunk])
        return out
