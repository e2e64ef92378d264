"""Spherical-harmonic expansions used to Fourier transform homogeneous functions.

If ``f`` on ``S^{N-1}`` has harmonic components ``f_m`` then the transform
of ``f(x/|x|) |x|^{-p}`` is ``sum_m mult(N, p, m) f_m(xi/|xi|) |xi|^{p-N}``
with the multipliers of :func:`harmonic_multiplier`.  Three expansion
engines share this: the moduli-simplex basis (torus-invariant profiles), its
one-variable restriction (axial profiles) and a zonal kernel sum that needs
no symmetry at all.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.special import gammaln
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..errors import InputDomainError
from ..polynomials import SimplexBasis, simplex_gauss_rule
from ..profiles import AXIAL, TORUS
from ..quadrature import axial_reduced_rule, product_rule, sphere_area

__all__ = [
    "harmonic_multiplier",
    "spectral_filter",
    "SimplexExpansion",
    "ZonalTransform",
]

FILTER_ALPHA = 36.0
FILTER_ORDER = 8
NOISE_FACTOR = 8.0
AXIAL_RULE_NOISE = 8e-15


def harmonic_multiplier(N, p, m):
    """Transform multiplier for even harmonic degree ``m`` and homogeneity ``-p`` in R^N."""
    m = np.asarray(m)
    if np.any(m % 2):
        raise InputDomainError("only even harmonic degrees occur for even profiles")
    k = m // 2
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    logmag = (N - p) * math.log(2.0) + 0.5 * N * math.log(math.pi) \
        + gammaln(k + 0.5 * (N - p)) - gammaln(k + 0.5 * p)
    return sign * np.exp(logmag)


def spectral_filter(degrees, cutoff):
    """Exponential filter ``exp(-alpha (k/cutoff)^order)``; 1 at k=0, machine zero at cutoff."""
    k = np.asarray(degrees, dtype=float)
    return np.exp(-FILTER_ALPHA * (k / float(cutoff)) ** FILTER_ORDER)


class SimplexExpansion(BaseEstimator):
    """Orthogonal expansion of a torus-invariant profile in the squared moduli.

    Parameters
    ----------
    n : int
        Complex dimension.
    degree : int
        Maximal total degree in ``w`` (harmonic degree ``2*degree``).
    quad_order : int or None
        Gauss points per simplex axis used for the projection.
    axial : bool
        Restrict to functions of ``w_n`` (one-variable Jacobi expansion).
    """

    def __init__(self, n=3, degree=24, quad_order=None, axial=False):
        self.n = n
        self.degree = degree
        self.quad_order = quad_order
        self.axial = axial

    def _rule(self):
        if self.axial:
            q = self.quad_order or max(1500, 4 * self.degree)
            r = axial_reduced_rule(self.n, q)
            return r.moduli, r.weights / (2.0 * np.pi ** self.n)
        q = self.quad_order or self.degree + 12
        return simplex_gauss_rule(self.n - 1, q)

    def fit(self, profile, y=None):
        if profile.symmetry < (AXIAL if self.axial else TORUS):
            raise InputDomainError("profile lacks the symmetry required by this expansion")
        if profile.n != self.n:
            raise InputDomainError("profile dimension differs from the expansion")
        self.__dict__.pop("_tail_sup", None)
        self.basis_ = SimplexBasis(self.n, self.degree, axial=self.axial)
        w, W = self._rule()
        values = profile.on_moduli(w)
        if self.axial:
            # the axial rule weights are the marginal simplex weights in w_n
            B = self.basis_.evaluate(w)
            norms = (B ** 2) @ W
            coef = (B @ (W * values)) / norms
            # large Gauss-Jacobi rules carry node errors growing with their size
            eps = max(np.finfo(float).eps * (self.degree + math.sqrt(len(W))), AXIAL_RULE_NOISE * len(W))
            noise = eps * (np.abs(B) @ np.abs(W * values)) / norms
        else:
            coef, noise = self.basis_.project(w, W, values, return_noise=True)
        deg = self.basis_.degree
        # trailing shells indistinguishable from rounding noise are dropped; at
        # small p the multipliers grow with the degree and would amplify them
        signal = np.abs(coef) > NOISE_FACTOR * noise
        self.effective_degree_ = int(deg[signal].max()) if signal.any() else 0
        keep = deg <= self.effective_degree_
        self.coef_ = np.where(keep, coef, 0.0)
        self.noise_ = np.where(keep, noise, 0.0)
        self.shell_degree_ = deg
        self.mean_ = float(self.coef_[0])
        return self

    def predict(self, w):
        check_is_fitted(self, "coef_")
        return self.basis_.synthesize(self.coef_, np.atleast_2d(w))

    def shell_norms(self):
        """L2 norm (normalized measure) of each degree shell, for decay diagnostics."""
        check_is_fitted(self, "coef_")
        nrm = self.basis_.norms * math.factorial(self.n - 1)
        return np.array([math.sqrt(np.sum((self.coef_ ** 2 * nrm)[self.shell_degree_ == k]))
                         for k in range(self.degree + 1)])

    def transform_terms(self, w, p):
        """Per-basis contributions to the transform at directions with moduli ``w``."""
        check_is_fitted(self, "coef_")
        mult = harmonic_multiplier(2 * self.n, p, 2 * self.shell_degree_)
        B = self.basis_.evaluate(np.atleast_2d(w))
        return (mult * self.coef_)[:, None] * B

    def fourier(self, w, p, cutoff=None, filtered=False):
        """Transform of ``f |x|^{-p}`` at unit directions with squared moduli ``w``.

        Terms above total degree ``cutoff`` (default: all) are dropped; with
        ``filtered`` the exponential spectral filter at ``cutoff`` is applied.
        """
        terms = self.transform_terms(w, p)
        D = self.degree if cutoff is None else cutoff
        deg = self.shell_degree_
        weight = (deg <= D).astype(float)
        if filtered:
            weight = weight * spectral_filter(deg, max(D, 1))
        return weight @ terms

    def _probe(self):
        """Fixed directions (as moduli) on which uniform tail sizes are measured."""
        if self.axial:
            t = np.linspace(0.0, 1.0, 4 * self.degree + 9)
            w = np.zeros((len(t), self.n))
            w[:, 0], w[:, -1] = 1.0 - t, t
            return w
        return simplex_gauss_rule(self.n - 1, max(self.degree // 2 + 3, 4))[0]

    def _tails(self, w, p, filtered):
        terms = self.transform_terms(w, p)
        deg = self.shell_degree_
        D = self.degree if filtered else self.effective_degree_
        if filtered:
            F = lambda c: (spectral_filter(deg, max(c, 1)) * (deg <= c)) @ terms
            full = F(D)
            err = np.maximum(np.abs(full - F(D // 2)), np.abs(full - F((3 * D) // 4)))
        else:
            full = np.ones(len(deg)) @ terms
            err = np.abs(full - (deg <= max(D - 4, 0)).astype(float) @ terms)
        return full, err

    def fourier_with_error(self, w, p, filtered=False):
        """Transform value and a truncation error estimate.

        Unfiltered (analytic profiles): the difference to the sum truncated
        four shells earlier, raised to the largest such difference over a
        fixed probe set because shell sums can pass through zero at isolated
        directions.  Filtered (finite smoothness): the spread against the same
        coefficients filtered at half and three quarters of the degree, kept
        pointwise since the error concentrates near the profile's creases.
        A rounding floor is added in both cases.
        """
        check_is_fitted(self, "coef_")
        full, err = self._tails(w, p, filtered)
        if not filtered:
            cache = self.__dict__.setdefault("_tail_sup", {})
            if float(p) not in cache:
                cache[float(p)] = float(np.max(self._tails(self._probe(), p, False)[1]))
            err = np.maximum(err, cache[float(p)])
        return full, err + self.rounding_error(w, p)

    def rounding_error(self, w, p):
        """Propagated coefficient noise ``sum |mult| noise |P_a(w)|`` plus a relative floor."""
        mult = np.abs(harmonic_multiplier(2 * self.n, p, 2 * self.shell_degree_))
        B = np.abs(self.basis_.evaluate(np.atleast_2d(w)))
        floor = 1e-13 * abs(harmonic_multiplier(2 * self.n, p, 0) * self.mean_)
        return (mult * self.noise_) @ B + floor


class ZonalTransform(BaseEstimator):
    """Transform via zonal kernels, valid for any even profile.

    ``sum_k mult(N,p,2k) int f(theta) Z_{2k}(<theta, xi>) dtheta`` with a full
    product rule on ``S^{2n-1}`` (all phases free), so no invariance of the
    profile is used.
    """

    def __init__(self, n=3, degree=6, quad_order=10, phases=None):
        self.n = n
        self.degree = degree
        self.quad_order = quad_order
        self.phases = phases

    def fit(self, profile, y=None):
        if profile.n != self.n:
            raise InputDomainError("profile dimension differs from the expansion")
        M = self.phases or 4 * self.degree + 2
        _, z, W = product_rule(self.n, self.quad_order, M, rtheta=False)
        nodes = np.empty((len(z), 2 * self.n))
        nodes[:, 0::2], nodes[:, 1::2] = z.real, z.imag
        self.nodes_ = nodes
        self.weights_ = W * profile(nodes, check=False)
        return self

    def shells(self, xi, p):
        """Per-degree contributions ``mult_2k * int f Z_2k(<theta, xi>)`` for k = 0..degree."""
        check_is_fitted(self, "nodes_")
        N = 2 * self.n
        lam = 0.5 * N - 1.0
        t = np.clip(self.nodes_ @ np.asarray(xi, dtype=float), -1.0, 1.0)
        degs = np.arange(0, 2 * self.degree + 1, 2)
        scale = harmonic_multiplier(N, p, degs) * (degs + lam) / lam / sphere_area(N)
        out = np.empty(len(degs))
        prev, cur = np.ones_like(t), 2.0 * lam * t
        out[0] = scale[0] * self.weights_.sum()
        for m in range(2, 2 * self.degree + 1):
            prev, cur = cur, (2.0 * (m + lam - 1) * t * cur - (m + 2 * lam - 2) * prev) / m
            if m % 2 == 0:
                out[m // 2] = scale[m // 2] * (self.weights_ @ cur)
        return out

    def fourier_with_error(self, xi, p):
        xi = np.atleast_2d(xi)
        vals, errs = [], []
        for x in xi:
            sh = self.shells(x, p)
            vals.append(sh.sum())
            errs.append(abs(sh[-1]) + abs(sh[-2]) if len(sh) > 1 else 0.0)
        return np.array(vals), np.array(errs)

    def fourier(self, xi, p):
        return self.fourier_with_error(xi, p)[0]
