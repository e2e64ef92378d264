"""Integration rules on spheres, complex sub-spheres and the moduli simplex.

Points of C^n are stored as real vectors with interleaved coordinates
``(Re z_1, Im z_1, ..., Re z_n, Im z_n)``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln, ndtri, roots_jacobi
from scipy.stats import qmc

from ._validation import as_real
from .errors import InputDomainError, NumericalInstabilityError
from .polynomials import simplex_gauss_rule

__all__ = [
    "sphere_area",
    "QuadratureRule",
    "sphere_rule",
    "torus_reduced_rule",
    "axial_reduced_rule",
    "product_rule",
    "ComplexSubspaceFrame",
    "coordinate_frame",
    "sample_complex_subspace",
    "subspace_sphere_rule",
    "FDResult",
    "fd_laplacian",
]

MONTE_CARLO = "monte-carlo"
QUASI_MONTE_CARLO = "quasi-monte-carlo"
TORUS_REDUCED = "torus-reduced"
AXIAL_REDUCED = "axial-reduced"
PRODUCT = "product"
RTHETA_PRODUCT = "rtheta-product"
_RANDOM_METHODS = (MONTE_CARLO, QUASI_MONTE_CARLO)


def sphere_area(N):
    """Surface area of the unit sphere ``S^{N-1}`` in R^N."""
    return float(2.0 * np.exp(0.5 * N * np.log(np.pi) - gammaln(0.5 * N)))


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights for integrating over a (sub)sphere.

    ``nodes`` are unit vectors in R^N.  For torus-reduced rules ``moduli``
    holds the squared moduli of each node, which is all a torus-invariant
    integrand needs.  For product rules built on the moduli simplex,
    ``moduli`` holds the squared moduli in the frame coordinates.
    """

    N: int
    nodes: np.ndarray
    weights: np.ndarray
    method: str
    seed: int | None = None
    moduli: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.weights)

    @property
    def total_weight(self):
        return float(np.sum(self.weights))

    @property
    def is_random(self):
        return self.method in _RANDOM_METHODS

    def integrate(self, values):
        values = np.asarray(values, dtype=float)
        return float(np.dot(self.weights, values))

    def std_error(self, values):
        """Standard error of :meth:`integrate` for sampled rules, 0 for product rules.

        For quasi-Monte-Carlo the i.i.d. formula is used as a conservative bound.
        """
        if not self.is_random:
            return 0.0
        values = np.asarray(values, dtype=float)
        area = self.total_weight
        return float(area * np.std(values, ddof=1) / math.sqrt(len(values)))


def _gaussian_directions(N, size, method, rng, seed):
    if method == MONTE_CARLO:
        g = rng.standard_normal((size, N))
    elif method == QUASI_MONTE_CARLO:
        sampler = qmc.Sobol(d=N, scramble=True, seed=seed)
        m = int(round(math.log2(size)))
        u = sampler.random_base2(m) if 2 ** m == size else sampler.random(size)
        g = ndtri(np.clip(u, 1e-16, 1 - 1e-16))
    else:
        raise InputDomainError(f"unknown sampling method {method!r}")
    nrm = np.linalg.norm(g, axis=1, keepdims=True)
    return g / nrm


def sphere_rule(N, size, method=QUASI_MONTE_CARLO, seed=0):
    """Equal-weight random or quasi-random rule on ``S^{N-1}``.

    Weights sum exactly to the sphere area.  The quasi-random family is a
    scrambled Sobol sequence pushed through the inverse normal CDF.
    """
    if N < 2 or size < 1:
        raise InputDomainError("sphere_rule needs N >= 2 and size >= 1")
    rng = np.random.default_rng(seed)
    nodes = _gaussian_directions(N, int(size), method, rng, seed)
    weights = np.full(len(nodes), sphere_area(N) / len(nodes))
    return QuadratureRule(N, nodes, weights, method, seed)


def _complex_nodes(w, phases):
    return np.sqrt(np.maximum(w, 0.0)) * np.exp(1j * phases)


def torus_reduced_rule(n, size=24):
    """Product Gauss-Jacobi rule for torus-invariant integrands on ``S^{2n-1}``.

    ``size`` is the number of Gauss points per collapsed simplex axis, so the
    rule has ``size**(n-1)`` nodes and integrates polynomials in the squared
    moduli exactly up to total degree ``2*size - 1``.  In terms of the moduli
    vector ``m`` on the positive part of ``S^{n-1}`` this is the rule with
    density ``(2 pi)^n prod(m_i)``.
    """
    n = int(n)
    if n < 1:
        raise InputDomainError("n must be >= 1")
    w, W = simplex_gauss_rule(n - 1, int(size))
    nodes = as_real(np.sqrt(w).astype(complex))
    weights = 2.0 * np.pi ** n * W
    return QuadratureRule(2 * n, nodes, weights, TORUS_REDUCED, None, moduli=w,
                          meta={"order": int(size)})


def axial_reduced_rule(n, size=2000):
    """Gauss-Jacobi rule in ``w_n = |z_n|^2`` for integrands depending on ``|z_n|`` only."""
    n = int(n)
    if n < 2:
        raise InputDomainError("axial rules need n >= 2")
    x, wt = roots_jacobi(int(size), n - 2, 0)
    t = (x + 1.0) / 2.0
    W = wt / 2.0 ** (n - 1) / math.factorial(n - 2)
    w = np.zeros((len(t), n))
    w[:, -1] = t
    w[:, 0] = 1.0 - t
    nodes = as_real(np.sqrt(w).astype(complex))
    return QuadratureRule(2 * n, nodes, 2.0 * np.pi ** n * W, AXIAL_REDUCED, None, moduli=w,
                          meta={"order": int(size)})


def _simplex_and_phases(d, order, phases, fix_first):
    w, W = simplex_gauss_rule(d - 1, order)
    k = d - 1 if fix_first else d
    grid = 2.0 * np.pi * np.arange(phases) / phases
    if k > 0:
        ph = np.array(list(itertools.product(grid, repeat=k)))
    else:
        ph = np.zeros((1, 0))
    if fix_first:
        ph = np.hstack([np.zeros((len(ph), 1)), ph])
    M = len(w) * len(ph)
    wi = np.repeat(w, len(ph), axis=0)
    pi = np.tile(ph, (len(w), 1))
    weights = np.repeat(W, len(ph)) * (2.0 * np.pi ** d / len(ph))
    assert len(weights) == M
    return wi, _complex_nodes(wi, pi), weights


def product_rule(d, order=16, phases=32, rtheta=False):
    """Moduli-simplex x phase-trapezoid rule on ``S^{2d-1}`` in C^d.

    With ``rtheta=True`` the phase of the first coordinate is fixed to 0,
    which is exact only for integrands invariant under a common phase.
    Returns ``(moduli, complex_nodes, weights)``.
    """
    return _simplex_and_phases(int(d), int(order), int(phases), bool(rtheta))


@dataclass(frozen=True, eq=False)
class ComplexSubspaceFrame:
    """Orthonormal frame of a complex subspace ``H`` of C^n and of ``H^perp``."""

    n: int
    d: int
    basis: np.ndarray
    complement: np.ndarray

    def __post_init__(self):
        for name, F, k in (("basis", self.basis, self.d), ("complement", self.complement, self.n - self.d)):
            if F.shape != (self.n, k):
                raise InputDomainError(f"{name} has shape {F.shape}, expected {(self.n, k)}")
            if k and np.max(np.abs(F.conj().T @ F - np.eye(k))) > 1e-10:
                raise InputDomainError(f"{name} columns are not orthonormal")
        if self.d and self.n - self.d and np.max(np.abs(self.basis.conj().T @ self.complement)) > 1e-10:
            raise InputDomainError("basis and complement are not orthogonal")

    @property
    def perp(self):
        return ComplexSubspaceFrame(self.n, self.n - self.d, self.complement, self.basis)

    def embed(self, y):
        """Map frame coordinates ``y`` (..., d) complex to real points of R^{2n}."""
        return as_real(np.asarray(y) @ self.basis.T)


def coordinate_frame(n, indices):
    """Frame spanned by the coordinate axes ``e_i`` for ``i`` in ``indices`` (0-based)."""
    eye = np.eye(n, dtype=complex)
    idx = list(indices)
    rest = [i for i in range(n) if i not in idx]
    return ComplexSubspaceFrame(n, len(idx), eye[:, idx], eye[:, rest])


def _haar_unitary(n, rng):
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    diag = np.diag(R)
    if np.min(np.abs(diag)) < 1e-12:
        return None
    return Q * (diag / np.abs(diag))


def sample_complex_subspace(n, d, seed=None):
    """Haar-random complex subspace of complex dimension ``d`` in C^n."""
    n, d = int(n), int(d)
    if not 1 <= d <= n - 1:
        raise InputDomainError(f"need 1 <= d <= n-1, got d={d}, n={n}")
    rng = np.random.default_rng(seed)
    while True:
        U = _haar_unitary(n, rng)
        if U is not None:
            return ComplexSubspaceFrame(n, d, U[:, :d], U[:, d:])


def subspace_sphere_rule(H, size=16, method=RTHETA_PRODUCT, seed=0, phases=None):
    """Rule on ``S^{2n-1} ∩ H`` for a complex subspace frame ``H``.

    ``method`` is one of ``"monte-carlo"``, ``"quasi-monte-carlo"`` (``size``
    nodes), ``"product"`` or ``"rtheta-product"`` (``size`` Gauss points per
    simplex axis and ``phases`` trapezoid points per phase, default
    ``2*size``).  The ``rtheta-product`` variant is exact only for integrands
    invariant under a common phase, which holds for every body in this package.
    """
    d = H.d
    if method in _RANDOM_METHODS:
        rng = np.random.default_rng(seed)
        y = _gaussian_directions(2 * d, int(size), method, rng, seed)
        yc = y[:, 0::2] + 1j * y[:, 1::2]
        weights = np.full(len(yc), sphere_area(2 * d) / len(yc))
        return QuadratureRule(2 * H.n, H.embed(yc), weights, method, seed, meta={"d": d})
    if method not in (PRODUCT, RTHETA_PRODUCT):
        raise InputDomainError(f"unknown method {method!r}")
    phases = int(phases or 2 * size)
    wm, yc, weights = product_rule(d, size, phases, rtheta=(method == RTHETA_PRODUCT))
    return QuadratureRule(2 * H.n, H.embed(yc), weights, method, None, moduli=wm,
                          meta={"d": d, "order": int(size), "phases": phases})


@dataclass
class FDResult:
    value: float
    error: float
    order: int
    steps: list
    tableau: list

    def as_dict(self):
        return {"value": self.value, "error": self.error, "order": self.order,
                "steps": list(self.steps)}


def _laplacian_stencil(F, h, m):
    if m == 1:
        pts = np.array([[0, 0], [h, 0], [-h, 0], [0, h], [0, -h]], dtype=float)
        v = np.asarray(F(pts), dtype=float)
        return (v[1:].sum() - 4.0 * v[0]) / h ** 2
    pts = np.array([
        [0, 0],
        [h, 0], [-h, 0], [0, h], [0, -h],
        [h, h], [h, -h], [-h, h], [-h, -h],
        [2 * h, 0], [-2 * h, 0], [0, 2 * h], [0, -2 * h],
    ], dtype=float)
    v = np.asarray(F(pts), dtype=float)
    return (20.0 * v[0] - 8.0 * v[1:5].sum() + 2.0 * v[5:9].sum() + v[9:].sum()) / h ** 4


def fd_laplacian(F, order=1, h0=0.1, levels=5, rtol=1e-5, atol=0.0):
    """Richardson-extrapolated ``Delta^order F(0)`` for a smooth even F on R^2.

    ``F`` maps an array of points of shape (k, 2) to k values.  Stencils of
    step ``h0/2^j`` (j < levels) are extrapolated in ``h^2`` with a Neville
    tableau; the entry with the smallest difference to its predecessor is
    returned along with that difference as the error estimate.
    """
    if order not in (1, 2):
        raise InputDomainError("fd_laplacian supports order 1 or 2")
    hs = [h0 / 2 ** j for j in range(levels)]
    base = [_laplacian_stencil(F, h, order) for h in hs]
    T = [base]
    best = (base[-1], abs(base[-1] - base[-2]) if levels > 1 else np.inf)
    for k in range(1, levels):
        prev = T[-1]
        r = 4.0 ** k
        row = [(r * prev[i + 1] - prev[i]) / (r - 1.0) for i in range(len(prev) - 1)]
        T.append(row)
        for i in range(1, len(row)):
            err = abs(row[i] - row[i - 1])
            if err < best[1]:
                best = (row[i], err)
        if len(row) == 1:
            err = abs(row[0] - prev[-1])
            if err < best[1]:
                best = (row[0], err)
    value, err = float(best[0]), float(best[1])
    if not np.isfinite(value) or err > max(rtol * abs(value), atol):
        raise NumericalInstabilityError(
            f"Richardson ladder did not converge (estimate {value:.6g} +/- {err:.3g})",
            {"tableau": T, "steps": hs},
        )
    return FDResult(value, err, order, hs, T)
