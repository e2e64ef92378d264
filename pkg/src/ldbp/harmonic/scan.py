"""Sign scans, Parseval residuals and phase-invariance checks for transforms."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from ..bodies import BodySpec
from .._validation import as_complex, as_real, check_directions
from ..errors import AccuracyError, InputDomainError, MethodMismatchError
from ..polynomials import collapse, multi_indices, simplex_gauss_rule, uncollapse
from ..profiles import TORUS
from ..quadrature import sphere_rule
from .expansion import SimplexExpansion, harmonic_multiplier
from .transforms import expansion_for, homog_ft

__all__ = [
    "NEGATIVE",
    "POSITIVE",
    "INDETERMINATE",
    "PDScanResult",
    "classify",
    "pd_scan",
    "ft_on_moduli",
    "parseval_residual",
    "hplane_ft_invariance",
]

NEGATIVE, POSITIVE, INDETERMINATE = "negative", "positive", "indeterminate"
CERTIFY_FACTOR = 3.0


def classify(value, error, factor=CERTIFY_FACTOR):
    if value < -factor * error:
        return NEGATIVE
    if value > factor * error:
        return POSITIVE
    return INDETERMINATE


@dataclass
class PDScanResult:
    """Minimum of the transform of ``rho^{2l} |x|^{-2l}`` over directions.

    ``margin`` is ``-min_value``: the depth of the minimum below zero.
    Negativity is certified when some scanned direction (the witness in
    ``details``) has ``value + 3 * error < 0``; positivity when every scanned
    direction has ``value - 3 * error > 0``.
    """

    l: int
    p: float
    min_value: float
    argmin: np.ndarray
    error: float
    status: str
    max_value: float
    num_points: int
    details: dict = field(default_factory=dict)

    @property
    def margin(self):
        return -self.min_value

    @property
    def certified_negative(self):
        return self.status == NEGATIVE

    def as_dict(self):
        return {"l": self.l, "p": self.p, "min_value": self.min_value, "argmin": self.argmin,
                "error": self.error, "margin": self.margin, "status": self.status,
                "max_value": self.max_value, "num_points": self.num_points,
                "details": self.details}


def _lattice(n, r):
    """Points of the simplex with coordinates in (1/r) Z, including all vertices."""
    a = multi_indices(n, r)
    return a[a.sum(axis=1) == r].astype(float) / r


def _moduli_to_xi(w):
    w = np.atleast_2d(w)
    return as_real(np.sqrt(np.maximum(w, 0.0)).astype(complex))


def ft_on_moduli(eng, w, p, filtered):
    """Transform values and truncation errors from a simplex expansion at moduli ``w``."""
    return eng.fourier_with_error(np.atleast_2d(w), p, filtered=filtered)


def _simplex_grid(eng, n, resolution):
    if eng.axial:
        t = np.linspace(0.0, 1.0, resolution or 401)
        w = np.zeros((len(t), n))
        w[:, -1], w[:, 0] = t, 1.0 - t
        return w
    return _lattice(n, resolution or {2: 400, 3: 48, 4: 16}.get(n, 8))


def _refine(eng, w0, p, filtered, bound=False, h=1.0 / 400):
    """Local minimization of the transform (or of ``value + 3 error`` with ``bound``)."""
    n = eng.n

    def value(w):
        v, e = ft_on_moduli(eng, w, p, filtered)
        return float(v[0] + CERTIFY_FACTOR * e[0]) if bound else float(v[0])

    if eng.axial:
        def to_w(x):
            w = np.zeros((1, n))
            w[0, -1], w[0, 0] = x, 1.0 - x
            return w
        r = minimize_scalar(lambda x: value(to_w(x)), bounds=(max(w0[-1] - h, 0.0), min(w0[-1] + h, 1.0)),
                            method="bounded", options={"xatol": 1e-10})
        return to_w(r.x)[0], float(r.fun)
    to_w = lambda x: uncollapse(np.clip(x, 0.0, 1.0)[None, :])
    obj = lambda x: value(to_w(x))
    r = minimize(obj, collapse(w0[None, :])[0], method="L-BFGS-B", bounds=[(0.0, 1.0)] * (n - 1))
    return to_w(r.x)[0], float(r.fun)


def _scan_simplex(f, p, degree, quad_order, resolution, refine):
    eng = expansion_for(f, degree, quad_order)
    filtered = math.isfinite(f.smoothness)
    n = f.n
    # a second projection on a finer rule exposes aliasing in the coefficients
    q = eng.quad_order or (max(1500, 4 * eng.degree) if eng.axial else eng.degree + 12)
    alt = SimplexExpansion(n, eng.degree, q + 8, axial=eng.axial).fit(f)

    def evaluate(w):
        v, trunc = ft_on_moduli(eng, w, p, filtered)
        v_alt, _ = ft_on_moduli(alt, w, p, filtered)
        return v, trunc + np.abs(v - v_alt)

    w = _simplex_grid(eng, n, resolution)
    vals, errs = evaluate(w)
    scale = abs(harmonic_multiplier(2 * n, p, 0) * eng.mean_)
    errs = errs + 1e-12 * scale
    cand = [w[int(np.argmin(vals))], w[int(np.argmin(vals + CERTIFY_FACTOR * errs))]]
    if refine:
        cand.append(_refine(eng, cand[0], p, filtered)[0])
        cand.append(_refine(eng, cand[1], p, filtered, bound=True)[0])
    cv, ce = evaluate(np.array(cand))
    ce = ce + 1e-12 * scale
    i_min = int(np.argmin(cv))
    i_wit = int(np.argmin(cv + CERTIFY_FACTOR * ce))
    lower_ok = bool(np.all(vals - CERTIFY_FACTOR * errs > 0)) and cv[i_min] > CERTIFY_FACTOR * ce[i_min]
    details = {"engine": "axial" if eng.axial else "torus", "degree": eng.degree,
               "filtered": filtered, "argmin_moduli": cand[i_min], "scale": scale,
               "witness_moduli": cand[i_wit], "witness_value": float(cv[i_wit]),
               "witness_error": float(ce[i_wit]), "all_positive": lower_ok}
    return (float(cv[i_min]), _moduli_to_xi(cand[i_min])[0], float(ce[i_min]),
            float(np.max(vals)), len(w), details)


def _scan_sphere(f, p, degree, resolution, seed):
    rule = sphere_rule(2 * f.n, resolution or 128, "quasi-monte-carlo", seed)
    eng = expansion_for(f, degree)
    vals, errs = eng.fourier_with_error(rule.nodes, p)
    i = int(np.argmin(vals))
    j = int(np.argmin(vals + CERTIFY_FACTOR * errs))
    details = {"engine": "zonal", "degree": eng.degree, "witness_value": float(vals[j]),
               "witness_error": float(errs[j]),
               "all_positive": bool(np.all(vals - CERTIFY_FACTOR * errs > 0))}
    return float(vals[i]), rule.nodes[i], float(errs[i]), float(np.max(vals)), len(vals), details


def pd_scan(spec, l, resolution=None, degree=None, quad_order=None, refine=True, seed=0,
            raise_indeterminate=False):
    """Scan the transform of ``||x||_K^{-2l}`` for negative values.

    Torus-invariant bodies are scanned over a lattice of the moduli simplex
    (the transform inherits the invariance), then refined by local
    minimization; other bodies are scanned at quasi-random directions.
    """
    n = spec.n
    if not 1 <= l <= n - 1:
        raise InputDomainError(f"need 1 <= l <= n-1, got l={l}")
    p = 2.0 * l
    f = spec.profile(p) if isinstance(spec, BodySpec) else spec
    if f.symmetry >= TORUS:
        vmin, xi, err, vmax, npts, details = _scan_simplex(f, p, degree, quad_order, resolution, refine)
    else:
        vmin, xi, err, vmax, npts, details = _scan_sphere(f, p, degree, resolution, seed)
    if classify(details["witness_value"], details["witness_error"]) == NEGATIVE:
        status = NEGATIVE
    elif details["all_positive"]:
        status = POSITIVE
    else:
        status = INDETERMINATE
    if raise_indeterminate and status == INDETERMINATE:
        raise AccuracyError(f"transform minimum {vmin:.4g} is within its error estimate {err:.3g}")
    return PDScanResult(int(l), p, vmin, xi, err, status, vmax, npts, details)


def parseval_residual(K, L, p, degree=None, order=None):
    """Relative residual of ``int FT(rho_K^p) FT(rho_L^{N-p}) = (2 pi)^N int rho_K^p rho_L^{N-p}``.

    The left side integrates pointwise transform values (truncated harmonic
    sums) over the sphere; the right side integrates the profiles directly.
    """
    n = K.n
    if L.n != n:
        raise InputDomainError("bodies live in different dimensions")
    N = 2 * n
    if not 0 < p < N:
        raise InputDomainError(f"need 0 < p < {N}")
    if min(K.symmetry, L.symmetry) < TORUS:
        raise MethodMismatchError("parseval_residual integrates on the moduli simplex; "
                                  "both bodies must be torus invariant")
    D = degree or {2: 48, 3: 24, 4: 12}.get(n, 8)
    q = order or D + 12
    w, W = simplex_gauss_rule(n - 1, q)
    W = W * 2.0 * math.pi ** n
    f, g = K.profile(p), L.profile(N - p)
    ef = SimplexExpansion(n, D, q + 4).fit(f)
    eg = SimplexExpansion(n, D, q + 4).fit(g)
    Ff = ef.fourier(w, p)
    Fg = eg.fourier(w, N - p)
    lhs = float(W @ (Ff * Fg))
    rhs = (2 * math.pi) ** N * float(W @ (f.on_moduli(w) * g.on_moduli(w)))
    return abs(lhs - rhs) / abs(rhs)


def hplane_ft_invariance(spec, xi, p, num_angles=8, **ft_opts):
    """Relative spread of the transform over the circle ``{e^{it} xi}``.

    Returns ``std / mean(|value|)`` of the transform of ``||x||_K^{-p}`` at
    ``num_angles`` equally spaced phases (offset so no angle is a multiple
    of a quadrature phase step).
    """
    xi = check_directions(xi, 2 * spec.n, name="xi")
    angles = 2 * math.pi * (np.arange(num_angles) + 0.5 * (math.sqrt(5) - 1)) / num_angles
    pts = as_real(np.exp(1j * angles)[:, None] * as_complex(xi)[None, :])
    res = homog_ft(spec, pts, p=p, **ft_opts)
    vals = np.array([r.value for r in res])
    return float(np.std(vals) / np.mean(np.abs(vals)))
