"""Pairs of phase-invariant h-convex bodies with smaller sections but larger volume.

Pipeline: a seed ``M`` whose ``||x||_M^{-2l}`` has a transform negative
somewhere; ``L = Tent(M)`` so that ``t_L = rho_M^2``; ``g`` from
:func:`construct_g` with ``f = rho_M^{2l}``; ``K`` defined by
``t_K^{n-l} = t_L^{n-l} + 2(n-l) eps g``.  Then every section of ``K`` of
complex dimension ``n-l`` is no larger than that of ``L`` while
``hvol(K) - hvol(L) >= 8^n eps int f g > 0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import (
    BodySpec,
    Cotent,
    Dilate,
    LqBall,
    Perturbed,
    Tent,
    TwoEllipseBody,
    cotent_radial,
    t_of_rho,
)
from .errors import (
    BodyNotContainedError,
    ConstructionError,
    EpsilonTooLargeError,
    InputDomainError,
    SeedRejectedError,
)
from .harmonic.construct import construct_g
from .harmonic.scan import NEGATIVE, pd_scan
from .hyperbolic import coarser_rule, default_rule, h_convex_test, hvol, hyper_moment, section_hvol
from .quadrature import sample_complex_subspace, sphere_rule, subspace_sphere_rule
from .reports import SCHEMA_VERSION, VerificationReport, to_jsonable

__all__ = [
    "LQ",
    "TWO_ELLIPSE",
    "seed_nonpd_body",
    "CounterexamplePair",
    "CertificateReport",
    "epsilon_ladder",
    "build_pair",
    "verify_pair",
    "one_dim_affirmative_check",
]

LQ, TWO_ELLIPSE = "lq", "two-ellipse"
SECTION_RTOL = 1e-8
VOLUME_FACTOR = 3.0
LADDER_RUNGS = 12


def seed_nonpd_body(n, l, kind, q=4.0, alpha=1.0, s=0.3, b=1.1, scan=True, return_scan=False):
    """Seed body ``M`` whose ``||x||_M^{-2l}`` is not positive definite.

    ``kind="lq"`` gives ``Dilate(alpha/2, B_q^n)`` (needs ``1 <= l <= n-3``);
    ``kind="two-ellipse"`` gives ``Cotent(TwoEllipseBody(n, s, b))`` (needs
    ``l = n-2``).  With ``scan`` the negativity is certified by :func:`pd_scan`;
    ``return_scan`` returns ``(M, scan_result)``.
    """
    n, l = int(n), int(l)
    if kind == LQ:
        if not 1 <= l <= n - 3:
            raise InputDomainError(f"kind='lq' needs 1 <= l <= n-3, got n={n}, l={l}")
        if not q > 2:
            raise InputDomainError(f"kind='lq' needs q > 2, got q={q}")
        M = Dilate(0.5 * alpha, LqBall(n, q))
    elif kind == TWO_ELLIPSE:
        if l != n - 2:
            raise InputDomainError(f"kind='two-ellipse' needs l = n-2, got n={n}, l={l}")
        M = Cotent(TwoEllipseBody(n, s, b))
    else:
        raise InputDomainError(f"unknown seed kind {kind!r}")
    res = None
    if scan:
        res = pd_scan(M, l)
        if res.status != NEGATIVE:
            raise SeedRejectedError(
                f"transform of ||x||_M^-{2 * l} not certified negative (min {res.min_value:.4g} "
                f"+- {res.error:.3g}); try a larger rule or other q, s, b", res.as_dict())
    return (M, res) if return_scan else M


def _grid_values(spec, profile):
    """Radial and profile values on the reduced grid of ``spec`` (or Sobol points)."""
    r = default_rule(spec)
    if r.moduli is not None:
        return spec.radial_moduli(r.moduli), profile.on_moduli(r.moduli)
    return spec._radial(r.nodes), profile(r.nodes, check=False)


def epsilon_ladder(L, g, l, rungs=LADDER_RUNGS):
    """``eps_j = eps_0 / 2^j`` with ``eps_0 = 0.1 min t_L^{n-l} / (2(n-l) max|g|)``."""
    k = L.n - l
    rho, gv = _grid_values(L, g)
    gmax = float(np.max(np.abs(gv)))
    if gmax == 0:
        raise ConstructionError("g vanishes on the grid")
    eps0 = 0.1 * float(np.min(t_of_rho(rho) ** k)) / (2.0 * k * gmax)
    return eps0 / 2.0 ** np.arange(int(rungs))


@dataclass
class CounterexamplePair:
    n: int
    l: int
    M: BodySpec
    L: BodySpec
    g: object
    eps: float
    K: BodySpec
    construction: object = None
    provenance: dict = field(default_factory=dict)

    def tent_defect(self, samples=2000, seed=0):
        """Max ``|rho_M - Cotent(rho_L)|`` on random directions."""
        u = sphere_rule(2 * self.n, samples, "monte-carlo", seed).nodes
        return float(np.max(np.abs(self.M._radial(u) - cotent_radial(self.L._radial(u)))))

    def reduction_defect(self, samples=2000, seed=0):
        """Max ``|mu_{n-l}(rho_K) - mu_{n-l}(rho_L) - eps g|`` on random directions."""
        u = sphere_rule(2 * self.n, samples, "monte-carlo", seed).nodes
        k = self.n - self.l
        lhs = hyper_moment(k, self.K._radial(u)) - hyper_moment(k, self.L._radial(u))
        return float(np.max(np.abs(lhs - self.eps * self.g(u, check=False))))

    def as_dict(self):
        return {"n": self.n, "l": self.l, "M": repr(self.M), "L": repr(self.L), "eps": self.eps,
                "g_degree": getattr(self.g, "degree", None), "provenance": self.provenance}


def build_pair(M, n=None, l=1, degree=None, eps=None, rungs=LADDER_RUNGS, seed=0,
               hconvex_pairs=1000, scan=None, construction=None, num_subspaces=200):
    """Assemble ``(M, L, g, eps, K)``; ``eps`` is the largest ladder rung keeping ``K`` h-convex."""
    if n is not None and n != M.n:
        raise InputDomainError(f"n={n} does not match the seed dimension {M.n}")
    n, l = M.n, int(l)
    L = Tent(M)
    if construction is None:
        construction = construct_g(M.profile(2.0 * l), l=l, degree=degree, scan=scan, seed=seed,
                                   num_subspaces=num_subspaces)
    g = construction.g
    prov = {"seed": seed, "hconvex_pairs": hconvex_pairs, "g_degree": construction.degree,
            "ladder": []}
    if eps is not None:
        K = Perturbed(L, g, float(eps), l)
        _grid_values(K, g)
        prov["eps_source"] = "given"
        return CounterexamplePair(n, l, M, L, g, float(eps), K, construction, prov)

    ladder = epsilon_ladder(L, g, l, rungs)
    prov["eps_source"] = "ladder"
    prov["eps0"] = float(ladder[0])
    for e in ladder:
        K = Perturbed(L, g, float(e), l)
        try:
            _grid_values(K, g)
            rep = h_convex_test(K, num_pairs=hconvex_pairs, seed=seed)
        except (EpsilonTooLargeError, BodyNotContainedError) as exc:
            prov["ladder"].append({"eps": float(e), "passed": False, "reason": str(exc)})
            continue
        prov["ladder"].append({"eps": float(e), "passed": rep.passed, "margin": rep.margin})
        if rep.passed:
            return CounterexamplePair(n, l, M, L, g, float(e), K, construction, prov)
    raise ConstructionError(f"no eps in the ladder keeps K h-convex (smallest tried {ladder[-1]:.3g})",
                            prov)


@dataclass
class CertificateReport:
    n: int
    l: int
    eps: float
    seed: int
    section_K: np.ndarray
    section_L: np.ndarray
    section_margins: np.ndarray
    analytic_margins: np.ndarray
    section_scales: np.ndarray
    hvol_K: float
    hvol_L: float
    volume_gap: float
    volume_error: float
    volume_lower_bound: float
    hconvex_K: VerificationReport
    hconvex_L: VerificationReport
    section_tol: float = SECTION_RTOL
    details: dict = field(default_factory=dict)

    @property
    def sections_ok(self):
        return bool(np.all(self.section_margins <= self.section_tol * self.section_scales))

    @property
    def volume_ok(self):
        return bool(self.volume_gap > VOLUME_FACTOR * self.volume_error)

    @property
    def verdict(self):
        if self.eps == 0:
            return "DEGENERATE"
        ok = self.sections_ok and self.volume_ok and self.hconvex_K.passed and self.hconvex_L.passed
        return "PASS" if ok else "FAIL"

    @property
    def passed(self):
        return self.verdict == "PASS"

    def as_dict(self):
        rel = self.section_margins / np.where(self.section_scales > 0, self.section_scales, 1.0)
        return to_jsonable({
            "schema": SCHEMA_VERSION,
            "verdict": self.verdict,
            "n": self.n, "l": self.l, "eps": self.eps, "seed": self.seed,
            "sections": {
                "count": len(self.section_margins),
                "passed": self.sections_ok,
                "tol_relative": self.section_tol,
                "max_margin": float(np.max(self.section_margins)),
                "max_relative_margin": float(np.max(rel)),
                "max_analytic_margin": float(np.max(self.analytic_margins)),
                "max_direct_vs_analytic": float(np.max(np.abs(self.section_margins - self.analytic_margins))),
                "K": self.section_K, "L": self.section_L,
                "margins": self.section_margins, "analytic": self.analytic_margins,
            },
            "volume": {"K": self.hvol_K, "L": self.hvol_L, "gap": self.volume_gap,
                       "error": self.volume_error, "lower_bound": self.volume_lower_bound,
                       "factor": VOLUME_FACTOR, "passed": self.volume_ok},
            "hconvex": {"K": self.hconvex_K.as_dict(include_margins=False),
                        "L": self.hconvex_L.as_dict(include_margins=False)},
            "details": self.details,
        })


def _volume_gap(pair):
    """``hvol(K) - hvol(L)`` on two rule sizes; returns (gap, error, hvol_K, hvol_L)."""
    K, L = pair.K, pair.L
    r1 = default_rule(L)
    r2 = coarser_rule(r1)
    vk, vl = hvol(K, rule=r1), hvol(L, rule=r1)
    gap = vk - vl
    err = abs(gap - (hvol(K, rule=r2) - hvol(L, rule=r2))) + 1e-14 * abs(vl)
    if r1.is_random:
        d = 8.0 ** L.n * (hyper_moment(L.n, K._radial(r1.nodes)) - hyper_moment(L.n, L._radial(r1.nodes)))
        err = max(err, r1.std_error(d))
    return gap, err, vk, vl


def verify_pair(pair, num_subspaces=200, seed=0, hconvex_pairs=1000):
    """Certify sections (all sampled ``H``), total volumes and h-convexity of the pair."""
    n, l = pair.n, pair.l
    d = n - l
    g = pair.g
    deg = getattr(g, "degree", 8)
    sk, sl, marg, ana, scales = [], [], [], [], []
    for j in range(int(num_subspaces)):
        H = sample_complex_subspace(n, d, seed=[int(seed), j])
        rule = subspace_sphere_rule(H, deg // 2 + 2, phases=2 * deg + 4)
        a, b = section_hvol(pair.K, H, rule=rule), section_hvol(pair.L, H, rule=rule)
        gv = g(rule.nodes, check=False)
        sk.append(a)
        sl.append(b)
        marg.append(a - b)
        ana.append(8.0 ** d * pair.eps * rule.integrate(gv))
        scales.append(abs(b))
    gap, err, vk, vl = _volume_gap(pair)
    fg = pair.construction.certificate.details["pairing"]["value"] if pair.construction else math.nan
    hk = h_convex_test(pair.K, num_pairs=hconvex_pairs, seed=seed)
    hl = h_convex_test(pair.L, num_pairs=hconvex_pairs, seed=seed)
    return CertificateReport(
        n=n, l=l, eps=pair.eps, seed=seed,
        section_K=np.array(sk), section_L=np.array(sl), section_margins=np.array(marg),
        analytic_margins=np.array(ana), section_scales=np.array(scales),
        hvol_K=vk, hvol_L=vl, volume_gap=gap, volume_error=err,
        volume_lower_bound=8.0 ** n * pair.eps * fg,
        hconvex_K=hk, hconvex_L=hl,
        details={"pair": pair.as_dict(), "tent_defect": pair.tent_defect(seed=seed),
                 "reduction_defect": pair.reduction_defect(seed=seed)},
    )


def one_dim_affirmative_check(K, L, samples=2000, seed=0):
    """Check that smaller sections by complex lines force smaller volume.

    A complex line section has hyperbolic area ``16 pi mu_1(rho)`` in the
    direction of the line, so the hypothesis on sampled lines is
    ``rho_K <= rho_L`` there.  Reports the hypothesis, the conclusion
    ``hvol(K) <= hvol(L)`` and whether the implication holds.
    """
    if K.n != L.n:
        raise InputDomainError("bodies live in different dimensions")
    u = sphere_rule(2 * K.n, samples, "monte-carlo", seed).nodes
    ak = 16.0 * math.pi * hyper_moment(1, K._radial(u))
    al = 16.0 * math.pi * hyper_moment(1, L._radial(u))
    diff = ak - al
    tol = 1e-12 * np.maximum(np.abs(al), 1.0)
    violations = int(np.sum(diff > tol))
    vk, vl = hvol(K), hvol(L)
    hypothesis = violations == 0
    conclusion = bool(vk <= vl * (1 + 1e-12))
    return VerificationReport(
        name="one-dimensional sections",
        passed=bool(conclusion or not hypothesis),
        margin=float(-np.max(diff)),
        tol=1e-12,
        seed=seed,
        num_checks=int(samples),
        margins=-diff,
        details={"hypothesis_holds": hypothesis, "hypothesis_violations": violations,
                 "conclusion_holds": conclusion, "hvol_K": vk, "hvol_L": vl,
                 "equal": bool(np.max(np.abs(diff)) <= np.max(tol) and abs(vk - vl) <= 1e-12 * abs(vl))},
    )
