import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import brentq

from ldbp._validation import as_real
from ldbp.bodies import (
    ComplexEllipsoid,
    Cotent,
    Dilate,
    EuclideanBall,
    LqBall,
    Perturbed,
    PhaseTestBody,
    Tent,
    TwoEllipseBody,
    cotent_radial,
    perturbed_radial,
    radial,
    tent_radial,
    two_ellipse_radial,
)
from ldbp.errors import BodyNotContainedError, ConstructionError, EpsilonTooLargeError, InputDomainError
from ldbp.hyperbolic import hyper_kernel
from ldbp.profiles import ConstantProfile, FunctionProfile, TORUS, rtheta_invariance_defect, torus_invariance_defect


def _dirs(N, k, seed=0):
    g = np.random.default_rng(seed).standard_normal((k, N))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


ALL_BODIES = [
    LqBall(3, 2),
    LqBall(3, 4),
    ComplexEllipsoid((1.0, 0.7, 0.4)),
    TwoEllipseBody(3, 0.3, 1.1),
    EuclideanBall(3, 0.5),
    PhaseTestBody(3, 0.4),
    Dilate(0.5, LqBall(3, 4)),
    Tent(LqBall(3, 4)),
    Cotent(TwoEllipseBody(3, 0.3, 1.1)),
    Perturbed(Tent(LqBall(3, 4)), ConstantProfile(3, 0.2), 0.01, 1),
]


def test_lq_ball_examples():
    u = _dirs(6, 50)
    assert np.allclose(radial(LqBall(3, 2), u), 1.0, atol=1e-14)
    v = np.array([1, 0, 1, 0, 1, 0]) / math.sqrt(3)
    assert radial(LqBall(3, 4), v) == pytest.approx(3 ** 0.25, rel=1e-14)


def test_norm_is_inverse_radial_and_homogeneous():
    body = ComplexEllipsoid((1.0, 0.7, 0.4))
    u = _dirs(6, 100, seed=1)
    rho = body.radial(u)
    assert np.allclose(body.norm(rho[:, None] * u), 1.0, atol=1e-13)
    assert np.allclose(body.norm(2.5 * u), 2.5 * body.norm(u), rtol=1e-14)


def test_non_unit_input_rejected():
    with pytest.raises(InputDomainError):
        LqBall(2, 4).radial(np.array([1.0, 0.0, 1.0, 0.0]))


def test_two_ellipse_axis_values():
    s, b = 0.3, 1.1
    en = np.zeros(6)
    en[4] = 1.0
    e1 = np.zeros(6)
    e1[0] = 1.0
    assert two_ellipse_radial(s, b, 3, en) == pytest.approx(s, rel=1e-14)
    assert two_ellipse_radial(s, b, 3, e1) == pytest.approx(s, rel=1e-14)


def test_two_ellipse_matches_sharp_intersection_off_the_crease():
    s, b = 0.3, 1.1
    body = TwoEllipseBody(3, s, b)
    sharp = TwoEllipseBody(3, s, b, blend_width=0.0)
    u = _dirs(6, 4000, seed=2)
    w = (u[:, 0::2] ** 2 + u[:, 1::2] ** 2)
    X, Y = np.sqrt(1 - w[:, 2]), np.sqrt(w[:, 2])
    # sharp radial function: first exit from either ellipse
    ref = np.minimum(1 / np.sqrt(X ** 2 + Y ** 2 / s ** 2), 1 / np.sqrt(X ** 2 / s ** 2 + Y ** 2 / b ** 2))
    assert np.allclose(sharp.radial(u), ref, rtol=1e-13)
    Nh = np.sqrt(X ** 2 + Y ** 2 / s ** 2)
    Nv = np.sqrt(X ** 2 / s ** 2 + Y ** 2 / b ** 2)
    far = np.abs(Nh / Nv - 1) > 0.02
    assert far.sum() > 1000
    assert np.allclose(body.radial(u)[far], ref[far], rtol=1e-13)
    # the blend only shrinks the body
    assert np.all(body.radial(u) <= ref * (1 + 1e-14))


def test_two_ellipse_containment():
    body = TwoEllipseBody(3, 0.3, 1.1)
    assert body.radial(_dirs(6, 10_000, seed=3)).max() < 1.0


@pytest.mark.parametrize("kw", [dict(s=0.5, b=1.1), dict(s=0.0, b=1.1), dict(s=0.3, b=1.0)])
def test_two_ellipse_parameter_errors(kw):
    with pytest.raises(ConstructionError):
        TwoEllipseBody(3, **kw)


def test_constructor_errors():
    with pytest.raises(ConstructionError):
        LqBall(3, 0.5)
    with pytest.raises(ConstructionError):
        ComplexEllipsoid((1.0, -1.0))
    with pytest.raises(ConstructionError):
        Dilate(0.0, LqBall(2, 4))
    with pytest.raises(ConstructionError):
        Perturbed(Tent(LqBall(3, 4)), ConstantProfile(3), 0.01, 3)


def test_tent_cotent_examples():
    assert float(tent_radial(1.0)) == pytest.approx(1 / math.sqrt(2), rel=1e-15)
    assert float(cotent_radial(1 / math.sqrt(2))) == pytest.approx(1.0, rel=1e-14)
    r = np.linspace(0.01, 0.95, 200)
    assert np.max(np.abs(tent_radial(cotent_radial(r)) - r)) <= 1e-12
    assert np.max(np.abs(cotent_radial(tent_radial(r)) - r)) <= 1e-12
    assert np.all(np.diff(tent_radial(r)) > 0)
    with pytest.raises(InputDomainError):
        cotent_radial(1.0)


def test_tent_maps_line_to_ellipse():
    # the line y = 1 in a real 2-plane becomes x^2 + 2 y^2 = 1
    t = np.linspace(-1.5, 1.5, 7)
    theta = np.arctan2(1.0, t)
    rho = 1.0 / np.sin(theta)
    r = tent_radial(rho)
    x, y = r * np.cos(theta), r * np.sin(theta)
    assert np.allclose(x ** 2 + 2 * y ** 2, 1.0, atol=1e-14)


def test_cotent_maps_ellipses_to_line_and_hyperbola():
    s, b = 0.3, 1.1
    th = np.linspace(0.2, np.pi - 0.2, 9)
    # ellipse with semi-axes (1, s): image is the line y = s / sqrt(1 - s^2)
    rho = 1 / np.sqrt(np.cos(th) ** 2 + np.sin(th) ** 2 / s ** 2)
    r = cotent_radial(rho)
    assert np.allclose(r * np.sin(th), s / math.sqrt(1 - s * s), rtol=1e-13)
    # ellipse with semi-axes (s, b): image is x^2 = s^2/(1-s^2) (1 + (b^2-1)/b^2 y^2)
    th = np.r_[np.linspace(0.0, 0.25, 5), np.pi - np.linspace(0.0, 0.25, 5)]
    rho = 1 / np.sqrt(np.cos(th) ** 2 / s ** 2 + np.sin(th) ** 2 / b ** 2)
    assert rho.max() < 1
    r = cotent_radial(rho)
    x, y = r * np.cos(th), r * np.sin(th)
    assert np.allclose(x ** 2, s * s / (1 - s * s) * (1 + (b * b - 1) / (b * b) * y ** 2), rtol=1e-12)


def test_perturbed_closed_form_example():
    L = EuclideanBall(4, 1 / math.sqrt(2))
    u = np.zeros(8)
    u[0] = 1.0
    rho = float(perturbed_radial(L, ConstantProfile(4, 0.01), 1.0, 1, u))
    t = 1.06 ** (1 / 3)
    assert t == pytest.approx(1.01961, abs=1e-5)
    assert rho == pytest.approx(math.sqrt(t / (1 + t)), rel=1e-14)
    assert rho == pytest.approx(0.7105319, abs=1e-7)


@pytest.mark.filterwarnings("ignore::scipy.integrate.IntegrationWarning")
def test_perturbed_matches_integral_oracle():
    n, l, eps = 4, 1, 0.02
    L = Tent(LqBall(n, 4))
    g = FunctionProfile(n, moduli_func=lambda w: 0.5 - w[:, 0], symmetry=TORUS)
    K = Perturbed(L, g, eps, l)
    p = n - l
    F = lambda rho: quad(lambda r: hyper_kernel(p, r), 0.0, rho, epsabs=0, epsrel=1e-12, limit=200)[0]
    for u in _dirs(2 * n, 5, seed=4):
        target = F(float(L.radial(u))) + eps * float(g(u))
        ref = brentq(lambda r: F(r) - target, 1e-6, 1 - 1e-9, xtol=1e-15)
        assert float(K.radial(u)) == pytest.approx(ref, rel=1e-10)


def test_perturbed_eps_zero_and_monotone():
    L = Tent(LqBall(3, 4))
    u = _dirs(6, 200, seed=5)
    assert np.array_equal(Perturbed(L, ConstantProfile(3, 1.0), 0.0, 1).radial(u), L.radial(u))
    assert np.all(Perturbed(L, ConstantProfile(3, 1.0), 0.01, 1).radial(u) > L.radial(u))


def test_perturbed_eps_too_large():
    L = Tent(LqBall(3, 4))
    K = Perturbed(L, ConstantProfile(3, -1.0), 10.0, 1)
    with pytest.raises(EpsilonTooLargeError):
        K.radial(_dirs(6, 4))


def test_cotent_needs_containment():
    with pytest.raises(InputDomainError):
        Cotent(LqBall(2, 2)).radial(_dirs(4, 3))


@pytest.mark.parametrize("body", ALL_BODIES, ids=lambda b: type(b).__name__)
def test_rtheta_invariance_and_evenness(body):
    assert rtheta_invariance_defect(body.profile(1.0), samples=1000, seed=6) <= 1e-12
    u = _dirs(2 * body.n, 500, seed=7)
    assert np.array_equal(body.radial(-u), body.radial(u))


@pytest.mark.parametrize("body", ALL_BODIES[:5], ids=lambda b: type(b).__name__)
def test_torus_invariance(body):
    assert torus_invariance_defect(body.profile(1.0), seed=8) <= 1e-12


def test_phase_body_is_not_torus_invariant():
    body = PhaseTestBody(2, 0.1)
    prof = body.profile(1.0)
    assert rtheta_invariance_defect(prof, seed=9) <= 1e-12
    assert torus_invariance_defect(prof, seed=9) > 1e-2
    z = np.array([0.6, 0.8j])
    u = as_real(z)
    assert float(body.radial(u)) == pytest.approx(1 / (1 + 0.1 * (z[0] * z[1].conj()).real), rel=1e-15)


@pytest.mark.parametrize("body", [ComplexEllipsoid((1.0, 0.7, 0.4)), TwoEllipseBody(3, 0.3, 1.1)],
                         ids=["ellipsoid", "two-ellipse"])
def test_convexity_spot_check(body):
    u, v = _dirs(6, 1000, seed=10), _dirs(6, 1000, seed=11)
    x = u * body.radial(u)[:, None]
    y = v * body.radial(v)[:, None]
    assert np.all(body.norm(0.5 * (x + y)) <= 1 + 1e-12)


def test_t_of_rho_containment_error():
    from ldbp.bodies import t_of_rho

    with pytest.raises(BodyNotContainedError):
        t_of_rho(1.0)
