import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.stats import qmc

from ldbp._validation import as_complex
from ldbp.bodies import ComplexEllipsoid, Dilate, EuclideanBall, LqBall, TwoEllipseBody
from ldbp.errors import BodyNotContainedError, DegenerateInputError, InputDomainError
from ldbp.hyperbolic import (
    bergman_distance,
    bergman_geodesic,
    dilation_factor,
    h_convex_test,
    hvol,
    hvol_with_error,
    hyper_kernel,
    hyper_moment,
    moment_gap,
    section_hvol,
)
from ldbp.quadrature import coordinate_frame, sample_complex_subspace, subspace_sphere_rule


def test_moment_examples():
    assert hyper_moment(1, 1 / math.sqrt(2)) == pytest.approx(0.5, rel=1e-14)
    assert hyper_moment(2, 1 / math.sqrt(2)) == pytest.approx(0.25, rel=1e-14)
    for p in (1, 2.5, 4):
        assert hyper_moment(p, 1e-4) / 1e-4 ** (2 * p) == pytest.approx(1 / (2 * p), rel=1e-7)
    assert hyper_moment(3, 0.0) == 0.0


def test_moment_matches_kernel_integral():
    for p in (1.5, 3):
        for rho in (0.2, 0.6, 0.85):
            ref = quad(lambda r: hyper_kernel(p, r), 0, rho, epsabs=0, epsrel=1e-12)[0]
            assert hyper_moment(p, rho) == pytest.approx(ref, rel=1e-10)


def test_moment_domain():
    with pytest.raises(InputDomainError):
        hyper_moment(2, 1.0)
    with pytest.raises(InputDomainError):
        hyper_moment(0, 0.5)
    r = np.linspace(0, 0.99, 100)
    assert np.all(np.diff(hyper_moment(3, r)) > 0)


def test_hvol_ball_examples():
    assert hvol(EuclideanBall(1, 0.5)) == pytest.approx(8 * math.pi / 3, rel=1e-12)
    assert hvol(EuclideanBall(3, 0.5)) == pytest.approx(512 * math.pi ** 3 / 27 / 6, rel=1e-12)
    assert 512 * math.pi ** 3 / 27 / 6 == pytest.approx(97.995, abs=1e-3)
    assert hvol(Dilate(0.9, EuclideanBall(3, 0.5))) < hvol(EuclideanBall(3, 0.5))


def test_hvol_needs_containment():
    with pytest.raises(BodyNotContainedError):
        hvol(LqBall(3, 4))
    with pytest.raises(InputDomainError):
        hvol(EuclideanBall(3, 0.5), n=2)


def test_hvol_error_estimate_is_small_for_smooth_body():
    v, err = hvol_with_error(Dilate(0.5, LqBall(3, 4)))
    assert err <= 1e-10 * v


def test_section_volume_of_ball():
    ball = EuclideanBall(3, 0.5)
    ref = 64 * 2 * math.pi ** 2 / 9 / 4
    assert ref == pytest.approx(35.092, abs=1e-3)
    vals = [section_hvol(ball, sample_complex_subspace(3, 2, seed=j)) for j in range(50)]
    assert np.mean(vals) == pytest.approx(ref, rel=1e-12)
    assert np.std(vals) <= 1e-10 * np.mean(vals)


def test_section_volume_two_ellipse_against_sampling():
    body = TwoEllipseBody(3, 0.3, 1.1)
    H = coordinate_frame(3, [0, 2])
    rule = subspace_sphere_rule(H, 96)
    v = section_hvol(body, H, rule=rule)
    # integrate the hyperbolic density over the slice with scrambled Sobol points in a box
    est = []
    for seed in range(4):
        x = 0.6 * qmc.Sobol(4, seed=seed).random_base2(18) - 0.3
        pts = np.zeros((len(x), 6))
        pts[:, [0, 1, 4, 5]] = x
        r2 = np.sum(x * x, axis=1)
        inside = body.norm(pts) <= 1.0
        est.append(0.6 ** 4 * np.mean(inside * 64.0 / (1 - r2) ** 3))
    assert np.mean(est) == pytest.approx(v, rel=1e-3)


def test_section_frame_checks():
    with pytest.raises(InputDomainError):
        section_hvol(EuclideanBall(3, 0.5), np.eye(3))
    with pytest.raises(InputDomainError):
        section_hvol(EuclideanBall(2, 0.5), sample_complex_subspace(3, 2, seed=0))


def test_geodesic_endpoints_and_carrier():
    rng = np.random.default_rng(0)
    for _ in range(20):
        z = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        z *= (rng.uniform(0.1, 0.95, 2) / np.linalg.norm(z, axis=1))[:, None]
        arc = bergman_geodesic(z[0], z[1], m=33)
        assert np.allclose(arc.points[0], z[0], atol=1e-10)
        assert np.allclose(arc.points[-1], z[1], atol=1e-10)
        off = arc.points - arc.center
        # samples stay on the complex line and inside its disc
        resid = off - np.outer(off @ arc.direction.conj(), arc.direction)
        assert np.max(np.abs(resid)) <= 1e-10
        assert np.max(np.linalg.norm(off, axis=1)) <= arc.radius * (1 + 1e-10)


def test_geodesic_is_uniform_in_distance():
    x = np.array([0.3 + 0.1j, -0.2j])
    y = np.array([-0.4, 0.5 + 0.2j])
    arc = bergman_geodesic(x, y, m=11)
    d = bergman_distance(x, arc.points)
    assert np.allclose(d, arc.params * d[-1], atol=1e-10)
    assert float(bergman_distance(np.zeros(2), np.array([0.5, 0.0]))) == pytest.approx(2 * math.atanh(0.5))


def test_geodesic_through_center_is_straight():
    arc = bergman_geodesic(np.array([0.3, 0.0]), np.array([-0.5, 0.0]), m=9)
    assert arc.is_diameter
    assert np.max(np.abs(arc.points.imag)) <= 1e-14
    assert np.all(np.diff(arc.points[:, 0].real) < 0)


def test_geodesic_midpoint_by_reflection_symmetry():
    r = 0.6
    arc = bergman_geodesic(np.array([r, 0j]), np.array([-1j * r, 0j]), m=3)
    mid = arc.points[1, 0]
    # circle orthogonal to the unit circle through r and -ir has its centre on the bisector
    D = (1 + r * r) / (math.sqrt(2) * r)
    rad = D - math.sqrt(D * D - 1)
    assert abs(mid) == pytest.approx(rad, abs=1e-10)
    assert np.angle(mid) == pytest.approx(-math.pi / 4, abs=1e-10)


def test_geodesic_errors():
    with pytest.raises(DegenerateInputError):
        bergman_geodesic(np.array([0.1, 0.2]), np.array([0.1, 0.2]))
    with pytest.raises(InputDomainError):
        bergman_geodesic(np.array([1.0, 0.0]), np.array([0.1, 0.2]))
    with pytest.raises(InputDomainError):
        bergman_geodesic(np.array([0.1, 0.0]), np.array([0.1j, 0.0]))


def test_real_input_is_interleaved():
    arc = bergman_geodesic(np.array([0.1, 0.2, 0.0, 0.0]), np.array([0.0, 0.0, 0.3, -0.1]), m=5)
    assert np.allclose(arc.points[0], as_complex(np.array([0.1, 0.2, 0.0, 0.0])))


@pytest.mark.parametrize("body", [EuclideanBall(3, 0.5), ComplexEllipsoid((0.9, 0.6, 0.3)),
                                  ComplexEllipsoid((0.95, 0.05, 0.05))],
                         ids=["ball", "ellipsoid", "thin-ellipsoid"])
def test_h_convex_pass(body):
    rep = h_convex_test(body, num_pairs=300, seed=1)
    assert rep.passed and rep.num_checks == 300


def test_h_convex_finds_violation_for_flat_polydisc():
    rep = h_convex_test(Dilate(0.7, LqBall(2, 20)), num_pairs=300, seed=1)
    assert not rep.passed
    assert rep.margin < -1e-4
    assert rep.details["worst_pair"] is not None


def test_h_convex_needs_containment():
    with pytest.raises(BodyNotContainedError):
        h_convex_test(LqBall(2, 4), num_pairs=10)


def test_dilation_factor():
    assert dilation_factor(1.0, 0.5) == pytest.approx(0.375)
    assert dilation_factor(0.2, 0.3) == pytest.approx(0.151667, abs=1e-6)
    assert dilation_factor(1.0, 1e-9) > 1e8
    with pytest.raises(InputDomainError):
        dilation_factor(0.0, 0.5)
    with pytest.raises(InputDomainError):
        dilation_factor(1.0, 1.0)


def test_moment_gap_examples():
    lhs, rhs = moment_gap(0.3, 0.6, 4, 1)
    assert lhs <= rhs
    lhs, rhs = moment_gap(0.6, 0.3, 4, 3)
    assert lhs <= rhs
    assert moment_gap(0.5, 0.5, 3, 1) == (0.0, 0.0)
