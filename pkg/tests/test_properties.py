import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from ldbp.bodies import ComplexEllipsoid, LqBall, t_of_rho
from ldbp.ellipsoid import beta_squared
from ldbp.harmonic.expansion import harmonic_multiplier
from ldbp.hyperbolic import bergman_distance, bergman_geodesic, hyper_moment, moment_gap

radii = st.floats(0.0, 0.99)
dims = st.integers(2, 6)


def _point(seed, n, r):
    v = np.random.default_rng(seed).standard_normal(2 * n)
    return r * v / np.linalg.norm(v)


@given(st.floats(0.5, 8.0), radii, radii)
def test_moment_is_monotone(p, a, b):
    lo, hi = sorted((a, b))
    assert hyper_moment(p, lo) <= hyper_moment(p, hi)


@given(radii, radii, st.integers(2, 8), st.data())
def test_moment_gap_inequality(a, b, n, data):
    l = data.draw(st.integers(1, n - 1))
    lhs, rhs = moment_gap(a, b, n, l)
    assert lhs <= rhs + 1e-12 * max(abs(lhs), abs(rhs), 1e-300)


@given(st.floats(0.0, 0.999))
def test_t_of_rho_inverts(rho):
    t = t_of_rho(rho)
    assert math.isclose(math.sqrt(t / (1 + t)), rho, rel_tol=1e-12, abs_tol=1e-15)


@given(dims, st.floats(2.0, 30.0), st.integers(0, 2 ** 31), st.floats(0.01, 10.0))
def test_norm_is_homogeneous(n, q, seed, s):
    body = LqBall(n, q)
    x = np.random.default_rng(seed).standard_normal(2 * n)
    assert math.isclose(body.norm(s * x), s * body.norm(x), rel_tol=1e-12)


@given(st.lists(st.floats(0.2, 3.0), min_size=2, max_size=5), st.integers(0, 2 ** 31), st.floats(0, 2 * math.pi))
def test_ellipsoid_phase_invariance(axes, seed, phi):
    body = ComplexEllipsoid(tuple(axes))
    x = np.random.default_rng(seed).standard_normal(2 * len(axes))
    z = (x[0::2] + 1j * x[1::2]) * np.exp(1j * phi)
    y = np.empty_like(x)
    y[0::2], y[1::2] = z.real, z.imag
    assert math.isclose(body.norm(x), body.norm(y), rel_tol=1e-12)


@settings(max_examples=50)
@given(dims, st.integers(0, 2 ** 31), st.integers(0, 2 ** 31), radii, radii)
def test_geodesic_is_additive(n, s1, s2, r1, r2):
    x, y = _point(s1, n, r1), _point(s2, n, r2)
    if np.linalg.norm(x - y) < 1e-6:
        return
    arc = bergman_geodesic(x, y, 9)
    d = bergman_distance(x, y)
    for p in arc.real_points():
        assert abs(bergman_distance(x, p) + bergman_distance(p, y) - d) <= 1e-8 * max(d, 1.0)
    assert math.isclose(bergman_distance(y, x), d, rel_tol=1e-12, abs_tol=1e-14)


@given(st.floats(0.1, 10.0), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
def test_beta_squared_range(a, t1, t2):
    b = a * (0.05 + 0.95 * t1)
    c = b * (0.05 + 0.95 * t2)
    if a == c:
        return
    assert -1e-15 <= beta_squared(a, b, c) <= 1 + 1e-15


@given(st.integers(2, 12), st.floats(0.1, 0.9), st.integers(0, 40))
def test_multiplier_duality(N, frac, k):
    p = frac * N
    prod = harmonic_multiplier(N, p, 2 * k) * harmonic_multiplier(N, N - p, 2 * k)
    assert math.isclose(prod, (2 * math.pi) ** N, rel_tol=1e-10)
