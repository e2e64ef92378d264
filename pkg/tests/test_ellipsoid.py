import math

import numpy as np
import pytest

from ldbp.errors import DegenerateInputError, InputDomainError
from ldbp.ellipsoid import (
    Quadric,
    beta_squared,
    circular_plane,
    circular_plane_nd,
    displayed_beta_squared,
    section_conic,
    similarity_ratio,
)


def _axes(rng):
    return np.sort(rng.uniform(0.5, 3.0, 3))[::-1]


def test_beta_squared_in_unit_interval():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a, b, c = _axes(rng)
        assert 0.0 <= beta_squared(a, b, c) <= 1.0


def test_beta_squared_edge_cases():
    # b = c gives the plane x = 0, a = b the plane z = 0
    assert beta_squared(3.0, 1.0, 1.0) == 0.0
    assert beta_squared(3.0, 3.0, 1.0) == pytest.approx(1.0)


def test_displayed_form_leaves_unit_interval():
    rng = np.random.default_rng(1)
    for _ in range(50):
        a, b, c = _axes(rng)
        assert not 0.0 <= displayed_beta_squared(a, b, c) <= 1.0


def test_circular_plane_section_is_circle_of_radius_b():
    q = Quadric((3.0, 2.0, 1.0))
    for plane in circular_plane(3.0, 2.0, 1.0):
        assert np.linalg.norm(plane.normal) == pytest.approx(1.0)
        assert plane.normal[1] == 0.0
        sec = section_conic(q, plane.normal, 0.0)
        assert sec.kind == "circle"
        assert sec.semi_axes == pytest.approx([2.0, 2.0], rel=1e-12)
        pts = sec.boundary(64)
        assert np.allclose(q.value(pts), 1.0, atol=1e-12)


def test_circular_plane_rejects_bad_input():
    with pytest.raises(DegenerateInputError):
        circular_plane(1.0, 2.0, 3.0)
    with pytest.raises(DegenerateInputError):
        circular_plane(2.0, 2.0, 2.0)
    with pytest.raises(InputDomainError):
        circular_plane(2.0, 1.0, 0.0)
    with pytest.raises(InputDomainError):
        Quadric((1.0, -1.0))


def test_parallel_slices_stay_circular():
    q = Quadric((2.5, 1.5, 0.7))
    nrm = circular_plane(2.5, 1.5, 0.7)[1].normal
    for d in (0.1, 0.3, 0.5):
        assert section_conic(q, nrm, d).kind == "circle"


def test_similarity_ratio_matches_semi_axes():
    q = Quadric((2.0, 1.3, 0.9))
    rng = np.random.default_rng(2)
    nrm = rng.standard_normal(3)
    nrm /= np.linalg.norm(nrm)
    # offset of the tangent planes with this normal
    reach = math.sqrt(np.sum((np.asarray(q.axes) * nrm) ** 2))
    s0 = section_conic(q, nrm, 0.0)
    for d in np.linspace(0.0, 0.9, 4) * reach:
        sd = section_conic(q, nrm, d)
        r = similarity_ratio(q, nrm, d)
        assert sd.semi_axes == pytest.approx(r * s0.semi_axes, rel=1e-12)
        # closed form for the scale of a parallel slice
        assert r == pytest.approx(math.sqrt(1.0 - (d / reach) ** 2), rel=1e-12)


def test_empty_slice():
    q = Quadric((1.0, 1.0, 1.0))
    nrm = np.array([0.0, 0.0, 1.0])
    assert section_conic(q, nrm, 1.5).is_empty
    with pytest.raises(InputDomainError):
        similarity_ratio(q, nrm, 1.5)


def test_circular_plane_nd():
    axes = (1.0, 4.0, 2.5, 0.5, 3.0)
    q = Quadric(axes)
    frame, radius = circular_plane_nd(axes)
    assert frame.T @ frame == pytest.approx(np.eye(2), abs=1e-14)
    assert radius == 3.0
    sec = section_conic(q, frame=frame)
    assert sec.kind == "circle"
    assert sec.semi_axes == pytest.approx([3.0, 3.0], rel=1e-12)
