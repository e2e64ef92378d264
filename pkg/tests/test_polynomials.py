import math

import numpy as np
import pytest

from ldbp.polynomials import SimplexBasis, collapse, multi_indices, simplex_gauss_rule, uncollapse


def test_simplex_rule_volume_and_exactness():
    for d in (1, 2, 3):
        w, W = simplex_gauss_rule(d, 5)
        assert W.sum() == pytest.approx(1 / math.factorial(d), rel=1e-13)
        assert np.allclose(w.sum(axis=1), 1.0)
    # Dirichlet moment int w1^2 w2^3 over the 2-simplex = 2! 3! / 7!
    w, W = simplex_gauss_rule(2, 4)
    assert W @ (w[:, 0] ** 2 * w[:, 1] ** 3) == pytest.approx(2 * 6 / math.factorial(7), rel=1e-13)


def test_collapse_round_trip():
    rng = np.random.default_rng(0)
    w = rng.dirichlet(np.ones(4), 100)
    assert np.allclose(uncollapse(collapse(w)), w, atol=1e-14)


def test_multi_indices_count():
    assert len(multi_indices(3, 4)) == math.comb(7, 3)
    assert np.all(np.diff(multi_indices(2, 5).sum(axis=1)) >= 0)


@pytest.mark.parametrize("n,axial", [(2, False), (3, False), (4, False), (4, True)])
def test_basis_orthogonal(n, axial):
    basis = SimplexBasis(n, 5, axial=axial)
    w, W = simplex_gauss_rule(n - 1, 8)
    B = basis.evaluate(w)
    G = (B * W) @ B.T
    assert np.allclose(G, np.diag(basis.norms), atol=1e-12 * np.max(basis.norms))


def test_basis_project_synthesize():
    basis = SimplexBasis(3, 4)
    w, W = simplex_gauss_rule(2, 6)
    f = 1 + w[:, 0] ** 2 - 3 * w[:, 1] * w[:, 2] ** 2
    coef = basis.project(w, W, f)
    x = np.random.default_rng(1).dirichlet(np.ones(3), 50)
    assert np.allclose(basis.synthesize(coef, x), 1 + x[:, 0] ** 2 - 3 * x[:, 1] * x[:, 2] ** 2, atol=1e-12)
