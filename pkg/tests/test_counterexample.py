import numpy as np
import pytest

from ldbp.bodies import Cotent, EuclideanBall, LqBall, Tent, TwoEllipseBody, t_of_rho
from ldbp.counterexample import (
    build_pair,
    epsilon_ladder,
    one_dim_affirmative_check,
    seed_nonpd_body,
    verify_pair,
)
from ldbp.errors import InputDomainError, SeedRejectedError
from ldbp.hyperbolic import hyper_moment
from ldbp.quadrature import sphere_rule


def test_seed_argument_checks():
    with pytest.raises(InputDomainError):
        seed_nonpd_body(3, 1, "lq", scan=False)
    with pytest.raises(InputDomainError):
        seed_nonpd_body(5, 1, "lq", q=2.0, scan=False)
    with pytest.raises(InputDomainError):
        seed_nonpd_body(4, 1, "two-ellipse", scan=False)
    with pytest.raises(InputDomainError):
        seed_nonpd_body(4, 1, "cube", scan=False)


def test_seed_bodies_without_scan():
    M = seed_nonpd_body(5, 2, "lq", q=6.0, alpha=0.8, scan=False)
    u = sphere_rule(10, 64, "monte-carlo", 0).nodes
    assert np.allclose(M._radial(u), 0.4 * LqBall(5, 6.0)._radial(u), rtol=1e-14)
    M = seed_nonpd_body(3, 1, "two-ellipse", scan=False)
    assert isinstance(M, Cotent)


def test_tent_of_cotent_recovers_seed(seed_n3):
    L = Tent(seed_n3)
    u = sphere_rule(6, 500, "monte-carlo", 1).nodes
    assert np.allclose(t_of_rho(L._radial(u)), seed_n3._radial(u) ** 2, rtol=1e-12)


def test_pair_identities(pair_n3):
    pair, rep, _ = pair_n3
    assert pair.tent_defect() <= 1e-12
    # the defining relation, pointwise; eps*g is tiny, so compare against its size too
    u = sphere_rule(6, 300, "monte-carlo", 5).nodes
    k = pair.n - pair.l
    lhs = hyper_moment(k, pair.K._radial(u)) - hyper_moment(k, pair.L._radial(u))
    rhs = pair.eps * pair.g(u, check=False)
    assert np.max(np.abs(lhs - rhs)) <= 1e-6 * np.max(np.abs(rhs))
    assert pair.reduction_defect() <= 1e-10


def test_section_margins_match_analytic(pair_n3):
    _, rep, _ = pair_n3
    d = rep.as_dict()["sections"]
    assert d["max_direct_vs_analytic"] <= 1e-10 * np.max(np.abs(rep.section_L))
    assert d["max_analytic_margin"] <= 0.0


def test_eps_ladder_halves(pair_n3):
    pair, _, _ = pair_n3
    lad = epsilon_ladder(pair.L, pair.g, pair.l)
    assert len(lad) == 12
    assert np.allclose(lad[1:] / lad[:-1], 0.5)
    assert pair.eps in lad


def test_zero_eps_is_degenerate(seed_n3, g_n3):
    pair = build_pair(seed_n3, l=1, construction=g_n3[0], eps=0.0)
    u = sphere_rule(6, 200, "monte-carlo", 2).nodes
    assert np.array_equal(pair.K._radial(u), pair.L._radial(u))
    rep = verify_pair(pair, num_subspaces=4, hconvex_pairs=50)
    assert rep.verdict == "DEGENERATE"
    assert not rep.passed


def test_one_dim_sections_decide_volume():
    small, big = EuclideanBall(3, 0.5), EuclideanBall(3, 0.6)
    rep = one_dim_affirmative_check(small, big, samples=200)
    assert rep.passed and rep.details["hypothesis_holds"] and rep.details["conclusion_holds"]
    # larger lines: the hypothesis fails and the check is vacuous
    rep = one_dim_affirmative_check(big, small, samples=200)
    assert rep.passed and not rep.details["hypothesis_holds"]
    rep = one_dim_affirmative_check(small, small, samples=200)
    assert rep.details["equal"]
    with pytest.raises(InputDomainError):
        one_dim_affirmative_check(small, EuclideanBall(2, 0.5))


def test_one_dim_check_on_pair(pair_n3):
    pair, _, _ = pair_n3
    rep = one_dim_affirmative_check(pair.K, pair.L, samples=500)
    # complex lines of K exceed those of L somewhere, so nothing is contradicted
    assert rep.passed
    assert not rep.details["hypothesis_holds"]


def test_seed_near_euclidean_is_rejected():
    with pytest.raises(SeedRejectedError) as exc:
        seed_nonpd_body(4, 1, "lq", q=2.05)
    assert exc.value.diagnostics["status"] != "negative"
