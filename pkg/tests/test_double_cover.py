import math

import numpy as np
import pytest

from graphcorr.double_cover import (SWAP, build_twist, cover_inner_product,
                                    endpoint_identity_exact,
                                    nonisomorphism_witness, random_trig_poly,
                                    rho_map, run_verification,
                                    surjectivity_solve, verify_bimodule,
                                    verify_isometry)
from graphcorr.errors import FormatError, MismatchError
from graphcorr.graphs import CircleCoveringGraph, EdgeComponent

TWO_PI = 2.0 * math.pi


def twist_oracle(t):
    """The unitary path evaluated directly from its formula."""
    return np.array([
        [np.exp(1j * t / 2) * np.cos(t / 4),
         -np.exp(1j * t / 2) * np.sin(t / 4)],
        [np.sin(t / 4), np.cos(t / 4)]])


# ---------------------------------------------------------------------------
# the twist path


def test_boundary_matrices():
    tw = build_twist(64)
    assert np.array_equal(tw.matrices[0], np.eye(2))
    assert np.array_equal(tw.matrices[64], SWAP)
    # the snapped endpoints agree with the formula up to rounding dirt
    assert np.max(np.abs(twist_oracle(TWO_PI) - SWAP)) < 1e-15


def test_interior_matches_formula():
    tw = build_twist(16)
    for j in (1, 4, 8, 13):
        assert np.max(np.abs(tw.matrices[j]
                             - twist_oracle(TWO_PI * j / 16))) < 1e-15


def test_unitarity_at_pi():
    tw = build_twist(8)
    u = tw.matrices[4]           # t = pi
    assert np.max(np.abs(u @ u.conj().T - np.eye(2))) <= 1e-14


def test_twist_grid_validation():
    with pytest.raises(FormatError):
        build_twist(2)
    with pytest.raises(FormatError):
        build_twist(9)


# ---------------------------------------------------------------------------
# the module map


def test_rho_of_constant():
    n = 16
    tw = build_twist(n)
    f = np.ones(2 * n, dtype=complex)
    r = rho_map(tw, f)
    for j in range(n):
        assert np.max(np.abs(r[j] - tw.matrices[j] @ [1.0, 1.0])) == 0.0


def test_rho_of_identity_function_at_zero():
    # f(z) = z: branches over t=0 are 1 and -1
    n = 16
    tw = build_twist(n)
    t2 = np.pi * np.arange(2 * n) / n
    f = np.exp(1j * t2)
    r = rho_map(tw, f)
    assert np.max(np.abs(r[0] - np.array([1.0, -1.0]))) < 1e-15


def test_endpoint_identity_bitwise_for_50_random_polys():
    n = 64
    tw = build_twist(n)
    rng = np.random.default_rng(0)
    for _ in range(50):
        f = random_trig_poly(rng, 2 * n, degree=8)
        assert endpoint_identity_exact(tw, f)


def test_isometry_constant():
    n = 32
    tw = build_twist(n)
    f = np.ones(2 * n, dtype=complex)
    assert np.max(np.abs(cover_inner_product(f, f, n) - 2.0)) == 0.0
    assert verify_isometry(tw, f, f) <= 1e-14


def test_isometry_random():
    n = 1024
    tw = build_twist(n)
    rng = np.random.default_rng(1)
    for _ in range(5):
        f1 = random_trig_poly(rng, 2 * n)
        f2 = random_trig_poly(rng, 2 * n)
        assert verify_isometry(tw, f1, f2) < 1e-12


def test_isometry_orthogonal_pair():
    # both sides vanish identically for branch-alternating symmetry:
    # f1 odd and f2 even under z -> -z give <f1, f2> = conj(f1)f2 summed
    # over opposite-sign branches, which cancels
    n = 256
    tw = build_twist(n)
    t2 = np.pi * np.arange(2 * n) / n
    f1 = np.exp(1j * t2)               # odd: f1(-z) = -f1(z)
    f2 = np.exp(2j * t2)               # even: f2(-z) = f2(z)
    rhs = cover_inner_product(f1, f2, n)
    assert np.max(np.abs(rhs)) < 1e-12
    assert verify_isometry(tw, f1, f2) < 1e-12


def test_bimodule_constant_coefficient():
    n = 64
    tw = build_twist(n)
    rng = np.random.default_rng(2)
    f = random_trig_poly(rng, 2 * n)
    r, l = verify_bimodule(tw, f, np.ones(n, dtype=complex))
    assert r == 0.0 and l == 0.0


def test_bimodule_random():
    n = 1024
    tw = build_twist(n)
    rng = np.random.default_rng(3)
    for _ in range(5):
        f = random_trig_poly(rng, 2 * n)
        a = random_trig_poly(rng, n)
        r, l = verify_bimodule(tw, f, a)
        assert max(r, l) < 1e-12


def test_bimodule_hand_check():
    # f constant one, a(w) = w: both sides are U(t) (e^{it}, e^{it})^T
    n = 64
    tw = build_twist(n)
    t = TWO_PI * np.arange(n) / n
    f = np.ones(2 * n, dtype=complex)
    a = np.exp(1j * t)
    fa = f * a[np.arange(2 * n) % n]
    lhs = rho_map(tw, fa)
    for j in range(n):
        oracle = tw.matrices[j] @ np.array([a[j], a[j]])
        assert np.max(np.abs(lhs[j] - oracle)) < 1e-14


def test_grid_mismatch_rejected():
    tw = build_twist(16)
    with pytest.raises(MismatchError):
        rho_map(tw, np.ones(16))
    with pytest.raises(MismatchError):
        verify_bimodule(tw, np.ones(32), np.ones(8))


# ---------------------------------------------------------------------------
# surjectivity


def test_surjectivity_basis_image():
    tw = build_twist(16)
    for j in (0, 3, 8, 16):
        h = tw.matrices[j] @ np.array([1.0, 0.0])
        sol, res = surjectivity_solve(tw, j, h)
        assert np.max(np.abs(sol - np.array([1.0, 0.0]))) < 1e-14
        assert res <= 1e-13


def test_surjectivity_random_angles():
    n = 1000
    tw = build_twist(n)
    rng = np.random.default_rng(4)
    for j in range(0, n + 1, 7):
        h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        _, res = surjectivity_solve(tw, j, h)
        assert res <= 1e-13


def test_surjectivity_swap_at_seam():
    tw = build_twist(8)
    sol, res = surjectivity_solve(tw, 8, np.array([1.0, 0.0]))
    assert np.array_equal(sol, np.array([0.0 + 0j, 1.0 + 0j]))
    assert res == 0.0


# ---------------------------------------------------------------------------
# the witness


def test_component_counts():
    rep = nonisomorphism_witness()
    assert rep.two_loops_components == 2
    assert rep.double_cover_components == 1
    assert not rep.graphs_isomorphic


def test_three_trivial_loops_components():
    g = CircleCoveringGraph([EdgeComponent(1, 0, 1, 0)] * 3)
    assert g.component_count() == 3


def test_full_verification_small_grid():
    rep = run_verification(grid=128, trials=20, seed=5)
    assert rep.max_residual() < 1e-12
    assert rep.endpoint_exact
    assert rep.components == (2, 1)
