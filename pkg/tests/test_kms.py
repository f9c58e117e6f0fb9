import math

import numpy as np
import pytest

from graphcorr.errors import DomainError
from graphcorr.fixtures import edgeless, fibonacci, k_loops, single_loop
from graphcorr.kms import (KMSInftyState, KMSParameters, KMSState,
                           choose_truncation_depth, extremal_separation_check,
                           kms_condition_check, kms_eval, kms_eval_truncated,
                           kms_infty_eval, kms_limit_sweep,
                           partition_tail_bound, path_partition_sum,
                           truncated_partition_sum)
from graphcorr.modules import (delta_edge, delta_vertex,
                               random_module_element, random_vertex_function,
                               unit_vertex_function)
from graphcorr.toeplitz import (ToeplitzElement, iota_word, pi_word,
                                vacuum_projection, word)


def point_state(g, beta, v=None):
    params = KMSParameters(g, beta)
    return KMSState.point_mass(params, v if v is not None else g.vertices[0])


def edge_word(g, e, f=None):
    d1 = delta_edge(g, e)
    d2 = d1 if f is None else delta_edge(g, f)
    return ToeplitzElement(g, [word(1.0, (d1,), None, (d2,))])


# ---------------------------------------------------------------------------
# partition sums


def test_single_loop_geometric_series():
    g = single_loop()
    for beta in (0.5, 1.0, 2.0, 5.0):
        params = KMSParameters(g, beta)
        assert abs(path_partition_sum(params, "v")
                   - 1.0 / (1.0 - math.exp(-beta))) <= 1e-12


def test_edgeless_partition_is_one():
    g = edgeless(2)
    params = KMSParameters(g, 0.25)     # any beta: spectral radius is 0
    for v in g.vertices:
        assert path_partition_sum(params, v) == 1.0


def test_partition_matches_truncated_sum():
    g = fibonacci()
    params = KMSParameters(g, 1.0)
    depth = choose_truncation_depth(g, 1.0, eps=1e-13)
    for v in g.vertices:
        exact = path_partition_sum(params, v)
        assert abs(exact - truncated_partition_sum(g, 1.0, v, 60)) <= 1e-12
        assert abs(exact - truncated_partition_sum(g, 1.0, v, depth)) <= 1e-12


def test_truncated_sum_matches_explicit_enumeration():
    # at small depth the damped-power oracle equals a literal path sum
    from graphcorr.graphs import enumerate_paths
    g = fibonacci()
    beta = 1.0
    for v in g.vertices:
        literal = sum(math.exp(-beta * n) * len(enumerate_paths(g, v, n))
                      for n in range(9))
        assert abs(truncated_partition_sum(g, beta, v, 8) - literal) <= 1e-12


def test_truncation_depth_chooser():
    g = fibonacci()
    depth = choose_truncation_depth(g, 1.0, eps=1e-13)
    assert partition_tail_bound(g, 1.0, depth) < 1e-13
    assert partition_tail_bound(g, 1.0, depth - 1) >= 1e-13


def test_beta_domain_enforced():
    g = fibonacci()
    with pytest.raises(DomainError):
        KMSParameters(g, math.log(1.618))
    with pytest.raises(DomainError):
        KMSParameters(g, 0.0)


# ---------------------------------------------------------------------------
# state evaluation


def test_state_is_unital():
    for g in (single_loop(), fibonacci()):
        st = point_state(g, 1.5)
        one = ToeplitzElement(g, [pi_word(unit_vertex_function(g))])
        assert abs(kms_eval(st, one) - 1.0) <= 1e-14
        bare = ToeplitzElement(g, [word(1.0)])
        assert abs(kms_eval(st, bare) - 1.0) <= 1e-14


def test_single_loop_edge_word_closed_form():
    g = single_loop()
    for beta in (0.5, 1.0, 2.0):
        st = point_state(g, beta)
        val = kms_eval(st, edge_word(g, "e"))
        assert abs(val - math.exp(-beta)) <= 1e-12
        # independent truncated path-sum oracle
        oracle = kms_eval_truncated(st, edge_word(g, "e"), depth=60)
        assert abs(val - oracle) <= 1e-12


def test_orthogonal_edges_evaluate_to_zero():
    g = fibonacci()
    st = point_state(g, 2.0, "a")
    assert kms_eval(st, edge_word(g, "aa", "ab")) == 0.0


def test_gauge_invariance():
    # words of nonzero degree vanish in every equilibrium state
    g = fibonacci()
    st = point_state(g, 2.0)
    rng = np.random.default_rng(0)
    for m, n in [(1, 0), (0, 1), (2, 1), (1, 2), (2, 0)]:
        w = ToeplitzElement(g, [word(
            1.0, tuple(random_module_element(g, rng) for _ in range(m)),
            None, tuple(random_module_element(g, rng) for _ in range(n)))])
        assert kms_eval(st, w) == 0.0


def test_state_positivity():
    g = fibonacci()
    st = point_state(g, 1.0)
    rng = np.random.default_rng(1)
    for _ in range(25):
        m, n = rng.integers(0, 3, size=2)
        w = ToeplitzElement(g, [word(
            complex(*rng.standard_normal(2)),
            tuple(random_module_element(g, rng) for _ in range(m)),
            random_vertex_function(g, rng) if m == 0 else None,
            tuple(random_module_element(g, rng) for _ in range(n)))])
        val = kms_eval(st, w.adjoint() * w)
        assert abs(val.imag) <= 1e-12
        assert val.real >= -1e-12


def test_eval_matches_truncated_oracle_fibonacci():
    g = fibonacci()
    st = point_state(g, 1.0, "a")
    rng = np.random.default_rng(2)
    depth = choose_truncation_depth(g, 1.0, eps=1e-14)
    for _ in range(5):
        k = int(rng.integers(0, 3))
        w = ToeplitzElement(g, [word(
            1.0, tuple(random_module_element(g, rng) for _ in range(k)),
            random_vertex_function(g, rng) if k == 0 else None,
            tuple(random_module_element(g, rng) for _ in range(k)))])
        assert abs(kms_eval(st, w)
                   - kms_eval_truncated(st, w, depth)) <= 1e-11


# ---------------------------------------------------------------------------
# the equilibrium condition


def test_condition_degree_zero():
    g = fibonacci()
    st = point_state(g, 2.0)
    rng = np.random.default_rng(3)
    a = ToeplitzElement(g, [pi_word(random_vertex_function(g, rng))])
    rec = kms_condition_check(st, a, a)
    assert rec.passed and rec.residual <= 1e-14


def test_condition_single_loop_closed_form():
    g = single_loop()
    beta = 1.25
    st = point_state(g, beta)
    d = delta_edge(g, "e")
    ann = ToeplitzElement(g, [word(1.0, (), None, (d,))])
    crt = ToeplitzElement(g, [iota_word(d)])
    # both sides equal e^{-beta}
    lhs = kms_eval(st, ann * crt.scaled(math.exp(-beta)))
    rhs = kms_eval(st, crt * ann)
    assert abs(lhs - math.exp(-beta)) <= 1e-12
    assert abs(rhs - math.exp(-beta)) <= 1e-12
    rec = kms_condition_check(st, ann, crt)
    assert rec.passed


def test_condition_random_words():
    g = fibonacci()
    st = point_state(g, 2.0)
    rng = np.random.default_rng(4)
    for _ in range(50):
        m, n = rng.integers(0, 3, size=2)
        b1 = ToeplitzElement(g, [word(
            1.0, tuple(random_module_element(g, rng) for _ in range(m)),
            random_vertex_function(g, rng) if m == 0 else None,
            tuple(random_module_element(g, rng) for _ in range(n)))])
        b2 = ToeplitzElement(g, [word(
            1.0, tuple(random_module_element(g, rng) for _ in range(n)),
            random_vertex_function(g, rng) if n == 0 else None,
            tuple(random_module_element(g, rng) for _ in range(m)))])
        rec = kms_condition_check(st, b1, b2, tol=1e-9)
        assert rec.passed, rec.residual


def test_condition_rejects_inhomogeneous():
    g = fibonacci()
    st = point_state(g, 2.0)
    rng = np.random.default_rng(5)
    mixed = ToeplitzElement(g, [
        iota_word(random_module_element(g, rng)),
        pi_word(random_vertex_function(g, rng))])
    with pytest.raises(DomainError):
        kms_condition_check(st, mixed, mixed)


# ---------------------------------------------------------------------------
# the limit states


def test_infty_scalar_words():
    g = fibonacci()
    st = KMSInftyState(g, "a")
    assert kms_infty_eval(st, ToeplitzElement(
        g, [pi_word(delta_vertex(g, "a"))])) == 1.0
    assert kms_infty_eval(st, ToeplitzElement(
        g, [pi_word(delta_vertex(g, "b"))])) == 0.0


def test_infty_kills_nonscalar_words():
    g = fibonacci()
    st = KMSInftyState(g, "a")
    rng = np.random.default_rng(6)
    w = ToeplitzElement(g, [word(1.0, (random_module_element(g, rng),), None,
                                 (random_module_element(g, rng),))])
    assert kms_infty_eval(st, w) == 0.0


def test_infty_vacuum_projection_is_one():
    for g in (single_loop(), fibonacci(), k_loops(3)):
        st = KMSInftyState(g, g.vertices[0])
        assert kms_infty_eval(st, vacuum_projection(g)) == 1.0


def test_sweep_single_loop_closed_form():
    # the residual of the one-edge word is exactly e^{-beta}
    g = single_loop()
    words = {"cc*": edge_word(g, "e")}
    table = kms_limit_sweep(g, "v", words, [1.0, 2.0, 3.0])
    for beta, res in table.residuals("cc*"):
        assert abs(res - math.exp(-beta)) <= 1e-12
    assert table.monotone_decreasing()
    assert abs(table.fitted_constant - 1.0) <= 1e-9


def test_sweep_fibonacci_monotone_and_bounded():
    g = fibonacci()
    words = {"p": vacuum_projection(g),
             "pi[a]": ToeplitzElement(g, [pi_word(delta_vertex(g, "a"))])}
    table = kms_limit_sweep(g, "a", words, range(1, 11))
    assert table.monotone_decreasing()
    assert math.isfinite(table.fitted_constant)
    for row in table.rows:
        assert row.residual <= 3.0 * math.exp(-row.beta) \
            * words[row.word_id].norm_bound()


def test_sweep_rejects_beta_in_forbidden_range():
    g = fibonacci()
    with pytest.raises(DomainError):
        kms_limit_sweep(g, "a", {"one": ToeplitzElement(
            g, [word(1.0)])}, [0.25, 1.0])


# ---------------------------------------------------------------------------
# separation and affinity


def test_separation_single_vertex_trivial():
    g = single_loop()
    params = KMSParameters(g, 1.0)
    recs = extremal_separation_check(params, trials=5, seed=0)
    assert all(r.passed for r in recs)


def test_separation_two_vertices_distinct_loop_counts():
    g = type(fibonacci())(
        vertices=["u", "v"],
        edges=["l1", "l2", "m1"],
        src=["u", "u", "v"],
        rng=["u", "u", "v"])   # two loops at u, one at v
    params = KMSParameters(g, 2.0)
    recs = extremal_separation_check(params, trials=10, seed=1)
    assert all(r.passed for r in recs)


def test_affinity_exact_identity():
    g = fibonacci()
    params = KMSParameters(g, 1.5)
    recs = extremal_separation_check(params, trials=100, seed=2)
    affine = [r for r in recs if r.name.startswith("affine")]
    assert len(affine) == 100
    assert all(r.passed and r.residual <= 1e-12 for r in affine)


def test_measure_validation():
    g = fibonacci()
    params = KMSParameters(g, 1.0)
    from graphcorr.errors import FormatError
    with pytest.raises(FormatError):
        KMSState(params, np.array([0.7, 0.7]))
