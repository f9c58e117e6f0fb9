import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphcorr.errors import MismatchError
from graphcorr.fixtures import circle_double_cover, fibonacci, ten_edge
from graphcorr.graphs import TWO_PI, FiniteGraph, enumerate_paths
from graphcorr.modules import (ModuleElement, delta_edge,
                               delta_vertex, element_from_dict,
                               element_from_function, element_to_dict,
                               fiber_evaluation, inner_product, left_action,
                               module_norm, random_module_element,
                               random_vertex_function, right_action,
                               tensor_inner_product, unit_vertex_function,
                               vertex_function_from_function)

# ---------------------------------------------------------------------------
# oracles


def inner_product_loop_oracle(g, x, y):
    out = np.zeros(g.n_vertices, dtype=np.complex128)
    for i in range(g.n_edges):
        out[g.src_idx[i]] += np.conj(x.values[i]) * y.values[i]
    return out


def right_action_loop_oracle(g, x, a):
    return np.array([x.values[i] * a.values[g.src_idx[i]]
                     for i in range(g.n_edges)])


def left_action_loop_oracle(g, a, x):
    return np.array([a.values[g.rng_idx[i]] * x.values[i]
                     for i in range(g.n_edges)])


def tensor_path_sum_oracle(g, xs, ys, v):
    """Sum over length-k paths from v of conj(prod x) * prod y."""
    total = 0.0 + 0.0j
    for p in enumerate_paths(g, v, len(xs)):
        idx = [g.edge_index(e) for e in p.edges]
        cx = np.prod([xs[i].values[idx[i]] for i in range(len(xs))])
        cy = np.prod([ys[i].values[idx[i]] for i in range(len(ys))])
        total += np.conj(cx) * cy
    return total


# ---------------------------------------------------------------------------
# inner product


def test_edge_deltas_orthonormal():
    g = fibonacci()
    for e in g.edges:
        ip = inner_product(delta_edge(g, e), delta_edge(g, e))
        expected = delta_vertex(g, g.src[g.edge_index(e)])
        assert np.array_equal(ip.values, expected.values)
    ip = inner_product(delta_edge(g, "aa"), delta_edge(g, "ab"))
    assert not ip.values.any()


def test_inner_product_loop_oracle_random():
    g = FiniteGraph(["u", "v"], [f"e{i}" for i in range(5)],
                    ["u", "v", "u", "v", "u"], ["v", "u", "u", "v", "v"])
    rng = np.random.default_rng(0)
    for _ in range(25):
        x = random_module_element(g, rng)
        y = random_module_element(g, rng)
        assert np.allclose(inner_product(x, y).values,
                           inner_product_loop_oracle(g, x, y),
                           atol=1e-14, rtol=0)


def test_inner_product_double_cover_branch_formula():
    # <f, f>(e^{it}) sums |f|^2 over the two square-root branches
    g = circle_double_cover()
    n = 64
    f = element_from_function(g, n, [lambda u: np.exp(2j * u) + 0.5])
    ip = inner_product(f, f)
    t = TWO_PI * np.arange(n) / n
    f_of = lambda u: np.exp(2j * u) + 0.5
    expected = (np.abs(f_of(t / 2)) ** 2
                + np.abs(f_of(t / 2 + math.pi)) ** 2)
    assert np.max(np.abs(ip.values - expected)) < 1e-12


def test_positivity_exact():
    g = ten_edge()
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = random_module_element(g, rng)
        ip = inner_product(x, x).values
        # vectorized complex multiplies may contract with FMA, leaving
        # imaginary dust at the last ulp
        assert np.all(ip.real >= 0)
        assert np.max(np.abs(ip.imag)) <= 1e-13 * np.max(ip.real)
    z = ModuleElement(g, np.zeros(g.n_edges))
    assert not inner_product(z, z).values.any()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_adjoint_symmetry(seed):
    rng = np.random.default_rng(seed)
    g = fibonacci()
    x = random_module_element(g, rng)
    y = random_module_element(g, rng)
    assert np.max(np.abs(inner_product(x, y).values
                         - inner_product(y, x).values.conj())) <= 1e-13


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_right_linearity(seed):
    rng = np.random.default_rng(seed)
    g = ten_edge()
    x = random_module_element(g, rng)
    y = random_module_element(g, rng)
    a = random_vertex_function(g, rng)
    lhs = inner_product(x, right_action(y, a)).values
    rhs = inner_product(x, y).values * a.values
    assert np.max(np.abs(lhs - rhs)) < 1e-12


# ---------------------------------------------------------------------------
# actions


def test_unit_acts_trivially():
    g = fibonacci()
    rng = np.random.default_rng(2)
    x = random_module_element(g, rng)
    one = unit_vertex_function(g)
    assert np.array_equal(right_action(x, one).values, x.values)
    assert np.array_equal(left_action(one, x).values, x.values)


def test_delta_actions():
    g = fibonacci()
    e = "ab"
    x = delta_edge(g, e)
    a = delta_vertex(g, g.src[g.edge_index(e)])
    assert np.array_equal(right_action(x, a).values, x.values)


def test_action_loop_oracles():
    g = ten_edge()
    rng = np.random.default_rng(3)
    for _ in range(10):
        x = random_module_element(g, rng)
        a = random_vertex_function(g, rng)
        assert np.max(np.abs(right_action(x, a).values
                             - right_action_loop_oracle(g, x, a))) <= 1e-13
        assert np.max(np.abs(left_action(a, x).values
                             - left_action_loop_oracle(g, a, x))) <= 1e-13


def test_left_action_adjointability():
    g = fibonacci()
    rng = np.random.default_rng(4)
    for _ in range(10):
        x = random_module_element(g, rng)
        y = random_module_element(g, rng)
        a = random_vertex_function(g, rng)
        lhs = inner_product(left_action(a, y), x).values
        rhs = inner_product(y, left_action(a.conj(), x)).values
        assert np.max(np.abs(lhs - rhs)) < 1e-12


# ---------------------------------------------------------------------------
# norm


def test_norm_examples():
    g = fibonacci()
    assert module_norm(delta_edge(g, "aa")) == 1.0
    assert module_norm(ModuleElement(g, np.zeros(g.n_edges))) == 0.0


def test_norm_max_of_sums_oracle():
    g = ten_edge()
    rng = np.random.default_rng(5)
    for _ in range(10):
        x = random_module_element(g, rng)
        sums = np.zeros(g.n_vertices)
        for i in range(g.n_edges):
            sums[g.src_idx[i]] += abs(x.values[i]) ** 2
        assert abs(module_norm(x) - math.sqrt(sums.max())) < 1e-12


# ---------------------------------------------------------------------------
# tensor inner products


def test_tensor_k1_is_inner_product():
    g = fibonacci()
    rng = np.random.default_rng(6)
    x = random_module_element(g, rng)
    y = random_module_element(g, rng)
    assert np.array_equal(tensor_inner_product([x], [y]).values,
                          inner_product(x, y).values)


def test_tensor_delta_path_concatenation():
    g = fibonacci()
    # (aa, ba) concatenates: src(aa) = a = rng(ba)
    e, f = "aa", "ba"
    assert g.src[g.edge_index(e)] == g.rng[g.edge_index(f)]
    ip = tensor_inner_product([delta_edge(g, e), delta_edge(g, f)],
                              [delta_edge(g, e), delta_edge(g, f)])
    expected = delta_vertex(g, g.src[g.edge_index(f)])
    assert np.array_equal(ip.values, expected.values)
    # (ba, ba) does not: src(ba) = b but rng(ba) = a
    ip0 = tensor_inner_product([delta_edge(g, "ba"), delta_edge(g, "ba")],
                               [delta_edge(g, "ba"), delta_edge(g, "ba")])
    assert not ip0.values.any()


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_tensor_path_sum_oracle(k):
    g = FiniteGraph(["u", "v"], ["e0", "e1", "e2", "e3"],
                    ["u", "u", "v", "v"], ["u", "v", "u", "v"])
    rng = np.random.default_rng(7 + k)
    xs = [random_module_element(g, rng) for _ in range(k)]
    ys = [random_module_element(g, rng) for _ in range(k)]
    ip = tensor_inner_product(xs, ys)
    for v in g.vertices:
        oracle = tensor_path_sum_oracle(g, xs, ys, v)
        assert abs(ip.values[g.vertex_index(v)] - oracle) < 1e-10


def test_tensor_length_mismatch():
    g = fibonacci()
    rng = np.random.default_rng(8)
    with pytest.raises(MismatchError):
        tensor_inner_product([random_module_element(g, rng)], [])
    with pytest.raises(MismatchError):
        tensor_inner_product([], [])


# ---------------------------------------------------------------------------
# fiber evaluation


def test_fiber_evaluation_delta():
    g = fibonacci()
    vec = fiber_evaluation(delta_edge(g, "aa"), "a")
    assert vec.shape == (2,)
    assert sorted(np.abs(vec)) == [0.0, 1.0]


def test_fiber_evaluation_empty():
    g = FiniteGraph(["u", "v"], ["e"], ["u"], ["v"])
    vec = fiber_evaluation(delta_edge(g, "e"), "v")
    assert vec.shape == (0,) and np.linalg.norm(vec) == 0.0


def test_fiber_norm_identity_100_random():
    g = ten_edge()
    rng = np.random.default_rng(9)
    for _ in range(100):
        x = random_module_element(g, rng)
        ip = inner_product(x, x)
        for v in g.vertices:
            vec = fiber_evaluation(x, v)
            lhs = float(np.sum(np.abs(vec) ** 2))
            rhs = float(ip.values[g.vertex_index(v)].real)
            assert abs(lhs - rhs) < 1e-12


def test_fiber_norm_identity_circle():
    g = circle_double_cover()
    rng = np.random.default_rng(10)
    n = 32
    x = random_module_element(g, rng, base_n=n)
    ip = inner_product(x, x)
    for j in range(n):
        vec = fiber_evaluation(x, TWO_PI * j / n)
        assert abs(np.sum(np.abs(vec) ** 2) - ip.values[j].real) < 1e-12


# ---------------------------------------------------------------------------
# circle mechanics and serialization


def test_circle_actions_pointwise():
    g = circle_double_cover()
    n = 16
    f = element_from_function(g, n, [lambda u: np.exp(1j * u)])
    a = vertex_function_from_function(g, n, lambda t: np.cos(t))
    fa = right_action(f, a)
    u = TWO_PI * np.arange(2 * n) / (2 * n)
    expected = np.exp(1j * u) * np.cos(2 * u % TWO_PI)
    assert np.max(np.abs(fa.components[0] - expected)) < 1e-12
    # range = source here, so both actions agree
    af = left_action(a, f)
    assert np.max(np.abs(af.components[0] - expected)) < 1e-12


def test_circle_grid_mismatch():
    g = circle_double_cover()
    x = element_from_function(g, 16, [lambda u: np.ones_like(u)])
    y = element_from_function(g, 32, [lambda u: np.ones_like(u)])
    with pytest.raises(MismatchError):
        inner_product(x, y)


def test_element_json_round_trip():
    g = ten_edge()
    rng = np.random.default_rng(11)
    x = random_module_element(g, rng)
    x2 = element_from_dict(g, element_to_dict(x))
    assert np.max(np.abs(x.values - x2.values)) < 1e-15
