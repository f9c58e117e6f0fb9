import numpy as np
import pytest

from graphcorr.conjugacy import GraphIsomorphism
from graphcorr.errors import FormatError, SizeLimitError
from graphcorr.fixtures import (edgeless, fibonacci, k_loops, single_loop,
                                ten_edge)
from graphcorr.modules import (delta_edge, delta_vertex,
                               random_module_element, random_vertex_function,
                               unit_vertex_function)
from graphcorr.suite import relabeled_copy
from graphcorr.toeplitz import (ToeplitzElement, TruncatedFock,
                                basis_product, delta_basis_multiply,
                                delta_basis_residual, element_delta_basis,
                                fock_matrix, gauge_scale, iota_word, pi_word,
                                reconstruct_module_check, spectral_component,
                                symbolically_equal, triple_iso_transport,
                                vacuum_projection, word, word_multiply)

# ---------------------------------------------------------------------------
# word products


def test_annihilator_creator_axiom_on_deltas():
    g = fibonacci()
    for e in g.edges:
        for f in g.edges:
            w = word_multiply(word(1.0, (), None, (delta_edge(g, e),)),
                              iota_word(delta_edge(g, f)))
            if e == f:
                assert w is not None and w.creations == w.annihilations == 0
                assert np.array_equal(
                    w.middle.values,
                    delta_vertex(g, g.src[g.edge_index(e)]).values)
            else:
                assert w is None      # orthogonal deltas annihilate


def test_single_loop_projection_word_idempotent_under_fock():
    g = single_loop()
    d = delta_edge(g, "e")
    w = word(1.0, (d,), None, (d,))
    sq = word_multiply(w, w)
    f = TruncatedFock(g, "v", 6)
    m1, m2 = f.word_matrix(w), f.word_matrix(sq)
    valid = f.lengths + 2 <= 6
    assert np.max(np.abs((m1 @ m1 - m2)[:, valid])) < 1e-14


def test_degree_additivity_200_random_pairs():
    g = fibonacci()
    rng = np.random.default_rng(0)
    for _ in range(200):
        m1, n1, m2, n2 = rng.integers(0, 3, size=4)
        w1 = word(1.0, tuple(random_module_element(g, rng)
                             for _ in range(m1)),
                  random_vertex_function(g, rng) if m1 == 0 else None,
                  tuple(random_module_element(g, rng) for _ in range(n1)))
        w2 = word(1.0, tuple(random_module_element(g, rng)
                             for _ in range(m2)),
                  random_vertex_function(g, rng) if m2 == 0 else None,
                  tuple(random_module_element(g, rng) for _ in range(n2)))
        prod = word_multiply(w1, w2)
        if prod is not None:
            assert prod.degree == w1.degree + w2.degree


def test_normal_form_absorbs_middle():
    g = fibonacci()
    rng = np.random.default_rng(1)
    x = random_module_element(g, rng)
    a = random_vertex_function(g, rng)
    w = word(2.0, (x,), a, ())
    assert w.middle is None and len(w.left) == 1


# ---------------------------------------------------------------------------
# fock matrices


def test_unit_coefficient_is_identity():
    g = fibonacci()
    fm = fock_matrix(ToeplitzElement(g, [pi_word(unit_vertex_function(g))]),
                     "a", 4)
    assert np.array_equal(fm.matrix, np.eye(fm.fock.dim))


def test_single_loop_creation_is_lower_shift():
    # one path per length, so creating prepends the loop: the shift matrix
    g = single_loop()
    fm = fock_matrix(ToeplitzElement(g, [iota_word(delta_edge(g, "e"))]),
                     "v", 4)
    expected = np.zeros((5, 5), dtype=complex)
    for i in range(4):
        expected[i + 1, i] = 1.0
    assert np.array_equal(fm.matrix, expected)
    assert list(fm.valid_cols) == [True] * 4 + [False]


def test_word_products_match_matrix_products():
    g = ten_edge()
    rng = np.random.default_rng(2)
    f = TruncatedFock(g, "v0", 5)
    for _ in range(30):
        m1, n1 = rng.integers(0, 3, size=2)
        m2, n2 = rng.integers(0, 3, size=2)
        w1 = word(complex(*rng.standard_normal(2)),
                  tuple(random_module_element(g, rng) for _ in range(m1)),
                  random_vertex_function(g, rng) if m1 == 0 else None,
                  tuple(random_module_element(g, rng) for _ in range(n1)))
        w2 = word(complex(*rng.standard_normal(2)),
                  tuple(random_module_element(g, rng) for _ in range(m2)),
                  random_vertex_function(g, rng) if m2 == 0 else None,
                  tuple(random_module_element(g, rng) for _ in range(n2)))
        prod = word_multiply(w1, w2)
        mp = f.word_matrix(prod) if prod is not None \
            else np.zeros((f.dim, f.dim))
        valid = f.lengths + (m1 + m2) <= 5
        lhs = (f.word_matrix(w1) @ f.word_matrix(w2))[:, valid]
        scale = max(np.max(np.abs(lhs)), 1.0)
        assert np.max(np.abs(lhs - mp[:, valid])) <= 1e-12 * scale


def test_depth_too_small_rejected():
    g = fibonacci()
    rng = np.random.default_rng(3)
    xs = tuple(random_module_element(g, rng) for _ in range(3))
    with pytest.raises(SizeLimitError):
        fock_matrix(ToeplitzElement(g, [word(1.0, xs, None, ())]), "a", 2)


def test_vanishing_vacuum_expectation():
    # any word with a creation or annihilation has zero vacuum expectation
    g = fibonacci()
    rng = np.random.default_rng(4)
    f = TruncatedFock(g, "a", 4)
    vac = f.vacuum_index()
    for m, n in [(1, 0), (0, 1), (2, 1), (1, 1), (2, 2), (3, 1)]:
        w = word(1.0, tuple(random_module_element(g, rng) for _ in range(m)),
                 None, tuple(random_module_element(g, rng) for _ in range(n)))
        assert f.word_matrix(w)[vac, vac] == 0.0


# ---------------------------------------------------------------------------
# vacuum projection


def test_vacuum_projection_single_loop_depth3():
    g = single_loop()
    fm = fock_matrix(vacuum_projection(g), "v", 3)
    assert np.array_equal(fm.matrix, np.diag([1.0, 0.0, 0.0, 0.0]))


def test_vacuum_projection_edgeless_is_unit():
    g = edgeless(2)
    p = vacuum_projection(g)
    assert len(p.words) == 1 and p.words[0].creations == 0
    fm = fock_matrix(p, "v0", 2)
    assert np.array_equal(fm.matrix, np.eye(1))


@pytest.mark.parametrize("builder", [single_loop, fibonacci, ten_edge,
                                     lambda: k_loops(3)])
def test_vacuum_projection_rank_one_everywhere(builder):
    g = builder()
    p = vacuum_projection(g)
    for v in g.vertices:
        fm = fock_matrix(p, v, 5)
        target = np.zeros_like(fm.matrix)
        target[fm.fock.vacuum_index(), fm.fock.vacuum_index()] = 1.0
        assert np.array_equal(fm.matrix, target)


def test_vacuum_projection_symbolic_idempotent_selfadjoint():
    g = ten_edge()
    p = vacuum_projection(g)
    pb = element_delta_basis(p)
    assert delta_basis_residual(delta_basis_multiply(pb, pb, g), pb) == 0.0
    assert delta_basis_residual(element_delta_basis(p.adjoint()), pb) == 0.0


# ---------------------------------------------------------------------------
# grading


def test_spectral_component_pure_degree():
    g = fibonacci()
    rng = np.random.default_rng(5)
    x = random_module_element(g, rng)
    e = ToeplitzElement(g, [iota_word(x)])
    assert symbolically_equal(spectral_component(e, 1), e)
    assert not spectral_component(e, 0).words


def test_spectral_component_splits_mixed_sum():
    g = fibonacci()
    rng = np.random.default_rng(6)
    x = random_module_element(g, rng)
    a = random_vertex_function(g, rng)
    mixed = ToeplitzElement(g, [iota_word(x), pi_word(a)])
    assert symbolically_equal(spectral_component(mixed, 1),
                              ToeplitzElement(g, [iota_word(x)]))
    assert symbolically_equal(spectral_component(mixed, 0),
                              ToeplitzElement(g, [pi_word(a)]))


def test_spectral_components_orthogonal():
    g = fibonacci()
    rng = np.random.default_rng(7)
    words = [word(1.0, (random_module_element(g, rng),), None, ()),
             word(1.0, (), random_vertex_function(g, rng),
                  (random_module_element(g, rng),))]
    e = ToeplitzElement(g, words)
    for n in (-1, 0, 1):
        for m in (-1, 0, 1):
            if n != m:
                comp = spectral_component(spectral_component(e, n), m)
                assert not comp.words


def test_fourier_average_oracle():
    # averaging the gauge orbit against z^{-n} projects onto degree n
    g = fibonacci()
    rng = np.random.default_rng(8)
    x = random_module_element(g, rng)
    y = random_module_element(g, rng)
    a = random_vertex_function(g, rng)
    e = ToeplitzElement(g, [word(1.0, (x,), None, ()),
                            word(1.0, (), a, (y,)),
                            word(0.5, (x, y), None, (x,))])
    f = TruncatedFock(g, "a", 4)
    for n in (-1, 0, 1):
        avg = np.zeros((f.dim, f.dim), dtype=complex)
        for k in range(64):
            z = np.exp(2j * np.pi * k / 64)
            mat = sum(f.word_matrix(w) for w in gauge_scale(e, z).words)
            avg += mat * z ** (-n)
        avg /= 64
        target = spectral_component(e, n)
        tm = (sum(f.word_matrix(w) for w in target.words)
              if target.words else np.zeros((f.dim, f.dim)))
        assert np.max(np.abs(avg - tm)) < 1e-10


# ---------------------------------------------------------------------------
# reconstruction and transport


@pytest.mark.parametrize("builder", [single_loop, fibonacci])
def test_reconstruction_identities(builder):
    rep = reconstruct_module_check(builder(), trials=20, tol=1e-12, seed=0)
    assert rep.passed, rep.first_violation


def test_reconstruction_compress_delta_case():
    # with xi = eta = delta_e the compressed identity reduces to the axiom
    g = fibonacci()
    d = delta_edge(g, "ab")
    p = vacuum_projection(g)
    lhs = basis_product(
        [p, ToeplitzElement(g, [word(1.0, (), None, (d,))])
         * ToeplitzElement(g, [iota_word(d)]), p], g)
    rhs = basis_product(
        [ToeplitzElement(g, [pi_word(delta_vertex(g, "a"))]), p], g)
    assert delta_basis_residual(lhs, rhs) == 0.0


def test_transport_identity_isomorphism():
    g = fibonacci()
    iso = GraphIsomorphism(vertex_map={v: v for v in g.vertices},
                           edge_map={e: e for e in g.edges})
    rep = triple_iso_transport(iso, g, g, trials=3, seed=0)
    assert rep.passed and rep.max_residual() == 0.0


def test_transport_random_relabeling():
    g = ten_edge()
    rng = np.random.default_rng(9)
    F, iso = relabeled_copy(g, rng)
    rep = triple_iso_transport(iso, g, F, trials=5, tol=1e-12, seed=1)
    assert rep.passed


def test_transport_rejects_non_isomorphism():
    g = fibonacci()
    bad = GraphIsomorphism(vertex_map={"a": "b", "b": "a"},
                           edge_map={e: e for e in g.edges})
    with pytest.raises(FormatError):
        triple_iso_transport(bad, g, g)


def test_word_algebra_requires_finite_graph():
    from graphcorr.fixtures import circle_double_cover
    with pytest.raises(FormatError):
        ToeplitzElement(circle_double_cover(), [])


# ---------------------------------------------------------------------------
# cross-route consistency


def _random_element(g, rng, n_words=2):
    words = []
    for _ in range(n_words):
        m, n = rng.integers(0, 3, size=2)
        words.append(word(
            complex(*rng.standard_normal(2)),
            tuple(random_module_element(g, rng) for _ in range(m)),
            random_vertex_function(g, rng) if m == 0 else None,
            tuple(random_module_element(g, rng) for _ in range(n))))
    return ToeplitzElement(g, words)


def test_basis_multiply_agrees_with_elementary_route():
    # two independent product implementations: reduce elementary words,
    # then expand, versus expand first and multiply spanning words
    g = fibonacci()
    rng = np.random.default_rng(10)
    for _ in range(20):
        e1 = _random_element(g, rng)
        e2 = _random_element(g, rng)
        direct = element_delta_basis(e1 * e2)
        via_basis = delta_basis_multiply(element_delta_basis(e1),
                                         element_delta_basis(e2), g)
        scale = max((abs(c) for c in direct.values()), default=1.0)
        assert delta_basis_residual(direct, via_basis) <= 1e-12 * scale


def test_elementary_product_associativity():
    g = ten_edge()
    rng = np.random.default_rng(12)
    for _ in range(10):
        e1, e2, e3 = (_random_element(g, rng) for _ in range(3))
        left = element_delta_basis((e1 * e2) * e3)
        right = element_delta_basis(e1 * (e2 * e3))
        scale = max((abs(c) for c in left.values()), default=1.0)
        assert delta_basis_residual(left, right) <= 1e-12 * scale


def test_adjoint_matches_matrix_adjoint():
    g = fibonacci()
    rng = np.random.default_rng(11)
    f = TruncatedFock(g, "a", 6)
    interior = f.lengths + 3 <= 6     # safe window for both directions
    for _ in range(10):
        e = _random_element(g, rng)
        m = sum(f.word_matrix(w) for w in e.words)
        ma = sum(f.word_matrix(w) for w in e.adjoint().words)
        block = np.ix_(interior, interior)
        assert np.max(np.abs(m.conj().T[block] - ma[block])) <= 1e-12
