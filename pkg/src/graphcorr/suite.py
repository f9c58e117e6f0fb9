"""The acceptance suite: every top-level correctness criterion, runnable
as one deterministic batch.

Each criterion function returns :class:`~graphcorr.report.Check` records
with pinned tolerances; :func:`run_all` collects them into a single
report.  The pytest acceptance module and the ``suite`` CLI subcommand
both call into here, so each criterion has exactly one implementation.
"""
from __future__ import annotations

import math

import numpy as np

from . import fixtures as fx
from .bundles import (cocycle_from_graph, global_frame_over_circle,
                      graph_from_cocycle, monodromy)
from .conjugacy import (FrameData, GraphIsomorphism, Refutation, bump_frame,
                        finite_graph_isomorphism, frame_verify,
                        nonzero_permutation)
from .double_cover import run_verification
from .errors import NoMatchingError, SingularMatrixError
from .graphs import FiniteGraph, growth_sequence, spectral_radius
from .kms import (KMSInftyState, KMSParameters, KMSState, kms_condition_check,
                  kms_eval, kms_infty_eval, kms_limit_sweep,
                  path_partition_sum)
from .modules import (ModuleElement, delta_edge, delta_vertex,
                      random_module_element, random_vertex_function)
from .report import Check, RunReport, Timer
from .toeplitz import (ToeplitzElement, delta_basis_multiply,
                       delta_basis_residual, element_delta_basis, fock_matrix,
                       pi_word, reconstruct_module_check,
                       triple_iso_transport, vacuum_projection, word)

KMS_FIXTURES = ("single-loop", "three-loops", "fibonacci")
RECONSTRUCT_FIXTURES = ("single-loop", "three-loops", "fibonacci", "ten-edge")


def criterion_1_kms_closed_form():
    """Single loop: partition sum and one-edge word in closed form."""
    g = fx.single_loop()
    checks = []
    d = delta_edge(g, "e")
    w = ToeplitzElement(g, [word(1.0, (d,), None, (d,))])
    for beta in (0.5, 1.0, 2.0):
        params = KMSParameters(g, beta)
        n_v = path_partition_sum(params, "v")
        res_n = abs(n_v - 1.0 / (1.0 - math.exp(-beta)))
        checks.append(Check(f"1.partition-sum[beta={beta}]",
                            res_n <= 1e-12, res_n))
        state = KMSState.point_mass(params, "v")
        res_w = abs(kms_eval(state, w) - math.exp(-beta))
        checks.append(Check(f"1.one-edge-word[beta={beta}]",
                            res_w <= 1e-12, res_w))
    return checks


def criterion_2_kms_condition(seed: int = 0):
    """500 random homogeneous word pairs across three graphs at beta = 2."""
    rng = np.random.default_rng(seed)
    counts = (167, 167, 166)
    worst = 0.0
    total = 0
    ok = True
    for name, n_pairs in zip(KMS_FIXTURES, counts):
        g = fx.FINITE_FIXTURES[name]()
        params = KMSParameters(g, 2.0)
        state = KMSState.point_mass(params, g.vertices[0])
        for _ in range(n_pairs):
            b1 = _random_homogeneous(g, rng)
            b2 = _random_homogeneous(g, rng, degree=-next(iter(b1.degrees()))
                                     if b1.words and rng.random() < 0.7
                                     else None)
            rec = kms_condition_check(state, b1, b2, tol=1e-9)
            worst = max(worst, rec.residual)
            ok = ok and rec.passed
            total += 1
    return [Check(f"2.kms-condition[{total} pairs]", ok and worst <= 1e-9,
                  worst)]


def _random_homogeneous(g, rng, degree=None) -> ToeplitzElement:
    if degree is None:
        m, n = int(rng.integers(0, 3)), int(rng.integers(0, 3))
    else:
        m = max(degree, 0) + int(rng.integers(0, 2))
        n = m - degree
    xs = tuple(random_module_element(g, rng) for _ in range(m))
    ys = tuple(random_module_element(g, rng) for _ in range(n))
    mid = random_vertex_function(g, rng) if m == 0 else None
    return ToeplitzElement(g, [word(1.0, xs, mid, ys)])


def criterion_3_kms_limits():
    """Residuals to the vacuum states decrease and obey the e^{-beta} bound."""
    g = fx.fibonacci()
    words = {}
    for v in g.vertices:
        words[f"pi[{v}]"] = ToeplitzElement(g, [pi_word(delta_vertex(g, v))])
    for e in g.edges:
        d = delta_edge(g, e)
        words[f"cc*[{e}]"] = ToeplitzElement(g, [word(1.0, (d,), None, (d,))])
    p = vacuum_projection(g)
    words["p"] = p
    checks = []
    table = kms_limit_sweep(g, "a", words, range(1, 11))
    checks.append(Check("3.residuals-monotone", table.monotone_decreasing(),
                        table.fitted_constant,
                        detail=f"fitted C = {table.fitted_constant:.3f}"))
    bound_ok = True
    worst_ratio = 0.0
    for row in table.rows:
        bound = 3.0 * math.exp(-row.beta) * words[row.word_id].norm_bound()
        worst_ratio = max(worst_ratio,
                          row.residual / bound if bound else 0.0)
        bound_ok = bound_ok and row.residual <= bound
    checks.append(Check("3.residual-bound", bound_ok, worst_ratio,
                        detail="residual / (3 e^{-beta} |w|) max ratio"))
    inf_val = kms_infty_eval(KMSInftyState(g, "a"), p)
    checks.append(Check("3.vacuum-projection-infty", inf_val == 1.0,
                        abs(inf_val - 1.0)))
    return checks


def criterion_4_vacuum_projection():
    """Rank-one vacuum matrix at every vertex; selfadjoint idempotent."""
    checks = []
    for name in ("single-loop", "three-loops", "fibonacci", "ten-edge",
                 "edgeless"):
        g = fx.FINITE_FIXTURES[name]()
        p = vacuum_projection(g)
        exact = True
        for v in g.vertices:
            fm = fock_matrix(p, v, 5)
            target = np.zeros_like(fm.matrix)
            vac = fm.fock.vacuum_index()
            target[vac, vac] = 1.0
            exact = exact and bool(np.array_equal(fm.matrix, target))
        checks.append(Check(f"4.rank-one[{name}]", exact,
                            0.0 if exact else 1.0))
        pb = element_delta_basis(p)
        r_idem = delta_basis_residual(delta_basis_multiply(pb, pb, g), pb)
        r_adj = delta_basis_residual(element_delta_basis(p.adjoint()), pb)
        checks.append(Check(f"4.idempotent[{name}]", r_idem == 0.0, r_idem))
        checks.append(Check(f"4.selfadjoint[{name}]", r_adj == 0.0, r_adj))
    return checks


def criterion_5_reconstruction(seed: int = 0):
    """Vacuum compression identities, exact and under truncated matrices."""
    checks = []
    for name in RECONSTRUCT_FIXTURES:
        g = fx.FINITE_FIXTURES[name]()
        rep = reconstruct_module_check(g, trials=100, tol=1e-12, seed=seed)
        checks.append(Check(
            f"5.reconstruction[{name}]", rep.passed, rep.max_residual(),
            detail=("" if rep.passed else
                    f"first violation {rep.first_violation.name}")))
    return checks


def relabeled_copy(g: FiniteGraph, rng) -> tuple[FiniteGraph,
                                                 GraphIsomorphism]:
    vperm = rng.permutation(g.n_vertices)
    eperm = rng.permutation(g.n_edges)
    new_v = [f"w{i}" for i in range(g.n_vertices)]
    new_e = [f"f{i}" for i in range(g.n_edges)]
    edges = [None] * g.n_edges
    src = [None] * g.n_edges
    rngv = [None] * g.n_edges
    for i in range(g.n_edges):
        j = int(eperm[i])
        edges[j] = new_e[j]
        src[j] = new_v[vperm[g.src_idx[i]]]
        rngv[j] = new_v[vperm[g.rng_idx[i]]]
    F = FiniteGraph(new_v, edges, src, rngv)
    iso = GraphIsomorphism(
        vertex_map={v: new_v[vperm[g.vertex_index(v)]] for v in g.vertices},
        edge_map={e: new_e[eperm[g.edge_index(e)]] for e in g.edges})
    return F, iso


def criterion_6_transport(seed: int = 0):
    """Transport along 20 random relabelings of the ten-edge fixture."""
    rng = np.random.default_rng(seed)
    g = fx.ten_edge()
    worst = 0.0
    ok = True
    for t in range(20):
        F, iso = relabeled_copy(g, rng)
        rep = triple_iso_transport(iso, g, F, trials=5, tol=1e-12,
                                   seed=seed + t)
        ok = ok and rep.passed
        worst = max(worst, rep.max_residual())
    return [Check("6.triple-iso-transport[20 relabelings]", ok, worst)]


def criterion_7_spectral_radius():
    checks = []
    rho3 = spectral_radius(fx.k_loops(3))
    checks.append(Check("7.k-loops-exact", rho3 == 3.0, abs(rho3 - 3.0)))
    g = fx.fibonacci()
    rho = spectral_radius(g, tol=1e-10)
    golden = (1.0 + math.sqrt(5.0)) / 2.0
    checks.append(Check("7.fibonacci-golden", abs(rho - golden) <= 1e-9,
                        abs(rho - golden)))
    g20 = growth_sequence(g, 20)[-1]
    checks.append(Check("7.growth-cross-check[n=20]", abs(g20 - rho) <= 0.02,
                        abs(g20 - rho)))
    return checks


def criterion_8_permutation_lemma(seed: int = 0):
    rng = np.random.default_rng(seed)
    ok = True
    worst_margin = math.inf
    agree = True
    for t in range(500):
        B = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        try:
            w = nonzero_permutation(B)
        except (SingularMatrixError, NoMatchingError):
            ok = False
            continue
        valid = all(abs(B[i, w.sigma[i]]) > w.threshold for i in range(6))
        ok = ok and valid
        worst_margin = min(worst_margin, w.margin)
        if t < 50:
            best = _exhaustive_best_margin(B)
            agree = agree and best > w.threshold and w.margin <= best + 1e-12
    checks = [Check("8.matching[500 matrices]", ok, worst_margin,
                    detail="smallest matched entry"),
              Check("8.exhaustive-agreement[50 matrices]", agree)]
    return checks


def _exhaustive_best_margin(B: np.ndarray) -> float:
    import itertools
    k = B.shape[0]
    best = 0.0
    for sigma in itertools.permutations(range(k)):
        best = max(best, min(abs(B[i, sigma[i]]) for i in range(k)))
    return best


def _cycle_graph_union(lengths) -> FiniteGraph:
    vertices = []
    edges = []
    src = []
    rng_ = []
    v0 = 0
    for ci, ln in enumerate(lengths):
        for i in range(ln):
            vertices.append(f"v{v0 + i}")
        for i in range(ln):
            edges.append(f"e{v0 + i}")
            src.append(f"v{v0 + i}")
            rng_.append(f"v{v0 + (i + 1) % ln}")
        v0 += ln
    return FiniteGraph(vertices, edges, src, rng_)


def criterion_9_graph_isomorphism(seed: int = 0):
    rng = np.random.default_rng(seed)
    found = True
    for t in range(100):
        g = _random_graph(rng)
        F, _ = relabeled_copy(g, rng)
        res = finite_graph_isomorphism(g, F)
        found = found and isinstance(res, GraphIsomorphism)
    checks = [Check("9.relabeled-pairs-found[100]", found)]
    partitions = [(6,), (3, 3), (4, 2), (2, 2, 2), (5, 1)]
    refuted = True
    oracle_confirms = True
    for a in range(len(partitions)):
        for b in range(a + 1, len(partitions)):
            E = _cycle_graph_union(partitions[a])
            F = _cycle_graph_union(partitions[b])
            res = finite_graph_isomorphism(E, F)
            refuted = refuted and isinstance(res, Refutation)
            oracle_confirms = oracle_confirms \
                and not _exhaustive_isomorphic(E, F)
    checks.append(Check("9.nonisomorphic-pairs-refuted[10]", refuted))
    checks.append(Check("9.exhaustive-oracle-agrees", oracle_confirms))
    return checks


def _random_graph(rng) -> FiniteGraph:
    n = int(rng.integers(3, 7))
    m = int(rng.integers(2 * n - 2, 2 * n + 3))
    vertices = [f"v{i}" for i in range(n)]
    edges = [f"e{i}" for i in range(m)]
    src = [f"v{int(rng.integers(0, n))}" for _ in range(m)]
    rng_ = [f"v{int(rng.integers(0, n))}" for _ in range(m)]
    return FiniteGraph(vertices, edges, src, rng_)


def _exhaustive_isomorphic(E: FiniteGraph, F: FiniteGraph) -> bool:
    import itertools
    if E.n_vertices != F.n_vertices or E.n_edges != F.n_edges:
        return False
    AE, AF = E.adjacency(), F.adjacency()
    n = E.n_vertices
    for perm in itertools.permutations(range(n)):
        if all(AE[i, j] == AF[perm[i], perm[j]]
               for i in range(n) for j in range(n)):
            return True
    return False


def criterion_10_double_cover(seed: int = 0):
    rep = run_verification(grid=1024, trials=100, degree=16, seed=seed)
    return [
        Check("10.twist-boundary", rep.boundary_start <= 1e-14
              and rep.boundary_end <= 1e-14,
              max(rep.boundary_start, rep.boundary_end)),
        Check("10.twist-unitary", rep.unitarity <= 1e-12, rep.unitarity),
        Check("10.isometry", rep.isometry <= 1e-9, rep.isometry),
        Check("10.module-actions", max(rep.action_right,
                                       rep.action_left) <= 1e-9,
              max(rep.action_right, rep.action_left)),
        Check("10.surjectivity", rep.surjectivity <= 1e-13,
              rep.surjectivity),
        Check("10.seam-exact", rep.endpoint_exact),
        Check("10.component-counts", rep.components == (2, 1),
              detail=f"{rep.components}"),
    ]


def criterion_11_bundles():
    checks = []
    c_f = cocycle_from_graph(fx.circle_double_cover())
    checks.append(Check("11.double-cover-monodromy",
                        monodromy(c_f).cycle_type == (2,),
                        detail=f"{monodromy(c_f).cycle_type}"))
    g_round = graph_from_cocycle(fx.swap_cocycle())
    degs = sorted(c.source_degree for c in g_round.components)
    checks.append(Check("11.swap-to-graph", degs == [2], detail=f"{degs}"))
    g_id = graph_from_cocycle(fx.identity_cocycle(3))
    degs_id = sorted(c.source_degree for c in g_id.components)
    checks.append(Check("11.identity-to-loops", degs_id == [1, 1, 1],
                        detail=f"{degs_id}"))
    for name, builder in (("swap", fx.swap_cocycle),
                          ("three-cycle", fx.three_cycle_cocycle),
                          ("two-plus-one", fx.two_plus_one_cocycle)):
        fr = global_frame_over_circle(builder(), 48)
        res = max(fr.unitarity, fr.transition_residual)
        checks.append(Check(f"11.frame[{name}]",
                            res <= 1e-12 and fr.endpoint_exact, res))
    return checks


def criterion_12_frame_lemma():
    g = fx.circle_double_cover()
    fd = bump_frame(g, base_n=256)
    rep = frame_verify(g, fd, tol=1e-9)
    checks = [Check("12.bump-frame-passes", rep.passed,
                    max(rep.max_residuals.values()),
                    detail=rep.failed_condition or "")]
    alpha_res = rep.max_residuals.get("alpha-extraction", math.inf)
    checks.append(Check("12.alpha-extraction", alpha_res <= 1e-9, alpha_res))
    pert = ModuleElement(
        g, tuple(a + 1e-3 * b for a, b in zip(fd.gens[0].components,
                                              fd.gens[1].components)),
        fd.h.base_n)
    rep2 = frame_verify(g, FrameData(h=fd.h, gens=(pert, fd.gens[1]),
                                     alphas=fd.alphas), tol=1e-9)
    checks.append(Check("12.perturbed-fails-orthogonality",
                        (not rep2.passed)
                        and rep2.failed_condition == "(1) orthogonality",
                        detail=str(rep2.failed_condition)))
    return checks


CRITERIA = (
    ("kms-closed-form", criterion_1_kms_closed_form, False),
    ("kms-condition", criterion_2_kms_condition, True),
    ("kms-infty-limits", criterion_3_kms_limits, False),
    ("vacuum-projection", criterion_4_vacuum_projection, False),
    ("reconstruction", criterion_5_reconstruction, True),
    ("triple-iso-transport", criterion_6_transport, True),
    ("spectral-radius", criterion_7_spectral_radius, False),
    ("permutation-lemma", criterion_8_permutation_lemma, True),
    ("graph-isomorphism", criterion_9_graph_isomorphism, True),
    ("double-cover", criterion_10_double_cover, True),
    ("bundle-round-trip", criterion_11_bundles, False),
    ("frame-lemma", criterion_12_frame_lemma, False),
)


def run_criterion(index: int, seed: int = 0):
    """Checks for criterion ``index`` (1-based)."""
    name, func, seeded = CRITERIA[index - 1]
    return func(seed) if seeded else func()


def run_all(seed: int = 0) -> RunReport:
    report = RunReport(command="suite all", seed=seed)
    with Timer() as t:
        for i in range(1, len(CRITERIA) + 1):
            report.checks.extend(run_criterion(i, seed))
    report.wall_time = t.elapsed
    return report
