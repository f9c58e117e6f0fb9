"""Equilibrium states of the gauge dynamics on the word algebra.

For a finite graph with adjacency matrix ``A`` and ``beta`` above
``log rho(A)``, the partition sum over paths with source ``v`` is

    N_v = sum_{paths mu, src(mu) = v} exp(-beta |mu|)
        = 1^T (I - e^{-beta} A)^{-1} delta_v,

and the state attached to a probability vector ``Omega`` on vertices
evaluates a word ``C^k(x) P(a) C^l(y)*`` to zero unless ``k = l``, and
otherwise to

    e^{-beta k} sum_v Omega(v) N_v^{-1} [g^T (I - e^{-beta} A)^{-1} delta_v],

with ``g = <y, x>`` the tensor inner product (``g = a`` for scalar words).
Evaluation is exact via linear solves; truncated path sums are kept as an
independent cross-check oracle.  The ``beta -> infinity`` limit states are
the vacuum vector states: they see only the scalar part of a word.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, FormatError, MismatchError
from .graphs import FiniteGraph, spectral_radius
from .modules import tensor_inner_product
from .toeplitz import (CheckRecord, ToeplitzElement, Word, gauge_scale,
                       pi_word, word)


@dataclass
class KMSParameters:
    """Inverse temperature above the critical value ``log rho(A)``."""
    graph: FiniteGraph
    beta: float

    def __post_init__(self):
        rho = spectral_radius(self.graph)
        self.rho = rho
        self.log_rho = math.log(rho) if rho > 0 else -math.inf
        if not (self.beta > self.log_rho):
            raise DomainError(
                f"beta = {self.beta} must exceed log rho = {self.log_rho:.6g}")
        self.x = math.exp(-self.beta)
        A = self.graph.adjacency().astype(np.float64)
        self.resolvent_t = np.eye(A.shape[0]) - self.x * A.T
        # N_v = 1^T (I - xA)^{-1} delta_v  for all v at once
        self.partition = np.linalg.solve(self.resolvent_t,
                                         np.ones(A.shape[0]))

    def partition_sum(self, v) -> float:
        return float(self.partition[self.graph.vertex_index(v)])

    def weighted_sum(self, g: np.ndarray) -> np.ndarray:
        """``v -> sum_mu e^{-beta |mu|} g(r(mu))`` over paths from ``v``."""
        return np.linalg.solve(self.resolvent_t, g)


def path_partition_sum(params: KMSParameters, v) -> float:
    """``N_v`` via the resolvent; converges since ``e^{-beta} rho < 1``."""
    return params.partition_sum(v)


def truncated_partition_sum(graph: FiniteGraph, beta: float, v,
                            depth: int) -> float:
    """Truncated path-sum oracle ``sum_{|mu| <= depth} e^{-beta |mu|}``.

    Accumulates the Neumann series term by term with the damping folded
    into the matrix power, so it stays bounded; an independent route from
    the direct linear solve.
    """
    A = graph.adjacency().astype(np.float64)
    x = math.exp(-beta)
    w = np.zeros(graph.n_vertices)
    w[graph.vertex_index(v)] = 1.0
    total = 0.0
    for _ in range(depth + 1):
        total += w.sum()
        w = x * (A @ w)
    return total


def partition_tail_bound(graph: FiniteGraph, beta: float, depth: int,
                         block: int = 20) -> float:
    """Upper bound on the discarded tail ``sum_{n > depth} e^{-beta n} a_n``
    with ``a_n = max_v |E^n v|``.

    Submultiplicativity gives ``a_n <= a_B g^n`` for ``g = a_B^{1/B}``, so
    the tail is below ``a_B (e^{-beta} g)^{depth+1} / (1 - e^{-beta} g)``.
    """
    A = graph.adjacency().astype(np.float64)
    counts = np.ones(graph.n_vertices)
    for _ in range(block):
        counts = counts @ A
    a_block = float(counts.max())
    if a_block == 0.0:
        return 0.0
    g = max(a_block ** (1.0 / block), 1.0)
    q = math.exp(-beta) * g
    if q >= 1.0:
        return math.inf
    return max(a_block, 1.0) * q ** (depth + 1) / (1.0 - q)


def choose_truncation_depth(graph: FiniteGraph, beta: float,
                            eps: float = 1e-13, cap: int = 2000) -> int:
    for depth in range(1, cap):
        if partition_tail_bound(graph, beta, depth) < eps:
            return depth
    raise DomainError("no truncation depth meets the tail bound; "
                      "beta too close to the critical value")


@dataclass
class KMSState:
    """State attached to a finitely supported probability measure."""
    params: KMSParameters
    measure: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.measure, dtype=np.float64)
        g = self.params.graph
        if m.shape != (g.n_vertices,):
            raise MismatchError("measure must assign a weight to each vertex")
        if np.any(m < -1e-15) or abs(m.sum() - 1.0) > 1e-12:
            raise FormatError("measure must be a probability vector")
        self.measure = m

    @classmethod
    def point_mass(cls, params: KMSParameters, v) -> "KMSState":
        m = np.zeros(params.graph.n_vertices)
        m[params.graph.vertex_index(v)] = 1.0
        return cls(params, m)


def _word_profile(w: Word):
    """``g`` as a plain vector for the evaluation formula, or None if the
    word has unequal creation/annihilation length."""
    k, l = w.creations, w.annihilations
    if k != l:
        return None, 0
    if k == 0:
        if w.middle is None:
            g = None
        else:
            g = w.middle.values
    else:
        g = tensor_inner_product(list(w.right), list(w.left)).values
    return g, k


def kms_eval(state: KMSState, elem) -> complex:
    """Exact evaluation of an element in the state."""
    if isinstance(elem, Word):
        elem = ToeplitzElement(state.params.graph, [elem])
    p = state.params
    total = 0.0 + 0.0j
    weights = state.measure / p.partition
    ones = np.ones(p.graph.n_vertices)
    for w in elem.words:
        g, k = _word_profile(w)
        if w.creations != w.annihilations:
            continue
        z = p.weighted_sum(ones if g is None else g)
        total += w.coeff * (p.x ** k) * complex(weights @ z)
    return complex(total)


def kms_eval_truncated(state: KMSState, elem, depth: int) -> complex:
    """Truncated-series oracle for :func:`kms_eval`.

    Sums ``sum_{|mu| <= depth} e^{-beta |mu|} g(r(mu))`` by accumulating
    damped adjacency powers instead of solving the resolvent system.
    """
    if isinstance(elem, Word):
        elem = ToeplitzElement(state.params.graph, [elem])
    p = state.params
    A = p.graph.adjacency().astype(np.float64)
    total = 0.0 + 0.0j
    weights = state.measure / p.partition
    for w in elem.words:
        g, k = _word_profile(w)
        if w.creations != w.annihilations:
            continue
        z = np.ones(p.graph.n_vertices, dtype=np.complex128) if g is None \
            else np.asarray(g, dtype=np.complex128)
        acc = np.zeros_like(z)
        for _ in range(depth + 1):
            acc = acc + z
            z = p.x * (z @ A)
        total += w.coeff * (p.x ** k) * complex(weights @ acc)
    return complex(total)


def kms_condition_check(state: KMSState, b1: ToeplitzElement,
                        b2: ToeplitzElement, tol: float = 1e-9):
    """Residual of ``phi(b1 * sigma(b2)) = phi(b2 * b1)`` where ``sigma``
    scales a degree-``n`` element by ``e^{-beta n}``.

    Both inputs must be gauge homogeneous (they are then analytic for the
    dynamics and the scaling is the analytic continuation evaluated at
    ``i beta``).
    """
    if not (b1.is_homogeneous() and b2.is_homogeneous()):
        raise DomainError("inputs must be gauge homogeneous")
    twisted = gauge_scale(b2, state.params.x)
    lhs = kms_eval(state, b1 * twisted)
    rhs = kms_eval(state, b2 * b1)
    residual = abs(lhs - rhs)
    return CheckRecord("kms-condition", residual <= tol, residual)


@dataclass
class KMSInftyState:
    """Vacuum vector state at a vertex (the large-``beta`` limit)."""
    graph: FiniteGraph
    vertex: object

    def __post_init__(self):
        self.graph.vertex_index(self.vertex)


def kms_infty_eval(state: KMSInftyState, elem) -> complex:
    """Words with any creation or annihilation evaluate to 0; scalar words
    evaluate their coefficient function at the base vertex."""
    if isinstance(elem, Word):
        elem = ToeplitzElement(state.graph, [elem])
    vi = state.graph.vertex_index(state.vertex)
    total = 0.0 + 0.0j
    for w in elem.words:
        if w.creations or w.annihilations:
            continue
        a = 1.0 if w.middle is None else w.middle.values[vi]
        total += w.coeff * a
    return complex(total)


@dataclass
class SweepRow:
    beta: float
    word_id: str
    value: complex
    limit_value: complex
    residual: float


@dataclass
class SweepTable:
    rows: list = field(default_factory=list)
    fitted_constant: float = 0.0

    def residuals(self, word_id: str):
        return [(r.beta, r.residual) for r in self.rows
                if r.word_id == word_id]

    def monotone_decreasing(self, slack: float = 1e-12) -> bool:
        ids = {r.word_id for r in self.rows}
        for wid in ids:
            res = [r for _, r in sorted(self.residuals(wid))]
            if any(res[i + 1] > res[i] + slack for i in range(len(res) - 1)):
                return False
        return True


def kms_limit_sweep(graph: FiniteGraph, v, words: dict,
                    betas) -> SweepTable:
    """Residuals ``|phi_v^beta(w) - phi_v(w)|`` over a grid of betas.

    Also fits the smallest ``C`` with residual ``<= C e^{-beta}`` per row
    family, reporting the largest over all words.
    """
    table = SweepTable()
    inf_state = KMSInftyState(graph, v)
    c_fit = 0.0
    for beta in betas:
        params = KMSParameters(graph, float(beta))
        state = KMSState.point_mass(params, v)
        for wid, elem in words.items():
            val = kms_eval(state, elem)
            lim = kms_infty_eval(inf_state, elem)
            res = abs(val - lim)
            c_fit = max(c_fit, res / math.exp(-float(beta)))
            table.rows.append(SweepRow(float(beta), wid, val, lim, res))
    table.fitted_constant = c_fit
    return table


def extremal_separation_check(params: KMSParameters, trials: int = 100,
                              seed: int = 0, tol: float = 1e-12):
    """Point-mass states separate vertices, and evaluation is affine.

    Separation: for each pair of distinct vertices some vertex indicator
    takes different values in the two point-mass states.  Affinity: for
    random measures ``Omega`` and random scalar-or-balanced words, the
    state of ``Omega`` equals the ``Omega``-average of point-mass states.
    """
    from .modules import delta_vertex, random_module_element
    g = params.graph
    rng = np.random.default_rng(seed)
    checks = []
    point_states = {v: KMSState.point_mass(params, v) for v in g.vertices}
    for i, v in enumerate(g.vertices):
        for w_ in g.vertices[i + 1:]:
            sep = 0.0
            for u in g.vertices:
                ind = ToeplitzElement(g, [pi_word(delta_vertex(g, u))])
                sep = max(sep, abs(kms_eval(point_states[v], ind)
                                   - kms_eval(point_states[w_], ind)))
            checks.append(CheckRecord(
                f"separate[{v},{w_}]", sep > 1e-9, sep,
                detail="max indicator gap"))
    for t in range(trials):
        m = rng.random(g.n_vertices)
        m /= m.sum()
        omega = KMSState(params, m)
        k = int(rng.integers(0, 3))
        xs = tuple(random_module_element(g, rng) for _ in range(k))
        ys = tuple(random_module_element(g, rng) for _ in range(k))
        elem = ToeplitzElement(g, [word(1.0, xs, None, ys)])
        lhs = kms_eval(omega, elem)
        rhs = sum(m[g.vertex_index(v)] * kms_eval(point_states[v], elem)
                  for v in g.vertices)
        res = abs(lhs - rhs)
        checks.append(CheckRecord(f"affine[{t}]", res <= tol, res))
    return checks
