"""The graph correspondence: inner products, actions, norms, fibers.

Elements over a finite graph are complex vectors indexed by edges; vertex
functions are vectors indexed by vertices.  Over a circle-covering graph a
vertex function is sampled on the uniform base grid ``t_j = 2pi j / N`` and
a module element on component ``c`` (source degree ``d``) is sampled on the
grid ``u_i = 2pi i / (d N)`` of its own circle.  With that convention every
source fiber of a base grid point consists of component grid points, so all
operations below are exact pointwise evaluations (offsets must sit on the
grid).  Range compositions additionally need ``d | m`` per component.
"""
from __future__ import annotations

import numpy as np

from .errors import FormatError, MismatchError
from .graphs import TWO_PI, CircleCoveringGraph, FiniteGraph


#: default sample count on the base circle
DEFAULT_BASE_GRID = 1024


def _as_complex(values) -> np.ndarray:
    return np.ascontiguousarray(np.asarray(values, dtype=np.complex128))


def _grid_offset(angle: float, n: int, what: str) -> int:
    """Offset angle as a base-grid index; must be within 1e-9 of the grid."""
    raw = angle * n / TWO_PI
    k = int(round(raw))
    if abs(raw - k) > 1e-9 * max(1.0, n):
        raise MismatchError(f"{what} {angle} is not on the size-{n} grid")
    return k % n


class VertexFunction:
    """Function on the vertex space: by-vertex vector or base-grid samples."""

    def __init__(self, graph, values, base_n: int | None = None):
        self.graph = graph
        self.values = _as_complex(values)
        if isinstance(graph, FiniteGraph):
            if self.values.shape != (graph.n_vertices,):
                raise MismatchError("vertex function has wrong length")
            self.base_n = None
        else:
            if base_n is None:
                base_n = self.values.shape[0]
            if self.values.shape != (base_n,):
                raise MismatchError("grid samples have wrong length")
            self.base_n = int(base_n)

    @property
    def is_circle(self) -> bool:
        return self.base_n is not None

    def conj(self) -> "VertexFunction":
        return VertexFunction(self.graph, self.values.conj(), self.base_n)

    def pointwise(self, other: "VertexFunction") -> "VertexFunction":
        _check_same_base(self, other)
        return VertexFunction(self.graph, self.values * other.values,
                              self.base_n)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def min_real(self) -> float:
        return float(np.min(self.values.real)) if self.values.size else 0.0

    def __repr__(self):
        return f"VertexFunction({self.values!r})"


class ModuleElement:
    """Element of the graph correspondence."""

    def __init__(self, graph, values, base_n: int | None = None):
        self.graph = graph
        if isinstance(graph, FiniteGraph):
            self.values = _as_complex(values)
            if self.values.shape != (graph.n_edges,):
                raise MismatchError("module element has wrong length")
            self.base_n = None
            self.components = None
        elif isinstance(graph, CircleCoveringGraph):
            if base_n is None:
                raise MismatchError("circle module element needs base_n")
            self.base_n = int(base_n)
            comps = tuple(_as_complex(v) for v in values)
            if len(comps) != graph.n_components:
                raise MismatchError("one sample array per component required")
            for arr, comp in zip(comps, graph.components):
                if arr.shape != (comp.source_degree * self.base_n,):
                    raise MismatchError(
                        "component grid must have d * base_n samples")
            self.components = comps
            self.values = None
        else:
            raise FormatError(f"not a graph: {graph!r}")

    @property
    def is_circle(self) -> bool:
        return self.base_n is not None

    def conj_values(self):
        if self.is_circle:
            return tuple(a.conj() for a in self.components)
        return self.values.conj()

    def is_zero(self) -> bool:
        if self.is_circle:
            return all(not a.any() for a in self.components)
        return not self.values.any()

    def scaled(self, c: complex) -> "ModuleElement":
        if self.is_circle:
            return ModuleElement(self.graph,
                                 tuple(c * a for a in self.components),
                                 self.base_n)
        return ModuleElement(self.graph, c * self.values)

    def __repr__(self):
        if self.is_circle:
            return f"ModuleElement(circle, N={self.base_n})"
        return f"ModuleElement({self.values!r})"


def _check_same_base(a, b):
    if a.graph is not b.graph:
        # allow equal-by-structure graphs only when identical objects
        raise MismatchError("operands live over different graphs")
    if getattr(a, "base_n", None) != getattr(b, "base_n", None):
        raise MismatchError("operands use different sample grids")


def _fiber_index(comp, j, base_n: int) -> np.ndarray:
    """Component grid indices of the source fiber over base index ``j``."""
    d = comp.source_degree
    off = _grid_offset(comp.source_offset, base_n, "source offset")
    j = np.asarray(j)
    k = np.arange(d)[:, None]
    return (j[None, :] - off + k * base_n) % (d * base_n)


def inner_product(x: ModuleElement, y: ModuleElement) -> VertexFunction:
    """``<x, y>(v) = sum_{s(e) = v} conj(x(e)) y(e)``.

    Conjugate-linear in ``x``, linear in ``y``; empty fibers contribute 0.
    """
    _check_same_base(x, y)
    g = x.graph
    if not x.is_circle:
        out = np.zeros(g.n_vertices, dtype=np.complex128)
        np.add.at(out, g.src_idx, x.values.conj() * y.values)
        return VertexFunction(g, out)
    n = x.base_n
    out = np.zeros(n, dtype=np.complex128)
    for ci, comp in enumerate(g.components):
        d = comp.source_degree
        off = _grid_offset(comp.source_offset, n, "source offset")
        prod = x.components[ci].conj() * y.components[ci]
        # sample i sits over base index (off + i) mod n
        folded = prod.reshape(d, n).sum(axis=0)
        out += np.roll(folded, off)
    return VertexFunction(g, out, n)


def right_action(x: ModuleElement, a: VertexFunction) -> ModuleElement:
    """``(x . a)(e) = x(e) a(s(e))``."""
    _check_same_base(x, a)
    g = x.graph
    if not x.is_circle:
        return ModuleElement(g, x.values * a.values[g.src_idx])
    n = x.base_n
    comps = []
    for ci, comp in enumerate(g.components):
        d = comp.source_degree
        off = _grid_offset(comp.source_offset, n, "source offset")
        i = np.arange(d * n)
        comps.append(x.components[ci] * a.values[(off + i) % n])
    return ModuleElement(g, tuple(comps), n)


def left_action(a: VertexFunction, x: ModuleElement) -> ModuleElement:
    """``(a . x)(e) = a(r(e)) x(e)``.

    On circle components this needs the range degree to be divisible by the
    source degree so that ranges of grid points are base grid points.
    """
    _check_same_base(x, a)
    g = x.graph
    if not x.is_circle:
        return ModuleElement(g, a.values[g.rng_idx] * x.values)
    n = x.base_n
    comps = []
    for ci, comp in enumerate(g.components):
        d, m = comp.source_degree, comp.range_degree
        if m % d != 0:
            raise MismatchError(
                f"component {ci}: range degree {m} not divisible by source "
                f"degree {d}; range composition leaves the sample grid")
        roff = _grid_offset(comp.range_offset, n, "range offset")
        i = np.arange(d * n)
        comps.append(a.values[(roff + (m // d) * i) % n] * x.components[ci])
    return ModuleElement(g, tuple(comps), n)


def module_norm(x: ModuleElement) -> float:
    """``sqrt(sup_v <x, x>(v))``."""
    ip = inner_product(x, x)
    return float(np.sqrt(max(ip.values.real.max(initial=0.0), 0.0)))


def tensor_inner_product(xs, ys) -> VertexFunction:
    """Inner product of elementary tensors of equal length ``k >= 1``.

    Computed by the recursion ``c_1 = <x_1, y_1>``,
    ``c_j = <x_j, c_{j-1} . y_j>`` (left action on the second argument),
    which agrees with the sum over length-``k`` paths.
    """
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise MismatchError("tensor factors must have equal length")
    if not xs:
        raise MismatchError("degree-0 tensors are vertex functions; use them "
                            "directly")
    c = inner_product(xs[0], ys[0])
    for xj, yj in zip(xs[1:], ys[1:]):
        c = inner_product(xj, left_action(c, yj))
    return c


def fiber_evaluation(x: ModuleElement, v) -> np.ndarray:
    """Restriction of ``x`` to the source fiber over ``v``.

    The squared euclidean norm of the result equals ``<x, x>(v)``.
    """
    g = x.graph
    if not x.is_circle:
        vi = g.vertex_index(v)
        return x.values[g.edges_from_index(vi)].copy()
    n = x.base_n
    raw = float(v) * n / TWO_PI
    j = int(round(raw)) % n
    if abs(raw - round(raw)) > 1e-9 * max(1.0, n):
        raise MismatchError(f"angle {v} is not on the size-{n} base grid")
    parts = []
    for ci, comp in enumerate(g.components):
        idx = _fiber_index(comp, np.array([j]), n)[:, 0]
        parts.append(x.components[ci][idx])
    return np.concatenate(parts) if parts else np.zeros(0, dtype=np.complex128)


# ---------------------------------------------------------------------------
# constructors


def delta_edge(graph: FiniteGraph, e) -> ModuleElement:
    v = np.zeros(graph.n_edges, dtype=np.complex128)
    v[graph.edge_index(e)] = 1.0
    return ModuleElement(graph, v)


def delta_vertex(graph: FiniteGraph, v) -> VertexFunction:
    a = np.zeros(graph.n_vertices, dtype=np.complex128)
    a[graph.vertex_index(v)] = 1.0
    return VertexFunction(graph, a)


def unit_vertex_function(graph, base_n: int | None = None) -> VertexFunction:
    if isinstance(graph, FiniteGraph):
        return VertexFunction(graph, np.ones(graph.n_vertices))
    return VertexFunction(graph, np.ones(base_n), base_n)


def zero_element(graph, base_n: int | None = None) -> ModuleElement:
    if isinstance(graph, FiniteGraph):
        return ModuleElement(graph, np.zeros(graph.n_edges))
    return ModuleElement(
        graph,
        tuple(np.zeros(c.source_degree * base_n) for c in graph.components),
        base_n)


def element_from_function(graph: CircleCoveringGraph, base_n: int,
                          funcs) -> ModuleElement:
    """Sample callables (one per component, argument = angle) on the grids."""
    comps = []
    for comp, f in zip(graph.components, funcs):
        u = TWO_PI * np.arange(comp.source_degree * base_n) \
            / (comp.source_degree * base_n)
        comps.append(np.asarray(f(u), dtype=np.complex128))
    return ModuleElement(graph, tuple(comps), base_n)


def vertex_function_from_function(graph: CircleCoveringGraph, base_n: int,
                                  f) -> VertexFunction:
    t = TWO_PI * np.arange(base_n) / base_n
    return VertexFunction(graph, np.asarray(f(t), dtype=np.complex128), base_n)


def random_module_element(graph, rng: np.random.Generator,
                          base_n: int | None = None) -> ModuleElement:
    if isinstance(graph, FiniteGraph):
        v = rng.standard_normal(graph.n_edges) \
            + 1j * rng.standard_normal(graph.n_edges)
        return ModuleElement(graph, v)
    comps = []
    for comp in graph.components:
        sz = comp.source_degree * base_n
        comps.append(rng.standard_normal(sz) + 1j * rng.standard_normal(sz))
    return ModuleElement(graph, tuple(comps), base_n)


def random_vertex_function(graph, rng: np.random.Generator,
                           base_n: int | None = None) -> VertexFunction:
    if isinstance(graph, FiniteGraph):
        v = rng.standard_normal(graph.n_vertices) \
            + 1j * rng.standard_normal(graph.n_vertices)
        return VertexFunction(graph, v)
    v = rng.standard_normal(base_n) + 1j * rng.standard_normal(base_n)
    return VertexFunction(graph, v, base_n)


# ---------------------------------------------------------------------------
# JSON


def element_to_dict(x: ModuleElement) -> dict:
    if not x.is_circle:
        return {eid: [float(z.real), float(z.imag)]
                for eid, z in zip(x.graph.edges, x.values)}
    return {"n": x.base_n,
            "components": [[[float(z.real), float(z.imag)] for z in arr]
                           for arr in x.components]}


def element_from_dict(graph, data) -> ModuleElement:
    if isinstance(graph, FiniteGraph):
        if isinstance(data, str):
            return delta_edge(graph, data)
        v = np.zeros(graph.n_edges, dtype=np.complex128)
        for eid, pair in data.items():
            v[graph.edge_index(eid)] = complex(pair[0], pair[1])
        return ModuleElement(graph, v)
    try:
        n = int(data["n"])
        comps = tuple(np.array([complex(p[0], p[1]) for p in arr])
                      for arr in data["components"])
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"bad circle element JSON: {exc!r}") from None
    return ModuleElement(graph, comps, n)


def vertex_function_to_dict(a: VertexFunction) -> dict:
    if not a.is_circle:
        return {vid: [float(z.real), float(z.imag)]
                for vid, z in zip(a.graph.vertices, a.values)}
    return {"n": a.base_n,
            "values": [[float(z.real), float(z.imag)] for z in a.values]}


def vertex_function_from_dict(graph, data) -> VertexFunction:
    if isinstance(graph, FiniteGraph):
        if isinstance(data, str):
            return delta_vertex(graph, data)
        v = np.zeros(graph.n_vertices, dtype=np.complex128)
        for vid, pair in data.items():
            v[graph.vertex_index(vid)] = complex(pair[0], pair[1])
        return VertexFunction(graph, v)
    try:
        n = int(data["n"])
        vals = np.array([complex(p[0], p[1]) for p in data["values"]])
    except (KeyError, TypeError, IndexError) as exc:
        raise FormatError(f"bad vertex function JSON: {exc!r}") from None
    return VertexFunction(graph, vals, n)
