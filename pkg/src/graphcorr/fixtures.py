"""Bundled test fixtures: graphs and cocycles used across the suite.

Builders return fresh objects; the same data ships as JSON under
``graphcorr/fixtures/`` for the command line (see :func:`fixture_path`).
"""
from __future__ import annotations

import math
from importlib import resources

from .bundles import Arc, ArcCover, PermCocycle
from .graphs import CircleCoveringGraph, EdgeComponent, FiniteGraph


def single_loop() -> FiniteGraph:
    """One vertex, one loop edge."""
    return FiniteGraph(vertices=["v"], edges=["e"], src=["v"], rng=["v"])


def k_loops(k: int) -> FiniteGraph:
    """One vertex with ``k`` loop edges."""
    return FiniteGraph(vertices=["v"], edges=[f"e{i}" for i in range(k)],
                       src=["v"] * k, rng=["v"] * k)


def edgeless(n: int = 2) -> FiniteGraph:
    return FiniteGraph(vertices=[f"v{i}" for i in range(n)], edges=[],
                       src=[], rng=[])


def fibonacci() -> FiniteGraph:
    """Two vertices with multiplicity matrix [[1, 1], [1, 0]].

    Path counts from either vertex follow the Fibonacci recurrence and the
    spectral radius is the golden ratio.
    """
    return FiniteGraph(
        vertices=["a", "b"],
        edges=["aa", "ab", "ba"],
        src=["a", "a", "b"],     # aa: a->a, ab: a->b, ba: b->a
        rng=["a", "b", "a"])


def ten_edge() -> FiniteGraph:
    """Five vertices, ten edges, with parallel edges and a loop."""
    edges = [
        ("p0", "v0", "v1"),
        ("p1", "v0", "v1"),      # parallel pair v0 -> v1
        ("e2", "v1", "v2"),
        ("e3", "v2", "v0"),
        ("e4", "v2", "v3"),
        ("e5", "v3", "v4"),
        ("e6", "v4", "v0"),
        ("e7", "v1", "v3"),
        ("e8", "v3", "v1"),
        ("e9", "v4", "v4"),      # loop
    ]
    return FiniteGraph(
        vertices=[f"v{i}" for i in range(5)],
        edges=[e for e, _, _ in edges],
        src=[s for _, s, _ in edges],
        rng=[r for _, _, r in edges])


def circle_two_loops() -> CircleCoveringGraph:
    """Edge space = two circles, each mapping identically to the base."""
    return CircleCoveringGraph([
        EdgeComponent(source_degree=1, range_degree=1),
        EdgeComponent(source_degree=1, range_degree=1)])


def circle_double_cover() -> CircleCoveringGraph:
    """One component with range = source = the squaring double cover."""
    return CircleCoveringGraph([
        EdgeComponent(source_degree=2, range_degree=2)])


def circle_triple_cover() -> CircleCoveringGraph:
    return CircleCoveringGraph([
        EdgeComponent(source_degree=3, range_degree=3)])


def _two_arc_cover() -> ArcCover:
    d = math.pi / 8
    return ArcCover([Arc(-d, math.pi + 2 * d),
                     Arc(math.pi - d, math.pi + 2 * d)])


def swap_cocycle() -> PermCocycle:
    """Rank 2, two arcs: identity on one lens, the swap on the other.

    The classical transition data of the connected double cover.
    """
    cover = _two_arc_cover()
    # component 0 of the (0, 1) overlap is the lens at angle 0 (sorted by
    # start); the swap sits there, identity on the lens at pi
    return PermCocycle(rank=2, cover=cover, transitions={
        (0, 1, 0): (1, 0),
        (0, 1, 1): (0, 1)})


def three_cycle_cocycle() -> PermCocycle:
    """Rank 3 with 3-cycle monodromy (a connected triple cover)."""
    cover = _two_arc_cover()
    return PermCocycle(rank=3, cover=cover, transitions={
        (0, 1, 0): (1, 2, 0),
        (0, 1, 1): (0, 1, 2)})


def two_plus_one_cocycle() -> PermCocycle:
    """Rank 3 with cycle type 2 + 1 (double cover next to a trivial loop)."""
    cover = _two_arc_cover()
    return PermCocycle(rank=3, cover=cover, transitions={
        (0, 1, 0): (1, 0, 2),
        (0, 1, 1): (0, 1, 2)})


def identity_cocycle(k: int) -> PermCocycle:
    cover = _two_arc_cover()
    ident = tuple(range(k))
    return PermCocycle(rank=k, cover=cover, transitions={
        (0, 1, 0): ident,
        (0, 1, 1): ident})


FINITE_FIXTURES = {
    "single-loop": single_loop,
    "three-loops": lambda: k_loops(3),
    "fibonacci": fibonacci,
    "ten-edge": ten_edge,
    "edgeless": edgeless,
}

CIRCLE_FIXTURES = {
    "two-loops": circle_two_loops,
    "double-cover": circle_double_cover,
    "triple-cover": circle_triple_cover,
}

COCYCLE_FIXTURES = {
    "swap": swap_cocycle,
    "three-cycle": three_cycle_cocycle,
    "two-plus-one": two_plus_one_cocycle,
    "identity-rank2": lambda: identity_cocycle(2),
}


def fixture_path(name: str) -> str:
    """Filesystem path of a bundled fixture JSON file."""
    ref = resources.files("graphcorr") / "fixtures" / f"{name}.json"
    return str(ref)
