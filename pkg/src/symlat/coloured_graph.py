"""Vertex- and edge-coloured graphs and the model lattice they form.

A coloured graph is a vertex set ``V``, an edge set ``E``, a partition of ``V``
(the vertex colouring) and a partition of ``E`` (the edge colouring).  Larger
graphs in the order ``cg_leq`` have more edges and finer colourings, i.e. they
represent larger models.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Hashable, Iterable, Iterator, Sequence

import numpy as np

from .partition import PartitionError, SetPartition, all_partitions, partition_join, partition_meet

__all__ = [
    "ColouredGraph",
    "IndicatorMatrix",
    "GraphError",
    "edge",
    "cg_leq",
    "cg_meet",
    "cg_join",
    "zero",
    "unit",
    "enumerate_coloured_graphs",
    "indicator_matrices",
    "ENUMERATION_LIMIT",
]

ENUMERATION_LIMIT = 5

Edge = tuple[Any, Any]


class GraphError(ValueError):
    """Raised for malformed graphs or incompatible operands."""


def edge(a: Hashable, b: Hashable) -> Edge:
    """Canonical (ascending) form of the unordered pair ``ab``."""
    if a == b:
        raise GraphError(f"loop at vertex {a!r}")
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class ColouredGraph:
    vertices: tuple[Any, ...]
    vertex_classes: SetPartition
    edge_classes: SetPartition

    def __post_init__(self) -> None:
        verts = tuple(sorted(self.vertices))
        if len(set(verts)) != len(verts):
            raise GraphError("repeated vertex label")
        object.__setattr__(self, "vertices", verts)
        if self.vertex_classes.ground != verts:
            raise GraphError("vertex colouring does not partition the vertex set")
        vs = set(verts)
        for e in self.edge_classes.ground:
            if not (isinstance(e, tuple) and len(e) == 2):
                raise GraphError(f"edge {e!r} is not a pair")
            a, b = e
            if a not in vs or b not in vs:
                raise GraphError(f"edge {e!r} has an endpoint outside the vertex set")
            if not a < b:
                raise GraphError(f"edge {e!r} is not in ascending order")

    @classmethod
    def build(
        cls,
        vertices: Iterable[Hashable],
        vertex_classes: Iterable[Iterable[Hashable]] | None = None,
        edge_classes: Iterable[Iterable[Sequence[Hashable]]] = (),
    ) -> "ColouredGraph":
        """Convenience constructor; omitted vertex classes default to atomic."""
        verts = tuple(sorted(vertices))
        try:
            vp = SetPartition.atomic(verts) if vertex_classes is None else SetPartition.from_blocks(vertex_classes, verts)
            ep = SetPartition(tuple(tuple(edge(*e) for e in c) for c in edge_classes))
        except PartitionError as exc:
            raise GraphError(str(exc)) from None
        return cls(verts, vp, ep)

    @property
    def edges(self) -> frozenset[Edge]:
        return frozenset(self.edge_classes.ground)

    @cached_property
    def index(self) -> dict[Any, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def _pairs(self) -> dict[Edge, int]:
        return {e: k for k, e in enumerate(itertools.combinations(self.vertices, 2))}

    @cached_property
    def _code(self):
        # compact integer form used by cg_leq
        pairs = self._pairs
        vlab = tuple(self.vertex_classes.block_of[v] for v in self.vertices)
        vblocks = tuple(tuple(self.index[v] for v in b) for b in self.vertex_classes.blocks)
        elab = [-1] * len(pairs)
        mask = 0
        eblocks = []
        for c, cls_ in enumerate(self.edge_classes.blocks):
            idx = tuple(pairs[e] for e in cls_)
            eblocks.append(idx)
            for k in idx:
                elab[k] = c
                mask |= 1 << k
        return vlab, vblocks, tuple(elab), tuple(eblocks), mask

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "vertex_classes": self.vertex_classes.to_list(),
            "edge_classes": [[list(e) for e in c] for c in self.edge_classes.blocks],
        }

    def __str__(self) -> str:
        ec = ", ".join("{" + ",".join(f"{a}{b}" if _short(a, b) else f"{a}-{b}" for a, b in c) + "}"
                       for c in self.edge_classes.blocks)
        return f"V={self.vertex_classes} E={{{ec}}}"


def _short(a, b) -> bool:
    return len(str(a)) == 1 and len(str(b)) == 1


def _check_same(g: ColouredGraph, h: ColouredGraph) -> None:
    if g.vertices != h.vertices:
        raise GraphError("graphs are over different vertex sets")


def cg_leq(g: ColouredGraph, h: ColouredGraph) -> bool:
    """Model inclusion: the model of ``g`` is contained in that of ``h``."""
    _check_same(g, h)
    gv, _, ge, _, gm = g._code
    _, hvb, _, heb, hm = h._code
    if gm & ~hm:
        return False
    for b in hvb:
        c = gv[b[0]]
        for i in b[1:]:
            if gv[i] != c:
                return False
    for b in heb:
        c = ge[b[0]]
        for k in b[1:]:
            if ge[k] != c:
                return False
    return True


def cg_meet(g: ColouredGraph, h: ColouredGraph) -> ColouredGraph:
    """Greatest lower bound of two coloured graphs."""
    _check_same(g, h)
    f = set(g.edges & h.edges)
    classes = list(g.edge_classes.blocks) + list(h.edge_classes.blocks)
    changed = True
    while changed:
        changed = False
        for c in classes:
            if any(e not in f for e in c) and any(e in f for e in c):
                f.difference_update(c)
                changed = True
    eg = g.edge_classes.restrict(f)
    eh = h.edge_classes.restrict(f)
    return ColouredGraph(g.vertices, partition_join(g.vertex_classes, h.vertex_classes), partition_join(eg, eh))


def cg_join(g: ColouredGraph, h: ColouredGraph) -> ColouredGraph:
    """Least upper bound of two coloured graphs."""
    _check_same(g, h)

    def extend(p: SetPartition, extra: frozenset) -> SetPartition:
        return SetPartition(p.blocks + ((tuple(extra),) if extra else ()))

    eg = extend(g.edge_classes, h.edges - g.edges)
    eh = extend(h.edge_classes, g.edges - h.edges)
    return ColouredGraph(g.vertices, partition_meet(g.vertex_classes, h.vertex_classes), partition_meet(eg, eh))


def zero(labels: Iterable[Hashable]) -> ColouredGraph:
    """Empty graph with a single vertex colour class."""
    verts = tuple(sorted(labels))
    if not verts:
        raise GraphError("need at least one vertex")
    return ColouredGraph(verts, SetPartition.single(verts), SetPartition(()))


def unit(labels: Iterable[Hashable]) -> ColouredGraph:
    """Complete graph with atomic vertex and edge colourings."""
    verts = tuple(sorted(labels))
    if not verts:
        raise GraphError("need at least one vertex")
    return ColouredGraph(verts, SetPartition.atomic(verts), SetPartition.atomic(itertools.combinations(verts, 2)))


def enumerate_coloured_graphs(labels: Iterable[Hashable], allow_large: bool = False) -> Iterator[ColouredGraph]:
    """Stream every coloured graph on ``labels``: B_|V| * B_(C(|V|,2)+1) of them."""
    verts = tuple(sorted(labels))
    if len(verts) > ENUMERATION_LIMIT and not allow_large:
        raise GraphError(f"enumeration limited to {ENUMERATION_LIMIT} vertices; pass allow_large to override")
    pairs = list(itertools.combinations(verts, 2))
    vparts = list(all_partitions(verts))
    for vp in vparts:
        for k in range(len(pairs) + 1):
            for es in itertools.combinations(pairs, k):
                for ep in all_partitions(es):
                    yield ColouredGraph(verts, vp, ep)


@dataclass(frozen=True)
class IndicatorMatrix:
    kind: str  # "vertex" or "edge"
    members: tuple
    matrix: np.ndarray


def indicator_matrices(g: ColouredGraph) -> list[IndicatorMatrix]:
    """One symmetric 0/1 matrix per colour class, vertex classes first."""
    d = len(g.vertices)
    idx = g.index
    out = []
    for b in g.vertex_classes.blocks:
        t = np.zeros((d, d))
        for v in b:
            t[idx[v], idx[v]] = 1.0
        out.append(IndicatorMatrix("vertex", b, t))
    for c in g.edge_classes.blocks:
        t = np.zeros((d, d))
        for a, b in c:
            t[idx[a], idx[b]] = t[idx[b], idx[a]] = 1.0
        out.append(IndicatorMatrix("edge", c, t))
    return out
