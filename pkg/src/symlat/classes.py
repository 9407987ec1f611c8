"""Colouring classes B, P, R and Pi, with their supremum operators.

* B  (edge regular): every edge class joins one fixed pair of vertex classes.
* P  (vertex regular): the vertex colouring is equitable for each edge class.
* R  (regular): both of the above.
* Pi (permutation generated): the colour classes are the orbits of a group of
  graph automorphisms.

Group computations are exhaustive and meant for small vertex sets.
"""
from __future__ import annotations

import itertools
import math
import re
from collections import Counter, deque
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence

from .coloured_graph import ColouredGraph, GraphError, edge
from .partition import SetPartition, partition_meet

__all__ = [
    "Permutation",
    "PermGroup",
    "FactorGraph",
    "GroupError",
    "CLASS_NAMES",
    "is_edge_regular",
    "is_equitable",
    "is_vertex_regular",
    "is_regular",
    "group_closure",
    "aut_coloured",
    "orbit_colouring",
    "is_permutation_generated",
    "in_class",
    "classify",
    "sup_B",
    "sup_R",
    "sup_P",
    "sup_Pi",
    "supremum",
    "to_factor_graph",
    "from_factor_graph",
    "equitable_refinement",
    "all_subgroups",
]

CLASS_NAMES = ("B", "P", "R", "Pi")
GROUP_LIMIT = math.factorial(8)
SUBGROUP_LIMIT = 4


class GroupError(ValueError):
    pass


# --------------------------------------------------------------------------
# permutations and groups


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``labels``; ``images[i]`` is the image of ``labels[i]``."""

    labels: tuple[Any, ...]
    images: tuple[Any, ...]

    def __post_init__(self) -> None:
        if sorted(self.labels) != sorted(self.images) or len(set(self.labels)) != len(self.labels):
            raise GroupError("not a bijection")

    @classmethod
    def identity(cls, labels: Sequence[Hashable]) -> "Permutation":
        labs = tuple(sorted(labels))
        return cls(labs, labs)

    @classmethod
    def from_mapping(cls, labels: Sequence[Hashable], mapping: dict) -> "Permutation":
        labs = tuple(sorted(labels))
        return cls(labs, tuple(mapping.get(x, x) for x in labs))

    @classmethod
    def parse(cls, text: str, labels: Sequence[Hashable]) -> "Permutation":
        """Parse cycle notation such as ``(13)(24)`` or ``(B1 B2)(L1 L2)``.

        Inside a cycle, labels are separated by whitespace or commas; with no
        separator, each character is one label.
        """
        labs = tuple(sorted(labels))
        by_name = {str(x): x for x in labs}
        text = text.strip()
        mapping: dict = {}
        if text in ("", "()", "Id", "id", "e"):
            return cls(labs, labs)
        cycles = re.findall(r"\(([^()]*)\)", text)
        if re.sub(r"\([^()]*\)", "", text).strip():
            raise GroupError(f"malformed cycle notation: {text!r}")
        for cyc in cycles:
            toks = re.split(r"[\s,]+", cyc.strip()) if re.search(r"[\s,]", cyc.strip()) else list(cyc.strip())
            try:
                pts = [by_name[t] for t in toks if t]
            except KeyError as exc:
                raise GroupError(f"unknown label {exc.args[0]!r} in {text!r}") from None
            for a, b in zip(pts, pts[1:] + pts[:1]):
                if a in mapping:
                    raise GroupError(f"label {a!r} repeated in {text!r}")
                mapping[a] = b
        return cls.from_mapping(labs, mapping)

    def __call__(self, x):
        return self.images[self._pos[x]]

    @property
    def _pos(self) -> dict:
        d = self.__dict__.get("_posd")
        if d is None:
            d = {x: i for i, x in enumerate(self.labels)}
            object.__setattr__(self, "_posd", d)
        return d

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: ``(self * other)(x) = self(other(x))``."""
        return Permutation(self.labels, tuple(self(other(x)) for x in self.labels))

    def inverse(self) -> "Permutation":
        inv = dict(zip(self.images, self.labels))
        return Permutation(self.labels, tuple(inv[x] for x in self.labels))

    def is_identity(self) -> bool:
        return self.labels == self.images

    def cycles(self) -> list[tuple]:
        seen, out = set(), []
        for x in self.labels:
            if x in seen:
                continue
            cyc = [x]
            seen.add(x)
            y = self(x)
            while y != x:
                cyc.append(y)
                seen.add(y)
                y = self(y)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        sep = "" if all(len(str(x)) == 1 for x in self.labels) else " "
        return "".join("(" + sep.join(map(str, c)) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self})"


@dataclass(frozen=True)
class PermGroup:
    labels: tuple[Any, ...]
    generators: tuple[Permutation, ...]
    elements: frozenset[Permutation]

    @property
    def order(self) -> int:
        return len(self.elements)


def group_closure(gens: Iterable[Permutation], labels: Sequence[Hashable] | None = None) -> PermGroup:
    """Subgroup generated by ``gens``, by breadth-first closure."""
    gens = tuple(gens)
    if labels is None:
        if not gens:
            raise GroupError("labels are required for an empty generator list")
        labels = gens[0].labels
    labs = tuple(sorted(labels))
    if any(g.labels != labs for g in gens):
        raise GroupError("generators act on different label sets")
    if math.factorial(len(labs)) > GROUP_LIMIT:
        raise GroupError("group computations limited to 8 labels")
    e = Permutation.identity(labs)
    seen = {e}
    queue = deque([e])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = g * x
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return PermGroup(labs, gens, frozenset(seen))


def _orbits(labels: Sequence, gens: Iterable[Permutation], points: Sequence, act) -> SetPartition:
    parent = {p: p for p in points}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for g in gens:
        for p in points:
            a, b = find(p), find(act(g, p))
            if a != b:
                parent[b] = a
    return SetPartition.from_labels(points, [find(p) for p in points])


def _act_edge(g: Permutation, e):
    return edge(g(e[0]), g(e[1]))


def aut_coloured(g: ColouredGraph) -> PermGroup:
    """All permutations fixing every vertex class and every edge class setwise."""
    blocks = g.vertex_classes.blocks
    size = math.prod(math.factorial(len(b)) for b in blocks)
    if size > GROUP_LIMIT:
        raise GroupError(f"automorphism search space {size} exceeds {GROUP_LIMIT}")
    eclasses = [frozenset(c) for c in g.edge_classes.blocks]
    elems = []
    for choice in itertools.product(*(itertools.permutations(b) for b in blocks)):
        mapping = {}
        for b, img in zip(blocks, choice):
            mapping.update(zip(b, img))
        if all(_act_edge_map(mapping, e) in c for c in eclasses for e in c):
            elems.append(Permutation(g.vertices, tuple(mapping[v] for v in g.vertices)))
    # the full element set doubles as a generating set
    return PermGroup(g.vertices, tuple(elems), frozenset(elems))


def _act_edge_map(m: dict, e):
    return edge(m[e[0]], m[e[1]])


def orbit_colouring(grp: PermGroup | Iterable[Permutation], vertices: Sequence[Hashable], edges: Iterable) -> ColouredGraph:
    """Colour ``(vertices, edges)`` by the orbits of a group of automorphisms."""
    verts = tuple(sorted(vertices))
    es = sorted(edge(*e) for e in edges)
    eset = set(es)
    gens = grp.generators if isinstance(grp, PermGroup) else tuple(grp)
    for s in gens:
        if s.labels != verts:
            raise GroupError("group acts on a different label set")
        if any(_act_edge(s, e) not in eset for e in es):
            raise GroupError(f"{s} is not an automorphism of the graph")
    vp = _orbits(verts, gens, verts, lambda s, v: s(v))
    ep = _orbits(verts, gens, es, _act_edge)
    return ColouredGraph(verts, vp, ep)


def is_permutation_generated(g: ColouredGraph) -> bool:
    return orbit_colouring(aut_coloured(g), g.vertices, g.edges) == g


def all_subgroups(labels: Sequence[Hashable]) -> list[PermGroup]:
    """Every subgroup of the symmetric group on ``labels`` (at most 4 labels)."""
    labs = tuple(sorted(labels))
    if len(labs) > SUBGROUP_LIMIT:
        raise GroupError(f"subgroup enumeration limited to {SUBGROUP_LIMIT} labels")
    sym = [Permutation(labs, p) for p in itertools.permutations(labs)]
    trivial = group_closure((), labs)
    found = {trivial.elements: trivial}
    queue = deque([trivial])
    # every subgroup is reached by adjoining elements one at a time
    while queue:
        h = queue.popleft()
        for s in sym:
            if s in h.elements:
                continue
            k = group_closure(h.generators + (s,), labs)
            if k.elements not in found:
                found[k.elements] = k
                queue.append(k)
    return sorted(found.values(), key=lambda k: (k.order, sorted(p.images for p in k.elements)))


# --------------------------------------------------------------------------
# class predicates


def is_edge_regular(g: ColouredGraph) -> bool:
    vb = g.vertex_classes.block_of
    for c in g.edge_classes.blocks:
        ends = {frozenset((vb[a], vb[b])) for a, b in c}
        if len(ends) > 1:
            return False
    return True


def _adjacency(points: Iterable, edges: Iterable) -> dict:
    adj = {p: [] for p in points}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    return adj


def _signature(adj: dict, block_of: dict, x) -> tuple:
    return tuple(sorted(Counter(block_of[y] for y in adj[x]).items()))


def is_equitable(p: SetPartition, edges: Iterable) -> bool:
    """Every vertex of a block has equally many neighbours in each block."""
    adj = _adjacency(p.ground, edges)
    bo = p.block_of
    return all(len({_signature(adj, bo, x) for x in b}) == 1 for b in p.blocks)


def is_vertex_regular(g: ColouredGraph) -> bool:
    return all(is_equitable(g.vertex_classes, c) for c in g.edge_classes.blocks)


def is_regular(g: ColouredGraph) -> bool:
    return is_edge_regular(g) and is_vertex_regular(g)


def in_class(g: ColouredGraph, name: str) -> bool:
    if name == "B":
        return is_edge_regular(g)
    if name == "P":
        return is_vertex_regular(g)
    if name == "R":
        return is_regular(g)
    if name == "Pi":
        return is_permutation_generated(g)
    raise ValueError(f"unknown class {name!r}")


def classify(g: ColouredGraph) -> dict[str, bool]:
    b, p = is_edge_regular(g), is_vertex_regular(g)
    return {"B": b, "P": p, "R": b and p, "Pi": b and p and is_permutation_generated(g)}


# --------------------------------------------------------------------------
# equitable refinement and factor graphs


def equitable_refinement(p: SetPartition, edges: Iterable) -> SetPartition:
    """Coarsest equitable partition finer than ``p``.

    The least splittable block (canonical order) is split by neighbour counts
    into the current blocks, until no block splits.
    """
    adj = _adjacency(p.ground, edges)
    cur = p
    while True:
        bo = cur.block_of
        for i, b in enumerate(cur.blocks):
            sig = {x: _signature(adj, bo, x) for x in b}
            if len(set(sig.values())) > 1:
                rest = [blk for j, blk in enumerate(cur.blocks) if j != i]
                groups: dict = {}
                for x in b:
                    groups.setdefault(sig[x], []).append(x)
                cur = SetPartition(tuple(rest) + tuple(tuple(v) for v in groups.values()))
                break
        else:
            return cur


@dataclass(frozen=True)
class FactorGraph:
    """Bipartite graph: variables on one side, one node per edge on the other."""

    vertices: tuple[Any, ...]
    vertex_classes: SetPartition
    nodes: tuple[int, ...]
    node_classes: SetPartition
    incidences: frozenset[tuple[Any, int]]


def to_factor_graph(g: ColouredGraph) -> FactorGraph:
    es = sorted(g.edges)
    num = {e: k for k, e in enumerate(es)}
    nodes = tuple(range(len(es)))
    ncls = SetPartition(tuple(tuple(num[e] for e in c) for c in g.edge_classes.blocks))
    inc = frozenset((v, num[e]) for e in es for v in e)
    return FactorGraph(g.vertices, g.vertex_classes, nodes, ncls, inc)


def from_factor_graph(f: FactorGraph) -> ColouredGraph:
    ends: dict[int, list] = {k: [] for k in f.nodes}
    verts = set(f.vertices)
    for v, k in f.incidences:
        if v not in verts or k not in ends:
            raise GraphError(f"incidence {(v, k)!r} refers to an unknown vertex or node")
        ends[k].append(v)
    emap = {}
    for k, vs in ends.items():
        if len(vs) != 2:
            raise GraphError(f"factor node {k} has {len(vs)} incident vertices, expected 2")
        emap[k] = edge(*vs)
    if len(set(emap.values())) != len(emap):
        raise GraphError("two factor nodes share the same pair of vertices")
    ep = SetPartition(tuple(tuple(emap[k] for k in c) for c in f.node_classes.blocks))
    if set(f.node_classes.ground) != set(f.nodes):
        raise GraphError("node colouring does not cover the nodes")
    return ColouredGraph(f.vertices, f.vertex_classes, ep)


# --------------------------------------------------------------------------
# suprema


def sup_B(g: ColouredGraph) -> ColouredGraph:
    vb = g.vertex_classes.block_of
    ends = SetPartition.from_labels(g.edge_classes.ground,
                                    [frozenset((vb[a], vb[b])) for a, b in g.edge_classes.ground])
    return ColouredGraph(g.vertices, g.vertex_classes, partition_meet(g.edge_classes, ends))


def sup_R(g: ColouredGraph) -> ColouredGraph:
    f = to_factor_graph(g)
    # tagged ids keep variables and factor nodes in separate blocks
    blocks = tuple(tuple(("v", v) for v in b) for b in f.vertex_classes.blocks)
    blocks += tuple(tuple(("n", k) for k in c) for c in f.node_classes.blocks)
    links = [(("v", v), ("n", k)) for v, k in f.incidences]
    r = equitable_refinement(SetPartition(blocks), links)
    vblocks = tuple(tuple(x for _, x in b) for b in r.blocks if b[0][0] == "v")
    nblocks = tuple(tuple(x for _, x in b) for b in r.blocks if b[0][0] == "n")
    out = FactorGraph(f.vertices, SetPartition(vblocks), f.nodes, SetPartition(nblocks), f.incidences)
    return from_factor_graph(out)


def sup_P(g: ColouredGraph) -> ColouredGraph:
    return ColouredGraph(g.vertices, sup_R(g).vertex_classes, g.edge_classes)


def sup_Pi(g: ColouredGraph) -> ColouredGraph:
    return orbit_colouring(aut_coloured(g), g.vertices, g.edges)


_SUPS = {"B": sup_B, "P": sup_P, "R": sup_R, "Pi": sup_Pi}


def supremum(g: ColouredGraph, name: str) -> ColouredGraph:
    """Least member of class ``name`` above ``g``."""
    try:
        return _SUPS[name](g)
    except KeyError:
        raise ValueError(f"unknown class {name!r}") from None
