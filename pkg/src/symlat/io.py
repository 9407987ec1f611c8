"""Reading and writing coloured graphs as JSON.

Format::

    {"vertices": [1, 2, 3],
     "vertex_classes": [[1, 3], [2]],
     "edge_classes": [[[1, 2], [2, 3]]]}

All lists must be in canonical order (see :class:`symlat.partition.SetPartition`);
``normalize=True`` accepts any order and canonicalises it.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .coloured_graph import ColouredGraph, GraphError, edge
from .partition import PartitionError, SetPartition

__all__ = ["graph_from_dict", "graph_to_json", "load_graph", "render_text"]


def _label(x: Any, where: str):
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise GraphError(f"{where}: labels must be integers or strings, got {x!r}")
    return x


def graph_from_dict(obj: Any, normalize: bool = False, source: str = "<graph>") -> ColouredGraph:
    if not isinstance(obj, dict):
        raise GraphError(f"{source}: top level must be an object")
    for key in ("vertices", "vertex_classes", "edge_classes"):
        if key not in obj:
            raise GraphError(f"{source}: missing field {key!r}")
        if not isinstance(obj[key], list):
            raise GraphError(f"{source}: field {key!r} must be a list")
    extra = set(obj) - {"vertices", "vertex_classes", "edge_classes"}
    if extra:
        raise GraphError(f"{source}: unknown fields {sorted(extra)}")
    verts = [_label(v, f"{source}: vertices[{i}]") for i, v in enumerate(obj["vertices"])]
    if len({type(v) for v in verts}) > 1:
        raise GraphError(f"{source}: vertices mix integer and string labels")
    vset = set(verts)
    vcls = []
    for i, blk in enumerate(obj["vertex_classes"]):
        if not isinstance(blk, list):
            raise GraphError(f"{source}: vertex_classes[{i}] must be a list")
        for j, v in enumerate(blk):
            if v not in vset:
                raise GraphError(f"{source}: vertex_classes[{i}][{j}]: unknown vertex {v!r}")
        vcls.append(tuple(blk))
    ecls = []
    for i, blk in enumerate(obj["edge_classes"]):
        if not isinstance(blk, list) or not blk:
            raise GraphError(f"{source}: edge_classes[{i}] must be a nonempty list")
        c = []
        for j, e in enumerate(blk):
            where = f"{source}: edge_classes[{i}][{j}]"
            if not (isinstance(e, list) and len(e) == 2):
                raise GraphError(f"{where}: an edge is a list of two vertices")
            for v in e:
                if v not in vset:
                    raise GraphError(f"{where}: unknown vertex {v!r}")
            try:
                c.append(edge(*e))
            except GraphError as exc:
                raise GraphError(f"{where}: {exc}") from None
        ecls.append(tuple(c))
    try:
        vp = SetPartition.from_blocks(vcls, verts)
    except PartitionError as exc:
        raise GraphError(f"{source}: vertex_classes is not a partition of the vertices: {exc}") from None
    try:
        ep = SetPartition(tuple(ecls))
    except PartitionError as exc:
        raise GraphError(f"{source}: edge_classes is not a partition of its edges: {exc}") from None
    try:
        g = ColouredGraph(tuple(verts), vp, ep)
    except GraphError as exc:
        raise GraphError(f"{source}: {exc}") from None
    if not normalize:
        canon = g.to_dict()
        for key in ("vertices", "vertex_classes", "edge_classes"):
            if obj[key] != canon[key]:
                raise GraphError(
                    f"{source}: field {key!r} is not in canonical order "
                    f"(expected {json.dumps(canon[key])}); pass --normalize to accept it"
                )
    return g


def load_graph(path: str | Path, normalize: bool = False) -> ColouredGraph:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise GraphError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from None
    return graph_from_dict(obj, normalize, str(path))


def graph_to_json(g: ColouredGraph) -> str:
    return json.dumps(g.to_dict(), sort_keys=True)


def render_text(g: ColouredGraph) -> str:
    """Composite vertex classes marked by asterisks, composite edge classes by tick marks."""
    vmark, k = {}, 0
    for b in g.vertex_classes.blocks:
        if len(b) > 1:
            k += 1
        for v in b:
            vmark[v] = "*" * k if len(b) > 1 else ""
    lines = ["vertices: " + " ".join(f"{v}{vmark[v]}" for v in g.vertices)]
    k = 0
    parts = []
    for c in g.edge_classes.blocks:
        mark = ""
        if len(c) > 1:
            k += 1
            mark = " " + "|" * k
        parts.extend(f"{a}-{b}{mark}" for a, b in c)
    lines.append("edges: " + (", ".join(parts) if parts else "(none)"))
    return "\n".join(lines)
