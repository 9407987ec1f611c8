"""Edwards-Havranek model search over the B and Pi model lattices.

The search keeps a set of accepted models (every supermodel of an accepted
model counts as accepted) and rejected models (every submodel counts as
rejected), and repeatedly tests the rejection dual of the accepted set:
the largest models that do not contain any accepted model.
"""
from __future__ import annotations

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Sequence

from .classes import all_subgroups, is_edge_regular, orbit_colouring, sup_B
from .coloured_graph import ColouredGraph, cg_join, cg_leq, cg_meet, edge, unit
from .gaussian import FitResult, GaussianData, MLENonexistenceError, fit_rcon, lrt_vs_saturated
from .partition import SetPartition, all_partitions, is_finer

__all__ = [
    "SearchError",
    "graph_key",
    "minimal",
    "maximal",
    "dual_accept_B",
    "dual_reject_B",
    "dual_set",
    "brute_force_duals",
    "enumerate_Pi_lattice",
    "complete_Pi_colourings",
    "Candidate",
    "Stage",
    "SearchTrace",
    "eh_search",
    "lrt_test",
    "audit_coherence",
]

log = logging.getLogger(__name__)


class SearchError(ValueError):
    pass


def graph_key(g: ColouredGraph):
    """Total order used for deterministic listings."""
    return (len(g.edges), g.vertex_classes.blocks, g.edge_classes.blocks)


def _rank(g: ColouredGraph) -> int:
    # strictly increasing along the model order
    return len(g.edges) + len(g.vertex_classes) + len(g.edge_classes)


def maximal(models: Iterable[ColouredGraph]) -> list[ColouredGraph]:
    """Maximal elements under ``cg_leq``, in canonical order."""
    items = sorted(set(models), key=lambda g: (-_rank(g), graph_key(g)))
    kept: list[ColouredGraph] = []
    for g in items:
        r = _rank(g)
        if not any(_rank(h) > r and cg_leq(g, h) for h in kept):
            kept.append(g)
    return sorted(kept, key=graph_key)


def minimal(models: Iterable[ColouredGraph]) -> list[ColouredGraph]:
    """Minimal elements under ``cg_leq``, in canonical order."""
    items = sorted(set(models), key=lambda g: (_rank(g), graph_key(g)))
    kept: list[ColouredGraph] = []
    for g in items:
        r = _rank(g)
        if not any(_rank(h) < r and cg_leq(h, g) for h in kept):
            kept.append(g)
    return sorted(kept, key=graph_key)


# --------------------------------------------------------------------------
# duals in the edge regular lattice


def _require_B(g: ColouredGraph) -> None:
    if not is_edge_regular(g):
        raise SearchError("graph colouring is not edge regular")


def dual_accept_B(g: ColouredGraph) -> list[ColouredGraph]:
    """Minimal edge regular models not contained in the model of ``g``."""
    _require_B(g)
    verts = g.vertices
    empty = SetPartition(())
    out = []
    # empty graph, two vertex classes that do not coarsen the colouring of g
    for vp in all_partitions(verts):
        if len(vp) == 2 and not is_finer(g.vertex_classes, vp):
            out.append(ColouredGraph(verts, vp, empty))
    # one vertex class, one edge class that is not a union of classes of g
    single = SetPartition.single(verts)
    gb = g.edge_classes.block_of
    pairs = list(itertools.combinations(verts, 2))
    for k in range(1, len(pairs) + 1):
        for es in itertools.combinations(pairs, k):
            inside = all(e in gb for e in es)
            if inside:
                hit = {gb[e] for e in es}
                if sum(len(g.edge_classes.blocks[c]) for c in hit) == len(es):
                    continue
            out.append(ColouredGraph(verts, single, SetPartition((es,))))
    return sorted(set(out), key=graph_key)


def dual_reject_B(g: ColouredGraph) -> list[ColouredGraph]:
    """Maximal edge regular models that do not contain the model of ``g``."""
    _require_B(g)
    verts = g.vertices
    pairs = list(itertools.combinations(verts, 2))
    atoms = SetPartition.atomic(verts)
    vb = g.vertex_classes.block_of
    out = []
    # two vertices of different colours merged, everything else saturated
    for a, b in pairs:
        if vb[a] != vb[b]:
            vp = SetPartition(((a, b),) + tuple((v,) for v in verts if v not in (a, b)))
            out.append(ColouredGraph(verts, vp, SetPartition.atomic(pairs)))
    # saturated model minus one edge of g
    for e in sorted(g.edges):
        out.append(ColouredGraph(verts, atoms, SetPartition.atomic([p for p in pairs if p != e])))
    # two edges merged, with end vertices merged so as to stay edge regular
    for e1, e2 in itertools.combinations(pairs, 2):
        a, c = e1
        for b, d in (e2, e2[::-1]):
            # the merged edge class is {ac, bd}; vertex pairs {a,b} and {c,d}
            if a == b and c == d:
                continue
            merges = [tuple(sorted({a, b})), tuple(sorted({c, d}))]
            merges = [m for m in merges if len(m) == 2]
            flat = [v for m in merges for v in m]
            if len(flat) != len(set(flat)):
                continue
            if any(vb[m[0]] != vb[m[1]] for m in merges):
                continue
            vp = SetPartition(tuple(merges) + tuple((v,) for v in verts if v not in flat))
            ep = SetPartition(((e1, e2),) + tuple((p,) for p in pairs if p not in (e1, e2)))
            h = ColouredGraph(verts, vp, ep)
            if not cg_leq(g, h):
                out.append(h)
    return maximal(out)


def dual_set(
    models: Sequence[ColouredGraph],
    singleton_dual: Callable[[ColouredGraph], Iterable[ColouredGraph]],
    direction: str,
    join: Callable[[ColouredGraph, ColouredGraph], ColouredGraph] | None = None,
    meet: Callable[[ColouredGraph, ColouredGraph], ColouredGraph] = cg_meet,
) -> list[ColouredGraph]:
    """Dual of a set from the duals of its members.

    Acceptance duals combine by ``min {s v t}``, rejection duals by
    ``max {s ^ t}``; ``join`` and ``meet`` are the operations of the class
    lattice.
    """
    if direction not in ("a", "r"):
        raise ValueError("direction must be 'a' or 'r'")
    if direction == "a" and join is None:
        raise ValueError("an acceptance dual needs the class join")
    models = list(models)
    if not models:
        raise ValueError("empty model set")
    acc = list(singleton_dual(models[0]))
    for t in models[1:]:
        dt = list(singleton_dual(t))
        if direction == "a":
            acc = minimal(join(s, u) for s in acc for u in dt)
        else:
            acc = maximal(meet(s, u) for s in acc for u in dt)
    return acc


def _add_to_reject_dual(current: list[ColouredGraph], t: ColouredGraph, dual_t: list[ColouredGraph]) -> list[ColouredGraph]:
    # members not containing t survive unchanged; the others are met with D_r(t)
    keep, hit = [], []
    for s in current:
        (hit if cg_leq(t, s) else keep).append(s)
    if not hit:
        return current
    # a meet lies below its hit member, so it never dominates a kept one
    new = maximal(cg_meet(s, u) for s in hit for u in dual_t)
    new = [m for m in new if not any(cg_leq(m, k) for k in keep)]
    return sorted(keep + new, key=graph_key)


def brute_force_duals(lattice: Iterable[ColouredGraph], models: Iterable[ColouredGraph], direction: str) -> list[ColouredGraph]:
    """Duals by direct scan of an explicit lattice."""
    lattice = list(lattice)
    models = list(models)
    if direction == "r":
        return maximal(h for h in lattice if not any(cg_leq(s, h) for s in models))
    if direction == "a":
        return minimal(h for h in lattice if not any(cg_leq(h, s) for s in models))
    raise ValueError("direction must be 'a' or 'r'")


# --------------------------------------------------------------------------
# the permutation generated lattice on four vertices


def enumerate_Pi_lattice(labels: Sequence[Hashable]) -> list[ColouredGraph]:
    """All permutation generated colourings on four vertices.

    Orbit colourings of the complete graph under every subgroup, closed under
    removal of whole edge colour classes.
    """
    verts = tuple(sorted(labels))
    if len(verts) != 4:
        raise SearchError("the permutation generated lattice is only available for four vertices")
    pairs = list(itertools.combinations(verts, 2))
    complete = {orbit_colouring(h, verts, pairs) for h in all_subgroups(verts)}
    out = set()
    for g in complete:
        blocks = g.edge_classes.blocks
        for k in range(len(blocks) + 1):
            for keep in itertools.combinations(blocks, k):
                out.add(ColouredGraph(verts, g.vertex_classes, SetPartition(keep)))
    return sorted(out, key=graph_key)


def complete_Pi_colourings(labels: Sequence[Hashable]) -> list[ColouredGraph]:
    verts = tuple(sorted(labels))
    pairs = list(itertools.combinations(verts, 2))
    return sorted({orbit_colouring(h, verts, pairs) for h in all_subgroups(verts)}, key=graph_key)


# --------------------------------------------------------------------------
# the search


@dataclass
class Candidate:
    graph: ColouredGraph
    accepted: bool
    fit: FitResult | None = None
    flag: str | None = None


@dataclass
class Stage:
    candidates: list[Candidate]

    @property
    def accepted(self) -> int:
        return sum(c.accepted for c in self.candidates)


@dataclass
class SearchTrace:
    lattice_class: str
    initial: list[Candidate]
    stages: list[Stage]
    min_accepted: list[ColouredGraph]
    max_rejected: list[ColouredGraph]
    fits: dict[ColouredGraph, FitResult] = field(repr=False, default_factory=dict)
    flags: dict[ColouredGraph, str] = field(default_factory=dict)

    @property
    def total_tested(self) -> int:
        return len(self.initial) + sum(len(s.candidates) for s in self.stages)

    def to_dict(self) -> dict:
        def cand(c: Candidate) -> dict:
            d = {"graph": c.graph.to_dict(), "accepted": c.accepted}
            if c.fit is not None:
                d["fit"] = c.fit.to_dict()
            if c.flag:
                d["flag"] = c.flag
            return d

        final = []
        for g in self.min_accepted:
            item = {"graph": g.to_dict()}
            if g in self.fits:
                item["fit"] = self.fits[g].to_dict()
            final.append(item)
        return {
            "class": self.lattice_class,
            "initial": [cand(c) for c in self.initial],
            "stages": [
                {"tested": len(s.candidates), "accepted": s.accepted, "candidates": [cand(c) for c in s.candidates]}
                for s in self.stages
            ],
            "totals": {"stages": len(self.stages), "models_tested": self.total_tested},
            "min_accepted": final,
            "flags": [{"graph": g.to_dict(), "reason": r} for g, r in sorted(self.flags.items(), key=lambda x: graph_key(x[0]))],
        }


TestResult = tuple  # (accepted, fit or None, flag or None)


def lrt_test(data: GaussianData, alpha: float = 0.05, penalty_n: int | None = None) -> Callable[[ColouredGraph], TestResult]:
    """Likelihood ratio test against the saturated model at level ``alpha``."""

    def test(g: ColouredGraph) -> TestResult:
        try:
            fit = fit_rcon(g, data, penalty_n=penalty_n)
        except MLENonexistenceError as exc:
            return False, None, f"nonexistent MLE: {exc}"
        if not fit.converged:
            return False, fit, "fit did not converge"
        return lrt_vs_saturated(fit, data, alpha).accept, fit, None

    return test


def eh_search(
    lattice_class: str,
    data: GaussianData | None = None,
    test: Callable[[ColouredGraph], bool | TestResult] | None = None,
    alpha: float = 0.05,
    initial: Sequence[ColouredGraph] | None = None,
    labels: Sequence[Hashable] | None = None,
    order_seed: int | None = None,
    jobs: int = 1,
    max_stages: int = 1000,
) -> SearchTrace:
    """Run the search with rejection duals only.

    ``test`` maps a graph to an accept/reject decision (optionally as an
    ``(accepted, fit, flag)`` triple); by default it is the likelihood ratio
    test against the saturated model on ``data``.  ``order_seed`` shuffles
    the evaluation order inside each stage, which must not change the result.
    """
    if lattice_class not in ("B", "Pi"):
        raise SearchError("search is available for classes B and Pi")
    if labels is None:
        if data is None:
            raise SearchError("need data or labels")
        labels = data.labels
    verts = tuple(sorted(labels))
    if test is None:
        if data is None:
            raise SearchError("need data for the default test")
        test = lrt_test(data, alpha)
    if lattice_class == "Pi":
        lattice = enumerate_Pi_lattice(verts)
    else:
        lattice = None
    if initial is None:
        initial = [unit(verts)]
    rng = random.Random(order_seed) if order_seed is not None else None
    results: dict[ColouredGraph, tuple] = {}

    def run(batch: list[ColouredGraph]) -> list[Candidate]:
        todo = [g for g in batch if g not in results]
        if rng is not None:
            rng.shuffle(todo)
        if jobs > 1 and len(todo) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as ex:
                outs = list(ex.map(test, todo))
        else:
            outs = [test(g) for g in todo]
        for g, r in zip(todo, outs):
            results[g] = r if isinstance(r, tuple) else (bool(r), None, None)
        return [Candidate(g, bool(results[g][0]), results[g][1], results[g][2]) for g in sorted(batch, key=graph_key)]

    def reject_dual_single(g: ColouredGraph) -> list[ColouredGraph]:
        if lattice_class == "B":
            return dual_reject_B(g)
        return brute_force_duals(lattice, [g], "r")

    first = run(list(initial))
    accepted = minimal(c.graph for c in first if c.accepted)
    rejected = maximal(c.graph for c in first if not c.accepted)
    if not accepted:
        log.warning("no initial model was accepted")
        return _finish(lattice_class, first, [], [], rejected, results)

    if lattice_class == "B":
        dual = dual_set(accepted, dual_reject_B, "r")
    else:
        dual = brute_force_duals(lattice, accepted, "r")

    stages: list[Stage] = []
    for _ in range(max_stages):
        cands = [h for h in dual if h not in results and not any(cg_leq(h, r) for r in rejected)]
        if not cands:
            break
        stage = Stage(run(cands))
        stages.append(stage)
        log.info("stage %d: %d tested, %d accepted", len(stages), len(stage.candidates), stage.accepted)
        newly = [c.graph for c in stage.candidates if c.accepted]
        rejected = maximal(rejected + [c.graph for c in stage.candidates if not c.accepted])
        if not newly:
            break
        for t in sorted(newly, key=graph_key):
            if lattice_class == "B":
                dual = _add_to_reject_dual(dual, t, reject_dual_single(t))
        accepted = minimal(accepted + newly)
        if lattice_class == "Pi":
            dual = brute_force_duals(lattice, accepted, "r")
    else:
        raise SearchError("stage limit reached")

    return _finish(lattice_class, first, stages, accepted, rejected, results)


def _finish(lattice_class, first, stages, accepted, rejected, results) -> SearchTrace:
    fits = {g: r[1] for g, r in results.items() if r[1] is not None}
    flags = {g: r[2] for g, r in results.items() if r[2]}
    return SearchTrace(lattice_class, first, stages, accepted, rejected, fits, flags)


def audit_coherence(trace: SearchTrace) -> list[tuple[ColouredGraph, ColouredGraph]]:
    """Pairs (accepted, rejected) of tested models with accepted below rejected."""
    tested = list(trace.initial) + [c for s in trace.stages for c in s.candidates]
    acc = [c.graph for c in tested if c.accepted]
    rej = [c.graph for c in tested if not c.accepted]
    return [(a, r) for a in acc for r in rej if cg_leq(a, r)]
