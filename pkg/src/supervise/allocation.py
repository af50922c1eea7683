"""Choosing few tasks that touch every worker.

A worker performing at most k tasks is "touched" by a task set S when S meets
its task list; the goal is the smallest such S, since that is what a
supervisor must grade to judge everyone.  Treating each worker's task list as
a hyperedge of size <= k over the task vertices makes this a minimum hitting
set, which drives both solvers below: exact enumeration for small instances
and a factor-k greedy built on disjoint picked hyperedges.

The exact solver enumerates task subsets in increasing cardinality with
bitmask pruning (capped at 24 tasks); vertex-cover instances embed by making
each graph edge a two-task worker, which is why nothing faster should be
expected.  The literal edge-deletion variant `sa_greedy_edge_deletion` picks one
random worker/task edge at a time and keeps only the task; it produces valid
covers but carries no approximation-ratio claim here.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InstanceTooLargeError, SuperviseError
from .structures import AssignmentGraph

__all__ = [
    "SAInstance",
    "SASolution",
    "sa_exact",
    "sa_greedy",
    "sa_greedy_edge_deletion",
    "vc_to_sa",
]

EXACT_TASK_CAP = 24


@dataclass(frozen=True)
class SAInstance:
    """An assignment graph plus the degree bound k used in ratio claims."""

    graph: AssignmentGraph
    k: int

    def __post_init__(self) -> None:
        if not (isinstance(self.k, int) and self.k >= 1):
            raise SuperviseError(f"k must be an integer >= 1, got {self.k!r}")
        for w, ts in self.graph.worker_tasks.items():
            if len(ts) > self.k:
                raise SuperviseError(f"worker {w!r} has {len(ts)} tasks > k={self.k}")
            if not ts:
                raise SuperviseError(f"worker {w!r} has no tasks")


@dataclass(frozen=True)
class SASolution:
    """A covering task set and, per worker, one chosen covering task."""

    tasks: tuple[str, ...]
    cover_witness: dict[str, str]

    @property
    def size(self) -> int:
        return len(self.tasks)


def _check_cover(inst: SAInstance, tasks: Iterable[str]) -> dict[str, str]:
    chosen = set(tasks)
    witness = {}
    for w, ts in inst.graph.worker_tasks.items():
        hit = sorted(chosen.intersection(ts))
        if not hit:
            raise SuperviseError(f"worker {w!r} not covered")
        witness[w] = hit[0]
    return witness


def sa_exact(inst: SAInstance) -> SASolution:
    """Minimum covering task set by exhaustive search.

    Iterative deepening over subset size; within a size, subsets are explored
    in lexicographic task-id order with suffix-reachability pruning, so the
    returned optimum is the lexicographically smallest one.  Instances over
    24 tasks are refused.
    """
    tasks = sorted(inst.graph.tasks)
    if len(tasks) > EXACT_TASK_CAP:
        raise InstanceTooLargeError(
            f"exact solver caps at {EXACT_TASK_CAP} tasks, got {len(tasks)}; use sa_greedy"
        )
    workers = sorted(inst.graph.workers)
    if not workers:
        return SASolution(tasks=(), cover_witness={})
    widx = {w: i for i, w in enumerate(workers)}
    full = (1 << len(workers)) - 1
    covers = []
    for t in tasks:
        mask = 0
        for w in inst.graph.task_workers.get(t, ()):
            mask |= 1 << widx[w]
        covers.append(mask)
    # suffix[i] = everything tasks[i:] can still cover
    suffix = [0] * (len(tasks) + 1)
    for i in range(len(tasks) - 1, -1, -1):
        suffix[i] = suffix[i + 1] | covers[i]
    if suffix[0] != full:
        raise SuperviseError("instance admits no cover (a worker has no tasks)")

    chosen: list[int] = []

    def dfs(start: int, covered: int, remaining: int) -> bool:
        if covered == full:
            return True
        if remaining == 0 or covered | suffix[start] != full:
            return False
        for i in range(start, len(tasks) - remaining + 1):
            chosen.append(i)
            if dfs(i + 1, covered | covers[i], remaining - 1):
                return True
            chosen.pop()
        return False

    for size in range(0, len(tasks) + 1):
        chosen.clear()
        if dfs(0, 0, size):
            picked = tuple(tasks[i] for i in chosen)
            return SASolution(tasks=picked, cover_witness=_check_cover(inst, picked))
    raise SuperviseError("unreachable: full suffix cover exists")  # pragma: no cover


def sa_greedy(inst: SAInstance, seed: int) -> SASolution:
    """Disjoint-worker greedy: within factor k of the optimum.

    Repeatedly pick a seeded-random still-uncovered worker and take all of
    its (at most k) tasks.  Any two picked workers share no task — otherwise
    the second was already covered — so an optimal cover spends at least one
    distinct task per picked worker, giving |S| <= k * |OPT|.
    """
    rng = random.Random(seed)
    uncovered = set(inst.graph.workers)
    chosen: set[str] = set()
    while uncovered:
        u = rng.choice(sorted(uncovered))
        chosen.update(inst.graph.worker_tasks[u])
        uncovered = {w for w in uncovered if not chosen.intersection(inst.graph.worker_tasks[w])}
    picked = tuple(sorted(chosen))
    return SASolution(tasks=picked, cover_witness=_check_cover(inst, picked))


def sa_greedy_edge_deletion(inst: SAInstance, seed: int) -> SASolution:
    """Edge-deletion greedy: take the task of one random live edge at a time.

    Deleting all edges at either endpoint keeps every worker covered (a
    worker loses its edges only once some chosen task covers it), but a
    single task is gained per round, so no factor-k ratio argument applies.
    Provided for comparison; measure, don't rely on it.
    """
    rng = random.Random(seed)
    edges = sorted(inst.graph.edges)
    chosen: set[str] = set()
    while edges:
        w, t = edges[rng.randrange(len(edges))]
        chosen.add(t)
        edges = [(w2, t2) for (w2, t2) in edges if w2 != w and t2 != t]
    picked = tuple(sorted(chosen))
    return SASolution(tasks=picked, cover_witness=_check_cover(inst, picked))


def vc_to_sa(vertices: Sequence[str], edges: Sequence[tuple[str, str]]) -> SAInstance:
    """Embed vertex cover: each graph edge becomes a worker with two tasks.

    A task set touching every worker is exactly a vertex set touching every
    edge, so optima coincide and the exact solver doubles as a vertex-cover
    solver (k = 2).  Isolated vertices constrain nothing and are dropped with
    a warning.
    """
    vs = [str(v) for v in vertices]
    if len(set(vs)) != len(vs):
        raise SuperviseError("duplicate vertex ids")
    seen = set()
    norm: list[tuple[str, str]] = []
    vset = set(vs)
    for u, v in edges:
        u, v = str(u), str(v)
        if u == v:
            raise SuperviseError(f"self-loop at {u!r} cannot be covered meaningfully")
        if u not in vset or v not in vset:
            raise SuperviseError(f"edge ({u!r}, {v!r}) references unknown vertex")
        key = (min(u, v), max(u, v))
        if key in seen:
            continue
        seen.add(key)
        norm.append(key)
    touched = {x for e in norm for x in e}
    isolated = sorted(set(vs) - touched)
    if isolated:
        warnings.warn(f"dropping isolated vertices (they constrain nothing): {isolated}", stacklevel=2)
    workers = tuple(f"{u}|{v}" for u, v in norm)
    g_edges = tuple((f"{u}|{v}", x) for u, v in norm for x in (u, v))
    graph = AssignmentGraph(workers=workers, tasks=tuple(sorted(touched)), edges=g_edges, k=2)
    return SAInstance(graph=graph, k=2)
