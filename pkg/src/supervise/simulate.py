"""Monte Carlo verification of the analytic losses.

Episodes draw actual answers: binary tasks get a uniform true solution and
each worker answers it correctly with probability 1 - e, otherwise uniformly
among the m - 1 wrong answers, independently across workers, tasks, and
episodes; quantitative answers are Gaussian around the truth with a
per-worker bias and variance.  Penalties are charged on each worker's one
shared task with its superior, and the empirical means are reported next to
the analytic expectations with a z-score, so a run is a statistical test of
the formulas, not a replacement for them.

Effort costs are deterministic in the strategy and are not sampled; report
rows therefore compare the penalty component.  The parameter sweeps, which do
need the effort term to have an interior optimum, take the effort function
explicitly and add it analytically.

Determinism: one seeded generator, structures iterated in sorted order, and
numpy's fixed-order reductions — identical configs produce identical reports.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, NamedTuple, Sequence, Union

import numpy as np

from .effort import EffortFunction, SchemeParams, effort_eval
from .errors import ModelMismatchError, SuperviseError
from .hierarchy import expected_penalty_pair
from .quant import expected_penalty_quant
from .structures import SupervisionHierarchy, SupervisionTree

__all__ = [
    "UniformWrong",
    "Gaussian",
    "SimConfig",
    "WorkerStats",
    "SimReport",
    "SweepResult",
    "simulate",
    "simulate_binary",
    "simulate_quant",
    "sample_binary_answers",
    "sweep_flat",
    "sweep_pair",
    "sweep_quant",
]


@dataclass(frozen=True)
class UniformWrong:
    """Binary-verifiable answers over m alternatives; disagreement costs C."""

    m: int = 2
    C: float = 1.0

    def __post_init__(self) -> None:
        if not (isinstance(self.m, int) and self.m >= 2):
            raise SuperviseError(f"m must be an integer >= 2, got {self.m!r}")
        if not (self.C > 0 and math.isfinite(self.C)):
            raise SuperviseError(f"C must be a positive finite real, got {self.C!r}")

    @property
    def both_wrong_penalty(self) -> float:
        # independent uniform wrong answers disagree with probability (m-2)/(m-1)
        return self.C * (self.m - 2) / (self.m - 1)


@dataclass(frozen=True)
class Gaussian:
    """Real-valued answers; squared disagreement weighted by c."""

    c: float = 1.0

    def __post_init__(self) -> None:
        if not (self.c > 0 and math.isfinite(self.c)):
            raise SuperviseError(f"c must be a positive finite real, got {self.c!r}")


Structure = Union[SupervisionTree, SupervisionHierarchy]


@dataclass(frozen=True)
class SimConfig:
    episodes: int
    seed: int
    answer_model: Union[UniformWrong, Gaussian]
    structure: Structure
    strategies: Mapping[str, object]

    def __post_init__(self) -> None:
        if not (isinstance(self.episodes, int) and self.episodes >= 2):
            raise SuperviseError(f"episodes must be an integer >= 2, got {self.episodes!r}")


class WorkerStats(NamedTuple):
    worker: str
    level: int
    empirical: float
    stderr: float
    analytic: float
    z: float


@dataclass(frozen=True)
class SimReport:
    rows: tuple[WorkerStats, ...]
    episodes: int
    seed: int

    @property
    def max_abs_z(self) -> float:
        return max((abs(r.z) for r in self.rows), default=0.0)

    def per_level(self) -> dict[int, tuple[float, float]]:
        """level -> (mean empirical, mean analytic) over its workers."""
        acc: dict[int, list[tuple[float, float]]] = {}
        for r in self.rows:
            acc.setdefault(r.level, []).append((r.empirical, r.analytic))
        return {
            lv: (float(np.mean([e for e, _ in pairs])), float(np.mean([a for _, a in pairs])))
            for lv, pairs in acc.items()
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["worker", "level", "empirical", "stderr", "analytic", "z"])
        for r in self.rows:
            w.writerow([r.worker, r.level, repr(r.empirical), repr(r.stderr), repr(r.analytic), repr(r.z)])
        return buf.getvalue()


def _supervision_pairs(structure: Structure) -> list[tuple[str, str, str, int]]:
    """(superior, worker, shared task, worker level) for every judged worker."""
    if isinstance(structure, SupervisionTree):
        tree = structure
        extra: list[tuple[str, str, str, int]] = []
    elif isinstance(structure, SupervisionHierarchy):
        tree = structure.tree
        leaf_owner = {t: tree.parent[t] for t in tree.task_ids}
        graph_level = tree.depth - 1
        extra = [
            (leaf_owner[t], w, t, graph_level)
            for w, t in sorted(structure.coverage.items())
        ]
    else:
        raise ModelMismatchError(f"unsupported structure type {type(structure).__name__}")
    level_of = {n: i for i, lv in enumerate(tree.levels) for n in lv}
    pairs = [
        (p, c, tree.shared_task[(p, c)], level_of[c])
        for p, c in sorted(tree.edges)
        if (p, c) in tree.shared_task
    ]
    return pairs + extra


def _binary_strategy(strategies: Mapping[str, object], worker: str, supervisor: str) -> float:
    if worker in strategies:
        e = strategies[worker]
    elif worker == supervisor:
        e = 0.0  # the root is taken exact unless told otherwise
    else:
        raise SuperviseError(f"strategies must cover worker {worker!r}")
    if not (isinstance(e, (int, float)) and 0.0 <= float(e) <= 1.0):
        raise ModelMismatchError(f"binary strategy for {worker!r} must be an error in [0, 1], got {e!r}")
    return float(e)


def _quant_strategy(strategies: Mapping[str, object], worker: str, supervisor: str) -> tuple[float, float]:
    if worker in strategies:
        sv = strategies[worker]
    elif worker == supervisor:
        sv = (0.0, 0.0)
    else:
        raise SuperviseError(f"strategies must cover worker {worker!r}")
    try:
        sigma, bias = sv  # type: ignore[misc]
        sigma, bias = float(sigma), float(bias)
    except (TypeError, ValueError) as exc:
        raise ModelMismatchError(
            f"quantitative strategy for {worker!r} must be a (sigma, bias) pair, got {sv!r}"
        ) from exc
    if sigma < 0:
        raise ModelMismatchError(f"sigma must be nonnegative, got {sigma!r}")
    return sigma, bias


def sample_binary_answers(
    rng: np.random.Generator, truth: np.ndarray, e: float, m: int
) -> np.ndarray:
    """Answers that equal the truth w.p. 1-e, else land uniformly off it."""
    n = truth.shape[0]
    wrong = rng.random(n) < e
    offset = rng.integers(1, m, size=n)
    return (truth + np.where(wrong, offset, 0)) % m


def _mean_stderr(x: np.ndarray) -> tuple[float, float]:
    n = x.shape[0]
    return float(np.mean(x)), float(np.std(x, ddof=1) / math.sqrt(n))


def _z(emp: float, analytic: float, stderr: float) -> float:
    if stderr > 0:
        return (emp - analytic) / stderr
    return 0.0 if emp == analytic else math.inf


def simulate_binary(config: SimConfig) -> SimReport:
    """Sample the binary penalty on every supervision pair of the structure."""
    model = config.answer_model
    if not isinstance(model, UniformWrong):
        raise ModelMismatchError("simulate_binary needs a UniformWrong answer model")
    pairs = _supervision_pairs(config.structure)
    tree = config.structure if isinstance(config.structure, SupervisionTree) else config.structure.tree
    sup = tree.supervisor
    rng = np.random.default_rng(config.seed)

    tasks = sorted({t for _, _, t, _ in pairs})
    truth = {t: rng.integers(0, model.m, size=config.episodes) for t in tasks}
    combos = sorted({(w, t) for p, w2, t, _ in pairs for w in (p, w2)})
    # one answer per (worker, task): the same draw serves every pair that reads it
    answers = {}
    for w, t in combos:
        e = _binary_strategy(config.strategies, w, sup)
        answers[(w, t)] = sample_binary_answers(rng, truth[t], e, model.m)

    D = model.both_wrong_penalty
    rows = []
    for p, w, t, level in pairs:
        pen = model.C * (answers[(w, t)] != answers[(p, t)])
        emp, se = _mean_stderr(pen)
        analytic = expected_penalty_pair(
            _binary_strategy(config.strategies, w, sup),
            _binary_strategy(config.strategies, p, sup),
            model.C,
            D,
        )
        rows.append(WorkerStats(w, level, emp, se, analytic, _z(emp, analytic, se)))
    rows.sort(key=lambda r: (r.level, r.worker))
    return SimReport(rows=tuple(rows), episodes=config.episodes, seed=config.seed)


def simulate_quant(config: SimConfig) -> SimReport:
    """Sample the quadratic penalty on every supervision pair of the structure."""
    model = config.answer_model
    if not isinstance(model, Gaussian):
        raise ModelMismatchError("simulate_quant needs a Gaussian answer model")
    pairs = _supervision_pairs(config.structure)
    tree = config.structure if isinstance(config.structure, SupervisionTree) else config.structure.tree
    sup = tree.supervisor
    rng = np.random.default_rng(config.seed)

    tasks = sorted({t for _, _, t, _ in pairs})
    truth = {t: rng.standard_normal(config.episodes) for t in tasks}
    combos = sorted({(w, t) for p, w2, t, _ in pairs for w in (p, w2)})
    answers = {}
    for w, t in combos:
        sigma, bias = _quant_strategy(config.strategies, w, sup)
        answers[(w, t)] = truth[t] + bias + sigma * rng.standard_normal(config.episodes)

    rows = []
    for p, w, t, level in pairs:
        pen = model.c * (answers[(w, t)] - answers[(p, t)]) ** 2
        emp, se = _mean_stderr(pen)
        s_u, b_u = _quant_strategy(config.strategies, w, sup)
        s_w, b_w = _quant_strategy(config.strategies, p, sup)
        analytic = expected_penalty_quant(s_u, b_u, s_w, b_w, model.c)
        rows.append(WorkerStats(w, level, emp, se, analytic, _z(emp, analytic, se)))
    rows.sort(key=lambda r: (r.level, r.worker))
    return SimReport(rows=tuple(rows), episodes=config.episodes, seed=config.seed)


def simulate(config: SimConfig) -> SimReport:
    """Dispatch on the answer model."""
    if isinstance(config.answer_model, UniformWrong):
        return simulate_binary(config)
    return simulate_quant(config)


@dataclass(frozen=True)
class SweepResult:
    """Empirical loss over a strategy grid and its argmin."""

    values: tuple[float, ...]
    mean_losses: tuple[float, ...]
    best_index: int
    best_value: float


def _finish_sweep(values: Sequence[float], losses: list[float]) -> SweepResult:
    best = int(np.argmin(losses))
    return SweepResult(
        values=tuple(float(v) for v in values),
        mean_losses=tuple(losses),
        best_index=best,
        best_value=float(values[best]),
    )


def _check_grid(grid: Sequence[float]) -> list[float]:
    vals = [float(v) for v in grid]
    if len(vals) < 2:
        raise SuperviseError("strategy grid needs at least two points")
    return vals


def sweep_flat(
    f: EffortFunction, params: SchemeParams, p: float, grid: Sequence[float], episodes: int, seed: int
) -> SweepResult:
    """Empirical flat loss k f(e) + C [checked][wrong] over an error grid.

    Common random numbers across grid points: the same uniforms are
    thresholded at each e, so the argmin is far less noisy than independent
    runs of the same length.
    """
    vals = _check_grid(grid)
    if not (0.0 <= p <= 1.0):
        raise SuperviseError(f"verification probability must lie in [0, 1], got {p!r}")
    C = params.require_C()
    rng = np.random.default_rng(seed)
    checked = rng.random(episodes) < p
    u_wrong = rng.random(episodes)
    losses = []
    for e in vals:
        pen = C * np.mean(checked & (u_wrong < e))
        losses.append(params.k * effort_eval(f, e) + float(pen))
    return _finish_sweep(vals, losses)


def sweep_pair(
    f: EffortFunction, params: SchemeParams, e_w: float, grid: Sequence[float], episodes: int, seed: int
) -> SweepResult:
    """Empirical pair loss against a superior playing error e_w."""
    vals = _check_grid(grid)
    if not (0.0 <= e_w <= 1.0):
        raise SuperviseError(f"superior error must lie in [0, 1], got {e_w!r}")
    C = params.require_C()
    m = params.m
    rng = np.random.default_rng(seed)
    truth = rng.integers(0, m, size=episodes)
    a_sup = sample_binary_answers(rng, truth, e_w, m)
    u_wrong = rng.random(episodes)
    offset = rng.integers(1, m, size=episodes)
    losses = []
    for e in vals:
        a = (truth + np.where(u_wrong < e, offset, 0)) % m
        pen = C * np.mean(a != a_sup)
        losses.append(params.k * effort_eval(f, e) + float(pen))
    return _finish_sweep(vals, losses)


def sweep_quant(
    f: EffortFunction,
    k: int,
    c: float,
    grid: Sequence[float],
    episodes: int,
    seed: int,
    sigma_w: float = 1.0,
    bias_w: float = 0.0,
) -> SweepResult:
    """Empirical quadratic loss k f(v) + c (x - y)^2 over a variance grid."""
    vals = _check_grid(grid)
    if sigma_w < 0:
        raise SuperviseError(f"sigma_w must be nonnegative, got {sigma_w!r}")
    rng = np.random.default_rng(seed)
    z_u = rng.standard_normal(episodes)
    z_w = rng.standard_normal(episodes)
    diff_base = bias_w + sigma_w * z_w  # truth cancels in x - y
    losses = []
    for v in vals:
        pen = c * np.mean((math.sqrt(v) * z_u - diff_base) ** 2)
        losses.append(k * effort_eval(f, v) + float(pen))
    return _finish_sweep(vals, losses)
