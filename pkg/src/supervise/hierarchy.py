"""Hierarchical supervision with binary-verifiable answers.

A worker is judged by its superior on one shared task.  If exactly one of the
two is wrong they disagree and the worker pays C; if both are wrong they
disagree only when their wrong answers differ, costing D <= C.  The expected
loss of a worker with error e_u under a superior with error e_w is

    L(e_u, e_w) = k f(e_u) + e_u (1 - e_w) C + (1 - e_u) e_w C + e_u e_w D

which is strictly convex in e_u, so the best response solves

    f'(e_u) = ((2 e_w - 1) C - e_w D) / k.

Choosing C at least ``f'(eps) k / (2 eps - 1)`` makes every best response to a
superior with error below eps land strictly below eps as well, so truthful
play propagates down the hierarchy from an accurate supervisor — at any
depth.  This module computes that penalty bound, the per-pair losses and best
responses, equilibrium profiles for homogeneous and mixed populations, the
divergence trace showing the bound is needed, the collusion (defection)
analysis, and the bits of level information a worker needs.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .effort import EffortFunction, Family, Root, SchemeParams, effort_deriv, effort_eval, solve_deriv_equals
from .errors import AssumptionError, EpsilonRangeError, SuperviseError

__all__ = [
    "WorkerType",
    "PopulationModel",
    "LevelState",
    "EquilibriumProfile",
    "TypeEquilibrium",
    "HeterogeneousEquilibrium",
    "ProficiencyReport",
    "CounterexampleTrace",
    "DefectionAnalysis",
    "min_penalty_hierarchical",
    "expected_penalty_pair",
    "expected_loss_pair",
    "best_response_under_superior",
    "equilibrium_homogeneous",
    "equilibrium_heterogeneous",
    "proficiency_sigma",
    "population_proficiency_check",
    "counterexample_trace",
    "defection_analysis",
    "level_info_bits",
    "profile_to_csv",
    "heterogeneous_to_csv",
    "trace_to_csv",
]


@dataclass(frozen=True)
class WorkerType:
    """A worker class: an effort curve plus an identifying label."""

    effort: EffortFunction
    id: str = "worker"


@dataclass(frozen=True)
class PopulationModel:
    """A finite mixture of worker types with sampling weights."""

    types: tuple[tuple[WorkerType, float], ...]

    def __post_init__(self) -> None:
        if not self.types:
            raise SuperviseError("population must contain at least one type")
        object.__setattr__(self, "types", tuple((wt, float(w)) for wt, w in self.types))
        if any(w < 0 for _, w in self.types):
            raise SuperviseError("population weights must be nonnegative")
        total = math.fsum(w for _, w in self.types)
        if abs(total - 1.0) > 1e-12:
            raise SuperviseError(f"population weights must sum to 1 (got {total!r})")

    @classmethod
    def single(cls, effort: EffortFunction, id: str = "worker") -> "PopulationModel":
        return cls(((WorkerType(effort, id), 1.0),))


class LevelState(NamedTuple):
    level: int
    error: float
    truthful: bool
    clamped: bool = False


@dataclass(frozen=True)
class EquilibriumProfile:
    """Per-level equilibrium errors; level 0 is the supervisor."""

    levels: tuple[LevelState, ...]
    threshold: float

    @property
    def all_truthful(self) -> bool:
        return all(s.truthful for s in self.levels)

    @property
    def max_error(self) -> float:
        return max(s.error for s in self.levels)


@dataclass(frozen=True)
class TypeEquilibrium:
    worker: WorkerType
    weight: float
    sigma: float
    sigma_clamped: bool
    proficient: bool
    levels: tuple[LevelState, ...]


@dataclass(frozen=True)
class HeterogeneousEquilibrium:
    """Per-type equilibrium profiles plus the population proficiency summary."""

    types: tuple[TypeEquilibrium, ...]
    mean_sigma: float
    threshold: float

    @property
    def mean_errors(self) -> tuple[float, ...]:
        """Population-mean error at each level (level 0 = supervisor)."""
        depth = len(self.types[0].levels)
        out = []
        for i in range(depth):
            out.append(math.fsum(t.weight * t.levels[i].error for t in self.types))
        return tuple(out)


@dataclass(frozen=True)
class ProficiencyReport:
    proficient: bool
    mean_sigma: float
    sigmas: tuple[float, ...]


def _require_hierarchical_epsilon(params: SchemeParams) -> float:
    if not (0.0 < params.epsilon < 0.5):
        raise EpsilonRangeError(f"epsilon range: hierarchical scheme needs epsilon in (0, 1/2), got {params.epsilon!r}")
    return params.epsilon


def min_penalty_hierarchical(f: EffortFunction, params: SchemeParams) -> float:
    """Smallest disagreement penalty that keeps best responses below epsilon.

    Equals ``f'(eps) k / (2 eps - 1)``; both factors are negative, so the
    bound is positive and grows as eps shrinks or the task load k grows.
    """
    eps = _require_hierarchical_epsilon(params)
    return effort_deriv(f, eps) * params.k / (2.0 * eps - 1.0)


def expected_penalty_pair(e_u: float, e_w: float, C: float, D: float) -> float:
    """Expected disagreement penalty between error levels e_u and e_w."""
    return e_u * (1.0 - e_w) * C + (1.0 - e_u) * e_w * C + e_u * e_w * D


def expected_loss_pair(f: EffortFunction, e_u: float, e_w: float, params: SchemeParams) -> float:
    """Expected loss of a worker at e_u judged by a superior at e_w."""
    _validate_probability(e_w, "superior error")
    return params.k * effort_eval(f, e_u) + expected_penalty_pair(e_u, e_w, params.require_C(), params.effective_D())


def _validate_probability(x: float, what: str) -> None:
    if not (isinstance(x, (int, float)) and 0.0 <= x <= 1.0):
        raise SuperviseError(f"{what} must lie in [0, 1], got {x!r}")


def best_response_under_superior(f: EffortFunction, e_w: float, params: SchemeParams) -> Root:
    """Loss-minimizing error against a superior playing error e_w.

    Solves ``f'(e) = ((2 e_w - 1) C - e_w D) / k``.  A nonnegative target
    (possible when the superior is wrong more often than not and D is small)
    admits no interior stationary point; the result is then the maximal-error
    corner, flagged as clamped.
    """
    _validate_probability(e_w, "superior error")
    C = params.require_C()
    target = ((2.0 * e_w - 1.0) * C - e_w * params.effective_D()) / params.k
    return solve_deriv_equals(f, target)


def _validate_e0(e0: float, eps: float) -> float:
    if not (isinstance(e0, (int, float)) and 0.0 <= e0 < eps):
        raise SuperviseError(f"supervisor error must lie in [0, epsilon), got {e0!r}")
    return float(e0)


def equilibrium_homogeneous(
    f: EffortFunction, params: SchemeParams, depth: int, e0: float = 0.0
) -> EquilibriumProfile:
    """Top-down equilibrium of a uniform population.

    Level t best-responds to level t-1, starting from the supervisor's error
    e0 at level 0.  A single pass is exact because a worker's loss depends on
    the levels below it only through its own effort term.
    """
    eps = _require_hierarchical_epsilon(params)
    e0 = _validate_e0(e0, eps)
    if not (isinstance(depth, int) and depth >= 1):
        raise SuperviseError(f"depth must be an integer >= 1, got {depth!r}")
    levels = [LevelState(0, e0, e0 < eps, False)]
    e_prev = e0
    for t in range(1, depth + 1):
        r = best_response_under_superior(f, e_prev, params)
        levels.append(LevelState(t, r.value, r.value < eps, r.clamped))
        e_prev = r.value
    return EquilibriumProfile(levels=tuple(levels), threshold=eps)


def proficiency_sigma(f: EffortFunction, params: SchemeParams) -> Root:
    """Error level a worker of this type settles on under a truthful superior.

    The root of ``f'(sigma) = C (2 eps - 1) / k``; the type is proficient for
    the scheme exactly when sigma <= eps.  Solver clamps propagate.
    """
    eps = _require_hierarchical_epsilon(params)
    return solve_deriv_equals(f, params.require_C() * (2.0 * eps - 1.0) / params.k)


def population_proficiency_check(pop: PopulationModel, params: SchemeParams) -> ProficiencyReport:
    """Weighted-mean proficiency gate for mixed populations."""
    sigmas = tuple(proficiency_sigma(wt.effort, params).value for wt, _ in pop.types)
    mean_sigma = math.fsum(w * s for (_, w), s in zip(pop.types, sigmas))
    return ProficiencyReport(proficient=mean_sigma <= params.epsilon, mean_sigma=mean_sigma, sigmas=sigmas)


def equilibrium_heterogeneous(
    pop: PopulationModel, params: SchemeParams, depth: int, e0: float = 0.0
) -> HeterogeneousEquilibrium:
    """Per-type equilibrium when workers are drawn i.i.d. from a mixture.

    Each worker knows only the distribution of its superior, so at level t
    every type best-responds to the population-mean error of level t-1.  The
    population must be proficient on average (weighted mean sigma <= eps);
    otherwise no truthfulness claim holds and the request is rejected.
    Proficient types are guaranteed truthful at every level — the result is
    re-checked and a violation (impossible for valid inputs) raises.
    """
    eps = _require_hierarchical_epsilon(params)
    e0 = _validate_e0(e0, eps)
    if not (isinstance(depth, int) and depth >= 1):
        raise SuperviseError(f"depth must be an integer >= 1, got {depth!r}")

    report = population_proficiency_check(pop, params)
    if not report.proficient:
        raise AssumptionError(
            "population proficiency assumption violated: "
            f"weighted mean sigma {report.mean_sigma!r} exceeds epsilon {eps!r}"
        )
    sigma_roots = [proficiency_sigma(wt.effort, params) for wt, _ in pop.types]

    per_type: list[list[LevelState]] = [[LevelState(0, e0, e0 < eps, False)] for _ in pop.types]
    mean_prev = e0
    for t in range(1, depth + 1):
        errs = []
        for i, (wt, w) in enumerate(pop.types):
            r = best_response_under_superior(wt.effort, mean_prev, params)
            per_type[i].append(LevelState(t, r.value, r.value < eps, r.clamped))
            errs.append(r.value)
        mean_prev = math.fsum(w * e for (_, w), e in zip(pop.types, errs))

    types = tuple(
        TypeEquilibrium(
            worker=wt,
            weight=w,
            sigma=root.value,
            sigma_clamped=root.clamped,
            proficient=root.value <= eps,
            levels=tuple(states),
        )
        for (wt, w), root, states in zip(pop.types, sigma_roots, per_type)
    )
    for te in types:
        if te.proficient and not all(s.truthful for s in te.levels):
            raise SuperviseError(
                f"internal consistency failure: proficient type {te.worker.id!r} "
                "produced an untruthful level"
            )
    return HeterogeneousEquilibrium(types=types, mean_sigma=report.mean_sigma, threshold=eps)


@dataclass(frozen=True)
class CounterexampleTrace:
    """Divergence trace with an undersized penalty.

    With cost ``f(x) = -ln x``, two answers, an exact supervisor, and C below
    the hierarchical bound, the recursion ``e_t = k / ((1 - 2 e_{t-1}) C)``
    gains more than ``delta = a^2 d / (k - a d)`` per step while below eps
    (a = eps (1 - 2 eps), d = k/a - C), so it must cross eps by level
    ``ceil(eps / delta)``.  When C is at or above the bound the gap d is not
    positive: delta and the guaranteed depth are None and the trace simply
    documents that no crossing occurs.
    """

    k: int
    C: float
    epsilon: float
    errors: tuple[float, ...]
    crossing_level: int | None
    delta: float | None
    guaranteed_depth: int | None
    diverged_at: int | None

    @property
    def crossed(self) -> bool:
        return self.crossing_level is not None


def counterexample_trace(params: SchemeParams, max_depth: int) -> CounterexampleTrace:
    """Iterate the undersized-penalty recursion until it crosses epsilon.

    Fixed to the unit SimpleLog cost and two-answer tasks (D = 0), where the
    recursion has the closed form above.  Stops at the first level whose
    error exceeds epsilon, at a divergence (error leaving [0, 1/2)), or at
    max_depth.
    """
    eps = params.epsilon
    if not (0.0 < eps < 0.25):
        raise EpsilonRangeError(f"epsilon range: divergence trace needs epsilon in (0, 1/4), got {eps!r}")
    if params.m != 2 or (params.D is not None and params.D != 0.0):
        raise SuperviseError("divergence trace is defined for two-answer tasks (m=2, D=0)")
    if not (isinstance(max_depth, int) and max_depth >= 1):
        raise SuperviseError(f"max_depth must be an integer >= 1, got {max_depth!r}")
    C = params.require_C()
    k = params.k

    a = eps * (1.0 - 2.0 * eps)
    d = k / a - C  # positive exactly when C is below the hierarchical bound
    if d > 0.0:
        delta: float | None = a * a * d / (k - a * d)
        guaranteed_depth: int | None = math.ceil(eps / delta)
    else:
        delta = None
        guaranteed_depth = None

    errors = [0.0]
    crossing_level: int | None = None
    diverged_at: int | None = None
    for t in range(1, max_depth + 1):
        e_prev = errors[-1]
        denom = (1.0 - 2.0 * e_prev) * C
        e_t = k / denom if denom != 0.0 else math.inf
        errors.append(e_t)
        if not (0.0 <= e_t < 0.5):
            diverged_at = t
        if e_t > eps:
            crossing_level = t
            break
    return CounterexampleTrace(
        k=k,
        C=C,
        epsilon=eps,
        errors=tuple(errors),
        crossing_level=crossing_level,
        delta=delta,
        guaranteed_depth=guaranteed_depth,
        diverged_at=diverged_at,
    )


@dataclass(frozen=True)
class DefectionAnalysis:
    """Collusion check: does a constant agreed answer beat honest work?

    In a colluding chain of N workers over shared tasks, playing the agreed
    constant costs each worker k C / N (only the boundary with the honest
    supervisor disagrees), while deviating back to truth costs (N - k) C / N.
    Defection wins when N > 2k, the two tie at N = 2k, and honesty wins below.
    """

    N: int
    k: int
    C: float
    defect_cost: float
    deviate_cost: float
    verdict: str  # "defect" | "indifferent" | "truthful-compatible"


def defection_analysis(N: int, k: int, C: float) -> DefectionAnalysis:
    if not (isinstance(N, int) and N >= 1):
        raise SuperviseError(f"N must be an integer >= 1, got {N!r}")
    if not (isinstance(k, int) and k >= 1):
        raise SuperviseError(f"k must be an integer >= 1, got {k!r}")
    if not (isinstance(C, (int, float)) and math.isfinite(C) and C > 0):
        raise SuperviseError(f"C must be a positive finite real, got {C!r}")
    defect_cost = k * C / N
    deviate_cost = (N - k) * C / N
    if N > 2 * k:
        verdict = "defect"
    elif N == 2 * k:
        verdict = "indifferent"
    else:
        verdict = "truthful-compatible"
    return DefectionAnalysis(N=N, k=k, C=float(C), defect_cost=defect_cost, deviate_cost=deviate_cost, verdict=verdict)


def level_info_bits(N: int, k: int) -> int:
    """Bits a worker needs to learn its level in an N-task, branching-k tree.

    The tree has ``ceil(log_k N)`` worker levels, so naming one takes the
    ceiling of log2 of that (and 0 bits when there is at most one level).
    Computed with exact integer arithmetic; no float logs.
    """
    if not (isinstance(N, int) and N >= 1):
        raise SuperviseError(f"N must be an integer >= 1, got {N!r}")
    if not (isinstance(k, int) and k >= 2):
        raise SuperviseError(f"k must be an integer >= 2, got {k!r}")
    levels = 0
    reach = 1
    while reach < N:
        reach *= k
        levels += 1
    levels = max(1, levels)
    return (levels - 1).bit_length()


def profile_to_csv(profile: EquilibriumProfile) -> str:
    """Serialize a single profile as ``level,error,truthful`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "error", "truthful"])
    for s in profile.levels:
        w.writerow([s.level, repr(s.error), "true" if s.truthful else "false"])
    return buf.getvalue()


def heterogeneous_to_csv(eq: HeterogeneousEquilibrium) -> str:
    """Per-type profiles as ``type,level,error,truthful`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["type", "level", "error", "truthful"])
    for te in eq.types:
        for s in te.levels:
            w.writerow([te.worker.id, s.level, repr(s.error), "true" if s.truthful else "false"])
    return buf.getvalue()


def trace_to_csv(trace: CounterexampleTrace) -> str:
    """Divergence trace as ``level,error,truthful`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["level", "error", "truthful"])
    for level, e in enumerate(trace.errors):
        w.writerow([level, repr(e), "true" if e < trace.epsilon else "false"])
    return buf.getvalue()
