"""Hierarchical supervision with quantitative (real-valued) answers.

Answers carry a per-worker bias b and variance sigma^2 around the true value,
and a worker pays ``c (x - y)^2`` against its superior's answer y on the
shared task.  Expanding the square for independent answers,

    E[penalty] = c (sigma_u^2 + b_u^2 - 2 b_u b_w + sigma_w^2 + b_w^2),

so the part a worker controls is additively separable from everything the
superior does: with an unbiased population the best-response variance solves
``f'(v) = -c / k`` regardless of the superior's precision, and equilibrium
profiles are exactly constant across levels.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .effort import EffortFunction, Root, solve_deriv_equals
from .errors import AssumptionError, SuperviseError

__all__ = [
    "QuantWorkerType",
    "QuantLevel",
    "TypeQuantProfile",
    "QuantEquilibrium",
    "expected_penalty_quant",
    "best_response_quant",
    "quant_equilibrium",
    "quant_to_csv",
]

BIAS_TOLERANCE = 1e-9


@dataclass(frozen=True)
class QuantWorkerType:
    """A worker class: effort curve over variance, plus its best-response bias."""

    effort: EffortFunction
    bias: float = 0.0
    id: str = "worker"


class QuantLevel(NamedTuple):
    level: int
    vstar: float
    truthful: bool


@dataclass(frozen=True)
class TypeQuantProfile:
    worker: QuantWorkerType
    weight: float
    vstar: float
    clamped: bool
    truthful: bool
    levels: tuple[QuantLevel, ...]


@dataclass(frozen=True)
class QuantEquilibrium:
    types: tuple[TypeQuantProfile, ...]
    threshold: float

    @property
    def all_truthful(self) -> bool:
        return all(t.truthful for t in self.types)


def expected_penalty_quant(sigma_u: float, b_u: float, sigma_w: float, b_w: float, c: float) -> float:
    """Expected quadratic penalty between two independent biased answers."""
    for name, v in (("sigma_u", sigma_u), ("sigma_w", sigma_w)):
        if v < 0:
            raise SuperviseError(f"{name} must be nonnegative, got {v!r}")
    if c <= 0:
        raise SuperviseError(f"penalty weight c must be positive, got {c!r}")
    return c * (sigma_u**2 + b_u**2 - 2.0 * b_u * b_w + sigma_w**2 + b_w**2)


def best_response_quant(f: EffortFunction, k: int, c: float) -> Root:
    """Variance minimizing ``k f(v) + c (v + const)``: the root of f'(v) = -c/k.

    The superior's variance and bias only shift the loss by a constant, so
    they are not arguments.  With the inverse-power cost the root is
    ``sqrt(alpha k / c)``.
    """
    if not (isinstance(k, int) and k >= 1):
        raise SuperviseError(f"k must be an integer >= 1, got {k!r}")
    if not (isinstance(c, (int, float)) and math.isfinite(c) and c > 0):
        raise SuperviseError(f"penalty weight c must be positive, got {c!r}")
    return solve_deriv_equals(f, -c / k)


def quant_equilibrium(
    pop: Sequence[tuple[QuantWorkerType, float]], k: int, c: float, epsilon: float, depth: int
) -> QuantEquilibrium:
    """Per-type equilibrium of the quantitative hierarchy.

    Requires the population-weighted mean best-response bias to vanish
    (within 1e-9): a net bias would let workers trade variance against bias
    matching and the separability argument above breaks down.  Each type's
    profile is constant in the level by construction — the same root is
    reported at every depth, exactly.
    """
    pop = tuple((wt, float(w)) for wt, w in pop)
    if not pop:
        raise SuperviseError("population must contain at least one type")
    if any(w < 0 for _, w in pop):
        raise SuperviseError("population weights must be nonnegative")
    total = math.fsum(w for _, w in pop)
    if abs(total - 1.0) > 1e-12:
        raise SuperviseError(f"population weights must sum to 1 (got {total!r})")
    if not (isinstance(epsilon, (int, float)) and math.isfinite(epsilon) and epsilon > 0):
        raise SuperviseError(f"variance threshold must be positive, got {epsilon!r}")
    if not (isinstance(depth, int) and depth >= 1):
        raise SuperviseError(f"depth must be an integer >= 1, got {depth!r}")

    mean_bias = math.fsum(w * wt.bias for wt, w in pop)
    if abs(mean_bias) > BIAS_TOLERANCE:
        raise AssumptionError(
            f"unbiased-population assumption violated: weighted mean bias {mean_bias!r}"
        )

    types = []
    for wt, w in pop:
        root = best_response_quant(wt.effort, k, c)
        truthful = root.value < epsilon
        levels = tuple(QuantLevel(t, root.value, truthful) for t in range(1, depth + 1))
        types.append(
            TypeQuantProfile(
                worker=wt, weight=w, vstar=root.value, clamped=root.clamped, truthful=truthful, levels=levels
            )
        )
    return QuantEquilibrium(types=tuple(types), threshold=float(epsilon))


def quant_to_csv(eq: QuantEquilibrium) -> str:
    """Profiles as ``type,level,vstar,truthful`` rows."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["type", "level", "vstar", "truthful"])
    for tp in eq.types:
        for s in tp.levels:
            w.writerow([tp.worker.id, s.level, repr(s.vstar), "true" if s.truthful else "false"])
    return buf.getvalue()
