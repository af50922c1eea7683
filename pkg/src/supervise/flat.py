"""Flat verification scheme: one supervisor spot-checks every worker.

Each worker is checked independently with probability ``p`` and pays the full
disagreement penalty when checked and wrong, so the expected loss at error
level e is ``k f(e) + e p C`` (or ``k f(v) + v p c`` for variance v in the
quantitative version).  The scheme induces error below epsilon only when p
strictly exceeds ``(-f'(eps)) k / C``; that bound can exceed 1, in which case
no verification probability works and the scheme is infeasible.  The
supervisor's workload is p per worker, hence p * |U| overall — linear in the
crowd, which is exactly what the hierarchical schemes exist to avoid.
"""

from __future__ import annotations

from dataclasses import dataclass

from .effort import EffortFunction, Root, SchemeParams, effort_deriv, effort_eval, solve_deriv_equals
from .errors import NoIncentiveError, SuperviseError

__all__ = [
    "FlatBound",
    "FlatParams",
    "min_verification_probability_binary",
    "min_verification_probability_quant",
    "expected_loss_flat",
    "expected_loss_flat_quant",
    "best_response_flat",
    "best_response_flat_quant",
]


@dataclass(frozen=True)
class FlatBound:
    """Strict lower bound on the verification probability, with feasibility.

    ``feasible`` means the bound fits inside [0, 1].  Callers still need a
    strictly larger p; at a boundary-feasible bound of exactly 1 no margin is
    left.
    """

    bound: float
    feasible: bool

    def __float__(self) -> float:
        return self.bound


@dataclass(frozen=True)
class FlatParams:
    """A concrete flat-scheme configuration over ``n_workers`` workers."""

    params: SchemeParams
    p: float
    n_workers: int

    def __post_init__(self) -> None:
        if not (0.0 <= self.p <= 1.0):
            raise SuperviseError(f"verification probability must lie in [0, 1], got {self.p!r}")
        if not (isinstance(self.n_workers, int) and self.n_workers >= 0):
            raise SuperviseError(f"n_workers must be a nonnegative integer, got {self.n_workers!r}")

    @property
    def supervisor_workload(self) -> float:
        # expected number of checks per round; reported, never hidden
        return self.p * self.n_workers


def _bound(f: EffortFunction, eps: float, k: int, penalty: float) -> FlatBound:
    b = (-effort_deriv(f, eps)) * k / penalty
    return FlatBound(bound=b, feasible=b <= 1.0)


def min_verification_probability_binary(f: EffortFunction, params: SchemeParams) -> FlatBound:
    """p must strictly exceed ``(-f'(eps)) k / C`` to push errors below eps."""
    return _bound(f, params.epsilon, params.k, params.require_C())


def min_verification_probability_quant(f: EffortFunction, params: SchemeParams) -> FlatBound:
    """Quantitative analogue with variance threshold eps and weight c."""
    return _bound(f, params.epsilon, params.k, params.require_c())


def expected_loss_flat(f: EffortFunction, e: float, p: float, params: SchemeParams) -> float:
    """Expected loss ``k f(e) + e p C`` of a worker holding error e."""
    return params.k * effort_eval(f, e) + e * p * params.require_C()


def expected_loss_flat_quant(f: EffortFunction, v: float, p: float, params: SchemeParams) -> float:
    """Expected loss ``k f(v) + v p c`` of a worker holding variance v."""
    return params.k * effort_eval(f, v) + v * p * params.require_c()


def best_response_flat(f: EffortFunction, p: float, params: SchemeParams) -> Root:
    """Error level minimizing the flat loss: the root of ``f'(e) = -pC/k``.

    With SimpleLog this is k/(pC), clamped to the domain.  p = 0 removes the
    incentive entirely (the loss is minimized at maximal error) and is
    rejected.
    """
    if p <= 0.0:
        raise NoIncentiveError("no incentive: verification probability must be positive")
    return solve_deriv_equals(f, -p * params.require_C() / params.k)


def best_response_flat_quant(f: EffortFunction, p: float, params: SchemeParams) -> Root:
    """Variance minimizing the quantitative flat loss: root of ``f'(v) = -pc/k``."""
    if p <= 0.0:
        raise NoIncentiveError("no incentive: verification probability must be positive")
    return solve_deriv_equals(f, -p * params.require_c() / params.k)
