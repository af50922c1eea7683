"""Effort-cost models and the first-order-condition solver.

An effort function maps the quality a worker aims for (a binary error
probability, or an answer variance in the quantitative setting) to the cost of
achieving it.  Every family here is finite, positive, strictly decreasing and
strictly convex on its domain, so the derivative is strictly increasing and
negative and equations of the form ``f'(e) = target`` have at most one
solution.  That solution is what every best-response operation in the package
reduces to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import EffortDomainError, EpsilonRangeError, InvalidTargetError, SuperviseError

__all__ = [
    "Family",
    "EffortFunction",
    "Root",
    "SchemeParams",
    "effort_eval",
    "effort_deriv",
    "solve_deriv_equals",
]


class Family(str, Enum):
    """Supported effort-cost families."""

    SIMPLE_LOG = "simplelog"  # f(e) = -alpha * ln(e)            on (0, 1]
    BOUNDARY_LOG = "boundarylog"  # f(e) = alpha * ln(1/(2e))^2  on (0, 1/2]
    INVERSE_POWER = "inversepower"  # f(v) = alpha / v           on (0, inf)


@dataclass(frozen=True)
class EffortFunction:
    """One effort-cost curve: a family plus a positive scale ``alpha``."""

    family: Family
    alpha: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if not (isinstance(self.alpha, (int, float)) and math.isfinite(self.alpha) and self.alpha > 0):
            raise SuperviseError(f"effort scale must be a positive finite real, got {self.alpha!r}")
        object.__setattr__(self, "alpha", float(self.alpha))

    @property
    def domain_lo(self) -> float:
        # open lower endpoint for every family
        return 0.0

    @property
    def domain_hi(self) -> float:
        if self.family is Family.SIMPLE_LOG:
            return 1.0
        if self.family is Family.BOUNDARY_LOG:
            return 0.5
        return math.inf

    @classmethod
    def simple_log(cls, alpha: float = 1.0) -> "EffortFunction":
        return cls(Family.SIMPLE_LOG, alpha)

    @classmethod
    def boundary_log(cls, alpha: float = 1.0) -> "EffortFunction":
        return cls(Family.BOUNDARY_LOG, alpha)

    @classmethod
    def inverse_power(cls, alpha: float = 1.0) -> "EffortFunction":
        return cls(Family.INVERSE_POWER, alpha)

    def to_config(self) -> dict:
        """JSON-friendly form used inside CLI config files."""
        return {"family": self.family.value, "alpha": self.alpha}

    @classmethod
    def from_config(cls, obj: dict) -> "EffortFunction":
        try:
            return cls(Family(str(obj["family"]).lower()), float(obj["alpha"]))
        except (KeyError, TypeError) as exc:
            raise SuperviseError(f"effort config needs 'family' and 'alpha': {obj!r}") from exc
        except ValueError as exc:
            raise SuperviseError(str(exc)) from exc


@dataclass(frozen=True)
class Root:
    """Solver output: the root value plus clamp markers.

    ``clamped_lo``/``clamped_hi`` are set when the target lies outside the
    range of the derivative and the result was pinned to a domain corner; a
    clamped value is a boundary report, not a stationary point, and the
    analytic guarantees downstream do not apply to it.
    """

    value: float
    clamped_lo: bool = False
    clamped_hi: bool = False

    @property
    def clamped(self) -> bool:
        return self.clamped_lo or self.clamped_hi

    def __float__(self) -> float:
        return self.value


def _check_domain(f: EffortFunction, e: float, what: str = "effort") -> float:
    if not (isinstance(e, (int, float)) and math.isfinite(e)):
        raise EffortDomainError(f"effort domain: {what} must be a finite real, got {e!r}")
    e = float(e)
    # lower endpoint open, upper endpoint closed (never reached when infinite)
    if not (f.domain_lo < e <= f.domain_hi):
        raise EffortDomainError(
            f"effort domain: {what}={e!r} outside ({f.domain_lo}, {f.domain_hi}] for {f.family.value}"
        )
    return e


def effort_eval(f: EffortFunction, e: float) -> float:
    """Cost of holding error/variance level ``e``."""
    e = _check_domain(f, e)
    if f.family is Family.SIMPLE_LOG:
        return -f.alpha * math.log(e)
    if f.family is Family.BOUNDARY_LOG:
        return f.alpha * math.log(0.5 / e) ** 2
    return f.alpha / e


def effort_deriv(f: EffortFunction, e: float) -> float:
    """First derivative of the cost at ``e``; strictly increasing and negative."""
    e = _check_domain(f, e)
    if f.family is Family.SIMPLE_LOG:
        return -f.alpha / e
    if f.family is Family.BOUNDARY_LOG:
        return -2.0 * f.alpha * math.log(0.5 / e) / e
    return -f.alpha / (e * e)


def _lambertw_nonneg(y: float) -> float:
    """Principal Lambert W on [0, inf): the w >= 0 with w * exp(w) = y.

    Halley iteration from a logarithmic seed; converges to machine precision
    in a handful of steps for the whole nonnegative range.
    """
    if y == 0.0:
        return 0.0
    if y > math.e:
        w = math.log(y)
        w -= math.log(w)
    else:
        w = math.log1p(y) * 0.7
    for _ in range(64):
        ew = math.exp(w)
        err = w * ew - y
        denom = ew * (w + 1.0) - (w + 2.0) * err / (2.0 * (w + 1.0))
        step = err / denom
        w -= step
        if abs(step) <= 1e-16 * (1.0 + abs(w)):
            break
    return w


def solve_deriv_equals(f: EffortFunction, target: float) -> Root:
    """Solve ``f'(e) = target`` for ``e`` in the effort domain.

    Uses the exact inverse of each family's derivative (the BoundaryLog
    inverse goes through Lambert W), so the result is accurate to floating
    precision — well inside the 1e-12 absolute contract.  A target at or
    beyond the supremum of ``f'`` cannot be met: if the boundary value itself
    attains the target the boundary is returned as a true root, otherwise the
    result is clamped there and flagged.
    """
    if not (isinstance(target, (int, float)) and math.isfinite(target)):
        raise InvalidTargetError(f"invalid target: {target!r}")
    target = float(target)

    if f.family is Family.SIMPLE_LOG:
        # f'(e) = -alpha/e, range (-inf, -alpha] on (0, 1]
        if target == -f.alpha:
            return Root(1.0)
        if target > -f.alpha:
            return Root(1.0, clamped_hi=True)
        return Root(-f.alpha / target)

    if f.family is Family.BOUNDARY_LOG:
        # f'(e) = -2 alpha ln(1/(2e))/e, range (-inf, 0] on (0, 1/2]
        if target == 0.0:
            return Root(0.5)
        if target > 0.0:
            return Root(0.5, clamped_hi=True)
        # substitute u = 1/(2e):  u ln u = -target/(4 alpha)  =>  ln u = W(y)
        y = -target / (4.0 * f.alpha)
        w = _lambertw_nonneg(y)
        return Root(w / (2.0 * y))

    # inverse power: f'(v) = -alpha/v^2, range (-inf, 0) on (0, inf)
    if target >= 0.0:
        return Root(math.inf, clamped_hi=True)
    return Root(math.sqrt(f.alpha / -target))


@dataclass(frozen=True)
class SchemeParams:
    """Shared scheme parameters.

    ``k`` is the task load per worker, ``C`` the binary disagreement penalty,
    ``c`` the quadratic penalty weight, ``epsilon`` the truthfulness
    threshold, ``m`` the answer-set size, and ``D`` the both-wrong
    disagreement penalty.  ``D`` left unset defaults to C*(m-2)/(m-1), the
    value implied by independent uniformly-wrong answers (zero when m=2).

    The hierarchical operations additionally require epsilon < 1/2; the flat
    and quantitative ones do not (a variance threshold may be any positive
    real), so that check lives in the operations, not here.
    """

    k: int
    epsilon: float
    C: float | None = None
    c: float | None = None
    m: int = 2
    D: float | None = None

    def __post_init__(self) -> None:
        if not (isinstance(self.k, int) and self.k >= 1):
            raise SuperviseError(f"k must be an integer >= 1, got {self.k!r}")
        if not (isinstance(self.epsilon, (int, float)) and math.isfinite(self.epsilon) and self.epsilon > 0):
            raise EpsilonRangeError(f"epsilon range: need epsilon > 0, got {self.epsilon!r}")
        object.__setattr__(self, "epsilon", float(self.epsilon))
        for name in ("C", "c"):
            v = getattr(self, name)
            if v is not None:
                if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                    raise SuperviseError(f"{name} must be a positive finite real, got {v!r}")
                object.__setattr__(self, name, float(v))
        if not (isinstance(self.m, int) and self.m >= 2):
            raise SuperviseError(f"m must be an integer >= 2, got {self.m!r}")
        if self.D is not None:
            if self.C is None:
                raise SuperviseError("D is only meaningful alongside C")
            if not (isinstance(self.D, (int, float)) and math.isfinite(self.D) and 0.0 <= self.D <= self.C):
                raise SuperviseError(f"D must lie in [0, C]={[0, self.C]}, got {self.D!r}")
            object.__setattr__(self, "D", float(self.D))

    def require_C(self) -> float:
        if self.C is None:
            raise SuperviseError("binary penalty C is required for this operation")
        return self.C

    def require_c(self) -> float:
        if self.c is None:
            raise SuperviseError("quadratic penalty weight c is required for this operation")
        return self.c

    def effective_D(self) -> float:
        """The both-wrong penalty in force: explicit D, else C*(m-2)/(m-1)."""
        if self.D is not None:
            return self.D
        return self.require_C() * (self.m - 2) / (self.m - 1)
