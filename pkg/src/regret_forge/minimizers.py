"""Per-infoset strategy rules and discount schedules.

Every rule maps a vector of cumulative (or regret-like) values to a
probability vector over actions.  All functions are pure and safe for
concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

E = math.e


class NumericError(RuntimeError):
    """A numeric computation failed (NaN/Inf or a solver did not converge)."""


@dataclass(frozen=True)
class DiscountSchedule:
    """Per-iteration multipliers applied to the accumulators.

    After iteration t, positive regrets are multiplied by t^alpha/(t^alpha+1),
    negative regrets by t^beta/(t^beta+1), and average-strategy numerators by
    (t/(t+1))^gamma.  ``alpha = +inf`` leaves positives untouched;
    ``beta = -inf`` zeroes negatives (the floor used by the plus variants).
    ``beta = +inf`` leaves negatives untouched, which is how the undiscounted
    configuration is expressed.
    """

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self):
        if math.isnan(self.alpha) or self.alpha < 0:
            raise ValueError(f"alpha must be >= 0 or +inf, got {self.alpha}")
        if math.isnan(self.beta) or self.beta > self.alpha:
            raise ValueError(
                f"beta ({self.beta}) must not exceed alpha ({self.alpha})")
        if math.isnan(self.gamma) or self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")

    def multipliers(self, t: int) -> tuple[float, float, float]:
        return discount_multipliers(t, self)

    @property
    def is_identity(self) -> bool:
        return (math.isinf(self.alpha) and self.alpha > 0
                and math.isinf(self.beta) and self.beta > 0
                and self.gamma == 0.0)


NO_DISCOUNT = DiscountSchedule(math.inf, math.inf, 0.0)


def _power_multiplier(t: int, expo: float) -> float:
    if math.isinf(expo):
        return 1.0 if expo > 0 else 0.0
    try:
        te = float(t) ** expo
    except OverflowError:
        return 1.0
    if math.isinf(te):
        return 1.0
    return te / (te + 1.0)


def discount_multipliers(t: int, schedule: DiscountSchedule) -> tuple[float, float, float]:
    """(positive, negative, average-strategy) multipliers for iteration t >= 1."""
    if t < 1:
        raise ValueError(f"iteration must be >= 1, got {t}")
    pos = _power_multiplier(t, schedule.alpha)
    neg = _power_multiplier(t, schedule.beta)
    avg = (t / (t + 1.0)) ** schedule.gamma
    return pos, neg, avg


def rm_strategy(regrets: np.ndarray) -> np.ndarray:
    """Regret matching: probabilities proportional to positive regret.

    Falls back to uniform when no action has positive regret.
    """
    r = np.asarray(regrets, dtype=np.float64)
    if r.size == 0:
        raise ValueError("regret vector must be non-empty")
    if not np.all(np.isfinite(r)):
        raise NumericError(f"non-finite regrets: {r}")
    pos = np.maximum(r, 0.0)
    total = float(pos.sum())
    if total > 0.0:
        return pos / total
    return np.full(r.size, 1.0 / r.size)


def rm_plus_update(q_prev: np.ndarray, r_inst: np.ndarray) -> np.ndarray:
    """One regret-like update: elementwise max(0, q + r)."""
    q = np.asarray(q_prev, dtype=np.float64)
    if np.any(q < 0):
        raise ValueError("regret-like values must be non-negative")
    return np.maximum(q + np.asarray(r_inst, dtype=np.float64), 0.0)


def optimistic_regret(cumulative: np.ndarray, last_inst: np.ndarray | None) -> np.ndarray:
    """Cumulative regret with the latest instantaneous regret counted twice."""
    if last_inst is None:
        raise ValueError("optimistic rule requires the last instantaneous regret")
    return np.asarray(cumulative, dtype=np.float64) + np.asarray(last_inst, dtype=np.float64)


# ---------------------------------------------------------------------------
# NormalHedge

NH_TOL = 1e-12
NH_MAX_ITER = 200
_NH_BRACKET_EXPANSIONS = 400


def _nh_lhs(pos_sq_half: list, c: float) -> float:
    """mean(exp(pos^2 / (2c))) computed without overflow.

    When the largest exponent alone already forces the mean above e, return
    +inf rather than evaluating exp near the overflow limit.  Scalar math:
    the vectors are tiny and this sits inside a bisection loop.
    """
    total = 0.0
    for q in pos_sq_half:
        expo = q / c
        if expo > 700.0:
            return math.inf
        total += math.exp(expo)
    return total / len(pos_sq_half)


def nh_scale(regrets, tol: float = NH_TOL, max_iter: int = NH_MAX_ITER) -> float:
    """Solve mean_a exp(R+^2(a) / (2 c)) = e for c > 0 by bisection.

    The left side is strictly decreasing in c wherever some positive regret
    exists, so a sign-changing bracket pins the root.  The initial bracket is
    [1e-12, 1], expanded outward by factors of 10 until it straddles e.
    """
    pos = [max(float(x), 0.0) for x in regrets]
    if max(pos) <= 0.0:
        raise ValueError("no positive regret: the scale equation has no root")
    pos_sq_half = [x * x * 0.5 for x in pos]

    lo, hi = 1e-12, 1.0
    for _ in range(_NH_BRACKET_EXPANSIONS):
        if _nh_lhs(pos_sq_half, hi) < E:
            break
        hi *= 10.0
    else:
        raise NumericError(f"NH bracket expansion failed upward (hi={hi!r})")
    for _ in range(_NH_BRACKET_EXPANSIONS):
        if _nh_lhs(pos_sq_half, lo) > E:
            break
        lo /= 10.0
    else:
        raise NumericError(f"NH bracket expansion failed downward (lo={lo!r})")

    c = 0.5 * (lo + hi)
    for _ in range(max_iter):
        c = 0.5 * (lo + hi)
        val = _nh_lhs(pos_sq_half, c)
        if abs(val - E) <= tol:
            return c
        if val > E:
            lo = c
        else:
            hi = c
    residual = _nh_lhs(pos_sq_half, c) - E
    raise NumericError(
        f"NH bisection did not converge: c={c!r}, residual={residual!r}, "
        f"bracket=({lo!r}, {hi!r}), regrets={list(regrets)}")


def nh_strategy(regrets: np.ndarray) -> np.ndarray:
    """NormalHedge: weights (R+/c) exp(R+^2/(2c)), c from :func:`nh_scale`.

    Uniform when no regret is positive (the scale equation is degenerate
    there, mirroring regret matching's fallback); actions with zero positive
    regret receive probability zero otherwise.
    """
    r = np.asarray(regrets, dtype=np.float64)
    if r.size == 0:
        raise ValueError("regret vector must be non-empty")
    if not np.all(np.isfinite(r)):
        raise NumericError(f"non-finite regrets: {r}")
    pos = np.maximum(r, 0.0)
    if float(pos.max()) <= 0.0:
        return np.full(r.size, 1.0 / r.size)
    c = nh_scale(pos)
    weights = (pos / c) * np.exp(pos * pos / (2.0 * c))
    return weights / float(weights.sum())
