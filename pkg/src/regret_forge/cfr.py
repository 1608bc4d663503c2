"""Full-traversal CFR with configurable discounting and averaging.

One iteration is: player 1's traversal and regret update, player 2's (with
strategies recomputed in between under alternating updates), then the
end-of-iteration discount multipliers on the accumulators.  CFR, CFR+, LCFR,
LCFR+ and the discounted family are all parameterizations of this loop.

The traversal is vectorized over the flattened tree: reach probabilities are
pushed down and expected values pulled up one depth level at a time, and all
per-infoset accumulation happens through bincounts over (infoset, action)
slots.  A run owns its tables and is single-threaded; separate runs share
nothing mutable and may proceed concurrently.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .evaluate import ConvergenceRecord, IterateSummary, exploitability_parts
from .flat import FlatGame, build_flat
from .games.model import Game, P1, P2, StrategyProfile
from .minimizers import (
    DiscountSchedule,
    NO_DISCOUNT,
    NumericError,
    nh_strategy,
)

MINIMIZERS = ("rm", "rm+", "nh")


@dataclass(frozen=True)
class SolveConfig:
    """Full specification of one solve run."""

    minimizer: str = "rm"
    optimistic: bool = False
    schedule: DiscountSchedule = NO_DISCOUNT
    iterations: int = 8192
    eval_every: str | int = "pow2"
    update_mode: str = "alternating"  # or "simultaneous"
    evaluate: bool = True
    check_numerics: bool = True
    track_raw_regret: bool = False
    track_norm_regret: bool = False
    track_value_sum: bool = False
    track_pure_switch: bool = False
    label: str = ""

    def __post_init__(self):
        if self.minimizer not in MINIMIZERS:
            raise ValueError(
                f"unknown minimizer {self.minimizer!r}; expected one of {MINIMIZERS}")
        if self.update_mode not in ("alternating", "simultaneous"):
            raise ValueError(f"unknown update mode {self.update_mode!r}")
        if self.iterations < 1:
            raise ValueError("iteration budget must be >= 1")
        if self.minimizer == "rm+" and self.schedule.beta != -math.inf:
            raise ValueError(
                "the rm+ minimizer floors regrets at zero, which requires "
                f"beta = -inf (got beta={self.schedule.beta})")
        if isinstance(self.eval_every, int) and self.eval_every < 1:
            raise ValueError("eval_every must be 'pow2' or a positive integer")


# Preset name -> exact parameter tuple.
PRESETS: dict[str, SolveConfig] = {
    "cfr": SolveConfig(minimizer="rm", schedule=NO_DISCOUNT, label="cfr"),
    "cfr+": SolveConfig(minimizer="rm+",
                        schedule=DiscountSchedule(math.inf, -math.inf, 2.0),
                        label="cfr+"),
    "lcfr": SolveConfig(minimizer="rm",
                        schedule=DiscountSchedule(1.0, 1.0, 1.0), label="lcfr"),
    "lcfr+": SolveConfig(minimizer="rm+",
                         schedule=DiscountSchedule(1.0, -math.inf, 1.0),
                         label="lcfr+"),
    "dcfr": SolveConfig(minimizer="rm",
                        schedule=DiscountSchedule(1.5, 0.0, 2.0), label="dcfr"),
    "dcfr-prune": SolveConfig(minimizer="rm",
                              schedule=DiscountSchedule(1.5, 0.5, 2.0),
                              label="dcfr-prune"),
}


def preset_config(name: str, **overrides) -> SolveConfig:
    if name not in PRESETS:
        raise ValueError(
            f"unknown preset {name!r}; valid presets: {', '.join(PRESETS)}")
    return replace(PRESETS[name], **overrides)


def checkpoint_iterations(total: int, eval_every: str | int) -> list[int]:
    """Scheduled evaluation iterations: powers of two (or every N) plus the end."""
    if eval_every == "pow2":
        points = set()
        k = 1
        while k <= total:
            points.add(k)
            k *= 2
    else:
        step = int(eval_every)
        points = set(range(step, total + 1, step))
    points.add(total)
    return sorted(points)


class RegretTables:
    """Flat accumulators over (infoset, action) slots for one run."""

    def __init__(self, flat: FlatGame, config: SolveConfig):
        n = flat.n_ia
        self.regret = np.zeros(n)
        self.strat_sum = np.zeros(n)
        self.last_inst = np.zeros(n) if config.optimistic else None
        self.raw_regret = np.zeros(n) if config.track_raw_regret else None
        self.norm_regret = np.zeros(n) if config.track_norm_regret else None


class CfrRun:
    """One solve in progress; create, then call :meth:`run` or :meth:`iterate`."""

    def __init__(self, game: Game, config: SolveConfig, flat: FlatGame | None = None):
        self.game = game
        self.config = config
        self.flat = flat if flat is not None else build_flat(game)
        self.tables = RegretTables(self.flat, config)
        self.t = 0
        self.nodes_touched = 0
        self.value_p1_sum = 0.0
        self.pure_switch_iteration: int | None = None
        self.records: list[ConvergenceRecord] = []
        self._start = time.perf_counter()
        f = self.flat
        n = f.n_nodes
        # reusable traversal workspaces; rows are (own, external) so the
        # level sweeps gather both reach vectors with one fancy index
        self._w = np.empty((2, n))
        self._w_edge = np.empty(n)
        self._reach = np.empty((2, n))
        self._values = np.empty(n)

    # -- strategy computation ------------------------------------------------

    def current_strategies(self) -> np.ndarray:
        """Strategy probabilities for every (infoset, action) slot."""
        f = self.flat
        base = self.tables.regret
        if self.config.optimistic:
            base = base + self.tables.last_inst
        pos = np.maximum(base, 0.0)
        if self.config.minimizer == "nh":
            return self._nh_strategies(pos)
        sums = np.bincount(f.ia_iset, weights=pos, minlength=f.n_isets)
        denom = sums[f.ia_iset]
        out = f.uniform_ia.copy()
        np.divide(pos, denom, out=out, where=denom > 0.0)
        return out

    def _nh_strategies(self, pos: np.ndarray) -> np.ndarray:
        f = self.flat
        out = np.empty(f.n_ia)
        for i in range(f.n_isets):
            s = int(f.iset_start[i])
            e = s + int(f.iset_size[i])
            out[s:e] = nh_strategy(pos[s:e])
        return out

    def current_profile(self) -> StrategyProfile:
        p1, p2 = self.flat.profile_from_ia(self.current_strategies())
        return StrategyProfile(p1, p2)

    def average_profile(self) -> StrategyProfile:
        """Weighted average strategy; uniform at never-reached infosets."""
        f = self.flat
        sums = np.bincount(f.ia_iset, weights=self.tables.strat_sum,
                           minlength=f.n_isets)
        denom = sums[f.ia_iset]
        avg = f.uniform_ia.copy()
        np.divide(self.tables.strat_sum, denom, out=avg, where=denom > 0.0)
        p1, p2 = f.profile_from_ia(avg)
        return StrategyProfile(p1, p2)

    # -- traversal -----------------------------------------------------------

    def _update(self, player: int, sigma: np.ndarray) -> float:
        """One traversal accumulating ``player``'s regrets and averages.

        Adds opponent-and-chance-weighted instantaneous regrets (the
        unnormalized counterfactual form) and own-reach-weighted strategy
        contributions.  Returns the root expected value for player 1 under
        the traversed profile.
        """
        f = self.flat
        tb = self.tables
        opp = 1 - player
        w, w_edge = self._w, self._w_edge
        reach = self._reach
        v = self._values

        w[0].fill(1.0)
        w[0, f.edge_child[player]] = sigma[f.edge_ia[player]]
        np.copyto(w[1], f.inc_prob)
        w[1, f.edge_child[opp]] = sigma[f.edge_ia[opp]]
        np.multiply(w[0], w[1], out=w_edge)

        reach[:, 0] = 1.0
        for (s, e), par in zip(f.levels[1:], f.level_parents[1:]):
            reach[:, s:e] = reach[:, par] * w[:, s:e]
        reach_own, reach_ext = reach[0], reach[1]

        np.copyto(v, f.payoff)
        for (s, e), par in zip(reversed(f.levels[1:]),
                               reversed(f.level_parents[1:])):
            acc = np.bincount(par, weights=v[s:e] * w_edge[s:e])
            v[:acc.size] += acc

        sign = 1.0 if player == P1 else -1.0
        child = f.edge_child[player]
        par = f.edge_parent[player]
        ia = f.edge_ia[player]
        cfv = np.bincount(ia, weights=reach_ext[par] * v[child] * sign,
                          minlength=f.n_ia)
        viset = np.bincount(f.ia_iset, weights=sigma * cfv, minlength=f.n_isets)
        r_add = cfv - viset[f.ia_iset]

        tb.regret += r_add
        if tb.last_inst is not None:
            slots = f.ia_of_player[player]
            tb.last_inst[slots] = r_add[slots]
        if tb.raw_regret is not None:
            tb.raw_regret += r_add
        if tb.norm_regret is not None:
            dec = f.dec_nodes[player]
            reach_iset = np.bincount(f.node_iset[dec], weights=reach_ext[dec],
                                     minlength=f.n_isets)
            denom = reach_iset[f.ia_iset]
            norm_add = np.zeros(f.n_ia)
            np.divide(r_add, denom, out=norm_add, where=denom > 0.0)
            tb.norm_regret += norm_add

        tb.strat_sum += np.bincount(ia, weights=reach_own[par] * sigma[ia],
                                    minlength=f.n_ia)
        self.nodes_touched += f.n_nodes
        return float(v[0])

    def _check_pure_switch(self, sigma: np.ndarray) -> None:
        s = sigma[self.flat.ia_of_player[P1]]
        if np.all((s == 0.0) | (s == 1.0)):
            self.pure_switch_iteration = self.t + 1

    def iterate(self) -> None:
        """Advance one iteration: both players' updates plus the discount."""
        cfg = self.config
        f = self.flat
        t = self.t + 1

        sigma = self.current_strategies()
        if cfg.track_pure_switch and self.pure_switch_iteration is None:
            self._check_pure_switch(sigma)

        root_value: float | None = None
        if cfg.update_mode == "alternating":
            if f.dec_nodes[P1].size:
                root_value = self._update(P1, sigma)
                sigma = self.current_strategies()
            if f.dec_nodes[P2].size:
                maybe = self._update(P2, sigma)
                root_value = maybe if root_value is None else root_value
        else:
            if f.dec_nodes[P1].size:
                root_value = self._update(P1, sigma)
            if f.dec_nodes[P2].size:
                maybe = self._update(P2, sigma)
                root_value = maybe if root_value is None else root_value
        if cfg.track_value_sum and root_value is not None:
            self.value_p1_sum += root_value

        self.apply_discount(t)

        if cfg.check_numerics:
            tb = self.tables
            probe = float(tb.regret.sum()) + float(tb.strat_sum.sum())
            if not math.isfinite(probe):
                raise NumericError(
                    f"non-finite accumulator at iteration {t} "
                    f"(game {self.game.name!r})")
        self.t = t

    def apply_discount(self, t: int) -> None:
        """End-of-iteration multipliers on every accumulator entry."""
        pos_m, neg_m, avg_m = self.config.schedule.multipliers(t)
        tb = self.tables
        if pos_m != 1.0 or neg_m != 1.0:
            r = tb.regret
            r[:] = np.where(r > 0.0, r * pos_m, r * neg_m)
        if avg_m != 1.0:
            tb.strat_sum *= avg_m

    def _record(self) -> ConvergenceRecord:
        br1, br2, avg = exploitability_parts(self.game, self.average_profile())
        rec = ConvergenceRecord(
            iteration=self.t,
            nodes_touched=self.nodes_touched,
            elapsed_ms=(time.perf_counter() - self._start) * 1e3,
            br_vs_p1=br1, br_vs_p2=br2, exploit_avg=avg)
        self.records.append(rec)
        return rec

    def run(self, on_iteration: Callable[["CfrRun"], None] | None = None
            ) -> tuple[StrategyProfile, list[ConvergenceRecord]]:
        """Run to the configured budget; returns (average profile, records)."""
        cfg = self.config
        checkpoints = set(checkpoint_iterations(cfg.iterations, cfg.eval_every))
        self._start = time.perf_counter()
        for _ in range(cfg.iterations):
            self.iterate()
            if on_iteration is not None:
                on_iteration(self)
            if cfg.evaluate and self.t in checkpoints:
                self._record()
        return self.average_profile(), self.records

    def iterate_summary(self) -> IterateSummary:
        """Uniform-average summary for whole-game regret computation.

        Only meaningful when the run used uniform averaging (gamma = 0) and
        value tracking; the engine does not re-weight after the fact.
        """
        if not self.config.track_value_sum:
            raise ValueError("run was not configured with track_value_sum")
        if self.config.schedule.gamma != 0.0:
            raise ValueError("iterate summaries need uniform averaging (gamma=0)")
        return IterateSummary(
            iterations=self.t,
            average_profile=self.average_profile(),
            value_p1_sum=self.value_p1_sum)


def solve(game: Game, config: SolveConfig, flat: FlatGame | None = None,
          on_iteration: Callable[[CfrRun], None] | None = None
          ) -> tuple[StrategyProfile, list[ConvergenceRecord]]:
    """Convenience wrapper: build a run and execute it."""
    return CfrRun(game, config, flat=flat).run(on_iteration=on_iteration)
