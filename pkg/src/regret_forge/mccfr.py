"""External-sampling Monte Carlo CFR with nodes-touched period discounting.

One traversal samples opponent and chance actions from their current
distributions while expanding all of the updating player's actions; players
alternate as the updater.  Work is accounted in nodes touched (every node
visit, terminals included), and the discounted variants multiply all
accumulators by n/(n+1) when nodes-touched period n ends (or by 1/10 once
after the first period for the initial-discount variant).

Regret matching is used without a floor.  The traversal kernel is JIT
compiled over the flattened tree; its random stream is the package's
SplitMix64, consumed one double per sampled node, so a pure-Python mirror of
the same loop reproduces runs bit for bit.  One run owns its tables and RNG;
concurrent runs share nothing mutable.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numba import njit

from .evaluate import ConvergenceRecord, exploitability_parts
from .flat import FlatGame, build_flat
from .games.model import Game, P1, P2, StrategyProfile
from .minimizers import NumericError
from .rng import DOUBLE_UNIT, stream_state

MCCFR_VARIANTS = ("vanilla", "discounted", "initial-discount")

_GOLD = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _rng_double(state):
    state[0] += _GOLD
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)) * DOUBLE_UNIT


@njit(cache=False)  # self-recursive: numba's disk cache cannot reload the cycle
def _es_traverse(ni, upd, depth, kind, node_player, node_iset, child_start,
                 child_end, inc_prob, iset_start, iset_size, payoff,
                 regret, strat_sum, rng_state, counters, scratch):
    """One external-sampling visit rooted at node ``ni``.

    Sampled segments (chance and the non-updating player) are walked
    iteratively; recursion happens only where the updating player branches.
    ``scratch`` rows, indexed by branching depth, hold per-action utilities.
    """
    while True:
        counters[0] += 1
        k = kind[ni]
        if k == 2:  # terminal
            if upd == 0:
                return payoff[ni]
            return -payoff[ni]
        cs = child_start[ni]
        ce = child_end[ni]
        if k == 1:  # chance: sample an outcome
            u = _rng_double(rng_state)
            acc = 0.0
            pick = ce - 1
            for j in range(cs, ce):
                acc += inc_prob[j]
                if u < acc:
                    pick = j
                    break
            ni = pick
            continue
        iset = node_iset[ni]
        s = iset_start[iset]
        na = iset_size[iset]
        possum = 0.0
        for a in range(na):
            x = regret[s + a]
            if x > 0.0:
                possum += x
        if node_player[ni] == upd:
            break
        # sampled player: record the strategy, then follow one sampled action
        u = _rng_double(rng_state)
        acc = 0.0
        pick = -1
        for a in range(na):
            if possum > 0.0:
                x = regret[s + a]
                p = x / possum if x > 0.0 else 0.0
            else:
                p = 1.0 / na
            strat_sum[s + a] += p
            acc += p
            if pick < 0 and u < acc:
                pick = cs + a
        if pick < 0:
            pick = ce - 1
        ni = pick

    # updating player's node: expand every action, accumulate sampled regrets
    utils = scratch[depth]
    ev = 0.0
    for a in range(na):
        if possum > 0.0:
            x = regret[s + a]
            p = x / possum if x > 0.0 else 0.0
        else:
            p = 1.0 / na
        ua = _es_traverse(cs + a, upd, depth + 1, kind, node_player, node_iset,
                          child_start, child_end, inc_prob, iset_start,
                          iset_size, payoff, regret, strat_sum, rng_state,
                          counters, scratch)
        utils[a] = ua
        ev += p * ua
    for a in range(na):
        regret[s + a] += utils[a] - ev
    return ev


VARIANT_CODES = {"vanilla": 0, "discounted": 1, "initial-discount": 2}


@njit(cache=False)
def _run_span(target_nodes, max_pairs, variant_code, period_len,
              kind, node_player, node_iset, child_start, child_end, inc_prob,
              iset_start, iset_size, payoff, regret, strat_sum, rng_state,
              counters, progress, event_log, scratch):
    """Alternating sampled pairs until nodes touched reaches ``target_nodes``.

    ``progress`` holds [pairs, periods_done, events_logged]; period-boundary
    discounts are applied in here so the whole span runs without returning to
    Python.  Event rows are (period, nodes_touched, pair_index).
    """
    pairs = progress[0]
    periods = progress[1]
    n_events = progress[2]
    bad = False
    while counters[0] < target_nodes and pairs - progress[0] < max_pairs:
        for upd in range(2):
            value = _es_traverse(0, upd, 0, kind, node_player, node_iset,
                                 child_start, child_end, inc_prob, iset_start,
                                 iset_size, payoff, regret, strat_sum,
                                 rng_state, counters, scratch)
            if not np.isfinite(value):
                bad = True
                break
            while counters[0] >= (periods + 1) * period_len:
                periods += 1
                mult = 1.0
                if variant_code == 1:
                    mult = periods / (periods + 1.0)
                elif variant_code == 2 and periods == 1:
                    mult = 0.1
                if mult != 1.0:
                    for i in range(regret.shape[0]):
                        regret[i] *= mult
                        strat_sum[i] *= mult
                    if n_events < event_log.shape[0]:
                        event_log[n_events, 0] = periods
                        event_log[n_events, 1] = counters[0]
                        event_log[n_events, 2] = pairs
                        n_events += 1
        if bad:
            break
        pairs += 1
    progress[0] = pairs
    progress[1] = periods
    progress[2] = n_events
    return bad


@dataclass(frozen=True)
class MccfrConfig:
    variant: str = "vanilla"
    seed: int = 1
    run_index: int = 0
    budget_nodes: int = 1_000_000
    period_nodes: int = 100_000
    eval_every: str | int = "pow2"
    evaluate: bool = True
    check_numerics: bool = True
    label: str = ""

    def __post_init__(self):
        if self.variant not in MCCFR_VARIANTS:
            raise ValueError(
                f"unknown MCCFR variant {self.variant!r}; "
                f"expected one of {MCCFR_VARIANTS}")
        if self.budget_nodes < 1:
            raise ValueError("nodes-touched budget must be >= 1")
        if self.period_nodes < 1:
            raise ValueError("period length must be >= 1")
        if isinstance(self.eval_every, int) and self.eval_every < 1:
            raise ValueError("eval_every must be 'pow2' or a positive integer")


POW2_EVAL_FLOOR = 1024


def checkpoint_nodes(budget: int, eval_every: str | int) -> list[int]:
    """Nodes-touched thresholds at which runs are evaluated."""
    if eval_every == "pow2":
        points = {1 << k for k in range(budget.bit_length())
                  if POW2_EVAL_FLOOR <= (1 << k) <= budget}
    else:
        step = int(eval_every)
        points = set(range(step, budget + 1, step))
    points.add(budget)
    return sorted(points)


@dataclass
class DiscountEvent:
    period: int
    multiplier: float
    nodes_touched: int
    pair_index: int


class MccfrRun:
    """One sampled solve; deterministic given (seed, run_index)."""

    def __init__(self, game: Game, config: MccfrConfig, flat: FlatGame | None = None):
        self.game = game
        self.config = config
        self.flat = flat if flat is not None else build_flat(game)
        self.regret = np.zeros(self.flat.n_ia)
        self.strat_sum = np.zeros(self.flat.n_ia)
        self.rng_state = np.array([stream_state(config.seed, config.run_index)],
                                  dtype=np.uint64)
        self._counters = np.zeros(1, dtype=np.int64)
        # pairs completed, periods completed, discount events logged
        self._progress = np.zeros(3, dtype=np.int64)
        capacity = config.budget_nodes // config.period_nodes + 2
        self._event_log = np.zeros((capacity, 3), dtype=np.int64)
        max_actions = int(self.flat.iset_size.max()) if self.flat.n_isets else 1
        self._scratch = np.zeros((len(self.flat.levels) + 1, max_actions))
        self.discount_events: list[DiscountEvent] = []
        self.records: list[ConvergenceRecord] = []
        self._start = time.perf_counter()

    @property
    def nodes_touched(self) -> int:
        return int(self._counters[0])

    @property
    def pairs(self) -> int:
        return int(self._progress[0])

    @property
    def periods_done(self) -> int:
        return int(self._progress[1])

    def _traverse(self, updating_player: int) -> float:
        f = self.flat
        return _es_traverse(
            0, updating_player, 0, f.kind, f.node_player, f.node_iset,
            f.child_start, f.child_end, f.inc_prob, f.iset_start, f.iset_size,
            f.payoff, self.regret, self.strat_sum, self.rng_state,
            self._counters, self._scratch)

    def _period_multiplier(self, n: int) -> float:
        if self.config.variant == "discounted":
            return n / (n + 1.0)
        if self.config.variant == "initial-discount" and n == 1:
            return 0.1
        return 1.0

    def _cross_boundaries(self, on_discount) -> None:
        per = self.config.period_nodes
        while self.nodes_touched >= (self.periods_done + 1) * per:
            self._progress[1] += 1
            n = self.periods_done
            mult = self._period_multiplier(n)
            if mult != 1.0:
                self.regret *= mult
                self.strat_sum *= mult
                event = DiscountEvent(n, mult, self.nodes_touched, self.pairs)
                self.discount_events.append(event)
                if on_discount is not None:
                    on_discount(self, event)

    def step_pair(self, on_discount=None) -> None:
        """One alternating pair of sampled traversals plus boundary checks.

        Slower than :meth:`run`'s jitted spans but numerically identical to
        them; kept for fine-grained control and the discount callback.
        """
        for player in (P1, P2):
            value = self._traverse(player)
            if self.config.check_numerics and not math.isfinite(value):
                raise NumericError(
                    f"non-finite sampled value after {self.nodes_touched} "
                    f"nodes (game {self.game.name!r})")
            self._cross_boundaries(on_discount)
        self._progress[0] += 1

    def _run_span(self, target_nodes: int) -> None:
        f = self.flat
        logged_before = int(self._progress[2])
        bad = _run_span(
            target_nodes, np.iinfo(np.int64).max,
            VARIANT_CODES[self.config.variant], self.config.period_nodes,
            f.kind, f.node_player, f.node_iset, f.child_start, f.child_end,
            f.inc_prob, f.iset_start, f.iset_size, f.payoff,
            self.regret, self.strat_sum, self.rng_state, self._counters,
            self._progress, self._event_log, self._scratch)
        for i in range(logged_before, int(self._progress[2])):
            n, nodes, pair = (int(x) for x in self._event_log[i])
            self.discount_events.append(
                DiscountEvent(n, self._period_multiplier(n), nodes, pair))
        if bad and self.config.check_numerics:
            raise NumericError(
                f"non-finite sampled value after {self.nodes_touched} "
                f"nodes (game {self.game.name!r})")

    def average_profile(self) -> StrategyProfile:
        f = self.flat
        sums = np.bincount(f.ia_iset, weights=self.strat_sum, minlength=f.n_isets)
        denom = sums[f.ia_iset]
        avg = f.uniform_ia.copy()
        np.divide(self.strat_sum, denom, out=avg, where=denom > 0.0)
        p1, p2 = f.profile_from_ia(avg)
        return StrategyProfile(p1, p2)

    def _record(self, checkpoint: int) -> ConvergenceRecord:
        br1, br2, avg = exploitability_parts(self.game, self.average_profile())
        rec = ConvergenceRecord(
            iteration=self.pairs,
            nodes_touched=self.nodes_touched,
            elapsed_ms=(time.perf_counter() - self._start) * 1e3,
            br_vs_p1=br1, br_vs_p2=br2, exploit_avg=avg,
            checkpoint=checkpoint)
        self.records.append(rec)
        return rec

    def run(self, on_discount: Callable[["MccfrRun", DiscountEvent], None] | None = None
            ) -> tuple[StrategyProfile, list[ConvergenceRecord]]:
        """Run to the nodes-touched budget, evaluating at the checkpoints.

        With a discount callback installed the run steps pair by pair so the
        callback fires at the exact boundary; otherwise whole spans between
        checkpoints execute inside the jitted driver.
        """
        cfg = self.config
        thresholds = checkpoint_nodes(cfg.budget_nodes, cfg.eval_every)
        next_idx = 0
        self._start = time.perf_counter()
        while self.nodes_touched < cfg.budget_nodes:
            if on_discount is None:
                self._run_span(thresholds[next_idx])
            else:
                self.step_pair(on_discount=on_discount)
            while (next_idx < len(thresholds)
                   and self.nodes_touched >= thresholds[next_idx]):
                if cfg.evaluate:
                    self._record(thresholds[next_idx])
                next_idx += 1
        return self.average_profile(), self.records


def solve_mccfr(game: Game, config: MccfrConfig, flat: FlatGame | None = None
                ) -> tuple[StrategyProfile, list[ConvergenceRecord]]:
    return MccfrRun(game, config, flat=flat).run()
