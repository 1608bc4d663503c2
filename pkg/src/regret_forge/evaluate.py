"""Exact best response, exploitability, and whole-game regret measurement.

These are the instruments behind every convergence claim, so they stay on the
plain node tree and out of the vectorized solver path: an independent, easily
audited recursion.  All functions are pure over immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .games.model import (
    P1,
    P2,
    Game,
    Node,
    StrategyProfile,
    expected_value,
)


@dataclass
class ConvergenceRecord:
    """One evaluation checkpoint of a solver run.

    ``br_vs_p1`` is the value a best response earns against player 1's
    strategy (i.e. player 2's best-response value), and vice versa.  Their
    average is the two-player average exploitability, which is what the
    benchmark reports.  ``checkpoint`` carries the nodes-touched threshold
    that triggered a sampled-run evaluation; it is None for full traversals.
    """

    iteration: int
    nodes_touched: int
    elapsed_ms: float
    br_vs_p1: float
    br_vs_p2: float
    exploit_avg: float
    unit: str = "chips"
    checkpoint: int | None = None


@dataclass
class IterateSummary:
    """Uniform-iterate summary of a run, enough to compute whole-game regret.

    ``average_profile`` must be the reach-weighted uniform average of the
    played strategies and ``value_p1_sum`` the sum over iterations of player
    1's expected value under each played profile.
    """

    iterations: int
    average_profile: StrategyProfile
    value_p1_sum: float


def best_response(game: Game, profile: StrategyProfile, player: int
                  ) -> tuple[dict[str, int], float]:
    """Exact pure best response for ``player`` against ``profile``'s opponent.

    Chooses, per infoset, the action maximizing the opponent-and-chance
    reach-weighted continuation value, resolving infosets deepest-own-
    decision-first so every downstream choice is already fixed.  Ties break
    toward the lowest action index.  Returns the chosen action per infoset
    key and the best-response value.
    """
    opp = 1 - player

    members: dict[str, list[tuple[Node, float]]] = {}
    own_depth: dict[str, int] = {}

    def collect(node: Node, reach: float, depth: int):
        if node.is_terminal:
            return
        if node.is_chance:
            for p, child in zip(node.chance_probs, node.children):
                collect(child, reach * p, depth)
        elif node.player == player:
            members.setdefault(node.infoset_key, []).append((node, reach))
            own_depth.setdefault(node.infoset_key, depth)
            for child in node.children:
                collect(child, reach, depth + 1)
        else:
            sigma = profile.probs(opp, node.infoset_key)
            for prob, child in zip(sigma, node.children):
                collect(child, reach * float(prob), depth)

    collect(game.root, 1.0, 0)

    choice: dict[str, int] = {}
    memo: dict[int, float] = {}

    def value(node: Node) -> float:
        if node.is_terminal:
            return node.payoff(player)
        got = memo.get(id(node))
        if got is not None:
            return got
        if node.is_chance:
            v = sum(p * value(c) for p, c in zip(node.chance_probs, node.children))
        elif node.player == player:
            v = value(node.children[choice[node.infoset_key]])
        else:
            sigma = profile.probs(opp, node.infoset_key)
            v = 0.0
            for prob, child in zip(sigma, node.children):
                if prob != 0.0:
                    v += float(prob) * value(child)
        memo[id(node)] = v
        return v

    for key in sorted(members, key=lambda k: -own_depth[k]):
        states = members[key]
        n_actions = len(states[0][0].actions)
        best_a, best_v = 0, -np.inf
        for a in range(n_actions):
            qa = sum(reach * value(node.children[a]) for node, reach in states)
            if qa > best_v:
                best_a, best_v = a, qa
        choice[key] = best_a

    return choice, value(game.root)


def best_response_value(game: Game, profile: StrategyProfile, player: int) -> float:
    return best_response(game, profile, player)[1]


def pure_profile_vector(game: Game, choice: dict[str, int], player: int,
                        profile: StrategyProfile) -> StrategyProfile:
    """Replace ``player``'s side of ``profile`` with the one-hot pure strategy."""
    vectors = {}
    for key, actions in _infoset_sizes(game, player).items():
        vec = np.zeros(actions)
        vec[choice.get(key, 0)] = 1.0
        vectors[key] = vec
    if player == P1:
        return StrategyProfile(vectors, dict(profile.vectors(P2)))
    return StrategyProfile(dict(profile.vectors(P1)), vectors)


def _infoset_sizes(game: Game, player: int) -> dict[str, int]:
    sizes: dict[str, int] = {}
    stack = [game.root]
    while stack:
        node = stack.pop()
        if node.is_decision and node.player == player:
            sizes[node.infoset_key] = len(node.actions)
        stack.extend(node.children)
    return sizes


def exploitability_parts(game: Game, profile: StrategyProfile
                         ) -> tuple[float, float, float]:
    """(br_vs_p1, br_vs_p2, average exploitability) for a full profile."""
    br_vs_p1 = best_response(game, profile, P2)[1]
    br_vs_p2 = best_response(game, profile, P1)[1]
    return br_vs_p1, br_vs_p2, 0.5 * (br_vs_p1 + br_vs_p2)


def exploitability(game: Game, profile: StrategyProfile) -> float:
    """Average of the two players' best-response gains.

    In a zero-sum game this equals the mean exploitability of the two
    strategies without needing the game value.
    """
    return exploitability_parts(game, profile)[2]


def overall_regret(game: Game, summary: IterateSummary, player: int) -> float:
    """Whole-game cumulative regret reconstructed from a run summary.

    Equals T times the best-response value against the opponent's uniform
    average-of-iterates strategy, minus the total value actually realized.
    """
    if summary.average_profile is None or summary.iterations < 1:
        raise ValueError("iterate summary must carry >= 1 iteration and a profile")
    br = best_response(game, summary.average_profile, player)[1]
    realized = summary.value_p1_sum if player == P1 else -summary.value_p1_sum
    return summary.iterations * br - realized


def to_mbb(value_chips: float, big_blind: float) -> float:
    """Chips to milli-big-blinds: value / big_blind * 1000."""
    if not big_blind > 0:
        raise ValueError(f"big blind must be positive, got {big_blind}")
    return value_chips / big_blind * 1000.0
