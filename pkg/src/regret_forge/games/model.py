"""Two-player zero-sum extensive-form game model.

A game is a finite tree of :class:`Node` objects: decision nodes owned by
player 1 or player 2, chance nodes with fixed outcome probabilities, and
terminals carrying player 1's payoff (player 2 receives the negation).
Decision nodes carry an information-set key, a string built by the game
constructor from everything the acting player has observed; states sharing a
key are indistinguishable to that player.

Payoffs and probabilities are double-precision floats throughout.  Games are
immutable after construction and safe to share across concurrent solver runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

P1 = 0
P2 = 1
CHANCE = -1
TERMINAL = -2

PLAYERS = (P1, P2)

CHANCE_PROB_TOL = 1e-12


class GameStructureError(ValueError):
    """The game tree violates a structural invariant."""


@dataclass
class Node:
    """One game-tree node.

    ``player`` is ``P1``/``P2`` for decision nodes, ``CHANCE`` for chance
    nodes, ``TERMINAL`` for terminals.  ``payoff_p2`` defaults to
    ``-payoff_p1``; it exists so that :func:`validate_game` can detect
    deliberately broken (non-zero-sum) inputs.
    """

    player: int
    actions: tuple[str, ...] = ()
    children: tuple["Node", ...] = ()
    chance_probs: tuple[float, ...] | None = None
    payoff_p1: float = 0.0
    payoff_p2: float | None = None
    infoset_key: str = ""

    @property
    def is_terminal(self) -> bool:
        return self.player == TERMINAL

    @property
    def is_chance(self) -> bool:
        return self.player == CHANCE

    @property
    def is_decision(self) -> bool:
        return self.player in PLAYERS

    def payoff(self, player: int) -> float:
        if player == P1:
            return self.payoff_p1
        if self.payoff_p2 is not None:
            return self.payoff_p2
        return -self.payoff_p1


def decision(player: int, infoset_key: str, actions, children) -> Node:
    return Node(player=player, infoset_key=infoset_key,
                actions=tuple(actions), children=tuple(children))


def chance(probs, actions, children) -> Node:
    return Node(player=CHANCE, chance_probs=tuple(float(p) for p in probs),
                actions=tuple(actions), children=tuple(children))


def terminal(payoff_p1: float, payoff_p2: float | None = None) -> Node:
    return Node(player=TERMINAL, payoff_p1=float(payoff_p1),
                payoff_p2=payoff_p2)


@dataclass
class Game:
    """An immutable extensive-form game.

    ``delta`` is the payoff range max(u) - min(u); per-player ranges are
    identical to it under zero-sum payoffs but are kept separately because
    they are computed from each player's own payoff function.
    """

    name: str
    root: Node
    payoff_min: float = field(init=False, default=0.0)
    payoff_max: float = field(init=False, default=0.0)
    delta: float = field(init=False, default=0.0)
    delta_per_player: tuple[float, float] = field(init=False, default=(0.0, 0.0))
    num_nodes: int = field(init=False, default=0)
    num_terminals: int = field(init=False, default=0)

    def __post_init__(self):
        lo = math.inf
        hi = -math.inf
        lo2 = math.inf
        hi2 = -math.inf
        nodes = 0
        terms = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            nodes += 1
            if node.is_terminal:
                terms += 1
                u1 = node.payoff(P1)
                u2 = node.payoff(P2)
                lo = min(lo, u1)
                hi = max(hi, u1)
                lo2 = min(lo2, u2)
                hi2 = max(hi2, u2)
            else:
                stack.extend(node.children)
        self.payoff_min = lo
        self.payoff_max = hi
        self.delta_per_player = (hi - lo, hi2 - lo2)
        self.delta = max(self.delta_per_player)
        self.num_nodes = nodes
        self.num_terminals = terms


@dataclass
class Infoset:
    id: int
    player: int
    key: str
    actions: tuple[str, ...]
    members: list[Node]
    own_depth: int  # number of the actor's own decisions strictly above

    @property
    def n_actions(self) -> int:
        return len(self.actions)


class InfosetIndex:
    """Dense per-player infoset numbering in depth-first discovery order."""

    def __init__(self, infosets: tuple[list[Infoset], list[Infoset]]):
        self._infosets = infosets
        self._ids = (
            {s.key: s.id for s in infosets[P1]},
            {s.key: s.id for s in infosets[P2]},
        )

    def infosets(self, player: int) -> list[Infoset]:
        return self._infosets[player]

    def n_infosets(self, player: int) -> int:
        return len(self._infosets[player])

    @property
    def total_infosets(self) -> int:
        return len(self._infosets[P1]) + len(self._infosets[P2])

    @property
    def max_actions(self) -> int:
        return max(s.n_actions for p in PLAYERS for s in self._infosets[p])

    def id_of(self, player: int, key: str) -> int:
        return self._ids[player][key]

    def get(self, player: int, key: str) -> Infoset:
        return self._infosets[player][self._ids[player][key]]


def enumerate_infosets(game: Game) -> InfosetIndex:
    """Index every decision state by (player, infoset key).

    Ids follow depth-first discovery order, so two calls on the same game
    yield identical numbering.  Raises :class:`GameStructureError` if states
    sharing a key disagree on the action list.
    """
    per_player: tuple[dict[str, Infoset], dict[str, Infoset]] = ({}, {})
    counters = [0, 0]

    def walk(node: Node, own_depth: tuple[int, int]):
        if node.is_terminal:
            return
        next_depth = own_depth
        if node.is_decision:
            p = node.player
            found = per_player[p].get(node.infoset_key)
            if found is None:
                found = Infoset(id=counters[p], player=p, key=node.infoset_key,
                                actions=node.actions, members=[],
                                own_depth=own_depth[p])
                per_player[p][node.infoset_key] = found
                counters[p] += 1
            elif found.actions != node.actions:
                raise GameStructureError(
                    f"infoset {node.infoset_key!r} of player {p + 1} has "
                    f"inconsistent actions: {found.actions} vs {node.actions}")
            found.members.append(node)
            next_depth = (own_depth[0] + (p == P1), own_depth[1] + (p == P2))
        for child in node.children:
            walk(child, next_depth)

    walk(game.root, (0, 0))
    ordered = tuple(
        sorted(per_player[p].values(), key=lambda s: s.id) for p in PLAYERS)
    return InfosetIndex((list(ordered[0]), list(ordered[1])))


class StrategyProfile:
    """A behavioral strategy per player: infoset key -> probability vector."""

    def __init__(self, p1: dict[str, np.ndarray], p2: dict[str, np.ndarray]):
        self._vectors = (p1, p2)

    @classmethod
    def uniform(cls, index: InfosetIndex) -> "StrategyProfile":
        tables = []
        for p in PLAYERS:
            tables.append({
                s.key: np.full(s.n_actions, 1.0 / s.n_actions)
                for s in index.infosets(p)
            })
        return cls(tables[0], tables[1])

    def probs(self, player: int, key: str) -> np.ndarray:
        try:
            return self._vectors[player][key]
        except KeyError:
            raise ValueError(
                f"profile does not cover infoset {key!r} of player {player + 1}"
            ) from None

    def vectors(self, player: int) -> dict[str, np.ndarray]:
        return self._vectors[player]

    def with_vector(self, player: int, key: str, vec: np.ndarray) -> "StrategyProfile":
        """Copy of the profile with one infoset's vector replaced."""
        tables = (dict(self._vectors[0]), dict(self._vectors[1]))
        tables[player][key] = np.asarray(vec, dtype=float)
        return StrategyProfile(tables[0], tables[1])

    def check(self, tol: float = 1e-9) -> None:
        for p in PLAYERS:
            for key, vec in self._vectors[p].items():
                if np.any(vec < -tol) or abs(float(vec.sum()) - 1.0) > tol:
                    raise ValueError(
                        f"strategy at {key!r} (player {p + 1}) is not a "
                        f"probability vector: {vec}")


def expected_value(game: Game, profile: StrategyProfile, player: int = P1) -> float:
    """Exact expected payoff for ``player`` under ``profile``.

    Recursive weighted sum over the whole tree; the profile must cover every
    infoset of both players.
    """

    def walk(node: Node) -> float:
        if node.is_terminal:
            return node.payoff(player)
        if node.is_chance:
            return sum(p * walk(c) for p, c in zip(node.chance_probs, node.children))
        sigma = profile.probs(node.player, node.infoset_key)
        total = 0.0
        for prob, child in zip(sigma, node.children):
            if prob != 0.0:
                total += prob * walk(child)
        return total

    return walk(game.root)


@dataclass
class Violation:
    kind: str
    path: str
    message: str

    def __str__(self) -> str:
        return f"[{self.kind}] at {self.path or '<root>'}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, kind: str, path: str, message: str) -> None:
        self.violations.append(Violation(kind, path, message))

    def summary(self) -> str:
        if self.ok:
            return "game is valid"
        return "\n".join(str(v) for v in self.violations)


def validate_game(game: Game) -> ValidationReport:
    """Check all structural invariants; never raises.

    Verifies the tree property (no shared or cyclic nodes), action/child
    consistency, chance probability sums, exact zero-sum payoffs, finiteness,
    and that states sharing an infoset key agree on actor and action set.
    """
    report = ValidationReport()
    seen: set[int] = set()
    infoset_sig: dict[tuple[int, str], tuple[str, ...]] = {}

    def walk(node: Node, path: str):
        if id(node) in seen:
            report.add("structure", path, "node reachable twice (tree property violated)")
            return
        seen.add(id(node))
        if node.is_terminal:
            u1, u2 = node.payoff(P1), node.payoff(P2)
            if not (math.isfinite(u1) and math.isfinite(u2)):
                report.add("payoff", path, f"non-finite payoff ({u1}, {u2})")
            elif u1 + u2 != 0.0:
                report.add("zero-sum", path, f"u1 + u2 = {u1 + u2!r}, expected 0")
            if node.children:
                report.add("structure", path, "terminal node has children")
            return
        if len(node.actions) == 0:
            report.add("structure", path, "non-terminal node has no actions")
        if len(node.actions) != len(node.children):
            report.add("structure", path,
                       f"{len(node.actions)} actions but {len(node.children)} children")
        if node.is_chance:
            probs = node.chance_probs
            if probs is None or len(probs) != len(node.children):
                report.add("chance", path, "chance node lacks one probability per child")
            else:
                if any(p < 0 or not math.isfinite(p) for p in probs):
                    report.add("chance", path, f"negative or non-finite probability in {probs}")
                total = sum(probs)
                if abs(total - 1.0) > CHANCE_PROB_TOL:
                    report.add("chance", path, f"probabilities sum to {total!r}, expected 1")
        elif node.is_decision:
            sig = infoset_sig.setdefault((node.player, node.infoset_key), node.actions)
            if sig != node.actions:
                report.add("infoset", path,
                           f"infoset {node.infoset_key!r} has inconsistent actions "
                           f"{node.actions} vs {sig}")
        else:
            report.add("structure", path, f"unknown player tag {node.player}")
        for name, child in zip(node.actions, node.children):
            walk(child, f"{path}/{name}" if path else name)

    walk(game.root, "")
    return report
