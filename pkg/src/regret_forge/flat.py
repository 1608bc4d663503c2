"""Flattened array form of a game tree for the traversal engines.

Nodes are laid out in breadth-first order, which makes two things true by
construction and both engines depend on them:

* every node's children occupy a contiguous index range, in action order,
  given by ``child_start``/``child_end``;
* nodes of equal depth are contiguous, so reach probabilities can be pushed
  down and values pulled up one whole level at a time with vectorized
  gathers/scatters instead of per-node recursion.

Each non-root node carries its single incoming edge: ``inc_prob`` is the
chance probability of that edge (1 for decision edges), ``inc_ia`` the index
of the (infoset, action) slot that owns it (-1 for chance edges).  Regret and
average-strategy tables are flat float64 arrays over those slots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .games.model import CHANCE, P1, P2, PLAYERS, Game, Node

KIND_DECISION = 0
KIND_CHANCE = 1
KIND_TERMINAL = 2


@dataclass
class FlatGame:
    game: Game
    n_nodes: int
    kind: np.ndarray          # int8[n]
    node_player: np.ndarray   # int8[n]; -1 for chance/terminal
    node_iset: np.ndarray     # int32[n]; -1 for chance/terminal
    parent: np.ndarray        # int32[n]; -1 at root
    child_start: np.ndarray   # int32[n]
    child_end: np.ndarray     # int32[n]
    inc_prob: np.ndarray      # float64[n]; incoming chance prob, else 1
    inc_ia: np.ndarray        # int32[n]; incoming (infoset, action) slot, else -1
    payoff: np.ndarray        # float64[n]; P1 payoff at terminals
    levels: list[tuple[int, int]]
    level_parents: list[np.ndarray]  # parent indices per level, pre-sliced
    # infoset tables (both players share one numbering)
    n_isets: int
    iset_player: np.ndarray   # int8[n_isets]
    iset_start: np.ndarray    # int32[n_isets] into the ia arrays
    iset_size: np.ndarray     # int32[n_isets]
    iset_keys: list[str]
    iset_actions: list[tuple[str, ...]]
    n_ia: int
    ia_iset: np.ndarray       # int32[n_ia]
    uniform_ia: np.ndarray    # float64[n_ia]; 1/|A(I)| per slot
    # per-player groupings
    ia_of_player: tuple[np.ndarray, np.ndarray]
    dec_nodes: tuple[np.ndarray, np.ndarray]
    edge_child: tuple[np.ndarray, np.ndarray]   # children of p's decision nodes
    edge_parent: tuple[np.ndarray, np.ndarray]
    edge_ia: tuple[np.ndarray, np.ndarray]
    _iset_by_key: dict[tuple[int, str], int] = field(default_factory=dict)

    def iset_id(self, player: int, key: str) -> int:
        return self._iset_by_key[(player, key)]

    def iset_slice(self, player: int, key: str) -> slice:
        i = self._iset_by_key[(player, key)]
        return slice(int(self.iset_start[i]), int(self.iset_start[i]) + int(self.iset_size[i]))

    def profile_from_ia(self, values: np.ndarray):
        """Split a per-(infoset, action) vector into per-player key -> vector dicts."""
        out: tuple[dict, dict] = ({}, {})
        for i in range(self.n_isets):
            s = int(self.iset_start[i])
            out[int(self.iset_player[i])][self.iset_keys[i]] = \
                values[s:s + int(self.iset_size[i])].copy()
        return out


def build_flat(game: Game) -> FlatGame:
    # BFS pass one: order nodes, assign infoset ids on first sight
    order: list[Node] = [game.root]
    parent = [-1]
    depth = [0]
    iset_id: dict[tuple[int, str], int] = {}
    iset_player: list[int] = []
    iset_keys: list[str] = []
    iset_actions: list[tuple[str, ...]] = []

    head = 0
    while head < len(order):
        node = order[head]
        if node.is_decision:
            sig = (node.player, node.infoset_key)
            if sig not in iset_id:
                iset_id[sig] = len(iset_keys)
                iset_player.append(node.player)
                iset_keys.append(node.infoset_key)
                iset_actions.append(node.actions)
        for child in node.children:
            order.append(child)
            parent.append(head)
            depth.append(depth[head] + 1)
        head += 1

    n = len(order)
    n_isets = len(iset_keys)
    sizes = np.array([len(a) for a in iset_actions], dtype=np.int32)
    iset_start = np.zeros(n_isets, dtype=np.int32)
    if n_isets:
        iset_start[1:] = np.cumsum(sizes[:-1])
    n_ia = int(sizes.sum())
    ia_iset = np.repeat(np.arange(n_isets, dtype=np.int32), sizes)
    uniform = (1.0 / sizes.astype(np.float64))[ia_iset]

    kind = np.empty(n, dtype=np.int8)
    node_player = np.full(n, -1, dtype=np.int8)
    node_iset = np.full(n, -1, dtype=np.int32)
    parent_arr = np.array(parent, dtype=np.int32)
    child_start = np.zeros(n, dtype=np.int32)
    child_end = np.zeros(n, dtype=np.int32)
    inc_prob = np.ones(n, dtype=np.float64)
    inc_ia = np.full(n, -1, dtype=np.int32)
    payoff = np.zeros(n, dtype=np.float64)

    next_child = 1
    for i, node in enumerate(order):
        child_start[i] = next_child
        next_child += len(node.children)
        child_end[i] = next_child
        if node.is_terminal:
            kind[i] = KIND_TERMINAL
            payoff[i] = node.payoff_p1
        elif node.is_chance:
            kind[i] = KIND_CHANCE
            for j, p in enumerate(node.chance_probs):
                inc_prob[child_start[i] + j] = p
        else:
            kind[i] = KIND_DECISION
            node_player[i] = node.player
            iid = iset_id[(node.player, node.infoset_key)]
            node_iset[i] = iid
            base = iset_start[iid]
            for j in range(len(node.children)):
                inc_ia[child_start[i] + j] = base + j

    depth_arr = np.array(depth, dtype=np.int32)
    levels: list[tuple[int, int]] = []
    start = 0
    for d in range(int(depth_arr.max()) + 1 if n else 0):
        end = int(np.searchsorted(depth_arr, d, side="right"))
        levels.append((start, end))
        start = end
    level_parents = [parent_arr[s:e].copy() for s, e in levels]

    iset_player_arr = np.array(iset_player, dtype=np.int8)
    ia_of_player = tuple(
        np.nonzero(iset_player_arr[ia_iset] == p)[0].astype(np.int32)
        for p in PLAYERS)
    dec_nodes = tuple(
        np.nonzero((kind == KIND_DECISION) & (node_player == p))[0].astype(np.int32)
        for p in PLAYERS)
    edge_child = []
    edge_parent = []
    edge_ia = []
    for p in PLAYERS:
        mask = np.zeros(n, dtype=bool)
        for i in dec_nodes[p]:
            mask[child_start[i]:child_end[i]] = True
        ch = np.nonzero(mask)[0].astype(np.int32)
        edge_child.append(ch)
        edge_parent.append(parent_arr[ch])
        edge_ia.append(inc_ia[ch])

    return FlatGame(
        game=game, n_nodes=n, kind=kind, node_player=node_player,
        node_iset=node_iset, parent=parent_arr, child_start=child_start,
        child_end=child_end, inc_prob=inc_prob, inc_ia=inc_ia, payoff=payoff,
        levels=levels, level_parents=level_parents,
        n_isets=n_isets, iset_player=iset_player_arr,
        iset_start=iset_start, iset_size=sizes, iset_keys=iset_keys,
        iset_actions=iset_actions, n_ia=n_ia, ia_iset=ia_iset,
        uniform_ia=uniform, ia_of_player=ia_of_player, dec_nodes=dec_nodes,
        edge_child=(edge_child[0], edge_child[1]),
        edge_parent=(edge_parent[0], edge_parent[1]),
        edge_ia=(edge_ia[0], edge_ia[1]),
        _iset_by_key=iset_id,
    )
