"""Built-in benchmark games.

All constructors are pure and return fully materialized trees that pass
:func:`regret_forge.games.model.validate_game`.  Infoset keys contain exactly
what the acting player has observed, so they double as human-readable state
descriptions when debugging solver output.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .model import CHANCE, P1, P2, Game, Node, chance, decision, terminal


class GameSpecError(ValueError):
    """A game constructor was given an invalid specification."""


# ---------------------------------------------------------------------------
# Matrix games and the one-shot bandit


def build_matrix_game(matrix, name: str = "matrix") -> Game:
    """One simultaneous decision: P1 picks a row, P2 a column.

    Simultaneity is encoded by information hiding: all of P2's decision nodes
    share one infoset, so P2 cannot condition on the chosen row.
    """
    rows = [list(map(float, row)) for row in matrix]
    if not rows or not rows[0]:
        raise GameSpecError("payoff matrix must be non-empty")
    n_cols = len(rows[0])
    if any(len(r) != n_cols for r in rows):
        raise GameSpecError("payoff matrix rows have unequal lengths")
    if any(not math.isfinite(x) for r in rows for x in r):
        raise GameSpecError("payoff matrix entries must be finite")

    col_names = tuple(f"col{j}" for j in range(n_cols))
    row_nodes = []
    for i, row in enumerate(rows):
        kids = tuple(terminal(x) for x in row)
        row_nodes.append(decision(P2, "cols", col_names, kids))
    root = decision(P1, "rows", tuple(f"row{i}" for i in range(len(rows))), row_nodes)
    return Game(name=name, root=root)


def build_bandit(payoffs, name: str | None = None) -> Game:
    """Single P1 decision over fixed payoffs; P2 has no choices."""
    vals = [float(x) for x in payoffs]
    if len(vals) < 2:
        raise GameSpecError("bandit needs at least 2 actions")
    root = decision(P1, "choose",
                    tuple(f"a{i}" for i in range(len(vals))),
                    tuple(terminal(v) for v in vals))
    label = name or "bandit:" + ",".join(repr(v) for v in vals)
    return Game(name=label, root=root)


# ---------------------------------------------------------------------------
# Kuhn poker
#
# Three cards Q < K < A, one dealt to each player, ante 1, bet size 1,
# one betting street: check/bet then call/fold (a check behind ends the hand).

KUHN_CARDS = ("Q", "K", "A")
_KUHN_RANK = {c: i for i, c in enumerate(KUHN_CARDS)}


def build_kuhn() -> Game:
    def showdown(c1: str, c2: str, stake: int) -> float:
        if _KUHN_RANK[c1] > _KUHN_RANK[c2]:
            return float(stake)
        return float(-stake)

    def deal_tree(c1: str, c2: str) -> Node:
        def key(card: str, hist: tuple[str, ...]) -> str:
            return card + "|" + ",".join(hist)

        # responder facing a bet: fold or call
        def facing_bet(player: int, hist: tuple[str, ...]) -> Node:
            card = c1 if player == P1 else c2
            fold_pay = 1.0 if player == P2 else -1.0  # bettor wins the ante
            return decision(player, key(card, hist), ("fold", "call"), (
                terminal(fold_pay),
                terminal(showdown(c1, c2, 2)),
            ))

        p2_after_check = decision(P2, key(c2, ("check",)), ("check", "bet"), (
            terminal(showdown(c1, c2, 1)),
            facing_bet(P1, ("check", "bet")),
        ))
        p2_after_bet = facing_bet(P2, ("bet",))
        return decision(P1, key(c1, ()), ("check", "bet"),
                        (p2_after_check, p2_after_bet))

    deals = [(c1, c2) for c1 in KUHN_CARDS for c2 in KUHN_CARDS if c1 != c2]
    kids = tuple(deal_tree(c1, c2) for c1, c2 in deals)
    names = tuple(f"{c1}{c2}" for c1, c2 in deals)
    root = chance([1.0 / len(deals)] * len(deals), names, kids)
    return Game(name="kuhn", root=root)


# ---------------------------------------------------------------------------
# Leduc hold'em
#
# Six cards (J, Q, K in two suits), ante 1, two betting rounds with a
# two-bet cap each; bets are 2 in round one and 4 in round two.  After the
# first round a public board card is revealed; a hole card pairing the board
# beats any unpaired hand, otherwise the higher rank wins.

LEDUC_CARDS = ("Js", "Jh", "Qs", "Qh", "Ks", "Kh")
_LEDUC_RANK = {"J": 0, "Q": 1, "K": 2}
_LEDUC_BETS = (2, 4)


def _leduc_showdown(c1: str, c2: str, board: str) -> int:
    """Returns +1 / -1 / 0 from P1's perspective."""
    r1, r2, rb = _LEDUC_RANK[c1[0]], _LEDUC_RANK[c2[0]], _LEDUC_RANK[board[0]]
    p1_pair, p2_pair = r1 == rb, r2 == rb
    if p1_pair != p2_pair:
        return 1 if p1_pair else -1
    if r1 != r2:
        return 1 if r1 > r2 else -1
    return 0


def build_leduc() -> Game:
    def key(card: str, hist: tuple[str, ...]) -> str:
        return card + "|" + ",".join(hist)

    def betting(c1: str, c2: str, board: str | None, hist: tuple[str, ...],
                contrib: tuple[int, int], to_act: int, n_bets: int,
                outstanding: bool, rnd: int) -> Node:
        card = c1 if to_act == P1 else c2
        bet = _LEDUC_BETS[rnd]
        other = 1 - to_act

        def after(action: str, new_contrib, new_bets, new_outstanding):
            nh = hist + (action,)
            if action == "fold":
                # folder loses their contribution so far
                lost = new_contrib[to_act]
                return terminal(float(-lost) if to_act == P1 else float(lost))
            round_over = action == "call" or (action == "check" and hist and hist[-1] == "check")
            if round_over:
                return round_end(c1, c2, board, nh, new_contrib, rnd)
            return betting(c1, c2, board, nh, new_contrib, other,
                           new_bets, new_outstanding, rnd)

        actions: list[str] = []
        children: list[Node] = []
        if not outstanding:
            actions.append("check")
            children.append(after("check", contrib, n_bets, False))
            actions.append("bet")
            up = list(contrib)
            up[to_act] = contrib[other] + bet
            children.append(after("bet", tuple(up), n_bets + 1, True))
        else:
            actions.append("fold")
            children.append(after("fold", contrib, n_bets, True))
            call = list(contrib)
            call[to_act] = contrib[other]
            actions.append("call")
            children.append(after("call", tuple(call), n_bets, False))
            if n_bets < 2:
                up = list(contrib)
                up[to_act] = contrib[other] + bet
                actions.append("raise")
                children.append(after("raise", tuple(up), n_bets + 1, True))
        return decision(to_act, key(card, hist), tuple(actions), tuple(children))

    def round_end(c1, c2, board, hist, contrib, rnd) -> Node:
        if rnd == 0:
            remaining = [c for c in LEDUC_CARDS if c not in (c1, c2)]
            kids = tuple(
                betting(c1, c2, b, hist + (f"board:{b}",), contrib, P1, 0, False, 1)
                for b in remaining)
            return chance([1.0 / len(remaining)] * len(remaining),
                          tuple(remaining), kids)
        result = _leduc_showdown(c1, c2, board)
        # equal contributions at showdown; winner takes the loser's stake
        return terminal(float(result * contrib[0]))

    deals = [(c1, c2) for c1 in LEDUC_CARDS for c2 in LEDUC_CARDS if c1 != c2]
    kids = tuple(betting(c1, c2, None, (), (1, 1), P1, 0, False, 0)
                 for c1, c2 in deals)
    names = tuple(f"{c1},{c2}" for c1, c2 in deals)
    root = chance([1.0 / len(deals)] * len(deals), names, kids)
    return Game(name="leduc", root=root)


# ---------------------------------------------------------------------------
# Five-card Goofspiel, fixed prize order A,2,3,4,5
#
# Each round the prize equals the round number; both players simultaneously
# bid one card from their remaining hand (values 1..5, shown as A,2,..,5).
# The higher bid takes the prize, ties split its value, and both bids become
# public once the round resolves.  The payoff is P1's prize total minus P2's.

GOOF_LABELS = ("A", "2", "3", "4", "5")


def _goof_label(v: int) -> str:
    return GOOF_LABELS[v - 1]


def build_goofspiel5() -> Game:
    def subtree(h1: tuple[int, ...], h2: tuple[int, ...], rnd: int,
                hist: str, score: Fraction) -> Node:
        if rnd > 5:
            return terminal(float(score))

        def resolve(b1: int, b2: int) -> Node:
            prize = Fraction(rnd)
            if b1 > b2:
                gain = prize
            elif b2 > b1:
                gain = -prize
            else:
                gain = Fraction(0)  # split: both take half, difference is zero
            nh = hist + f"{_goof_label(b1)}{_goof_label(b2)},"
            return subtree(tuple(x for x in h1 if x != b1),
                           tuple(x for x in h2 if x != b2),
                           rnd + 1, nh, score + gain)

        def p2_node(b1: int) -> Node:
            kids = tuple(resolve(b1, b2) for b2 in h2)
            return decision(P2, hist, tuple(_goof_label(b) for b in h2), kids)

        kids = tuple(p2_node(b1) for b1 in h1)
        return decision(P1, hist, tuple(_goof_label(b) for b in h1), kids)

    hand = (1, 2, 3, 4, 5)
    return Game(name="goofspiel5", root=subtree(hand, hand, 1, "", Fraction(0)))


# ---------------------------------------------------------------------------
# Name-based dispatch used by the CLI

BUILTIN_NAMES = ("kuhn", "leduc", "goofspiel5")


def game_from_name(name: str) -> Game:
    """Resolve a CLI game name.

    Accepts the builtin names plus ``matrix:<path>`` (JSON payoff matrix
    file), ``bandit:<comma-separated payoffs>``, and ``file:<path>`` (full
    JSON game description).
    """
    if name == "kuhn":
        return build_kuhn()
    if name == "leduc":
        return build_leduc()
    if name == "goofspiel5":
        return build_goofspiel5()
    if name.startswith("bandit:"):
        spec = name[len("bandit:"):]
        try:
            payoffs = [float(x) for x in spec.split(",") if x != ""]
        except ValueError as exc:
            raise GameSpecError(f"bad bandit payoff list {spec!r}: {exc}") from None
        return build_bandit(payoffs, name=name)
    if name.startswith("matrix:"):
        from .loader import load_matrix_file
        return build_matrix_game(load_matrix_file(name[len("matrix:"):]), name=name)
    if name.startswith("file:"):
        from .loader import load_game_file
        return load_game_file(name[len("file:"):])
    raise GameSpecError(
        f"unknown game {name!r}; valid names: {', '.join(BUILTIN_NAMES)}, "
        "matrix:<path>, bandit:<p0,p1,...>, file:<path>")
