"""JSON game-description loader.

Schema (one node object per tree node, nested through ``child``):

    {"name": "...", "root": <node>}

    <node> :=
      {"type": "decision", "player": 1 | 2, "infoset": "<key>"?,
       "actions": [{"name": "...", "child": <node>}, ...]}
    | {"type": "chance",
       "actions": [{"name": "...", "child": <node>}, ...],
       "probs": [p0, p1, ...]}
    | {"type": "terminal", "payoff_p1": <number>, "payoff_p2": <number>?}

``infoset`` defaults to the action path from the root, which models perfect
information; supply explicit keys to hide information.  ``payoff_p2``
defaults to ``-payoff_p1``; supplying anything else will be flagged by game
validation.  Matrix files (for ``matrix:<path>``) are either a bare 2-D JSON
array or ``{"matrix": [[...], ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .model import CHANCE, P1, P2, Game, Node, TERMINAL


class GameFileError(ValueError):
    """A game description file is malformed."""


def _need(obj: dict, key: str, types, where: str):
    if key not in obj:
        raise GameFileError(f"{where}: missing key {key!r}")
    val = obj[key]
    if not isinstance(val, types):
        expected = types.__name__ if isinstance(types, type) else \
            "/".join(t.__name__ for t in types)
        raise GameFileError(
            f"{where}: key {key!r} expected {expected}, got {type(val).__name__}")
    return val


def _parse_node(obj, path: str) -> Node:
    where = f"node {path or '<root>'}"
    if not isinstance(obj, dict):
        raise GameFileError(f"{where}: expected object, got {type(obj).__name__}")
    kind = _need(obj, "type", str, where)

    if kind == "terminal":
        payoff = float(_need(obj, "payoff_p1", (int, float), where))
        p2 = obj.get("payoff_p2")
        if p2 is not None and not isinstance(p2, (int, float)):
            raise GameFileError(f"{where}: key 'payoff_p2' expected number, "
                                f"got {type(p2).__name__}")
        return Node(player=TERMINAL, payoff_p1=payoff,
                    payoff_p2=None if p2 is None else float(p2))
    if kind not in ("decision", "chance"):
        raise GameFileError(
            f"{where}: key 'type' expected decision/chance/terminal, got {kind!r}")

    actions = _need(obj, "actions", list, where)
    names: list[str] = []
    children: list[Node] = []
    for i, entry in enumerate(actions):
        if not isinstance(entry, dict):
            raise GameFileError(f"{where}: actions[{i}] expected object")
        name = _need(entry, "name", str, f"{where} actions[{i}]")
        child_obj = _need(entry, "child", dict, f"{where} actions[{i}]")
        names.append(name)
        children.append(_parse_node(child_obj, f"{path}/{name}" if path else name))

    if kind == "chance":
        probs = _need(obj, "probs", list, where)
        if len(probs) != len(actions):
            raise GameFileError(
                f"{where}: {len(probs)} probs for {len(actions)} actions")
        if not all(isinstance(p, (int, float)) for p in probs):
            raise GameFileError(f"{where}: key 'probs' expected list of numbers")
        return Node(player=CHANCE, actions=tuple(names), children=tuple(children),
                    chance_probs=tuple(float(p) for p in probs))

    if kind == "decision":
        player = _need(obj, "player", int, where)
        if player not in (1, 2):
            raise GameFileError(f"{where}: key 'player' expected 1 or 2, got {player}")
        key = obj.get("infoset", path)
        if not isinstance(key, str):
            raise GameFileError(f"{where}: key 'infoset' expected str, "
                                f"got {type(key).__name__}")
        return Node(player=P1 if player == 1 else P2, infoset_key=key,
                    actions=tuple(names), children=tuple(children))

    raise GameFileError(
        f"{where}: key 'type' expected decision/chance/terminal, got {kind!r}")


def game_from_json(obj, default_name: str = "custom") -> Game:
    if not isinstance(obj, dict):
        raise GameFileError(f"top level: expected object, got {type(obj).__name__}")
    name = obj.get("name", default_name)
    if not isinstance(name, str):
        raise GameFileError(f"top level: key 'name' expected str, got {type(name).__name__}")
    root = _parse_node(_need(obj, "root", dict, "top level"), "")
    return Game(name=name, root=root)


def load_game_file(path: str | Path) -> Game:
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise GameFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise GameFileError(f"{path} is not valid JSON: {exc}") from None
    return game_from_json(obj, default_name=path.stem)


def load_matrix_file(path: str | Path):
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except OSError as exc:
        raise GameFileError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise GameFileError(f"{path} is not valid JSON: {exc}") from None
    if isinstance(obj, dict):
        obj = obj.get("matrix")
    if (not isinstance(obj, list) or not obj
            or not all(isinstance(row, list) for row in obj)):
        raise GameFileError(f"{path}: expected a 2-D array or {{\"matrix\": [[...]]}}")
    return obj
