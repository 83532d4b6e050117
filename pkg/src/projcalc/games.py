"""Finite alternating games solved by backward induction.

A game fixes an alphabet {0..k-1} and a horizon: players alternate for
2N+2 plies, Player I moving first, and Player I wins exactly when the
completed play lands in the target set.  Finite determinacy (exactly one
player has a winning strategy) falls out of the induction; the solver also
extracts the winner's strategy, choosing the least winning move at every
node so results are reproducible.

Targets come as bitsets over play indices (big-endian base-k encoding of
the move sequence) or as predicates; game files support a restricted
arithmetic expression form over the move names a0, b0, a1, b1, ...
"""

from __future__ import annotations

import ast as pyast
import json
import os
from dataclasses import dataclass
from typing import Callable

from .errors import FormatError, ResourceLimitError

DEFAULT_NODE_BUDGET = 10_000_000
BUDGET_ENV = "PROJCALC_NODE_BUDGET"


@dataclass
class FiniteGame:
    k: int
    n_rounds: int  # horizon N; plays have 2N+2 moves
    mask: int | None = None
    predicate: Callable[[tuple], bool] | None = None
    expr: str | None = None  # source text when the predicate came from a file

    def __post_init__(self):
        if self.k < 1 or self.n_rounds < 0:
            raise ValueError("need alphabet size k >= 1 and horizon N >= 0")
        if (self.mask is None) == (self.predicate is None):
            raise ValueError("exactly one of mask and predicate must be given")

    @property
    def play_length(self) -> int:
        return 2 * self.n_rounds + 2

    @property
    def play_count(self) -> int:
        return self.k ** self.play_length

    def play_index(self, play: tuple) -> int:
        idx = 0
        for mv in play:
            idx = idx * self.k + mv
        return idx

    def hits(self, play: tuple) -> bool:
        if self.mask is not None:
            return bool((self.mask >> self.play_index(play)) & 1)
        return bool(self.predicate(play))


def _node_budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_NODE_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None


def _tree_nodes(k: int, length: int) -> int:
    # nodes of the full k-ary tree of the given depth, root included
    return (k ** (length + 1) - 1) // (k - 1) if k > 1 else length + 1


def solve(g: FiniteGame, budget: int | None = None) -> tuple[str, dict]:
    """Winner and the winner's strategy (own-turn history -> move).

    The whole tree is walked (no alpha pruning) because both players'
    candidate strategies need entries across all opponent moves; the cost
    is checked against the node budget up front.
    """
    limit = _node_budget(budget)
    if _tree_nodes(g.k, g.play_length) > limit:
        raise ResourceLimitError(limit)
    s_one: dict = {}
    s_two: dict = {}
    root = _wins(g, (), s_one, s_two)
    return ("I", s_one) if root else ("II", s_two)


def _wins(g: FiniteGame, hist: tuple, s_one: dict, s_two: dict) -> bool:
    """Does Player I win from this node with optimal play on both sides?"""
    if len(hist) == g.play_length:
        return g.hits(hist)
    outcomes = [_wins(g, hist + (mv,), s_one, s_two) for mv in range(g.k)]
    if len(hist) % 2 == 0:
        if any(outcomes):
            s_one[hist] = outcomes.index(True)
            return True
        return False
    if all(outcomes):
        return True
    s_two[hist] = outcomes.index(False)
    return False


def verify_strategy(g: FiniteGame, strategy: dict, player: str) -> bool:
    """True iff every opponent completion against the strategy wins."""
    if player not in ("I", "II"):
        raise ValueError(f"player must be 'I' or 'II', got {player!r}")
    own_parity = 0 if player == "I" else 1

    def walk(hist: tuple) -> bool:
        if len(hist) == g.play_length:
            hit = g.hits(hist)
            return hit if player == "I" else not hit
        if len(hist) % 2 == own_parity:
            if hist not in strategy:
                return False
            return walk(hist + (strategy[hist],))
        return all(walk(hist + (mv,)) for mv in range(g.k))

    return walk(())


# --- expression targets --------------------------------------------------------

_ALLOWED_NODES = (
    pyast.Expression,
    pyast.BoolOp,
    pyast.And,
    pyast.Or,
    pyast.UnaryOp,
    pyast.Not,
    pyast.USub,
    pyast.UAdd,
    pyast.BinOp,
    pyast.Add,
    pyast.Sub,
    pyast.Mult,
    pyast.Mod,
    pyast.FloorDiv,
    pyast.Compare,
    pyast.Eq,
    pyast.NotEq,
    pyast.Lt,
    pyast.LtE,
    pyast.Gt,
    pyast.GtE,
    pyast.Name,
    pyast.Load,
    pyast.Constant,
)


def compile_target_expr(source: str, n_rounds: int) -> Callable[[tuple], bool]:
    """Predicate over plays from an arithmetic expression in a0, b0, a1, ...

    Only boolean/arithmetic operators, comparisons, integer constants and
    the move names are allowed; anything else is rejected.
    """
    names = {}
    for i in range(n_rounds + 1):
        names[f"a{i}"] = 2 * i
        names[f"b{i}"] = 2 * i + 1
    try:
        tree = pyast.parse(source, mode="eval")
    except SyntaxError as exc:
        raise FormatError(f"bad target expression: {exc.msg}") from None
    for node in pyast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise FormatError(f"target expression uses forbidden syntax: {type(node).__name__}")
        if isinstance(node, pyast.Constant) and not isinstance(node.value, (int, bool)):
            raise FormatError(f"target expression constant {node.value!r} is not an integer")
        if isinstance(node, pyast.Name) and node.id not in names:
            raise FormatError(f"unknown move name {node.id!r} in target expression")
    code = compile(tree, "<target>", "eval")

    def predicate(play: tuple) -> bool:
        env = {name: play[pos] for name, pos in names.items()}
        return bool(eval(code, {"__builtins__": {}}, env))

    return predicate


# --- wire format (.pjg) --------------------------------------------------------


def game_to_json(g: FiniteGame) -> dict:
    if g.mask is not None:
        target = hex(g.mask)
    elif g.expr is not None:
        target = {"expr": g.expr}
    else:
        raise FormatError("only bitset and expression targets can be serialized")
    return {"schema": "projcalc/1", "k": g.k, "N": g.n_rounds, "target": target}


def game_from_json(obj) -> FiniteGame:
    if not isinstance(obj, dict):
        raise FormatError("game document must be an object")
    if obj.get("schema") != "projcalc/1":
        raise FormatError(f"unsupported schema {obj.get('schema')!r}")
    try:
        k = int(obj["k"])
        n_rounds = int(obj["N"])
        target = obj["target"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed game: {exc!r}") from None
    if k < 1 or n_rounds < 0:
        raise FormatError(f"need k >= 1 and N >= 0, got k={k}, N={n_rounds}")
    if isinstance(target, str):
        try:
            mask = int(target, 16)
        except ValueError:
            raise FormatError(f"bad bitset {target!r}") from None
        if mask < 0:
            raise FormatError("bitsets are nonnegative")
        game = FiniteGame(k, n_rounds, mask=mask)
        if mask >= 1 << game.play_count:
            raise FormatError("bitset has more bits than the game has plays")
        return game
    if isinstance(target, dict) and isinstance(target.get("expr"), str):
        pred = compile_target_expr(target["expr"], n_rounds)
        return FiniteGame(k, n_rounds, predicate=pred, expr=target["expr"])
    raise FormatError("target must be a hex bitset string or {\"expr\": ...}")


def dumps_game(g: FiniteGame) -> str:
    return json.dumps(game_to_json(g), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def loads_game(text: str) -> FiniteGame:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed JSON: {exc.msg}", offset=exc.pos) from None
    return game_from_json(obj)
