"""Finite determinacy solver vs the strategy-enumeration oracle."""

import random

import pytest

from projcalc.errors import FormatError, ResourceLimitError
from projcalc.games import (
    BUDGET_ENV,
    FiniteGame,
    compile_target_expr,
    dumps_game,
    game_from_json,
    loads_game,
    solve,
    verify_strategy,
)

from .oracles import brute_force_winner, dual_prefix_holds


def mask_game(k: int, n_rounds: int, mask: int) -> FiniteGame:
    return FiniteGame(k, n_rounds, mask=mask)


def test_full_and_empty_targets():
    g = mask_game(2, 0, (1 << 4) - 1)
    assert solve(g) == ("I", {(): 0})
    g = mask_game(2, 0, 0)
    winner, s = solve(g)
    assert winner == "II"
    assert verify_strategy(g, s, "II")


def test_diagonal_game():
    # target: the play lands on the diagonal a0 = b0; II escapes it
    g = FiniteGame(2, 0, predicate=compile_target_expr("a0 == b0", 0))
    winner, s = solve(g)
    assert winner == "II"
    assert s == {(0,): 1, (1,): 0}
    assert verify_strategy(g, s, "II")


def test_verify_examples():
    empty = mask_game(2, 0, 0)
    assert not verify_strategy(empty, {(): 0}, "I")  # nothing lands in the empty target
    off_diag = FiniteGame(2, 0, predicate=compile_target_expr("a0 != b0", 0))
    copy = {(0,): 0, (1,): 1}
    assert verify_strategy(off_diag, copy, "II")
    assert not verify_strategy(off_diag, {(0,): 1, (1,): 0}, "II")
    assert not verify_strategy(off_diag, {}, "II")  # not total on reachable histories
    with pytest.raises(ValueError, match="player"):
        verify_strategy(off_diag, copy, "2")


def test_single_move_alphabet():
    g = mask_game(1, 1, 1)  # the unique play is in the target
    assert solve(g) == ("I", {(): 0, (0, 0): 0})
    g = mask_game(1, 1, 0)
    winner, s = solve(g)
    assert winner == "II"
    assert verify_strategy(g, s, "II")


def test_exhaustive_k2_n0():
    g0 = FiniteGame(2, 0, mask=0)
    for mask in range(1 << g0.play_count):
        g = mask_game(2, 0, mask)
        winner, s = solve(g)
        assert winner == brute_force_winner(2, 0, g.hits)
        assert verify_strategy(g, s, winner)
        assert not verify_strategy(g, s, "II" if winner == "I" else "I")
        # quantifier De Morgan: II wins iff the dual prefix over the
        # complement target holds
        assert (winner == "II") == dual_prefix_holds(2, 0, g.hits)


def test_sampled_k2_n1_against_oracle():
    rng = random.Random(4096)
    masks = {0, (1 << 16) - 1, 0x00FF, 0xAAAA}
    masks.update(rng.getrandbits(16) for _ in range(40))
    for mask in sorted(masks):
        g = mask_game(2, 1, mask)
        winner, s = solve(g)
        assert winner == brute_force_winner(2, 1, g.hits)
        assert verify_strategy(g, s, winner)
        assert (winner == "II") == dual_prefix_holds(2, 1, g.hits)


def test_strategy_moves_are_least_indexed():
    # I can win with either move; solve must report move 0
    g = mask_game(2, 0, (1 << 4) - 1)
    _, s = solve(g)
    assert s[()] == 0
    # II escapes {(0,0),(1,0),(1,1)} only via (0,1); after a0=1 II loses,
    # so only the (0,) entry is recorded
    g = mask_game(2, 0, 0b1101)
    winner, s = solve(g)
    assert winner == "I" and s == {(): 1}


def test_budget_enforced(monkeypatch):
    big = FiniteGame(3, 5, mask=0)
    with pytest.raises(ResourceLimitError) as exc:
        solve(big, budget=1000)
    assert exc.value.budget == 1000
    monkeypatch.setenv(BUDGET_ENV, "50")
    with pytest.raises(ResourceLimitError):
        solve(FiniteGame(2, 2, mask=0))
    # an explicit budget wins over the environment
    assert solve(FiniteGame(2, 2, mask=0), budget=10_000)[0] == "II"
    monkeypatch.setenv(BUDGET_ENV, "plenty")
    with pytest.raises(ValueError, match=BUDGET_ENV):
        solve(FiniteGame(2, 0, mask=0))


def test_game_constructor_rejects():
    with pytest.raises(ValueError):
        FiniteGame(0, 0, mask=0)
    with pytest.raises(ValueError):
        FiniteGame(2, -1, mask=0)
    with pytest.raises(ValueError):
        FiniteGame(2, 0)  # no target at all
    with pytest.raises(ValueError):
        FiniteGame(2, 0, mask=0, predicate=lambda p: True)


def test_target_expr_arithmetic():
    pred = compile_target_expr("(a0 + b0) % 2 == 1 and a1 >= b1", 1)
    assert pred((0, 1, 1, 0))
    assert not pred((1, 1, 1, 0))
    assert not pred((0, 1, 0, 1))


@pytest.mark.parametrize("bad", [
    "__import__('os').system('true')",
    "a0.bit_length()",
    "[a0 for a0 in range(2)]",
    "b9 == 0",
    "a0 == 'x'",
    "a0 ==",
])
def test_target_expr_rejects(bad):
    with pytest.raises(FormatError):
        compile_target_expr(bad, 0)


def test_game_round_trips():
    g = FiniteGame(2, 1, mask=0xBEEF)
    text = dumps_game(g)
    assert dumps_game(loads_game(text)) == text
    assert loads_game(text).mask == 0xBEEF
    ge = FiniteGame(2, 0, predicate=compile_target_expr("a0 == b0", 0), expr="a0 == b0")
    ge2 = loads_game(dumps_game(ge))
    assert ge2.expr == "a0 == b0"
    assert solve(ge2) == solve(ge)


def test_game_disk_round_trip(tmp_path):
    path = tmp_path / "g.pjg"
    g = FiniteGame(2, 1, mask=0x1234)
    path.write_text(dumps_game(g), encoding="utf-8")
    assert loads_game(path.read_text(encoding="utf-8")).mask == 0x1234


@pytest.mark.parametrize("doc", [
    '{"k": 2, "N": 0, "target": "0x0"}',  # missing schema
    '{"schema": "projcalc/1", "k": 2, "target": "0x0"}',
    '{"schema": "projcalc/1", "k": 0, "N": 0, "target": "0x0"}',
    '{"schema": "projcalc/1", "k": 2, "N": -1, "target": "0x0"}',
    '{"schema": "projcalc/1", "k": 2, "N": 0, "target": "xyz"}',
    '{"schema": "projcalc/1", "k": 2, "N": 0, "target": "-0x1"}',
    '{"schema": "projcalc/1", "k": 2, "N": 0, "target": "0x10"}',  # 5th bit, only 4 plays
    '{"schema": "projcalc/1", "k": 2, "N": 0, "target": 7}',
    '{"schema": "projcalc/1", "k": 2, "N": 0, "target": {"expr": "c0"}}',
    '[1]',
    '{"schema":',
])
def test_loads_game_rejects(doc):
    with pytest.raises(FormatError):
        loads_game(doc)


def test_from_json_play_count_boundary():
    # k=2, N=0 has 4 plays; 0xF is the largest legal bitset
    g = game_from_json({"schema": "projcalc/1", "k": 2, "N": 0, "target": "0xf"})
    assert g.mask == 0xF
