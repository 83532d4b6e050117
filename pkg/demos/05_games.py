"""Finite alternating games: solve, inspect the strategy, verify it.

Player I moves at even turns, player II at odd ones; after 2N+2 moves the
play either lands in the target (I wins) or misses it (II wins).  The
solver returns the winner with a winning strategy, and the strategy can be
re-verified without trusting the solver.

Run:  python3 demos/05_games.py
"""

import pathlib

from projcalc.games import (FiniteGame, compile_target_expr, loads_game,
                            solve, verify_strategy)

path = pathlib.Path(__file__).parent / "games" / "parity.pjg"
game = loads_game(path.read_text())
print(f"loaded game: k={game.k}, N={game.n_rounds}, target expr {game.expr!r}")

winner, strategy = solve(game)
print(f"winner: player {winner}")
print("strategy (history -> move):")
for hist, move in sorted(strategy.items()):
    shown = " ".join(map(str, hist)) if hist else "(start)"
    print(f"  {shown:8s} -> {move}")
print("independent re-verification:", verify_strategy(game, strategy, winner))

# targets can also be explicit bitsets over the 16 possible plays
bitset = FiniteGame(2, 1, mask=0b1000_0000_0000_0001)
w, s = solve(bitset)
print(f"\nbitset target 0x{bitset.mask:04x}: winner {w} "
      f"(only the all-zero and all-one plays count)")

# player I needs both rounds matched; II escapes by mismatching the last
# move, so earlier moves are free and the least index gets recorded
matching = compile_target_expr("a0 == b0 and a1 == b1", 1)
mirror = FiniteGame(2, 1, predicate=matching)
w, s = solve(mirror)
print(f"\nmatching target: winner {w} (II breaks the final equality)")
print("recorded strategy:", dict(sorted(s.items())))
