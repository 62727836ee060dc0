"""Brute-force game oracles used for verification.

These are plain exhaustive AND/OR tree evaluations written directly from
the game rules; they share no code with the rule engine.
"""

from __future__ import annotations

from functools import lru_cache


MAX_NIM = 200
MAX_MATRIX_DEPTH = 14
MAX_C4_CELLS = 20


def nim_first_player_wins(n):
    """True iff the first player can force taking the last match.

    Moves: first take 1..n-1, afterwards 1..2*previous, never more than
    what remains; the player who takes the last match wins.
    """
    if n < 2:
        return False
    if n > MAX_NIM:
        raise ValueError(f"nim oracle limited to n <= {MAX_NIM}")

    @lru_cache(maxsize=None)
    def mover_wins(remaining, limit):
        for take in range(1, min(limit, remaining) + 1):
            if take == remaining or not mover_wins(remaining - take, 2 * take):
                return True
        return False

    return mover_wins(n, n - 1)


def nim_losing_positions(lo, hi):
    return [n for n in range(lo, hi + 1) if not nim_first_player_wins(n)]


def matrix_first_player_wins(matrix, depth):
    """Row player halves the rows (keep top/bottom), column player halves
    the columns (keep left/right), row player moves first; after `depth`
    moves the single remaining cell must be 1 for the row player to win."""
    if depth > MAX_MATRIX_DEPTH:
        raise ValueError(f"matrix oracle limited to depth <= {MAX_MATRIX_DEPTH}")
    rows = len(matrix)
    cols = len(matrix[0])
    expect_rows = 1 << ((depth + 1) // 2)
    expect_cols = 1 << (depth // 2)
    if rows != expect_rows or cols != expect_cols:
        raise ValueError(f"matrix shape {rows}x{cols} does not fit depth {depth}")

    def wins(r0, r1, c0, c1, d, row_turn):
        if d == 0:
            return matrix[r0][c0] == 1
        if row_turn:
            half = (r1 - r0 + 1) // 2
            return (wins(r0, r0 + half - 1, c0, c1, d - 1, False)
                    or wins(r0 + half, r1, c0, c1, d - 1, False))
        half = (c1 - c0 + 1) // 2
        return (wins(r0, r1, c0, c0 + half - 1, d - 1, True)
                and wins(r0, r1, c0 + half, c1, d - 1, True))

    return wins(0, rows - 1, 0, cols - 1, depth, True)


def connect4_first_player_wins(rows, cols):
    """Exhaustive evaluation of the drop-a-coin alignment game.

    The first player wins by making a line of four; a position where the
    opponent has no legal move counts against the player who is stuck:
    a stuck first player loses, a stuck second player hands the win to
    the first player (no draws in this reading).
    """
    if rows * cols > MAX_C4_CELLS:
        raise ValueError(f"connect-four oracle limited to {MAX_C4_CELLS} cells")

    def aligned(state, col):
        column = state[col]
        row = len(column) - 1
        player = column[row]

        def cell(x, y):
            if 0 <= x < cols and y >= 0 and y < len(state[x]):
                return state[x][y]
            return None

        for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
            count = 1
            for sign in (1, -1):
                x, y = col + sign * dx, row + sign * dy
                while cell(x, y) == player:
                    count += 1
                    x += sign * dx
                    y += sign * dy
            if count >= 4:
                return True
        return False

    @lru_cache(maxsize=None)
    def first_wins(state, first_to_move):
        legal = [c for c in range(cols) if len(state[c]) < rows]
        if first_to_move:
            for c in legal:
                nxt = tuple(state[x] + (0,) if x == c else state[x]
                            for x in range(cols))
                if aligned(nxt, c) or first_wins(nxt, False):
                    return True
            return False
        for c in legal:
            nxt = tuple(state[x] + (1,) if x == c else state[x]
                        for x in range(cols))
            if aligned(nxt, c) or not first_wins(nxt, True):
                return False
        return True

    empty = tuple(() for _ in range(cols))
    return first_wins(empty, True)
