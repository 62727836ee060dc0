"""Connect-four over a mutable board host.

The board and the move-parity counter live in the host; coin drops are
effects undone on backtracking, isfull/iswon are pure calls usable in
argument position.
"""

from __future__ import annotations

from ..builtins import BuiltinRegistry, HostState
from ..parser import parse_program
from ..terms import User, BOT, TOP


def connect4_dsl(cols):
    return f"""\
if_top @ ifrule(top,_) <=> true.
if_bot @ ifrule(bot,N) <=> coin(N), cfe(iswon(N)).
u_top  @ cfu(top) <=> true.
u_bot  @ cfu(bot) <=> forall It in [1..{cols}] | ifrule(isfull(It),It).
e_top  @ cfe(top) <=> false.
e_bot  @ cfe(bot) <=> exists It in [1..{cols}] | coin(It), cfu(iswon(It)).
"""


class Connect4Host(HostState):
    """Column-major board; coins alternate players via the move counter."""

    def __init__(self, rows, cols):
        if rows < 1 or cols < 1:
            raise ValueError("board needs at least one row and one column")
        self.rows = rows
        self.cols = cols
        self.board = [[] for _ in range(cols)]
        self.moves = 0

    def checkpoint(self):
        # later moves only append, so per-column heights are enough
        return (tuple(len(col) for col in self.board), self.moves)

    def rollback(self, mark):
        heights, moves = mark
        for col, h in zip(self.board, heights):
            del col[h:]
        self.moves = moves

    def digest(self):
        return repr((tuple(tuple(col) for col in self.board), self.moves % 2))

    def drop_coin(self, column):
        col = self.board[column - 1]
        if len(col) >= self.rows:
            return False
        col.append(self.moves % 2)
        self.moves += 1
        return True

    def is_full(self, column):
        return len(self.board[column - 1]) >= self.rows

    def won_by_last_coin(self, column):
        """Alignment of four through the top coin of `column`, for the
        player who played it (the player who just moved)."""
        col = column - 1
        stack = self.board[col]
        if not stack:
            return False
        row = len(stack) - 1
        player = stack[row]
        board = self.board
        for dx, dy in ((1, 0), (0, 1), (1, 1), (1, -1)):
            count = 1
            for sign in (1, -1):
                x, y = col + sign * dx, row + sign * dy
                while (0 <= x < self.cols and 0 <= y < len(board[x])
                       and board[x][y] == player):
                    count += 1
                    x += sign * dx
                    y += sign * dy
            if count >= 4:
                return True
        return False


def connect4_registry():
    reg = BuiltinRegistry()
    reg.register("coin", "effect", 1, Connect4Host.drop_coin)
    reg.register("isfull", "pure", 1,
                 lambda host, c: TOP if host.is_full(c.value) else BOT)
    reg.register("iswon", "pure", 1,
                 lambda host, c: TOP if host.won_by_last_coin(c.value) else BOT)
    return reg


def connect4_program(rows, cols):
    program = parse_program(connect4_dsl(cols))
    program.registry = connect4_registry()
    return program, Connect4Host(rows, cols)


def connect4_goal():
    # game not yet won, first player to move
    return [User("cfe", [BOT])]
