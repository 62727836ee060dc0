"""The matrix-cutting game: alternate halving of a 0/1 grid.

The row player (existential) keeps the top or bottom half, the column
player (universal) keeps the left or right half; after all moves the
remaining single cell must hold a 1.  For `depth` total moves the grid is
2^ceil(depth/2) rows by 2^floor(depth/2) columns, rows cut first.
"""

from __future__ import annotations

import random

from ..builtins import BuiltinRegistry, HostState
from ..parser import parse_program
from ..terms import User, IntConst


MATRIX_DSL = """\
u0 @ mgu(0) <=> cellone.
u  @ mgu(D) <=> forall It in [0..1] | keepcols(It), mge(D-1).
e0 @ mge(0) <=> cellone.
e  @ mge(D) <=> exists It in [0..1] | keeprows(It), mgu(D-1).
"""


def matrix_shape(depth):
    return 1 << ((depth + 1) // 2), 1 << (depth // 2)


class MatrixHost(HostState):
    """Grid plus the corners of the still-relevant submatrix."""

    def __init__(self, matrix):
        self.matrix = matrix
        self.r0, self.r1 = 0, len(matrix) - 1
        self.c0, self.c1 = 0, len(matrix[0]) - 1

    def checkpoint(self):
        return (self.r0, self.r1, self.c0, self.c1)

    def rollback(self, mark):
        self.r0, self.r1, self.c0, self.c1 = mark

    def digest(self):
        return f"{self.r0},{self.r1},{self.c0},{self.c1}"

    def keep_rows(self, which):
        half = (self.r1 - self.r0 + 1) // 2
        if half < 1:
            return False
        if which == 0:
            self.r1 = self.r0 + half - 1
        else:
            self.r0 = self.r0 + half
        return True

    def keep_cols(self, which):
        half = (self.c1 - self.c0 + 1) // 2
        if half < 1:
            return False
        if which == 0:
            self.c1 = self.c0 + half - 1
        else:
            self.c0 = self.c0 + half
        return True

    def cell_is_one(self):
        return self.matrix[self.r0][self.c0] == 1


def matrix_registry():
    reg = BuiltinRegistry()
    reg.register("keeprows", "effect", 1, MatrixHost.keep_rows)
    reg.register("keepcols", "effect", 1, MatrixHost.keep_cols)
    reg.register("cellone", "effect", 0, MatrixHost.cell_is_one)
    return reg


def matrix_program(depth, matrix):
    rows, cols = matrix_shape(depth)
    if len(matrix) != rows or any(len(row) != cols for row in matrix):
        raise ValueError(f"matrix shape must be {rows}x{cols} for depth {depth}")
    if any(cell not in (0, 1) for row in matrix for cell in row):
        raise ValueError("matrix cells must be 0 or 1")
    program = parse_program(MATRIX_DSL)
    program.registry = matrix_registry()
    return program, MatrixHost(matrix)


def matrix_goal(depth):
    return [User("mge", [IntConst(depth)])]


def random_matrix(depth, seed, density=0.5):
    rows, cols = matrix_shape(depth)
    rng = random.Random(seed)
    return [[1 if rng.random() < density else 0 for _ in range(cols)]
            for _ in range(rows)]


def write_matrix_file(path, depth, matrix):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{depth}\n")
        for row in matrix:
            fh.write("".join(str(cell) for cell in row) + "\n")


def read_matrix_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    depth = int(lines[0])
    matrix = [[int(ch) for ch in line] for line in lines[1:]]
    return depth, matrix
