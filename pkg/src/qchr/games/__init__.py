from .nim import NIM_DSL, nim_program, nim_program_from_dsl, nim_goal
from .matrix import (
    MATRIX_DSL, MatrixHost, matrix_program, matrix_goal, matrix_shape,
    random_matrix, write_matrix_file, read_matrix_file,
)
from .connect4 import Connect4Host, connect4_program, connect4_goal, connect4_dsl
from . import oracles

__all__ = [
    "NIM_DSL", "nim_program", "nim_program_from_dsl", "nim_goal",
    "MATRIX_DSL", "MatrixHost", "matrix_program", "matrix_goal",
    "matrix_shape", "random_matrix", "write_matrix_file", "read_matrix_file",
    "Connect4Host", "connect4_program", "connect4_goal", "connect4_dsl",
    "oracles",
]
