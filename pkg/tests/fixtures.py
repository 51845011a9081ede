"""Small deterministic matrix models shared by the replica and acceptance tests."""

from __future__ import annotations

import random

import numpy as np

from motzkin_functionals.replica import MatrixModel

A_GENS = {
    "x": [[1, 1, 0], [1, 0, 1], [0, 1, -1]],
    "y": [[0, 1, 1], [1, 1, 0], [-1, 0, 1]],
}
B_GENS = {"u": [[0, 1], [1, 1]], "v": [[1, -1], [1, 0]]}
C_GENS = {"z": [[-1, 1], [1, 1]]}


def fixed_models(k: int = 2, exact: bool = True) -> list[MatrixModel]:
    gens = [("A", A_GENS), ("B", B_GENS), ("C", C_GENS)][:k]
    return [MatrixModel(lab, g, exact=exact) for lab, g in gens]


def random_models(rng: random.Random, k: int, sizes=(2, 3)) -> list[MatrixModel]:
    """Models with entries in {-1, 0, 1}; each generator gets a nonzero first column."""
    out = []
    for i in range(k):
        m = rng.choice(sizes)
        gens = {}
        for name in ("x", "y")[: rng.randint(1, 2)]:
            mat = np.array([[rng.choice((-1, 0, 1)) for _ in range(m)] for _ in range(m)])
            mat[1, 0] = mat[0, 1] = 1
            gens[name] = mat.tolist()
        out.append(MatrixModel(i + 1, gens))
    return out
