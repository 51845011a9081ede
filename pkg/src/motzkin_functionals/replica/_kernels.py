"""Floating-point inner loops of the replica oracle.

Two kernels are provided, each in a numba and a plain numpy flavour:

``expanded_expectation``
    ``Σ_choices Π_f c[f, t_f] · Π_s (M[0, t_0, s] ⋯ M[F-1, t_{F-1}, s])[0, 0]``,
    i.e. the state of a product of sums of elementary tensors.
``apply_site``
    contraction of one tensor factor of a state vector with a matrix.

Set ``MOTZKIN_FUNCTIONALS_BACKEND=numpy`` to force the numpy versions; by
default numba is used whenever it can be imported.
"""

from __future__ import annotations

import os

import numpy as np

try:  # pragma: no cover - exercised through the backend switch
    import numba
except ImportError:  # pragma: no cover
    numba = None

BACKEND_ENV = "MOTZKIN_FUNCTIONALS_BACKEND"
_CHUNK = 1 << 14


def _expanded_numpy(coefs, mats, nterms):
    F = nterms.shape[0]
    S, m = mats.shape[2], mats.shape[3]
    total_choices = int(np.prod(nterms))
    radix = np.ones(F, dtype=np.int64)
    for f in range(F - 2, -1, -1):
        radix[f] = radix[f + 1] * nterms[f + 1]
    acc = 0.0
    for start in range(0, total_choices, _CHUNK):
        c = np.arange(start, min(start + _CHUNK, total_choices), dtype=np.int64)
        choice = (c[:, None] // radix[None, :]) % nterms[None, :]
        coef = np.ones(c.shape[0])
        rows = np.zeros((c.shape[0], S, m))
        rows[:, :, 0] = 1.0
        for f in range(F):
            coef *= coefs[f, choice[:, f]]
            rows = np.einsum("csi,csij->csj", rows, mats[f, choice[:, f]])
        acc += float(np.sum(coef * np.prod(rows[:, :, 0], axis=1)))
    return acc


def _apply_site_numpy(vec, left, m, right, mat):
    return np.matmul(mat, vec.reshape(left, m, right)).reshape(-1)


if numba is not None:

    @numba.njit(cache=False, nogil=True)
    def _expanded_numba(coefs, mats, nterms):  # pragma: no cover - compiled
        F = nterms.shape[0]
        S = mats.shape[2]
        m = mats.shape[3]
        total_choices = 1
        for f in range(F):
            total_choices *= nterms[f]
        idx = np.zeros(F, dtype=np.int64)
        row = np.empty(m)
        tmp = np.empty(m)
        acc = 0.0
        for c in range(total_choices):
            r = c
            coef = 1.0
            for f in range(F - 1, -1, -1):
                idx[f] = r % nterms[f]
                r //= nterms[f]
                coef *= coefs[f, idx[f]]
            if coef == 0.0:
                continue
            prod = coef
            for s in range(S):
                for i in range(m):
                    row[i] = 0.0
                row[0] = 1.0
                for f in range(F):
                    for j in range(m):
                        v = 0.0
                        for i in range(m):
                            v += row[i] * mats[f, idx[f], s, i, j]
                        tmp[j] = v
                    for j in range(m):
                        row[j] = tmp[j]
                prod *= row[0]
                if prod == 0.0:
                    break
            acc += prod
        return acc

    @numba.njit(cache=False, nogil=True)
    def _apply_site_numba(vec, left, m, right, mat):  # pragma: no cover - compiled
        out = np.zeros(vec.shape[0])
        for l in range(left):
            base = l * m * right
            for i in range(m):
                for k in range(m):
                    a = mat[i, k]
                    if a != 0.0:
                        src = base + k * right
                        dst = base + i * right
                        for r in range(right):
                            out[dst + r] += a * vec[src + r]
        return out


def backend() -> str:
    """The active backend name, re-read from the environment on each call."""
    want = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if want not in ("numba", "numpy"):
        raise ValueError(f"{BACKEND_ENV} must be 'numba' or 'numpy', got {want!r}")
    if want == "numba" and numba is None:
        return "numpy"
    return want


def expanded_expectation(coefs: np.ndarray, mats: np.ndarray, nterms: np.ndarray, use: str | None = None) -> float:
    """See module docstring; ``mats`` has shape ``(F, T, S, m, m)``."""
    coefs = np.ascontiguousarray(coefs, dtype=np.float64)
    mats = np.ascontiguousarray(mats, dtype=np.float64)
    nterms = np.ascontiguousarray(nterms, dtype=np.int64)
    if (use or backend()) == "numba":
        return float(_expanded_numba(coefs, mats, nterms))
    return _expanded_numpy(coefs, mats, nterms)


def apply_site(vec: np.ndarray, left: int, m: int, right: int, mat: np.ndarray, use: str | None = None) -> np.ndarray:
    vec = np.ascontiguousarray(vec, dtype=np.float64)
    mat = np.ascontiguousarray(mat, dtype=np.float64)
    if (use or backend()) == "numba":
        return _apply_site_numba(vec, left, m, right, mat)
    return _apply_site_numpy(vec, left, m, right, mat)
