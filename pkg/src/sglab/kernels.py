"""Hot numeric kernels with two interchangeable backends.

The numba backend compiles the per-shot and per-pair loops with @njit;
the numpy backend vectorizes the same arithmetic. Both consume the same
counter-based stream (see rng), so outputs match bit for bit. Select a
backend per call, via the SGLAB_BACKEND environment variable ("numba" or
"numpy"), or let the default pick numba when it is importable.
"""

from __future__ import annotations

import os

import numpy as np

from .rng import DOUBLE_SCALE, GOLDEN_GAMMA, MIX_MULT_1, MIX_MULT_2

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only when numba is absent
    HAS_NUMBA = False

BACKEND_ENV = "SGLAB_BACKEND"

_GAMMA = np.uint64(GOLDEN_GAMMA)
_MULT1 = np.uint64(MIX_MULT_1)
_MULT2 = np.uint64(MIX_MULT_2)
_U1 = np.uint64(1)
_U11 = np.uint64(11)
_U27 = np.uint64(27)
_U30 = np.uint64(30)
_U31 = np.uint64(31)

_SAMPLE_CHUNK = 1 << 16
_SCAN_BLOCK = 64


def available_backends() -> tuple[str, ...]:
    """Backends usable in this process."""
    return ("numba", "numpy") if HAS_NUMBA else ("numpy",)


def resolve_backend(name: str | None = None) -> str:
    """Pick a backend: explicit argument, else SGLAB_BACKEND, else best available."""
    choice = name or os.environ.get(BACKEND_ENV) or ("numba" if HAS_NUMBA else "numpy")
    choice = choice.strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {choice!r} (expected 'numba' or 'numpy')")
    if choice == "numba" and not HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    return choice


def _stream_doubles_np(seed: np.uint64, indices: np.ndarray) -> np.ndarray:
    """Vectorized counterpart of rng.uniform over an array of draw indices."""
    with np.errstate(over="ignore"):
        z = seed + (indices + _U1) * _GAMMA
        z ^= z >> _U30
        z *= _MULT1
        z ^= z >> _U27
        z *= _MULT2
        z ^= z >> _U31
    return (z >> _U11).astype(np.float64) * DOUBLE_SCALE


def _sample_paths_np(
    seed: np.uint64,
    shots: int,
    p_plus: np.ndarray,
    selection: np.ndarray,
    unpolarized: bool,
) -> np.ndarray:
    n_stages = p_plus.shape[0]
    draws = np.uint64(n_stages + (1 if unpolarized else 0))
    counts = np.zeros(3, dtype=np.int64)
    for start in range(0, shots, _SAMPLE_CHUNK):
        n = min(_SAMPLE_CHUNK, shots - start)
        base = np.arange(start, start + n, dtype=np.uint64) * draws
        if unpolarized:
            cur = (_stream_doubles_np(seed, base) >= 0.5).astype(np.int64)
            offset = 1
        else:
            cur = np.zeros(n, dtype=np.int64)
            offset = 0
        alive = np.ones(n, dtype=bool)
        for s in range(n_stages):
            u = _stream_doubles_np(seed, base + np.uint64(offset + s))
            nxt = (u >= p_plus[s, cur]).astype(np.int64)
            cur = np.where(alive, nxt, cur)
            sel = int(selection[s])
            if sel == 1:
                alive &= cur != 1
            elif sel == 2:
                alive &= cur != 0
        counts[0] += int(np.count_nonzero(alive & (cur == 0)))
        counts[1] += int(np.count_nonzero(alive & (cur == 1)))
        counts[2] += int(np.count_nonzero(~alive))
    return counts


def _scan_pairs_np(mats: np.ndarray, target2: float, tol2: float) -> tuple[np.ndarray, np.ndarray]:
    m = mats.shape[0]
    ok = np.empty((m, m), dtype=bool)
    for start in range(0, m, _SCAN_BLOCK):
        left = mats[start : start + _SCAN_BLOCK]
        prod = np.einsum("jab,ibc->jiac", left, mats)
        dev = np.abs(prod.real**2 + prod.imag**2 - target2)
        ok[start : start + _SCAN_BLOCK] = (dev <= tol2).all(axis=(2, 3))
    firsts, thirds = np.nonzero(ok.T)
    return firsts.astype(np.int64), thirds.astype(np.int64)


if HAS_NUMBA:

    @njit(cache=True)
    def _uniform_nb(seed, index):
        z = seed + (index + _U1) * _GAMMA
        z ^= z >> _U30
        z *= _MULT1
        z ^= z >> _U27
        z *= _MULT2
        z ^= z >> _U31
        return (z >> _U11) * DOUBLE_SCALE

    @njit(cache=True)
    def _sample_paths_nb(seed, shots, p_plus, selection, unpolarized):
        n_stages = p_plus.shape[0]
        draws = np.uint64(n_stages + (1 if unpolarized else 0))
        plus = 0
        minus = 0
        absorbed = 0
        for shot in range(shots):
            k = np.uint64(shot) * draws
            cur = 0
            if unpolarized:
                if _uniform_nb(seed, k) >= 0.5:
                    cur = 1
                k += _U1
            alive = True
            for s in range(n_stages):
                u = _uniform_nb(seed, k + np.uint64(s))
                cur = 0 if u < p_plus[s, cur] else 1
                sel = selection[s]
                if (sel == 1 and cur == 1) or (sel == 2 and cur == 0):
                    alive = False
                    break
            if not alive:
                absorbed += 1
            elif cur == 0:
                plus += 1
            else:
                minus += 1
        out = np.empty(3, dtype=np.int64)
        out[0] = plus
        out[1] = minus
        out[2] = absorbed
        return out

    @njit(cache=True)
    def _scan_pairs_nb(mats, target2, tol2):
        m = mats.shape[0]
        firsts = np.empty(m * m, dtype=np.int64)
        thirds = np.empty(m * m, dtype=np.int64)
        count = 0
        for i1 in range(m):
            a00 = mats[i1, 0, 0]
            a01 = mats[i1, 0, 1]
            a10 = mats[i1, 1, 0]
            a11 = mats[i1, 1, 1]
            for i3 in range(m):
                p00 = mats[i3, 0, 0] * a00 + mats[i3, 0, 1] * a10
                p01 = mats[i3, 0, 0] * a01 + mats[i3, 0, 1] * a11
                p10 = mats[i3, 1, 0] * a00 + mats[i3, 1, 1] * a10
                p11 = mats[i3, 1, 0] * a01 + mats[i3, 1, 1] * a11
                if (
                    abs(p00.real * p00.real + p00.imag * p00.imag - target2) <= tol2
                    and abs(p01.real * p01.real + p01.imag * p01.imag - target2) <= tol2
                    and abs(p10.real * p10.real + p10.imag * p10.imag - target2) <= tol2
                    and abs(p11.real * p11.real + p11.imag * p11.imag - target2) <= tol2
                ):
                    firsts[count] = i1
                    thirds[count] = i3
                    count += 1
        return firsts[:count].copy(), thirds[:count].copy()


def sample_paths(
    seed: int,
    shots: int,
    p_plus: np.ndarray,
    selection: np.ndarray,
    unpolarized: bool,
    backend: str | None = None,
) -> np.ndarray:
    """Walk shots particles through the stage table; return [plus, minus, absorbed].

    p_plus[s, i] is the probability of exiting stage s on the plus branch
    given entry component i; selection[s] is 0 (keep both), 1 (keep plus),
    or 2 (keep minus). Draw i of shot n uses stream index n*draws + i, so
    results are independent of chunking and iteration order.
    """
    chosen = resolve_backend(backend)
    table = np.ascontiguousarray(p_plus, dtype=np.float64)
    sel = np.ascontiguousarray(selection, dtype=np.int8)
    if chosen == "numba":
        return _sample_paths_nb(np.uint64(seed), shots, table, sel, unpolarized)
    return _sample_paths_np(np.uint64(seed), shots, table, sel, unpolarized)


def scan_pairs(
    mats: np.ndarray,
    target: float,
    tol: float,
    backend: str | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Find all (i1, i3) with every entry of mats[i3] @ mats[i1] of modulus target.

    Comparison is on squared moduli within 2*target*tol, the first-order
    equivalent of an absolute tolerance tol on the modulus itself. Pairs
    are returned in ascending (i1, i3) order on both backends.
    """
    chosen = resolve_backend(backend)
    stack = np.ascontiguousarray(mats, dtype=np.complex128)
    target2 = target * target
    tol2 = 2.0 * target * tol
    if chosen == "numba":
        return _scan_pairs_nb(stack, target2, tol2)
    return _scan_pairs_np(stack, target2, tol2)
