"""Bit-packed GF(2) kernels.

A binary vector of length ``k`` is stored little-endian in ``ceil(k / 64)``
uint64 words: bit ``i`` lives in word ``i // 64`` at position ``i % 64``.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


def n_words(k: int) -> int:
    return (int(k) + 63) // 64


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a 2-D 0/1 array row-wise into uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    rows, k = bits.shape
    kw = n_words(k)
    padded = np.zeros((rows, kw * 64), dtype=np.uint8)
    padded[:, :k] = bits
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view(np.uint64).reshape(rows, kw).copy()


def unpack_rows(words: np.ndarray, k: int) -> np.ndarray:
    words = np.ascontiguousarray(words, dtype=np.uint64)
    rows = words.shape[0]
    bits = np.unpackbits(words.view(np.uint8).reshape(rows, -1), axis=1, bitorder="little")
    return bits[:, :k].copy()


def pack_vector(bits) -> np.ndarray:
    return pack_rows(np.asarray(bits, dtype=np.uint8).reshape(1, -1))[0]


def unpack_vector(words: np.ndarray, k: int) -> np.ndarray:
    return unpack_rows(np.asarray(words).reshape(1, -1), k)[0]


def random_words(rng: np.random.Generator, rows: int, k: int) -> np.ndarray:
    """Uniform random packed rows of ``k`` bits (unused high bits cleared)."""
    kw = n_words(k)
    out = rng.bit_generator.random_raw(rows * kw).astype(np.uint64).reshape(rows, kw)
    if k % 64 and kw:
        out[:, -1] &= np.uint64((1 << (k % 64)) - 1)
    return out


@njit(cache=True, inline="always")
def _popcount(x):
    x = x - ((x >> np.uint64(1)) & _M1)
    x = (x & _M2) + ((x >> np.uint64(2)) & _M2)
    x = (x + (x >> np.uint64(4))) & _M4
    return (x * _H01) >> np.uint64(56)


@njit(cache=True)
def encode(columns, message):
    """Codeword bits: parity of each packed generator column against the message."""
    n, kw = columns.shape
    out = np.empty(n, dtype=np.uint8)
    for j in range(n):
        acc = np.uint64(0)
        for w in range(kw):
            acc += _popcount(columns[j, w] & message[w])
        out[j] = np.uint8(acc & np.uint64(1))
    return out


@njit(cache=True)
def solve(rows, rhs, k):
    """Solve ``rows @ m = rhs`` over GF(2) for a unique ``k``-bit ``m``.

    ``rows`` (packed, r x ceil(k/64)) and ``rhs`` are overwritten.  Returns
    ``(rank, consistent, m)``; ``m`` is meaningful only when ``rank == k``
    and the system is consistent.
    """
    r = rows.shape[0]
    kw = rows.shape[1]
    m = np.zeros(kw, dtype=np.uint64)
    row = 0
    for c in range(k):
        if row >= r:
            break
        wi = c >> 6
        bit = np.uint64(1) << np.uint64(c & 63)
        piv = -1
        for i in range(row, r):
            if rows[i, wi] & bit:
                piv = i
                break
        if piv < 0:
            continue
        if piv != row:
            for w in range(wi, kw):
                t = rows[piv, w]
                rows[piv, w] = rows[row, w]
                rows[row, w] = t
            tb = rhs[piv]
            rhs[piv] = rhs[row]
            rhs[row] = tb
        for i in range(row + 1, r):
            if rows[i, wi] & bit:
                for w in range(wi, kw):
                    rows[i, w] ^= rows[row, w]
                rhs[i] ^= rhs[row]
        row += 1
    rank = row
    consistent = True
    for i in range(rank, r):
        if rhs[i]:
            consistent = False
            break
    if rank < k or not consistent:
        return rank, consistent, m
    for c in range(k - 1, -1, -1):
        wi = c >> 6
        acc = np.uint64(rhs[c])
        for w in range(wi, kw):
            acc += _popcount(rows[c, w] & m[w])
        if acc & np.uint64(1):
            m[wi] |= np.uint64(1) << np.uint64(c & 63)
    return rank, consistent, m


def rank(bits: np.ndarray) -> int:
    """Rank over GF(2) of a 0/1 matrix (rows are vectors)."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size == 0:
        return 0
    rows = pack_rows(bits)
    rk, _, _ = solve(rows, np.zeros(rows.shape[0], dtype=np.uint8), bits.shape[1])
    return int(rk)
