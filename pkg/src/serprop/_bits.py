"""Packed-word helpers for bit-parallel simulation.

Vector ``v`` of a batch lives in bit ``v % 64`` (little-endian) of word
``v // 64``.  Padding bits beyond the batch size are zero on input and must
be masked before counting.
"""

from __future__ import annotations

import numpy as np

# vectors per sampling block; fixed so results never depend on worker count
CHUNK = 8192


def n_words(n_vectors: int) -> int:
    return (n_vectors + 63) // 64


def tail_mask(n_vectors: int) -> np.uint64:
    """Mask selecting the valid bits of the last word."""
    r = n_vectors % 64
    return np.uint64((1 << r) - 1) if r else np.uint64(0xFFFFFFFFFFFFFFFF)


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, V) bool array into (rows, ceil(V/64)) uint64 words."""
    rows, v = bits.shape
    pad = (-v) % 64
    if pad:
        bits = np.concatenate(
            [bits, np.zeros((rows, pad), dtype=bool)], axis=1)
    packed = np.ascontiguousarray(np.packbits(bits, axis=1, bitorder="little"))
    return packed.view(np.uint64).reshape(rows, -1)


def unpack_row(words: np.ndarray, n_vectors: int) -> np.ndarray:
    """Expand one row of uint64 words back to a (n_vectors,) bool array."""
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:n_vectors].astype(bool)


def unpack_rows(words: np.ndarray, n_vectors: int) -> np.ndarray:
    """Expand (rows, W) uint64 words to a (rows, n_vectors) uint8 array."""
    bits = np.unpackbits(words.view(np.uint8), axis=1, bitorder="little")
    return bits[:, :n_vectors]


def popcount_words(words: np.ndarray, n_vectors: int) -> int:
    """Number of set bits among the first ``n_vectors`` lanes."""
    if words.size == 0:
        return 0
    w = words.copy()
    w[-1] &= tail_mask(n_vectors)
    return int(np.bitwise_count(w).sum())


def popcount_rows(words: np.ndarray, n_vectors: int) -> np.ndarray:
    """Per-row set-bit counts over the first ``n_vectors`` lanes of a
    (rows, W) array."""
    w = words.copy()
    w[:, -1] &= tail_mask(n_vectors)
    return np.bitwise_count(w).sum(axis=1, dtype=np.int64)


def sample_chunk_rng(seed: int, chunk_index: int) -> np.random.Generator:
    """Deterministic per-chunk RNG substream derived from (seed, chunk)."""
    ss = np.random.SeedSequence(entropy=seed & 0xFFFFFFFFFFFFFFFF,
                                spawn_key=(chunk_index,))
    return np.random.Generator(np.random.PCG64(ss))


def bernoulli_words(seed: int, chunk_index: int, n_vectors: int,
                    probs: np.ndarray) -> np.ndarray:
    """Sample packed Bernoulli bits for one chunk.

    Returns a (len(probs), ceil(n_vectors/64)) uint64 array where row ``j``
    holds ``n_vectors`` draws at probability ``probs[j]``.
    """
    rng = sample_chunk_rng(seed, chunk_index)
    u = rng.random((n_vectors, len(probs)))
    return pack_rows((u < probs).T)


def enum_input_words(n_inputs: int, v0: int, count: int) -> np.ndarray:
    """Packed exhaustive-enumeration patterns for vectors v0 .. v0+count-1.

    Input ``j`` of vector ``v`` is bit ``j`` of the integer ``v``.
    """
    v = np.arange(v0, v0 + count, dtype=np.uint64)
    bits = ((v[None, :] >> np.arange(n_inputs, dtype=np.uint64)[:, None])
            & np.uint64(1)).astype(bool)
    return pack_rows(bits)


def enum_weights(probs: np.ndarray, v0: int, count: int) -> np.ndarray:
    """Per-vector Bernoulli weights for the enumeration block."""
    v = np.arange(v0, v0 + count, dtype=np.uint64)
    w = np.ones(count, dtype=np.float64)
    for j, p in enumerate(probs):
        bit = ((v >> np.uint64(j)) & np.uint64(1)).astype(bool)
        w *= np.where(bit, p, 1.0 - p)
    return w
