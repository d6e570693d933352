"""
Fixed-width bitsets over {0, ..., n-1} packed in numpy uint64 words.
"""
import numpy as np

WORD = 64


class Bitset:
    """A subset of range(n); intersection tests are word-wise."""

    __slots__ = ('n', 'words')

    def __init__(self, n, words=None):
        self.n = n
        if words is None:
            words = np.zeros((n + WORD - 1) // WORD, dtype=np.uint64)
        self.words = words

    @classmethod
    def from_indices(cls, n, indices):
        indices = np.asarray(indices, dtype=np.int64)
        if len(indices) and (indices.min() < 0 or indices.max() >= n):
            raise IndexError(f'bit index out of range for width {n}')
        bits = np.zeros(n, dtype=bool)
        bits[indices] = True
        return cls(n, pack(bits))

    def intersects(self, other):
        return bool(np.any(self.words & other.words))

    def __eq__(self, other):
        return self.n == other.n and np.array_equal(self.words, other.words)

    def __len__(self):
        return self.count()

    def count(self):
        return int(unpack(self.words, self.n).sum())

    def __repr__(self):
        return f'Bitset(n={self.n}, count={self.count()})'


def pack(mask):
    """Pack a boolean array (last axis) into little-endian uint64 words."""
    mask = np.asarray(mask, dtype=bool)
    width = mask.shape[-1]
    padded = -width % WORD
    if padded:
        pad = np.zeros(mask.shape[:-1] + (padded,), dtype=bool)
        mask = np.concatenate([mask, pad], axis=-1)
    as_bytes = np.packbits(mask, axis=-1, bitorder='little')
    return as_bytes.reshape(mask.shape[:-1] + (-1, 8)).view('<u8')[..., 0] \
        .astype(np.uint64)


def unpack(words, n):
    words = np.ascontiguousarray(words, dtype='<u8')
    as_bytes = words.view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, bitorder='little')[..., :n] \
        .astype(bool)


def rows_intersect(rows, words):
    """Mask of the rows (shape (k, w)) that meet the word array words."""
    return np.any(rows & words[None, :], axis=-1)
