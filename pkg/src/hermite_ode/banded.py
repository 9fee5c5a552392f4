"""Symmetric banded matrices in LAPACK lower storage.

``lower[k, j]`` holds ``F[j + k, j]`` for ``0 <= k <= bandwidth``. Entries of
``lower[k]`` past column ``N - k - 1`` are padding and kept at zero.
"""

from __future__ import annotations

import numpy as np

__all__ = ["SymmetricBandedMatrix"]


class SymmetricBandedMatrix:
    def __init__(self, lower: np.ndarray):
        lower = np.asarray(lower, dtype=float)
        if lower.ndim != 2:
            raise ValueError("banded storage must be 2-D")
        self.lower = lower

    @classmethod
    def zeros(cls, size: int, bandwidth: int) -> "SymmetricBandedMatrix":
        return cls(np.zeros((bandwidth + 1, size)))

    @classmethod
    def from_dense(cls, dense, bandwidth: int | None = None) -> "SymmetricBandedMatrix":
        dense = np.asarray(dense, dtype=float)
        size = dense.shape[0]
        if dense.shape != (size, size):
            raise ValueError("dense matrix must be square")
        if bandwidth is None:
            rows, cols = np.nonzero(np.tril(dense))
            bandwidth = int(np.max(rows - cols)) if rows.size else 0
        out = cls.zeros(size, bandwidth)
        for k in range(min(bandwidth, size - 1) + 1):
            out.lower[k, : size - k] = np.diagonal(dense, -k)
        return out

    @property
    def size(self) -> int:
        return self.lower.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return (self.size, self.size)

    @property
    def bandwidth(self) -> int:
        return self.lower.shape[0] - 1

    def diagonal(self) -> np.ndarray:
        return self.lower[0].copy()

    def add_block(self, start: int, block: np.ndarray) -> None:
        """Add a symmetric dense block whose top-left corner sits at (start, start).

        Only the block's lower triangle is read.
        """
        s = block.shape[0]
        if s - 1 > self.bandwidth:
            raise ValueError(f"block of size {s} does not fit bandwidth {self.bandwidth}")
        for k in range(s):
            self.lower[k, start : start + s - k] += np.diagonal(block, -k)

    def get(self, rows, cols) -> np.ndarray:
        """Entries ``F[rows, cols]`` (elementwise, broadcasting)."""
        rows, cols = np.broadcast_arrays(np.asarray(rows), np.asarray(cols))
        d = np.abs(rows - cols)
        j = np.minimum(rows, cols)
        inside = d <= self.bandwidth
        out = np.zeros(rows.shape)
        out[inside] = self.lower[d[inside], j[inside]]
        return out

    def matvec(self, v: np.ndarray) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        size = self.size
        if v.shape != (size,):
            raise ValueError(f"vector of shape {v.shape} does not match matrix size {size}")
        out = self.lower[0] * v
        for k in range(1, min(self.bandwidth, size - 1) + 1):
            band = self.lower[k, : size - k]
            out[k:] += band * v[: size - k]
            out[: size - k] += band * v[k:]
        return out

    __matmul__ = matvec

    def to_dense(self) -> np.ndarray:
        size = self.size
        dense = np.zeros((size, size))
        for k in range(min(self.bandwidth, size - 1) + 1):
            band = self.lower[k, : size - k]
            idx = np.arange(size - k)
            dense[idx + k, idx] = band
            dense[idx, idx + k] = band
        return dense

    def submatrix(self, keep) -> "SymmetricBandedMatrix":
        """Principal submatrix on the sorted indices ``keep``.

        Deleting rows and columns never widens the band, so the result keeps
        the same bandwidth.
        """
        keep = np.asarray(keep, dtype=int)
        if keep.size and np.any(np.diff(keep) <= 0):
            raise ValueError("indices must be strictly increasing")
        size = keep.size
        out = SymmetricBandedMatrix.zeros(size, self.bandwidth)
        for k in range(min(self.bandwidth, max(size - 1, 0)) + 1):
            rows, cols = keep[k:], keep[: size - k]
            out.lower[k, : size - k] = self.get(rows, cols)
        return out

    def copy(self) -> "SymmetricBandedMatrix":
        return SymmetricBandedMatrix(self.lower.copy())
