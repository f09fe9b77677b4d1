"""Axis-aligned boxes and uniform grids shared by every analysis module."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Box", "GridSpec"]


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by per-axis lower/upper bounds."""

    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have the same length")
        if any(not (l < h) for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"degenerate box: lo={self.lo}, hi={self.hi}")

    @classmethod
    def make(cls, lo, hi) -> "Box":
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        return cls(tuple(lo.tolist()), tuple(hi.tolist()))

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def lo_arr(self) -> np.ndarray:
        return np.array(self.lo)

    @property
    def hi_arr(self) -> np.ndarray:
        return np.array(self.hi)

    def diameter(self) -> float:
        return float(np.linalg.norm(self.hi_arr - self.lo_arr))

    def center(self) -> np.ndarray:
        return 0.5 * (self.lo_arr + self.hi_arr)

    def contains(self, x, open_: bool = False) -> bool:
        x = np.asarray(x, dtype=float)
        if open_:
            return bool(np.all(x > self.lo_arr) and np.all(x < self.hi_arr))
        return bool(np.all(x >= self.lo_arr) and np.all(x <= self.hi_arr))

    def padded(self, fraction: float) -> "Box":
        """Box grown by `fraction` of its extent on every side."""
        ext = self.hi_arr - self.lo_arr
        return Box.make(self.lo_arr - fraction * ext, self.hi_arr + fraction * ext)

    def interior_samples(self, n: int, margin: float = 0.05) -> np.ndarray:
        """Regular n-per-axis lattice strictly inside the box."""
        ext = self.hi_arr - self.lo_arr
        axes = [
            np.linspace(self.lo[i] + margin * ext[i], self.hi[i] - margin * ext[i], n)
            for i in range(self.d)
        ]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)


@dataclass(frozen=True)
class GridSpec:
    """Uniform node lattice on a box, endpoints included."""

    box: Box
    shape: tuple[int, ...]

    def __post_init__(self):
        if len(self.shape) != self.box.d:
            raise ValueError("shape rank must match box dimension")
        if any(n < 2 for n in self.shape):
            raise ValueError("need at least 2 nodes per axis")

    @classmethod
    def make(cls, lo, hi, shape) -> "GridSpec":
        if np.isscalar(shape):
            lo_arr = np.atleast_1d(np.asarray(lo, dtype=float))
            shape = (int(shape),) * len(lo_arr)
        return cls(Box.make(lo, hi), tuple(int(n) for n in shape))

    @property
    def d(self) -> int:
        return self.box.d

    @property
    def steps(self) -> np.ndarray:
        return (self.box.hi_arr - self.box.lo_arr) / (np.array(self.shape) - 1)

    def axes(self) -> list[np.ndarray]:
        return [
            np.linspace(self.box.lo[i], self.box.hi[i], self.shape[i])
            for i in range(self.d)
        ]

    def nodes(self) -> np.ndarray:
        """All nodes as an (N, d) array in C (row-major) order."""
        mesh = np.meshgrid(*self.axes(), indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=-1)

    def refined(self) -> "GridSpec":
        """Grid with every step halved (nodes of self are a subset)."""
        return GridSpec(self.box, tuple(2 * (n - 1) + 1 for n in self.shape))
