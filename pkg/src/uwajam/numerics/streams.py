"""Deterministic, splittable random streams.

A stream is identified by a 64-bit (seed, stream_id) pair: the same pair
always reproduces the same draw sequence, on either backend.  Substreams are
derived by index with :func:`split_stream`; distinct indices from one parent
never collide, which is what makes Monte Carlo results independent of the
worker count (trial i always uses substream i).

There is no global generator anywhere in the package; every sampler takes an
explicit stream.
"""

from __future__ import annotations

import math

import numpy as np

from .. import _pykernels
from .._backend import kernels

MASK64 = _pykernels.MASK64


class RandomStream:
    """A live xoshiro256** stream addressed by (seed, stream_id)."""

    __slots__ = ("seed", "stream_id", "_state")

    def __init__(self, seed: int, stream_id: int = 0):
        self.seed = int(seed) & MASK64
        self.stream_id = int(stream_id) & MASK64
        self._state = _pykernels.seed_state(self.seed, self.stream_id)

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, stream_id={self.stream_id})"

    # -- scalar draws (shared pure-Python reference path) -------------------

    def uniform(self) -> float:
        """One double in [0, 1)."""
        self._state, u = _pykernels.uniform(self._state)
        return u

    def normal_pair(self) -> tuple[float, float]:
        """Two independent standard normals (Box-Muller)."""
        self._state, z1, z2 = _pykernels.normal_pair(self._state)
        return z1, z2

    def poisson(self, lam: float) -> int:
        if not (math.isfinite(lam) and lam >= 0.0):
            raise ValueError(f"Poisson mean must be finite and >= 0, got {lam}")
        self._state, k = _pykernels.poisson(self._state, lam)
        return k

    # -- batch draws (hot path, backend-accelerated) ------------------------

    def uniforms(self, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.float64)
        self._state = kernels.uniform_batch(self._state, out)
        return out

    def normals(self, n: int) -> np.ndarray:
        if n % 2:
            raise ValueError("normals() draws Box-Muller pairs; n must be even")
        out = np.empty(n, dtype=np.float64)
        self._state = kernels.normal_batch(self._state, out)
        return out

    def poissons(self, lam: float, n: int) -> np.ndarray:
        out = np.empty(n, dtype=np.int64)
        self._state = kernels.poisson_batch(self._state, lam, out)
        return out

    def fading_squares(self, psi: float, n: int) -> np.ndarray:
        """n draws of (Z1 + sqrt(psi))^2 + Z2^2."""
        out = np.empty(n, dtype=np.float64)
        self._state = kernels.fading_batch(self._state, psi, out)
        return out

    # -- splitting -----------------------------------------------------------

    def split(self, index: int) -> "RandomStream":
        child_id = _pykernels.child_stream_id(self.stream_id, int(index))
        return RandomStream(self.seed, child_id)


def split_stream(parent: RandomStream, index: int) -> RandomStream:
    """Substream ``index`` of ``parent``; deterministic in (parent, index)."""
    return parent.split(index)


def sample_poisson(mean: float, rng: RandomStream) -> int:
    """Poisson(mean) draw from the given stream."""
    return rng.poisson(mean)
