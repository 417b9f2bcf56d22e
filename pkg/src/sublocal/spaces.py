"""Orthogonal-sum Hilbert spaces and seeded random test objects.

A :class:`SubspaceSplit` describes ``H = H_1 (+) H_2`` with the subspace-1
basis on coordinates ``0 .. dim1-1`` and subspace 2 on the rest, so both
projectors are diagonal.

Random generation uses ``numpy.random.default_rng(seed)`` (PCG64):

* unitaries: QR of a complex Ginibre matrix, with the phases of ``diag(R)``
  moved into ``Q`` (Mezzadri's fix), which gives the Haar measure;
* isometries: the same QR on a tall Ginibre matrix;
* densities: Wishart, ``G G^dagger / Tr`` with ``G`` a ``dim x rank`` Ginibre.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class SubspaceSplit:
    dim1: int
    dim2: int

    def __post_init__(self):
        for name in ("dim1", "dim2"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise DomainError(f"{name} must be a positive integer, got {value!r}")

    @property
    def total(self) -> int:
        return self.dim1 + self.dim2

    def block(self, which: int) -> slice:
        if which == 1:
            return slice(0, self.dim1)
        if which == 2:
            return slice(self.dim1, self.total)
        raise DomainError(f"subspace index must be 1 or 2, got {which!r}")

    def dim(self, which: int) -> int:
        s = self.block(which)
        return s.stop - s.start

    def inclusion(self, which: int) -> np.ndarray:
        """``total x dim(which)`` isometry embedding the subspace."""
        j = np.zeros((self.total, self.dim(which)), dtype=complex)
        j[self.block(which), :] = np.eye(self.dim(which))
        return j

    def as_list(self) -> list[int]:
        return [self.dim1, self.dim2]


@dataclass(frozen=True)
class ChannelShape:
    source: SubspaceSplit
    target: SubspaceSplit

    @classmethod
    def from_dims(cls, ds1: int, ds2: int, dt1: int, dt2: int) -> "ChannelShape":
        return cls(SubspaceSplit(ds1, ds2), SubspaceSplit(dt1, dt2))

    def dims(self) -> tuple[int, int, int, int]:
        return (self.source.dim1, self.source.dim2, self.target.dim1, self.target.dim2)


def projector(split: SubspaceSplit, which: int) -> np.ndarray:
    p = np.zeros((split.total, split.total), dtype=complex)
    s = split.block(which)
    p[s, s] = np.eye(split.dim(which))
    return p


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rows: int, cols: int, seed) -> np.ndarray:
    rng = _rng(seed)
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_isometry(rows: int, cols: int, seed) -> np.ndarray:
    """Haar-random ``rows x cols`` isometry (requires ``cols <= rows``)."""
    if cols > rows:
        raise DomainError(f"no {rows}x{cols} isometry exists")
    q, r = np.linalg.qr(ginibre(rows, cols, seed))
    d = np.diag(r)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return q * phases


def random_unitary(dim: int, seed) -> np.ndarray:
    if dim < 1:
        raise DomainError(f"dimension must be positive, got {dim}")
    return random_isometry(dim, dim, seed)


def random_density(dim: int, rank: int, seed) -> np.ndarray:
    if not 1 <= rank <= dim:
        raise DomainError(f"rank must lie in [1, {dim}], got {rank}")
    g = ginibre(dim, rank, seed)
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_hermitian(dim: int, seed) -> np.ndarray:
    g = ginibre(dim, dim, seed)
    return (g + g.conj().T) / 2
