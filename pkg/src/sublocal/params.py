"""Parameter bundles for the four families of subspace-local channels.

* :class:`LspParams` -- weight-preserving family: two linearly independent
  Kraus families ``{V_n}`` (s1 -> t1) and ``{W_m}`` (s2 -> t2) plus
  coherence vectors ``c1``, ``c2`` of norm at most one.
* :class:`SwapParams` -- weight-swapping family: densities ``rho1`` on t1
  and ``rho2`` on t2 with coherence matrices ``C`` (rank(rho1) x ds1) and
  ``D`` (rank(rho2) x ds2) satisfying ``C C^dagger <= I`` and
  ``D D^dagger <= I``.
* :class:`AbsorbParams` -- the two absorbing families: a density on the
  absorbing target block and a channel from the surviving source block.

``C`` and ``D`` are coefficients in the eigenbasis returned by
:func:`density_eigenbasis`, which is deterministic for a given matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels, linalg
from .channels import KRAUS_CUTOFF, KrausChannel
from .errors import DomainError, ShapeError
from .linalg import DEFAULT_TOL
from .spaces import ChannelShape, ginibre, random_density


# Smallest/largest Gram eigenvalue ratio below which a Kraus family counts as
# linearly dependent; sits under the Kraus extraction cutoff.
INDEPENDENCE_CUTOFF = 1e-12


def _vector(c) -> np.ndarray:
    return np.atleast_1d(np.asarray(c, dtype=complex)).reshape(-1)


def density_eigenbasis(rho, tol: float = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Non-zero eigenvalues (descending) and phase-fixed eigenvectors of a density.

    Each eigenvector's largest-magnitude component is made real positive.
    """
    w, u = linalg.eigh(rho, tol)
    keep = w > KRAUS_CUTOFF * w[0] if w[0] > 0 else np.zeros(w.size, dtype=bool)
    w, u = w[keep], u[:, keep]
    for i in range(u.shape[1]):
        z = u[np.argmax(np.abs(u[:, i])), i]
        u[:, i] *= abs(z) / z
    return w, u


def check_density(rho, dim: int, tol: float = DEFAULT_TOL, name: str = "rho") -> np.ndarray:
    rho = linalg.as_matrix(rho)
    if rho.shape != (dim, dim):
        raise ShapeError(f"{name} must be {dim}x{dim}, got {rho.shape}")
    if not linalg.is_psd(rho, tol):
        raise DomainError(f"{name} is not positive semidefinite")
    if abs(np.trace(rho) - 1) > tol * max(1, dim):
        raise DomainError(f"{name} does not have unit trace")
    return rho


def _check_family(ops, rows: int, cols: int, tol: float, name: str) -> tuple:
    ops = tuple(linalg.as_matrix(k) for k in ops)
    if not ops:
        raise DomainError(f"{name} is empty")
    for k in ops:
        if k.shape != (rows, cols):
            raise ShapeError(f"{name} operators must be {rows}x{cols}, got {k.shape}")
    if not channels.is_tp(KrausChannel(ops), tol):
        raise DomainError(f"{name} is not trace preserving")
    vecs = np.array([k.reshape(-1) for k in ops])
    gram = vecs.conj() @ vecs.T
    w = np.linalg.eigvalsh(gram)
    if w[0] <= INDEPENDENCE_CUTOFF * w[-1]:
        raise DomainError(f"{name} is not linearly independent")
    return ops


@dataclass(frozen=True, eq=False)
class LspParams:
    kraus1: tuple
    kraus2: tuple
    c1: np.ndarray
    c2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "kraus1", tuple(linalg.as_matrix(k) for k in self.kraus1))
        object.__setattr__(self, "kraus2", tuple(linalg.as_matrix(k) for k in self.kraus2))
        object.__setattr__(self, "c1", _vector(self.c1))
        object.__setattr__(self, "c2", _vector(self.c2))

    def validate(self, shape: ChannelShape, tol: float = DEFAULT_TOL) -> "LspParams":
        s, t = shape.source, shape.target
        _check_family(self.kraus1, t.dim1, s.dim1, tol, "kraus1")
        _check_family(self.kraus2, t.dim2, s.dim2, tol, "kraus2")
        if self.c1.size != len(self.kraus1) or self.c2.size != len(self.kraus2):
            raise ShapeError("coherence vectors must match the Kraus family sizes")
        for name, c in (("c1", self.c1), ("c2", self.c2)):
            if np.linalg.norm(c) > 1 + tol:
                raise DomainError(f"||{name}|| = {np.linalg.norm(c):.6g} exceeds 1")
        return self

    @property
    def coherent1(self) -> np.ndarray:
        """``V = sum_n c1[n] V_n``."""
        return np.tensordot(self.c1, np.asarray(self.kraus1), axes=1)

    @property
    def coherent2(self) -> np.ndarray:
        """``W = sum_m c2[m] W_m``."""
        return np.tensordot(self.c2, np.asarray(self.kraus2), axes=1)


@dataclass(frozen=True, eq=False)
class SwapParams:
    rho1: np.ndarray
    rho2: np.ndarray
    cmat: np.ndarray
    dmat: np.ndarray

    def __post_init__(self):
        for name in ("rho1", "rho2", "cmat", "dmat"):
            object.__setattr__(self, name, linalg.as_matrix(getattr(self, name)))

    def validate(self, shape: ChannelShape, tol: float = DEFAULT_TOL) -> "SwapParams":
        s, t = shape.source, shape.target
        check_density(self.rho1, t.dim1, tol, "rho1")
        check_density(self.rho2, t.dim2, tol, "rho2")
        n1 = self.eigen1(tol)[0].size
        n2 = self.eigen2(tol)[0].size
        if self.cmat.shape != (n1, s.dim1):
            raise ShapeError(f"C must be {n1}x{s.dim1}, got {self.cmat.shape}")
        if self.dmat.shape != (n2, s.dim2):
            raise ShapeError(f"D must be {n2}x{s.dim2}, got {self.dmat.shape}")
        for name, m in (("C", self.cmat), ("D", self.dmat)):
            if np.linalg.norm(m, 2) > 1 + tol:
                raise DomainError(f"{name} {name}^dagger exceeds the identity")
        return self

    def eigen1(self, tol: float = DEFAULT_TOL):
        return density_eigenbasis(self.rho1, tol)

    def eigen2(self, tol: float = DEFAULT_TOL):
        return density_eigenbasis(self.rho2, tol)

    def cross1(self, tol: float = DEFAULT_TOL) -> np.ndarray:
        """``sum_{n,k} C[n,k] sqrt(lambda_n) |rho_n><s1,k|`` as a dt1 x ds1 matrix."""
        w, u = self.eigen1(tol)
        return (u * np.sqrt(w)) @ self.cmat

    def cross2(self, tol: float = DEFAULT_TOL) -> np.ndarray:
        w, u = self.eigen2(tol)
        return (u * np.sqrt(w)) @ self.dmat


@dataclass(frozen=True, eq=False)
class AbsorbParams:
    """``rho`` lives on the absorbing target block; ``inner`` maps the surviving blocks."""

    rho: np.ndarray
    inner: KrausChannel

    def __post_init__(self):
        object.__setattr__(self, "rho", linalg.as_matrix(self.rho))

    def validate(self, shape: ChannelShape, variant: str, tol: float = DEFAULT_TOL) -> "AbsorbParams":
        keep = _absorbing_block(variant)
        check_density(self.rho, shape.target.dim(keep), tol, "rho")
        expected = (shape.target.dim(keep), shape.source.dim(keep))
        if (self.inner.dim_out, self.inner.dim_in) != expected:
            raise ShapeError(f"inner channel must map {expected[1]} -> {expected[0]}")
        if not channels.is_tp(self.inner, tol):
            raise DomainError("inner channel is not trace preserving")
        return self


def _absorbing_block(variant: str) -> int:
    if variant == "C3":
        return 2
    if variant == "C4":
        return 1
    raise DomainError(f"variant must be 'C3' or 'C4', got {variant!r}")


def _random_direction(n: int, rng: np.random.Generator) -> np.ndarray:
    v = ginibre(n, 1, rng).reshape(-1)
    return v / np.linalg.norm(v)


def _random_family(rows: int, cols: int, rng: np.random.Generator) -> tuple:
    lo = -(-cols // rows)
    count = int(rng.integers(lo, rows * cols + 1))
    ch = channels.random_channel((rows, cols), count, rng)
    return channels.canonical(ch).kraus


def random_lsp_params(shape: ChannelShape, seed, c_norms: tuple[float, float] | None = None) -> LspParams:
    """Random LSP parameters; coherence norms uniform on [0, 1] unless given."""
    rng = np.random.default_rng(seed)
    s, t = shape.source, shape.target
    k1 = _random_family(t.dim1, s.dim1, rng)
    k2 = _random_family(t.dim2, s.dim2, rng)
    r1, r2 = c_norms if c_norms is not None else rng.uniform(0, 1, size=2)
    c1 = r1 * _random_direction(len(k1), rng)
    c2 = r2 * _random_direction(len(k2), rng)
    return LspParams(k1, k2, c1, c2)


def _contraction(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    g = ginibre(rows, cols, rng)
    return g * (rng.uniform(0, 1) / np.linalg.norm(g, 2))


def random_swap_params(shape: ChannelShape, seed) -> SwapParams:
    rng = np.random.default_rng(seed)
    s, t = shape.source, shape.target
    rho1 = random_density(t.dim1, int(rng.integers(1, t.dim1 + 1)), rng)
    rho2 = random_density(t.dim2, int(rng.integers(1, t.dim2 + 1)), rng)
    n1 = density_eigenbasis(rho1)[0].size
    n2 = density_eigenbasis(rho2)[0].size
    return SwapParams(rho1, rho2, _contraction(n1, s.dim1, rng), _contraction(n2, s.dim2, rng))


def random_absorb_params(shape: ChannelShape, variant: str, seed) -> AbsorbParams:
    rng = np.random.default_rng(seed)
    keep = _absorbing_block(variant)
    dt, ds = shape.target.dim(keep), shape.source.dim(keep)
    rho = random_density(dt, int(rng.integers(1, dt + 1)), rng)
    return AbsorbParams(rho, KrausChannel(_random_family(dt, ds, rng)))


def random_params(tag: str, shape: ChannelShape, seed):
    """Random parameters for class ``tag`` in {"C1", "C2", "C3", "C4"}."""
    if tag == "C1":
        return random_lsp_params(shape, seed)
    if tag == "C2":
        return random_swap_params(shape, seed)
    if tag in ("C3", "C4"):
        return random_absorb_params(shape, tag, seed)
    raise DomainError(f"unknown class tag {tag!r}")


def lsp_identity_params(shape: ChannelShape) -> LspParams:
    """Parameters of the identity channel on equal splits."""
    s = shape.source
    return LspParams((np.eye(s.dim1),), (np.eye(s.dim2),), [1.0], [1.0])


__all__ = [
    "AbsorbParams",
    "LspParams",
    "SwapParams",
    "check_density",
    "density_eigenbasis",
    "lsp_identity_params",
    "random_absorb_params",
    "random_lsp_params",
    "random_params",
    "random_swap_params",
]
