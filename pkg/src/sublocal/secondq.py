"""Truncated second quantization: vacuum plus single-particle spaces.

For a ``d``-dimensional space ``H`` the truncated Fock space ``F01(H)`` is
realized as ``C^(d+1)`` with the vacuum at index 0 and the single-particle
copy of basis vector ``k`` at index ``k + 1``. Products of two such spaces
are ordered factor-1-major, like :func:`numpy.kron`.

The embedding isometries carry first-quantized states into the
single-particle sector:

* ``M_s1 |s1,k> = |k+1>`` in ``F01(H_s1)`` (and likewise for the others);
* ``M_S |s1,k> = |k+1> (x) |0>`` and ``M_S |s2,l> = |0> (x) |l+1>``.

Lifted factor channels carry the shape ``(1, d) -> (1, d')``, i.e. the
vacuum/particle split, so the classification machinery can read their
weight transfer directly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import channels, linalg
from .channels import ChoiMatrix, KrausChannel
from .errors import ConsistencyError, DomainError, ShapeError
from .linalg import DEFAULT_TOL
from .params import AbsorbParams, LspParams, SwapParams, density_eigenbasis
from .spaces import ChannelShape, SubspaceSplit


def single_embedding(dim: int) -> np.ndarray:
    """``(dim+1) x dim`` isometry onto the single-particle sector."""
    m = np.zeros((dim + 1, dim), dtype=complex)
    m[1:, :] = np.eye(dim)
    return m


def product_embedding(split: SubspaceSplit) -> np.ndarray:
    """``(d1+1)(d2+1) x (d1+d2)`` isometry onto the one-particle sector."""
    f2 = split.dim2 + 1
    m = np.zeros(((split.dim1 + 1) * f2, split.total), dtype=complex)
    for k in range(split.dim1):
        m[(k + 1) * f2, k] = 1.0
    for l in range(split.dim2):
        m[l + 1, split.dim1 + l] = 1.0
    return m


def vacuum(dim: int) -> np.ndarray:
    """The vacuum ket of ``F01`` of a ``dim``-dimensional space."""
    e = np.zeros(dim + 1, dtype=complex)
    e[0] = 1.0
    return e


@dataclass(frozen=True, eq=False)
class EmbeddingSet:
    shape: ChannelShape
    m_source: np.ndarray
    m_target: np.ndarray
    m_s1: np.ndarray
    m_s2: np.ndarray
    m_t1: np.ndarray
    m_t2: np.ndarray

    @property
    def fock_source(self) -> int:
        return self.m_source.shape[0]

    @property
    def fock_target(self) -> int:
        return self.m_target.shape[0]

    def factor_shapes(self) -> tuple[ChannelShape, ChannelShape]:
        """Vacuum/particle shapes of the two factor channels."""
        s, t = self.shape.source, self.shape.target
        return (
            ChannelShape(SubspaceSplit(1, s.dim1), SubspaceSplit(1, t.dim1)),
            ChannelShape(SubspaceSplit(1, s.dim2), SubspaceSplit(1, t.dim2)),
        )


def build_embeddings(shape: ChannelShape) -> EmbeddingSet:
    s, t = shape.source, shape.target
    return EmbeddingSet(
        shape=shape,
        m_source=product_embedding(s),
        m_target=product_embedding(t),
        m_s1=single_embedding(s.dim1),
        m_s2=single_embedding(s.dim2),
        m_t1=single_embedding(t.dim1),
        m_t2=single_embedding(t.dim2),
    )


@dataclass(frozen=True, eq=False)
class ProductChannelPair:
    phi1: KrausChannel
    phi2: KrausChannel
    shape: ChannelShape

    def tensor(self) -> KrausChannel:
        return channels.tensor(self.phi1, self.phi2)

    def embeddings(self) -> EmbeddingSet:
        return build_embeddings(self.shape)


def one_restriction(full: KrausChannel, emb: EmbeddingSet) -> KrausChannel:
    """Compress a channel on ``F01 (x) F01`` to the single-particle sector."""
    if (full.dim_out, full.dim_in) != (emb.fock_target, emb.fock_source):
        raise ShapeError(
            f"channel maps {full.dim_in} -> {full.dim_out}, "
            f"embeddings expect {emb.fock_source} -> {emb.fock_target}"
        )
    mt = linalg.dagger(emb.m_target)
    return KrausChannel(tuple(mt @ k @ emb.m_source for k in full.kraus), emb.shape)


def sector_projector(split_or_dim, n: int) -> np.ndarray:
    """Projector onto the ``n``-particle sector (``n`` in {0, 1}).

    ``split_or_dim`` is a :class:`SubspaceSplit` for a product of two F01
    factors or an ``int`` for a single factor.
    """
    if n not in (0, 1):
        raise DomainError(f"only 0- and 1-particle sectors exist here, got n={n}")
    if isinstance(split_or_dim, SubspaceSplit):
        m = product_embedding(split_or_dim)
        e0 = np.kron(vacuum(split_or_dim.dim1), vacuum(split_or_dim.dim2))
    else:
        m = single_embedding(int(split_or_dim))
        e0 = vacuum(int(split_or_dim))
    if n == 1:
        return m @ linalg.dagger(m)
    return np.outer(e0, e0.conj())


def sector_leakage(ch: KrausChannel, p_source: np.ndarray, p_target: np.ndarray) -> float:
    """``sqrt(sum_k ||(I - P_T) K_k P_S||_F^2)``."""
    q = np.eye(p_target.shape[0]) - p_target
    return float(np.sqrt(sum(np.linalg.norm(q @ k @ p_source) ** 2 for k in ch.kraus)))


def respects_n_states(ch: KrausChannel | ProductChannelPair, n: int, emb: EmbeddingSet | None = None,
                      tol: float = DEFAULT_TOL) -> bool:
    """Whether ``ch`` maps ``n``-particle states to ``n``-particle states.

    ``ch`` is a channel on the product ``F01(s1) (x) F01(s2)`` (then ``emb``
    is required) or a :class:`ProductChannelPair`.
    """
    if isinstance(ch, ProductChannelPair):
        emb = emb or ch.embeddings()
        ch = ch.tensor()
    if emb is None:
        raise DomainError("respects_n_states needs the embedding set for a bare channel")
    if (ch.dim_out, ch.dim_in) != (emb.fock_target, emb.fock_source):
        raise ShapeError("channel does not act on the F01 product spaces of the embeddings")
    ps = sector_projector(emb.shape.source, n)
    pt = sector_projector(emb.shape.target, n)
    return sector_leakage(ch, ps, pt) <= tol


def factor_respects(ch: KrausChannel, n: int, tol: float = DEFAULT_TOL) -> bool:
    """``respects_n_states`` for a single F01 factor channel."""
    ps = sector_projector(ch.dim_in - 1, n)
    pt = sector_projector(ch.dim_out - 1, n)
    return sector_leakage(ch, ps, pt) <= tol


def _from_choi(choi: np.ndarray, shape: ChannelShape, tol: float) -> KrausChannel:
    c = ChoiMatrix((choi + choi.conj().T) / 2, shape.target.total, shape.source.total, shape)
    if not channels.is_cp(c, tol):
        raise ConsistencyError("assembled factor Choi matrix is not positive semidefinite")
    return channels.kraus_from_choi(c, tol)


def _sp_factor(kraus, coeffs, ds: int, dt: int, shape: ChannelShape, tol: float) -> KrausChannel:
    """Weight-preserving F01 factor built from a first-quantized Kraus family."""
    ms, mt = single_embedding(ds), single_embedding(dt)
    lifted = [mt @ k @ linalg.dagger(ms) for k in kraus]
    a0 = np.outer(vacuum(dt), vacuum(ds).conj()).reshape(-1)
    coherent = np.tensordot(np.asarray(coeffs), np.asarray(lifted), axes=1).reshape(-1)
    choi = sum(np.outer(v.reshape(-1), v.reshape(-1).conj()) for v in lifted)
    choi = choi + np.outer(a0, a0.conj()) + np.outer(coherent, a0.conj()) + np.outer(a0, coherent.conj())
    return _from_choi(choi, shape, tol)


def lift_lsp(p: LspParams, shape: ChannelShape, tol: float = DEFAULT_TOL) -> ProductChannelPair:
    """Weight-preserving factor channels whose product restricts to ``make_lsp(p)``."""
    p.validate(shape, tol)
    s, t = shape.source, shape.target
    f1, f2 = build_embeddings(shape).factor_shapes()
    phi1 = _sp_factor(p.kraus1, p.c1, s.dim1, t.dim1, f1, tol)
    phi2 = _sp_factor(p.kraus2, p.c2, s.dim2, t.dim2, f2, tol)
    return ProductChannelPair(phi1, phi2, shape)


def _swap_factor(rho, cross, ds: int, dt: int, shape: ChannelShape, tol: float) -> KrausChannel:
    """Factor that sends the vacuum to ``rho`` and particles to the vacuum."""
    mt = single_embedding(dt)
    j = np.zeros((dt + 1, ds + 1, dt + 1, ds + 1), dtype=complex)
    j[:, 0, :, 0] = mt @ rho @ linalg.dagger(mt)
    for k in range(ds):
        j[0, k + 1, 0, k + 1] = 1.0
    lifted = mt @ cross
    j[:, 0, 0, 1:] = lifted
    j[0, 1:, :, 0] = lifted.conj().T
    n = (dt + 1) * (ds + 1)
    return _from_choi(j.reshape(n, n), shape, tol)


def lift_c2(p: SwapParams, shape: ChannelShape, tol: float = DEFAULT_TOL) -> ProductChannelPair:
    """Weight-swapping factor channels whose product restricts to ``make_c2(p)``."""
    p.validate(shape, tol)
    s, t = shape.source, shape.target
    f1, f2 = build_embeddings(shape).factor_shapes()
    phi1 = _swap_factor(p.rho1, p.cross1(tol), s.dim1, t.dim1, f1, tol)
    phi2 = _swap_factor(p.rho2, p.cross2(tol), s.dim2, t.dim2, f2, tol)
    return ProductChannelPair(phi1, phi2, shape)


def _to_vacuum(ds: int, dt: int, shape: ChannelShape) -> KrausChannel:
    """``Q -> |0><0| Tr(Q)``."""
    ops = []
    for j in range(ds + 1):
        op = np.zeros((dt + 1, ds + 1), dtype=complex)
        op[0, j] = 1.0
        ops.append(op)
    return KrausChannel(tuple(ops), shape)


def _fill_factor(rho, inner: KrausChannel, ds: int, dt: int, shape: ChannelShape, tol: float) -> KrausChannel:
    """``Q -> M inner(M^+ Q M) M^+ + M rho M^+ <0|Q|0>``."""
    ms, mt = single_embedding(ds), single_embedding(dt)
    ops = [mt @ k @ linalg.dagger(ms) for k in inner.kraus]
    w, u = density_eigenbasis(rho, tol)
    for lam, v in zip(w, u.T):
        ops.append(np.sqrt(lam) * np.outer(mt @ v, vacuum(ds).conj()))
    return KrausChannel(tuple(ops), shape)


def lift_c34(p: AbsorbParams, shape: ChannelShape, variant: str, tol: float = DEFAULT_TOL) -> ProductChannelPair:
    """Absorbing factor channels: one factor empties to the vacuum, the other fills.

    For ``C3`` the first factor is traced to its vacuum and the second keeps
    its particle through ``inner`` while turning a vacuum into ``rho``;
    ``C4`` is the mirror image.
    """
    p.validate(shape, variant, tol)
    s, t = shape.source, shape.target
    f1, f2 = build_embeddings(shape).factor_shapes()
    if variant == "C3":
        phi1 = _to_vacuum(s.dim1, t.dim1, f1)
        phi2 = _fill_factor(p.rho, p.inner, s.dim2, t.dim2, f2, tol)
    else:
        phi1 = _fill_factor(p.rho, p.inner, s.dim1, t.dim1, f1, tol)
        phi2 = _to_vacuum(s.dim2, t.dim2, f2)
    return ProductChannelPair(channels.canonical(phi1, tol), channels.canonical(phi2, tol), shape)


def lift(tag: str, params, shape: ChannelShape, tol: float = DEFAULT_TOL) -> ProductChannelPair:
    if tag == "C1":
        return lift_lsp(params, shape, tol)
    if tag == "C2":
        return lift_c2(params, shape, tol)
    if tag in ("C3", "C4"):
        return lift_c34(params, shape, tag, tol)
    raise DomainError(f"unknown class tag {tag!r}")


def vacuum_weight(ch: KrausChannel) -> np.ndarray:
    """``T[s, s'] = <0| phi(|s><s'|) |0>`` for an F01 factor channel."""
    j = channels.choi_from_kraus(ch).tensor()
    return j[0, :, 0, :]


def leca_case(pair: ProductChannelPair, tol: float = 1e-7) -> int | None:
    """Which of the four factor patterns a product channel follows.

    1: both factors keep vacuum and particle sectors apart (weight preserving);
    2: both factors swap vacuum and particle weight;
    3: factor 1 empties to the vacuum, factor 2 fills with a particle;
    4: the mirror of 3.
    Returns ``None`` if no pattern matches within ``tol``.
    """
    def pattern(ch: KrausChannel) -> dict[str, bool]:
        t = vacuum_weight(ch)
        d = ch.dim_in
        p_vac = np.zeros((d, d))
        p_vac[0, 0] = 1.0
        ideals = {"keep": p_vac, "swap": np.eye(d) - p_vac, "empty": np.eye(d), "fill": np.zeros((d, d))}
        return {k: bool(np.max(np.abs(t - v)) <= tol) for k, v in ideals.items()}

    a, b = pattern(pair.phi1), pattern(pair.phi2)
    matches = []
    if a["keep"] and b["keep"]:
        matches.append(1)
    if a["swap"] and b["swap"]:
        matches.append(2)
    if a["empty"] and b["fill"]:
        matches.append(3)
    if a["fill"] and b["empty"]:
        matches.append(4)
    return matches[0] if len(matches) == 1 else None
