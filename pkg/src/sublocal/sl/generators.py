"""Constructors for the four families of subspace-local channels.

Each constructor assembles the Choi matrix of the defining expression,
checks it is positive semidefinite, and returns the canonical Kraus family.
Positivity is verified rather than assumed.
"""

from __future__ import annotations

import numpy as np

from .. import channels, linalg
from ..channels import ChoiMatrix, KrausChannel
from ..errors import ConsistencyError, DomainError
from ..linalg import DEFAULT_TOL
from ..params import AbsorbParams, LspParams, SwapParams, density_eigenbasis, random_params
from ..spaces import ChannelShape


def _finish(choi: np.ndarray, shape: ChannelShape, tol: float) -> KrausChannel:
    c = ChoiMatrix((choi + choi.conj().T) / 2, shape.target.total, shape.source.total, shape)
    if not channels.is_cp(c, tol):
        raise ConsistencyError("assembled Choi matrix is not positive semidefinite")
    return channels.kraus_from_choi(c, tol)


def make_lsp(p: LspParams, shape: ChannelShape, tol: float = DEFAULT_TOL) -> KrausChannel:
    """Weight-preserving channel

        Q -> sum_n V_n Q V_n^+ + sum_m W_m Q W_m^+ + V Q W^+ + W Q V^+

    with ``V = sum c1[n] V_n`` and ``W = sum c2[m] W_m``, blocks zero-extended.
    """
    p.validate(shape, tol)
    vs = [channels.embed_operator(k, shape, 1, 1).reshape(-1) for k in p.kraus1]
    ws = [channels.embed_operator(k, shape, 2, 2).reshape(-1) for k in p.kraus2]
    v = channels.embed_operator(p.coherent1, shape, 1, 1).reshape(-1)
    w = channels.embed_operator(p.coherent2, shape, 2, 2).reshape(-1)
    choi = sum(np.outer(x, x.conj()) for x in vs + ws)
    choi = choi + np.outer(v, w.conj()) + np.outer(w, v.conj())
    return _finish(choi, shape, tol)


def swap_choi(rho1, rho2, cross1, cross2, shape: ChannelShape) -> np.ndarray:
    """Choi matrix of the weight-swapping form in terms of its cross operators.

    ``cross1`` is ``sum C[n,k] sqrt(l1_n) |rho1_n><s1,k|`` (dt1 x ds1) and
    ``cross2`` the analogue built from ``D`` (dt2 x ds2).
    """
    s, t = shape.source, shape.target
    j = np.zeros((t.total, s.total, t.total, s.total), dtype=complex)
    t1, t2, s1, s2 = t.block(1), t.block(2), s.block(1), s.block(2)
    for l in range(s.dim2):
        j[t1, s.dim1 + l, t1, s.dim1 + l] = rho1
    for k in range(s.dim1):
        j[t2, k, t2, k] = rho2
    # <t| phi(|s2,l><s1,k|) |t'> = cross1[t,k] conj(cross2[t',l])
    block = np.einsum("ak,bl->albk", cross1, cross2.conj())
    j[t1, s2, t2, s1] = block
    j[t2, s1, t1, s2] = np.transpose(block, (2, 3, 0, 1)).conj()
    n = t.total * s.total
    return j.reshape(n, n)


def make_c2(p: SwapParams, shape: ChannelShape, tol: float = DEFAULT_TOL) -> KrausChannel:
    """Weight-swapping channel

        Q -> rho1 Tr(P_s2 Q) + rho2 Tr(P_s1 Q) + (coherent cross terms from C, D).
    """
    p.validate(shape, tol)
    choi = swap_choi(p.rho1, p.rho2, p.cross1(tol), p.cross2(tol), shape)
    return _finish(choi, shape, tol)


def _absorbing(p: AbsorbParams, shape: ChannelShape, variant: str, tol: float) -> KrausChannel:
    p.validate(shape, variant, tol)
    keep, lose = (2, 1) if variant == "C3" else (1, 2)
    w, u = density_eigenbasis(p.rho, tol)
    ops = []
    for lam, vec in zip(w, u.T):
        for k in range(shape.source.dim(lose)):
            op = np.zeros((shape.target.dim(keep), shape.source.dim(lose)), dtype=complex)
            op[:, k] = np.sqrt(lam) * vec
            ops.append(channels.embed_operator(op, shape, lose, keep))
    ops.extend(channels.embed_operator(k, shape, keep, keep) for k in p.inner.kraus)
    choi = channels.choi_from_kraus(KrausChannel(tuple(ops), shape)).matrix
    return _finish(choi, shape, tol)


def make_c3(p: AbsorbParams, shape: ChannelShape, tol: float = DEFAULT_TOL) -> KrausChannel:
    """``Q -> rho2 Tr(P_s1 Q) + Phi2(Q)``: all weight ends up in t2."""
    return _absorbing(p, shape, "C3", tol)


def make_c4(p: AbsorbParams, shape: ChannelShape, tol: float = DEFAULT_TOL) -> KrausChannel:
    """``Q -> rho1 Tr(P_s2 Q) + Phi1(Q)``: all weight ends up in t1."""
    return _absorbing(p, shape, "C4", tol)


def make_class(tag: str, params, shape: ChannelShape, tol: float = DEFAULT_TOL) -> KrausChannel:
    if tag == "C1":
        return make_lsp(params, shape, tol)
    if tag == "C2":
        return make_c2(params, shape, tol)
    if tag == "C3":
        return make_c3(params, shape, tol)
    if tag == "C4":
        return make_c4(params, shape, tol)
    raise DomainError(f"unknown class tag {tag!r}")


def random_member(tag: str, shape: ChannelShape, seed, tol: float = DEFAULT_TOL):
    """Seeded random channel of class ``tag`` together with its parameters."""
    p = random_params(tag, shape, seed)
    return make_class(tag, p, shape, tol), p


def constant_channel(rho, dim_in: int) -> KrausChannel:
    """``Q -> rho Tr(Q)``."""
    w, u = linalg.eigh(rho)
    ops = []
    for lam, vec in zip(w, u.T):
        if lam <= 0:
            continue
        for k in range(dim_in):
            op = np.zeros((rho.shape[0], dim_in), dtype=complex)
            op[:, k] = np.sqrt(lam) * vec
            ops.append(op)
    return KrausChannel(tuple(ops))
