"""Sort a channel between split spaces into the classes C1-C4 or NotSL.

The classifier never decides membership abstractly. It reads the class off
the transfer signature, extracts that class's parameters from the Choi
matrix, rebuilds the channel with the matching generator and accepts only
if the rebuild reproduces the input. Every intermediate residual is kept in
``SLClass.diagnostics`` so borderline cases can be inspected.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import channels, linalg
from ..channels import KRAUS_CUTOFF, ChoiMatrix, KrausChannel
from ..errors import DomainError
from ..linalg import DEFAULT_TOL
from ..params import AbsorbParams, LspParams, SwapParams, density_eigenbasis
from ..spaces import ChannelShape
from .generators import make_class
from .signature import transfer_signature

NOT_SL = "NotSL"


@dataclass(frozen=True)
class ClassifierTolerances:
    signature: float = 1e-7
    block: float = 1e-8  # scaled by max(1, lambda_max of the Choi matrix)
    rebuild: float = 1e-8


@dataclass
class SLClass:
    tag: str
    params: object = None
    diagnostics: dict = field(default_factory=dict)
    signature: np.ndarray | None = None

    @property
    def is_sl(self) -> bool:
        return self.tag != NOT_SL

    def rebuild(self, shape: ChannelShape, tol: float = DEFAULT_TOL) -> KrausChannel:
        if not self.is_sl:
            raise DomainError("a NotSL result has nothing to rebuild")
        return make_class(self.tag, self.params, shape, tol)


def _blocks(shape: ChannelShape):
    s, t = shape.source, shape.target
    return t.block(1), t.block(2), s.block(1), s.block(2)


def _flat(block: np.ndarray) -> np.ndarray:
    a, b, c, d = block.shape
    return block.reshape(a * b, c * d)


def _leakage(j: np.ndarray, kept) -> float:
    rest = j.copy()
    for idx in kept:
        rest[idx] = 0
    return float(np.linalg.norm(rest))


def _rank_one(b: np.ndarray, tol: float, diag: dict) -> tuple[np.ndarray, np.ndarray]:
    """Split ``b = x y^dagger``; zero vectors when ``b`` vanishes."""
    u, sv, vh = np.linalg.svd(b)
    diag["cross_sigma1"] = float(sv[0]) if sv.size else 0.0
    diag["cross_sigma2"] = float(sv[1]) if sv.size > 1 else 0.0
    if diag["cross_sigma2"] > tol:
        raise DomainError("coherence block between the subspaces has rank above one")
    if diag["cross_sigma1"] <= tol:
        return np.zeros(b.shape[0], dtype=complex), np.zeros(b.shape[1], dtype=complex)
    r = np.sqrt(sv[0])
    return r * u[:, 0], r * vh[0].conj()


def _balance(q1: float, q2: float, tol: float, diag: dict) -> float:
    """Scale ``alpha`` splitting ``x y^dagger`` as ``(alpha x)(y / alpha)^dagger``.

    ``q1``, ``q2`` are the squared normalized norms of ``x`` and ``y``; the
    returned ``alpha`` equalizes ``alpha^2 q1`` and ``q2 / alpha^2``.
    """
    diag["coherence_product"] = float(q1 * q2)
    if q1 * q2 > 1 + tol:
        raise DomainError(f"coherence bound violated: product {q1 * q2:.6g} > 1")
    if q1 <= 0 or q2 <= 0:
        return 1.0
    return float((q2 / q1) ** 0.25)


def _extract_c1(j: np.ndarray, shape: ChannelShape, btol: float, diag: dict) -> LspParams:
    t1, t2, s1, s2 = _blocks(shape)
    s, t = shape.source, shape.target
    diag["block_leakage"] = _leakage(j, [(t1, s1, t1, s1), (t2, s2, t2, s2), (t1, s1, t2, s2), (t2, s2, t1, s1)])
    if diag["block_leakage"] > btol:
        raise DomainError("Choi weight outside the weight-preserving blocks")
    a1 = _flat(j[t1, s1, t1, s1])
    a2 = _flat(j[t2, s2, t2, s2])
    x, y = _rank_one(_flat(j[t1, s1, t2, s2]), btol, diag)
    diag["range_residual"] = max(
        float(np.linalg.norm(x - linalg.range_projector(a1, KRAUS_CUTOFF) @ x)),
        float(np.linalg.norm(y - linalg.range_projector(a2, KRAUS_CUTOFF) @ y)),
    )
    if diag["range_residual"] > btol:
        raise DomainError("coherence vector leaves the support of its diagonal block")
    q1 = float(np.real(x.conj() @ linalg.pinv(a1, KRAUS_CUTOFF) @ x))
    q2 = float(np.real(y.conj() @ linalg.pinv(a2, KRAUS_CUTOFF) @ y))
    alpha = _balance(q1, q2, btol, diag)
    v = channels.kraus_from_choi(ChoiMatrix(a1, t.dim1, s.dim1)).kraus
    w = channels.kraus_from_choi(ChoiMatrix(a2, t.dim2, s.dim2)).kraus
    c1 = [np.vdot(k.reshape(-1), alpha * x) / np.vdot(k, k).real for k in v]
    c2 = [np.vdot(k.reshape(-1), y / alpha) / np.vdot(k, k).real for k in w]
    return LspParams(v, w, c1, c2)


def _density_part(block: np.ndarray, copies: int, btol: float, diag: dict, key: str) -> np.ndarray:
    """``rho`` with ``block == rho (x) I_copies`` (as a 4-index tensor)."""
    rho = np.einsum("tlul->tu", block) / copies
    expected = np.einsum("tu,lm->tlum", rho, np.eye(copies))
    diag[key] = float(np.linalg.norm(block - expected))
    if diag[key] > btol:
        raise DomainError("reset block is not of the form rho (x) identity")
    return rho


def _whitened_norm(rho: np.ndarray, x: np.ndarray, btol: float, diag: dict) -> float:
    """``||rho^(-1/2) x||_op^2``; requires ``range(x)`` inside ``range(rho)``."""
    resid = float(np.linalg.norm(x - linalg.range_projector(rho, KRAUS_CUTOFF) @ x))
    diag["range_residual"] = max(diag.get("range_residual", 0.0), resid)
    if resid > btol:
        raise DomainError("coherence operator leaves the support of its density")
    return float(np.linalg.norm(linalg.sqrt_psd(rho, KRAUS_CUTOFF, inverse=True) @ x, 2) ** 2)


def _coefficients(rho: np.ndarray, cross: np.ndarray, tol: float) -> np.ndarray:
    w, u = density_eigenbasis(rho, tol)
    return (linalg.dagger(u) @ cross) / np.sqrt(w)[:, None]


def _extract_c2(j: np.ndarray, shape: ChannelShape, btol: float, tol: float, diag: dict) -> SwapParams:
    t1, t2, s1, s2 = _blocks(shape)
    s, t = shape.source, shape.target
    diag["block_leakage"] = _leakage(j, [(t1, s2, t1, s2), (t2, s1, t2, s1), (t1, s2, t2, s1), (t2, s1, t1, s2)])
    if diag["block_leakage"] > btol:
        raise DomainError("Choi weight outside the weight-swapping blocks")
    rho1 = _density_part(j[t1, s2, t1, s2], s.dim2, btol, diag, "reset_residual_1")
    rho2 = _density_part(j[t2, s1, t2, s1], s.dim1, btol, diag, "reset_residual_2")
    # entries [t, l, t', k] factor as X[t, k] conj(Y[t', l]): realign first
    b = np.transpose(j[t1, s2, t2, s1], (0, 3, 2, 1))
    x, y = _rank_one(_flat(b), btol, diag)
    xm, ym = x.reshape(t.dim1, s.dim1), y.reshape(t.dim2, s.dim2)
    q1 = _whitened_norm(rho1, xm, btol, diag)
    q2 = _whitened_norm(rho2, ym, btol, diag)
    alpha = _balance(q1, q2, btol, diag)
    cmat = _coefficients(rho1, alpha * xm, tol)
    dmat = _coefficients(rho2, ym / alpha, tol)
    return SwapParams(rho1, rho2, cmat, dmat)


def _extract_absorb(ch: KrausChannel, shape: ChannelShape, tag: str, tol: float) -> AbsorbParams:
    keep, lose = (2, 1) if tag == "C3" else (1, 2)
    probe = np.zeros((shape.source.total, shape.source.total), dtype=complex)
    first = shape.source.block(lose).start
    probe[first, first] = 1.0
    b = shape.target.block(keep)
    rho = channels.apply(ch, probe)[b, b]
    rho = (rho + linalg.dagger(rho)) / 2
    inner = channels.restrict_block(ch, keep, keep)
    return AbsorbParams(rho, channels.canonical(inner, tol))


def classify(ch: KrausChannel, tol: float = DEFAULT_TOL,
             tolerances: ClassifierTolerances | None = None) -> SLClass:
    """Class of ``ch`` among C1-C4, or NotSL.

    Raises :class:`DomainError` if ``ch`` is not a channel within ``tol`` or
    carries no subspace split.
    """
    tolerances = tolerances or ClassifierTolerances()
    if ch.shape is None:
        raise DomainError("classification needs a channel with subspace split metadata")
    report = channels.verify_channel(ch, tol)
    if not report.ok:
        raise DomainError("input is not a trace-preserving completely positive map")
    shape = ch.shape
    sig = transfer_signature(ch, tol)
    diag: dict = {"signature_deviation": dict(sig.deviations)}
    matches = sig.matches(tolerances.signature)
    if len(matches) != 1:
        diag["reason"] = "transfer signature matches no class pattern"
        return SLClass(NOT_SL, None, diag, sig.w)
    tag = matches[0]

    choi = channels.choi_from_kraus(ch)
    lam_max = float(np.linalg.eigvalsh(choi.matrix)[-1])
    btol = tolerances.block * max(1.0, lam_max)
    j = choi.tensor()
    try:
        if tag == "C1":
            params = _extract_c1(j, shape, btol, diag)
        elif tag == "C2":
            params = _extract_c2(j, shape, btol, tol, diag)
        else:
            params = _extract_absorb(ch, shape, tag, tol)
        rebuilt = make_class(tag, params, shape, tol)
    except DomainError as exc:
        diag["candidate"] = tag
        diag["reason"] = str(exc)
        return SLClass(NOT_SL, None, diag, sig.w)
    diag["rebuild_distance"] = channels.channel_distance(ch, rebuilt)
    if diag["rebuild_distance"] > tolerances.rebuild:
        diag["candidate"] = tag
        diag["reason"] = "rebuilt channel differs from the input"
        return SLClass(NOT_SL, None, diag, sig.w)
    return SLClass(tag, params, diag, sig.w)
