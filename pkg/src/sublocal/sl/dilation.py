"""Unitary dilation of weight-preserving channels on equal splits.

Each block gets its own ancilla. The block-1 operator ``V1`` acts on
``H_S (x) H_a1`` and is unitary on ``H_s1 (x) H_a1``, zero elsewhere;
``V2`` is the same for block 2. The joint unitary is

    U = V1 (x) I_a2 + V2 (x) I_a1

on ``H_S (x) H_a1 (x) H_a2`` (the second term with its factors reordered),
and the channel is recovered as ``Tr_{a1,a2} U (Q (x) |a1><a1| (x) |a2><a2|) U^+``.

With ancillas started in a basis state the coherent part of the channel is
always built from the operator attached to that state, so the coherence
vector must have unit norm. A family ``{V_n}`` with coherence vector ``c``
is therefore first rewritten as ``V'_j = sum_n u[j, n] V_n`` with ``u`` an
isometry whose first row is ``c``; then ``V'_0 = V`` and the new coherence
vector is ``e_0``. When ``||c|| = 1`` ``u`` is square, otherwise it needs
one extra row, so the ancilla has ``N`` or ``N + 1`` levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import channels, linalg
from ..channels import KrausChannel
from ..errors import ConsistencyError, DomainError
from ..linalg import DEFAULT_TOL
from ..params import LspParams
from ..spaces import ChannelShape, SubspaceSplit
from .generators import make_lsp


@dataclass(frozen=True, eq=False)
class DilationResult:
    split: SubspaceSplit
    dim_a1: int
    dim_a2: int
    a1: np.ndarray
    a2: np.ndarray
    v1: np.ndarray
    v2: np.ndarray
    u: np.ndarray
    family1: tuple
    family2: tuple

    def kondv_residuals(self) -> tuple[float, float]:
        """Largest of ``||V V^+ - P (x) I||`` and ``||V^+ V - P (x) I||`` per block."""
        out = []
        for v, which, dim_a in ((self.v1, 1, self.dim_a1), (self.v2, 2, self.dim_a2)):
            p = np.kron(_projector(self.split, which), np.eye(dim_a))
            out.append(max(np.linalg.norm(v @ v.conj().T - p), np.linalg.norm(v.conj().T @ v - p)))
        return float(out[0]), float(out[1])

    def unitarity_residual(self) -> float:
        return float(np.linalg.norm(self.u.conj().T @ self.u - np.eye(self.u.shape[0])))

    def channel(self) -> KrausChannel:
        """Reduced dynamics ``Q -> Tr_{a1,a2} U (Q (x) a1 a1^+ (x) a2 a2^+) U^+``."""
        d = self.split.total
        t = self.u.reshape(d, self.dim_a1, self.dim_a2, d, self.dim_a1, self.dim_a2)
        inp = np.einsum("sabtcd,c,d->abst", t, self.a1, self.a2)
        ops = tuple(inp[a, b] for a in range(self.dim_a1) for b in range(self.dim_a2))
        return KrausChannel(ops, ChannelShape(self.split, self.split))


def _projector(split: SubspaceSplit, which: int) -> np.ndarray:
    p = np.zeros((split.total, split.total))
    b = split.block(which)
    p[b, b] = np.eye(split.dim(which))
    return p


def absorb_coherence(kraus, c, tol: float = DEFAULT_TOL) -> tuple:
    """Rewrite ``({V_n}, c)`` as a family whose first member is ``sum c_n V_n``.

    The new family describes the same channel and its coherence vector is
    the first basis vector.
    """
    c = np.asarray(c, dtype=complex).reshape(-1)
    n = c.size
    norm = np.linalg.norm(c)
    if abs(norm - 1) <= tol:
        q = linalg.complete_isometry((c.conj() / norm)[:, None])
        u = linalg.dagger(q)
    else:
        w, q = np.linalg.eigh(np.eye(n) - np.outer(c.conj(), c))
        rest = (q * np.sqrt(np.clip(w, 0, None))) @ linalg.dagger(q)
        u = np.vstack([c[None, :], rest])
    ops = np.tensordot(u, np.asarray(kraus), axes=1)
    return tuple(ops)


def _block_unitary(family, d: int, tol: float) -> np.ndarray:
    """Unitary on ``H_b (x) H_a`` extending ``psi (x) |0> -> sum_j V'_j psi (x) |j>``."""
    dim_a = len(family)
    iso = np.einsum("jik->ijk", np.asarray(family)).reshape(d * dim_a, d)
    full = linalg.complete_isometry(iso, tol)
    order = [k * dim_a for k in range(d)]
    order += [i for i in range(d * dim_a) if i % dim_a != 0]
    out = np.zeros_like(full)
    out[:, order] = full
    return out


def dilate_lsp(p: LspParams, split: SubspaceSplit, tol: float = DEFAULT_TOL,
               check_tol: float = 1e-9) -> DilationResult:
    """Unitary dilation of ``make_lsp(p)`` on ``split -> split``.

    Raises :class:`DomainError` for invalid parameters and
    :class:`ConsistencyError` if a post-condition fails beyond ``check_tol``.
    """
    if not isinstance(split, SubspaceSplit):
        raise DomainError("dilation needs a single split shared by source and target")
    shape = ChannelShape(split, split)
    p.validate(shape, tol)
    fam1 = absorb_coherence(p.kraus1, p.c1, tol)
    fam2 = absorb_coherence(p.kraus2, p.c2, tol)
    d1, d2, d = split.dim1, split.dim2, split.total
    na, nb = len(fam1), len(fam2)

    v1 = np.zeros((d * na, d * na), dtype=complex)
    v1[: d1 * na, : d1 * na] = _block_unitary(fam1, d1, tol)
    v2 = np.zeros((d * nb, d * nb), dtype=complex)
    v2[d1 * nb:, d1 * nb:] = _block_unitary(fam2, d2, tol)

    u1 = np.kron(v1, np.eye(nb))
    # V2 (x) I_a1 written in (S, a1, a2) order
    u2 = np.einsum("sbtc,ae->sabtec", v2.reshape(d, nb, d, nb), np.eye(na)).reshape(d * na * nb, -1)
    a1 = np.zeros(na, dtype=complex)
    a1[0] = 1.0
    a2 = np.zeros(nb, dtype=complex)
    a2[0] = 1.0
    res = DilationResult(split, na, nb, a1, a2, v1, v2, u1 + u2, fam1, fam2)

    if max(res.kondv_residuals()) > check_tol or res.unitarity_residual() > check_tol:
        raise ConsistencyError("dilation blocks fail their unitarity conditions")
    target = make_lsp(p, shape, tol)
    if channels.channel_distance(res.channel(), target) > check_tol:
        raise ConsistencyError("dilated dynamics do not reproduce the channel")
    return res
