"""A particle that moves between two locations by a local interaction.

The source system S and target system T each split into two locations.
The interaction couples the two systems only within the same location:

    H = E1 h1 E1^+ + E2 h2 E2^+,   E_i : H_si (x) H_ti -> H_S (x) H_T,

and the induced channel is ``Q -> Tr_S(U (Q (x) rho_T) U^+)`` with
``U = exp(-i t H)``. If ``rho_T`` lives in location 1, every input ends up
in location 1 of T, so the channel absorbs into t1.
"""

from __future__ import annotations

import numpy as np

from .. import channels, linalg
from ..channels import KrausChannel
from ..errors import DomainError, ShapeError
from ..linalg import DEFAULT_TOL
from ..params import check_density
from ..spaces import ChannelShape, projector


def local_hamiltonian(h1, h2, shape: ChannelShape, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Embed ``h1`` on ``s1 (x) t1`` and ``h2`` on ``s2 (x) t2`` into ``S (x) T``."""
    s, t = shape.source, shape.target
    h = np.zeros((s.total * t.total,) * 2, dtype=complex)
    for which, hi in ((1, h1), (2, h2)):
        hi = linalg.as_matrix(hi)
        d = s.dim(which) * t.dim(which)
        if hi.shape != (d, d):
            raise ShapeError(f"h{which} must be {d}x{d}, got {hi.shape}")
        if not linalg.is_hermitian(hi, tol):
            raise DomainError(f"h{which} is not Hermitian")
        e = np.kron(s.inclusion(which), t.inclusion(which))
        h += e @ hi @ linalg.dagger(e)
    return h


def hamiltonian_demo(h1, h2, rho_t, t: float, shape: ChannelShape,
                     tol: float = DEFAULT_TOL) -> KrausChannel:
    """Channel ``Q -> Tr_S(exp(-itH) (Q (x) rho_T) exp(itH))`` from S to T.

    ``rho_T`` must be supported on location 1 of the target.
    """
    dt = shape.target.total
    rho_t = check_density(rho_t, dt, tol, "rho_T")
    p1 = projector(shape.target, 1)
    if np.linalg.norm(p1 @ rho_t @ p1 - rho_t) > tol:
        raise DomainError("rho_T is not supported on target location 1")
    u = linalg.expm_hermitian(local_hamiltonian(h1, h2, shape, tol), t)
    ds = shape.source.total

    def action(q):
        out = u @ np.kron(q, rho_t) @ linalg.dagger(u)
        return linalg.partial_trace(out, ds, dt, which="A")

    choi = channels.choi_from_action(action, dt, ds, shape)
    return channels.kraus_from_choi(choi, tol)
