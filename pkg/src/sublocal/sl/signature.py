"""Weight transfer between the two subspaces.

For a channel between split spaces the transfer operators are

    T_j[s, s'] = Tr(P_tj phi(|s><s'|)),   j = 1, 2,

evaluated on every matrix unit, not only on diagonal ones. The four SL
classes have fixed ideal transfer operators:

    class   T_1      T_2
    C1      P_s1     P_s2     (weight preserving)
    C2      P_s2     P_s1     (weight swapping)
    C3      0        I        (everything ends in t2)
    C4      I        0        (everything ends in t1)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .. import channels
from ..channels import KrausChannel
from ..errors import DomainError
from ..linalg import DEFAULT_TOL
from ..spaces import ChannelShape, projector

CLASS_TAGS = ("C1", "C2", "C3", "C4")

IDEAL_W = {
    "C1": ((1.0, 0.0), (0.0, 1.0)),
    "C2": ((0.0, 1.0), (1.0, 0.0)),
    "C3": ((0.0, 1.0), (0.0, 1.0)),
    "C4": ((1.0, 0.0), (1.0, 0.0)),
}


def ideal_transfer(tag: str, shape: ChannelShape) -> np.ndarray:
    """Ideal ``T[j-1]`` operators for class ``tag`` on the source space."""
    p1, p2 = projector(shape.source, 1), projector(shape.source, 2)
    eye, zero = p1 + p2, np.zeros_like(p1)
    table = {"C1": (p1, p2), "C2": (p2, p1), "C3": (zero, eye), "C4": (eye, zero)}
    if tag not in table:
        raise DomainError(f"unknown class tag {tag!r}")
    return np.array(table[tag])


@dataclass
class TransferSignature:
    w: np.ndarray
    deviations: dict = field(default_factory=dict)

    def best_match(self) -> tuple[str, float]:
        tag = min(self.deviations, key=self.deviations.get)
        return tag, self.deviations[tag]

    def matches(self, tol: float) -> list[str]:
        return [tag for tag in CLASS_TAGS if self.deviations[tag] <= tol]


def _require_shape(ch: KrausChannel) -> ChannelShape:
    if ch.shape is None:
        raise DomainError("channel has no subspace split metadata")
    return ch.shape


def transfer_operators(ch: KrausChannel) -> np.ndarray:
    return channels.target_weights(ch, _require_shape(ch).target)


def transfer_signature(ch: KrausChannel, tol: float = DEFAULT_TOL) -> TransferSignature:
    """Mean weight moved from each source subspace into each target subspace.

    ``w[i][j]`` averages ``Tr(P_tj phi(|s_i,b><s_i,b|))`` over the basis of
    source subspace ``i``. ``deviations[tag]`` is the largest entrywise gap
    between the full transfer operators and the ideal ones of ``tag``.
    """
    shape = _require_shape(ch)
    if not channels.is_tp(ch, tol):
        raise DomainError("transfer signature needs a trace-preserving channel")
    t = transfer_operators(ch)
    w = np.zeros((2, 2))
    for i, which in enumerate((1, 2)):
        b = shape.source.block(which)
        for j in range(2):
            w[i, j] = float(np.mean(np.diag(t[j])[b].real))
    dev = {tag: float(np.max(np.abs(t - ideal_transfer(tag, shape)))) for tag in CLASS_TAGS}
    return TransferSignature(w, dev)


def sp_residual(ch: KrausChannel) -> float:
    """Largest ``|Tr(P_t1 phi(E)) - Tr(P_s1 E)|`` over source matrix units ``E``."""
    shape = _require_shape(ch)
    t = transfer_operators(ch)
    return float(np.max(np.abs(t[0] - projector(shape.source, 1))))


def is_sp(ch: KrausChannel, tol: float = DEFAULT_TOL) -> bool:
    """Weight in subspace 1 (hence, for channels, in subspace 2) is conserved."""
    return sp_residual(ch) <= tol
