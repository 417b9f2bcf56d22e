"""Completely positive maps in Kraus and Choi form.

Choi convention: for a map with source dimension ``dS`` and target dimension
``dT`` the Choi matrix is ``(dT*dS) x (dT*dS)`` with

    C[t*dS + s, t'*dS + s'] = <t| phi(|s><s'|) |t'>,

which equals ``sum_k vec(V_k) vec(V_k)^dagger`` for Kraus operators ``V_k``
under row-major ``vec``. CP is PSD of ``C``; TP is ``Tr_target C = I``.

Channels carry an optional :class:`ChannelShape`. It is ``None`` for maps
whose source or target is not split in two (restrictions to one subspace,
maps on second-quantized product spaces).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DomainError, ShapeError
from .linalg import DEFAULT_TOL, dagger
from .spaces import ChannelShape, SubspaceSplit, random_isometry

# Eigenvalues of a Choi matrix at or below this fraction of the largest one
# are treated as numerical noise when extracting Kraus operators.
KRAUS_CUTOFF = 1e-10


@dataclass(frozen=True, eq=False)
class KrausChannel:
    kraus: tuple
    shape: ChannelShape | None = None

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(k) for k in self.kraus)
        if not ops:
            raise ShapeError("a channel needs at least one Kraus operator")
        dims = {k.shape for k in ops}
        if len(dims) != 1:
            raise ShapeError(f"Kraus operators disagree in shape: {sorted(dims)}")
        object.__setattr__(self, "kraus", ops)
        if self.shape is not None:
            expected = (self.shape.target.total, self.shape.source.total)
            if ops[0].shape != expected:
                raise ShapeError(f"Kraus shape {ops[0].shape} does not match {expected}")

    @property
    def dim_out(self) -> int:
        return self.kraus[0].shape[0]

    @property
    def dim_in(self) -> int:
        return self.kraus[0].shape[1]

    def __len__(self) -> int:
        return len(self.kraus)

    def __call__(self, q) -> np.ndarray:
        return apply(self, q)


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    matrix: np.ndarray
    dim_out: int
    dim_in: int
    shape: ChannelShape | None = field(default=None)

    def __post_init__(self):
        m = linalg.as_matrix(self.matrix)
        n = self.dim_out * self.dim_in
        if m.shape != (n, n):
            raise ShapeError(f"Choi matrix must be {n}x{n}, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    def tensor(self) -> np.ndarray:
        """View as ``J[t, s, t', s']``."""
        return self.matrix.reshape(self.dim_out, self.dim_in, self.dim_out, self.dim_in)


@dataclass
class ChannelReport:
    tp: bool
    tp_residual: float
    cp: bool
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return self.tp and self.cp

    def as_dict(self) -> dict:
        return {
            "tp": {"ok": self.tp, "residual": self.tp_residual},
            "cp": {"ok": self.cp, "min_eigenvalue": self.min_eigenvalue},
        }


def apply(ch: KrausChannel, q) -> np.ndarray:
    q = linalg.as_matrix(q)
    if q.shape != (ch.dim_in, ch.dim_in):
        raise ShapeError(f"input must be {ch.dim_in}x{ch.dim_in}, got {q.shape}")
    ks = np.asarray(ch.kraus)
    return np.einsum("kab,bc,kdc->ad", ks, q, ks.conj())


def choi_from_kraus(ch: KrausChannel) -> ChoiMatrix:
    vs = np.asarray(ch.kraus).reshape(len(ch.kraus), -1)
    return ChoiMatrix(vs.T @ vs.conj(), ch.dim_out, ch.dim_in, ch.shape)


def apply_choi(c: ChoiMatrix, q) -> np.ndarray:
    """Evaluate the map through index contraction of its Choi matrix."""
    q = linalg.as_matrix(q)
    return np.einsum("asbt,st->ab", c.tensor(), q)


def choi_from_action(action, dim_out: int, dim_in: int, shape: ChannelShape | None = None) -> ChoiMatrix:
    """Assemble the Choi matrix of a linear map given as a Python callable."""
    j = np.zeros((dim_out, dim_in, dim_out, dim_in), dtype=complex)
    for s in range(dim_in):
        for sp in range(dim_in):
            e = np.zeros((dim_in, dim_in), dtype=complex)
            e[s, sp] = 1.0
            j[:, s, :, sp] = action(e)
    return ChoiMatrix(j.reshape(dim_out * dim_in, -1), dim_out, dim_in, shape)


def _phase_fixed(op: np.ndarray) -> np.ndarray:
    flat = op.reshape(-1)
    z = flat[np.argmax(np.abs(flat))]
    return op * (abs(z) / z) if z != 0 else op


def kraus_from_choi(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> KrausChannel:
    """Canonical Kraus family from the Choi eigendecomposition.

    Kraus operators are ``sqrt(lambda_i) unvec(u_i)`` for eigenvalues above
    ``KRAUS_CUTOFF * lambda_max``, in descending order, each rescaled by a
    phase that makes its largest-magnitude entry real and positive. They are
    mutually orthogonal as vectors, hence linearly independent.
    """
    if not linalg.is_psd(c.matrix, tol):
        raise DomainError("Choi matrix is not positive semidefinite")
    w, u = linalg.eigh(c.matrix, tol)
    if w[0] <= 0:
        ops = [np.zeros((c.dim_out, c.dim_in), dtype=complex)]
    else:
        keep = w > KRAUS_CUTOFF * w[0]
        ops = [
            _phase_fixed(np.sqrt(lam) * linalg.unvec(u[:, i], c.dim_out, c.dim_in))
            for i, lam in enumerate(w)
            if keep[i]
        ]
    return KrausChannel(tuple(ops), c.shape)


def canonical(ch: KrausChannel, tol: float = DEFAULT_TOL) -> KrausChannel:
    return kraus_from_choi(choi_from_kraus(ch), tol)


def tp_residual(ch: KrausChannel) -> float:
    ks = np.asarray(ch.kraus)
    gram = np.einsum("kab,kac->bc", ks.conj(), ks)
    return float(np.linalg.norm(gram - np.eye(ch.dim_in)))


def is_tp(ch: KrausChannel, tol: float = DEFAULT_TOL) -> bool:
    return bool(tp_residual(ch) <= tol * np.sqrt(ch.dim_in))


def is_tp_choi(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> bool:
    reduced = linalg.partial_trace(c.matrix, c.dim_out, c.dim_in, which="A")
    return float(np.linalg.norm(reduced - np.eye(c.dim_in))) <= tol * np.sqrt(c.dim_in)


def is_cp(c: ChoiMatrix, tol: float = DEFAULT_TOL) -> bool:
    return linalg.is_psd(c.matrix, tol)


def verify_channel(ch: KrausChannel, tol: float = DEFAULT_TOL) -> ChannelReport:
    c = choi_from_kraus(ch)
    w = np.linalg.eigvalsh((c.matrix + dagger(c.matrix)) / 2)
    res = tp_residual(ch)
    return ChannelReport(
        tp=bool(res <= tol * np.sqrt(ch.dim_in)),
        tp_residual=res,
        cp=is_cp(c, tol),
        min_eigenvalue=float(w[0]),
    )


def compose(b: KrausChannel, a: KrausChannel, prune: bool = True) -> KrausChannel:
    """The map ``b o a`` (apply ``a`` first).

    With ``prune`` the product family ``{B_j A_i}`` is replaced by the
    canonical one whenever it exceeds ``dim_out * dim_in`` operators.
    """
    if a.dim_out != b.dim_in:
        raise ShapeError(f"cannot compose: a outputs {a.dim_out}, b takes {b.dim_in}")
    shape = None
    if a.shape is not None and b.shape is not None:
        if a.shape.target != b.shape.source:
            raise ShapeError("intermediate splits of a and b disagree")
        shape = ChannelShape(a.shape.source, b.shape.target)
    ops = tuple(bj @ ai for bj in b.kraus for ai in a.kraus)
    out = KrausChannel(ops, shape)
    if prune and len(ops) > out.dim_out * out.dim_in:
        out = canonical(out)
    return out


def tensor(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    return KrausChannel(tuple(np.kron(ai, bj) for ai in a.kraus for bj in b.kraus))


def restrict_source(ch: KrausChannel, which: int, split: SubspaceSplit | None = None) -> KrausChannel:
    """Restriction of ``ch`` to source subspace ``which``; columns outside it are dropped."""
    split = split or _require_shape(ch).source
    s = split.block(which)
    return KrausChannel(tuple(k[:, s] for k in ch.kraus))


def restrict_target(ch: KrausChannel, which: int, split: SubspaceSplit | None = None) -> KrausChannel:
    """Compression ``P phi(Q) P`` onto target subspace ``which``; rows outside it are dropped."""
    split = split or _require_shape(ch).target
    s = split.block(which)
    return KrausChannel(tuple(k[s, :] for k in ch.kraus))


def restrict_block(ch: KrausChannel, source: int, target: int) -> KrausChannel:
    """Restriction to one source subspace followed by compression to one target subspace."""
    shape = _require_shape(ch)
    return restrict_target(restrict_source(ch, source), target, shape.target)


def _require_shape(ch: KrausChannel) -> ChannelShape:
    if ch.shape is None:
        raise DomainError("operation needs a channel with subspace split metadata")
    return ch.shape


def embed_operator(op, shape: ChannelShape, source: int, target: int) -> np.ndarray:
    """Zero-extend an operator ``H_s(source) -> H_t(target)`` to ``H_S -> H_T``."""
    op = linalg.as_matrix(op)
    expected = (shape.target.dim(target), shape.source.dim(source))
    if op.shape != expected:
        raise ShapeError(f"block operator must be {expected}, got {op.shape}")
    out = np.zeros((shape.target.total, shape.source.total), dtype=complex)
    out[shape.target.block(target), shape.source.block(source)] = op
    return out


def embed_channel(ch: KrausChannel, shape: ChannelShape, source: int, target: int) -> KrausChannel:
    """Reinterpret a map between two subspaces as a map ``H_S -> H_T``."""
    return KrausChannel(tuple(embed_operator(k, shape, source, target) for k in ch.kraus), shape)


def identity_channel(dim: int, shape: ChannelShape | None = None) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),), shape)


def random_channel(shape: ChannelShape | tuple[int, int], kraus_count: int, seed) -> KrausChannel:
    """Random channel from a Haar isometry ``dS -> dT * kraus_count``.

    ``shape`` may be a :class:`ChannelShape` or a plain ``(dim_out, dim_in)``
    pair for unsplit spaces.
    """
    if kraus_count < 1:
        raise DomainError("kraus_count must be at least 1")
    if isinstance(shape, ChannelShape):
        d_out, d_in = shape.target.total, shape.source.total
        meta = shape
    else:
        d_out, d_in = shape
        meta = None
    if d_out * kraus_count < d_in:
        raise DomainError(f"{kraus_count} Kraus operators of size {d_out}x{d_in} cannot be trace preserving")
    iso = random_isometry(d_out * kraus_count, d_in, seed)
    return KrausChannel(tuple(iso[k * d_out:(k + 1) * d_out] for k in range(kraus_count)), meta)


def channel_distance(a: KrausChannel, b: KrausChannel) -> float:
    """Frobenius norm of the Choi difference."""
    if (a.dim_out, a.dim_in) != (b.dim_out, b.dim_in):
        raise ShapeError("channels act between different spaces")
    return float(np.linalg.norm(choi_from_kraus(a).matrix - choi_from_kraus(b).matrix))


def target_weights(ch: KrausChannel, target: SubspaceSplit) -> np.ndarray:
    """``T[j, s, s'] = Tr(P_{t,j+1} phi(|s><s'|))`` for ``j = 0, 1``."""
    j = choi_from_kraus(ch).tensor()
    out = np.empty((2, ch.dim_in, ch.dim_in), dtype=complex)
    for idx, which in enumerate((1, 2)):
        b = target.block(which)
        out[idx] = np.einsum("tatb->ab", j[b, :, b, :])
    return out
