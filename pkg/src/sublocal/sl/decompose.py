"""Split a weight-preserving channel into two factors acting on one block each."""

from __future__ import annotations

import numpy as np

from ..channels import KrausChannel
from ..linalg import DEFAULT_TOL
from ..params import LspParams
from ..spaces import ChannelShape, SubspaceSplit
from .generators import make_lsp


def decompose_lsp(p: LspParams, shape: ChannelShape,
                  tol: float = DEFAULT_TOL) -> tuple[KrausChannel, KrausChannel]:
    """Return ``(phi_a, phi_b)`` with ``phi_b o phi_a == make_lsp(p)``.

    ``phi_a`` maps ``s1 (+) s2 -> t1 (+) s2``, acting through ``{V_n}`` on
    the first block and as the identity on the second. ``phi_b`` maps
    ``t1 (+) s2 -> t1 (+) t2``, identity on ``t1`` and ``{W_m}`` on the rest.
    The coherence vectors ride along: ``c1`` in ``phi_a``, ``c2`` in ``phi_b``.
    """
    p.validate(shape, tol)
    s, t = shape.source, shape.target
    mid = SubspaceSplit(t.dim1, s.dim2)
    pa = LspParams(p.kraus1, (np.eye(s.dim2),), p.c1, [1.0])
    pb = LspParams((np.eye(t.dim1),), p.kraus2, [1.0], p.c2)
    phi_a = make_lsp(pa, ChannelShape(s, mid), tol)
    phi_b = make_lsp(pb, ChannelShape(mid, t), tol)
    return phi_a, phi_b
