"""Class of a composite SL channel.

``compose_class(outer, inner)`` is the class of ``outer o inner``, i.e. the
channel that applies ``inner`` first. This matches
``channels.compose(b, a)`` with ``outer = class(b)`` and ``inner = class(a)``.

The stated rules are: C1 is neutral on either side, C3 and C4 absorb
anything applied before them, and C2 o C2 = C1, C2 o C3 = C4,
C2 o C4 = C3. The remaining cells follow from multiplying transfer
signatures, which :func:`signature_product` exposes for cross-checking.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError
from .signature import CLASS_TAGS, IDEAL_W

_SWAP_OF = {"C1": "C2", "C2": "C1", "C3": "C4", "C4": "C3"}


def _check(tag: str) -> str:
    if tag not in CLASS_TAGS:
        raise DomainError(f"composition is defined for C1-C4 only, got {tag!r}")
    return tag


def compose_class(outer: str, inner: str) -> str:
    outer, inner = _check(outer), _check(inner)
    if outer == "C1":
        return inner
    if outer in ("C3", "C4"):
        return outer
    return _SWAP_OF[inner]


def signature_product(outer: str, inner: str) -> np.ndarray:
    """Ideal signature of ``outer o inner``: rows of ``inner`` routed through ``outer``."""
    return np.asarray(IDEAL_W[_check(inner)]) @ np.asarray(IDEAL_W[_check(outer)])


def class_of_signature(w: np.ndarray, tol: float = 1e-12) -> str | None:
    for tag in CLASS_TAGS:
        if np.max(np.abs(np.asarray(w) - np.asarray(IDEAL_W[tag]))) <= tol:
            return tag
    return None
