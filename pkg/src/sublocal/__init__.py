"""Subspace-local quantum channels on two-location Hilbert spaces."""

from .channels import (
    ChoiMatrix,
    KrausChannel,
    apply,
    canonical,
    channel_distance,
    choi_from_kraus,
    compose,
    identity_channel,
    is_cp,
    is_tp,
    kraus_from_choi,
    random_channel,
    restrict_block,
    restrict_source,
    restrict_target,
    tensor,
    verify_channel,
)
from .errors import ConsistencyError, DomainError, ShapeError
from .params import AbsorbParams, LspParams, SwapParams
from .spaces import ChannelShape, SubspaceSplit

__version__ = "0.1.0"

__all__ = [
    "AbsorbParams",
    "ChannelShape",
    "ChoiMatrix",
    "ConsistencyError",
    "DomainError",
    "KrausChannel",
    "LspParams",
    "ShapeError",
    "SubspaceSplit",
    "SwapParams",
    "apply",
    "canonical",
    "channel_distance",
    "choi_from_kraus",
    "compose",
    "identity_channel",
    "is_cp",
    "is_tp",
    "kraus_from_choi",
    "random_channel",
    "restrict_block",
    "restrict_source",
    "restrict_target",
    "tensor",
    "verify_channel",
]
