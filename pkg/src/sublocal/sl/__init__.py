"""Subspace-local channels: generators, classifier, dilation and friends."""

from .classify import NOT_SL, ClassifierTolerances, SLClass, classify
from .composition import class_of_signature, compose_class, signature_product
from .decompose import decompose_lsp
from .demo import hamiltonian_demo, local_hamiltonian
from .dilation import DilationResult, absorb_coherence, dilate_lsp
from .generators import constant_channel, make_c2, make_c3, make_c4, make_class, make_lsp, random_member
from .signature import (
    CLASS_TAGS,
    IDEAL_W,
    TransferSignature,
    ideal_transfer,
    is_sp,
    sp_residual,
    transfer_operators,
    transfer_signature,
)

__all__ = [
    "CLASS_TAGS",
    "IDEAL_W",
    "NOT_SL",
    "ClassifierTolerances",
    "DilationResult",
    "SLClass",
    "TransferSignature",
    "absorb_coherence",
    "class_of_signature",
    "classify",
    "compose_class",
    "constant_channel",
    "decompose_lsp",
    "dilate_lsp",
    "hamiltonian_demo",
    "ideal_transfer",
    "is_sp",
    "local_hamiltonian",
    "make_c2",
    "make_c3",
    "make_c4",
    "make_class",
    "make_lsp",
    "random_member",
    "signature_product",
    "sp_residual",
    "transfer_operators",
    "transfer_signature",
]
