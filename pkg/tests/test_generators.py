import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sublocal import channels
from sublocal.channels import KrausChannel
from sublocal.errors import DomainError, ShapeError
from sublocal.params import AbsorbParams, LspParams, SwapParams, random_params
from sublocal.sl import (
    constant_channel,
    ideal_transfer,
    make_c2,
    make_c3,
    make_c4,
    make_class,
    make_lsp,
    random_member,
    transfer_operators,
)
from sublocal.spaces import ChannelShape, ginibre, projector, random_density, random_unitary

from conftest import seeded_shape

TAGS = ("C1", "C2", "C3", "C4")
seeds = st.integers(0, 2**32 - 1)


def pad(op, shape, source, target):
    out = np.zeros((shape.target.total, shape.source.total), dtype=complex)
    out[shape.target.block(target), shape.source.block(source)] = op
    return out


def lsp_by_formula(p, shape, q):
    """Weight-preserving display evaluated term by term."""
    vs = [pad(k, shape, 1, 1) for k in p.kraus1]
    ws = [pad(k, shape, 2, 2) for k in p.kraus2]
    v = sum(c * k for c, k in zip(p.c1, vs))
    w = sum(c * k for c, k in zip(p.c2, ws))
    out = sum(k @ q @ k.conj().T for k in vs + ws)
    return out + v @ q @ w.conj().T + w @ q @ v.conj().T


def swap_by_formula(p, shape, q):
    """Weight-swapping display evaluated term by term."""
    s, t = shape.source, shape.target
    l1, u1 = p.eigen1()
    l2, u2 = p.eigen2()
    r1 = pad(p.rho1, ChannelShape(t, t), 1, 1)
    r2 = pad(p.rho2, ChannelShape(t, t), 2, 2)
    out = r1 * np.trace(projector(s, 2) @ q) + r2 * np.trace(projector(s, 1) @ q)
    ket1 = [t.inclusion(1) @ u1[:, n] for n in range(l1.size)]
    ket2 = [t.inclusion(2) @ u2[:, m] for m in range(l2.size)]
    for n in range(l1.size):
        for m in range(l2.size):
            for k in range(s.dim1):
                for l in range(s.dim2):
                    amp = np.sqrt(l1[n] * l2[m])
                    fwd = q[s.dim1 + l, k] * p.cmat[n, k] * np.conj(p.dmat[m, l]) * amp
                    bwd = q[k, s.dim1 + l] * np.conj(p.cmat[n, k]) * p.dmat[m, l] * amp
                    out = out + fwd * np.outer(ket1[n], ket2[m].conj()) + bwd * np.outer(ket2[m], ket1[n].conj())
    return out


def absorb_by_formula(p, shape, variant, q):
    keep, lose = (2, 1) if variant == "C3" else (1, 2)
    s, t = shape.source, shape.target
    rho = pad(p.rho, ChannelShape(t, t), keep, keep)
    blk = s.block(keep)
    inner = p.inner(q[blk, blk])
    return rho * np.trace(projector(s, lose) @ q) + pad(inner, ChannelShape(t, t), keep, keep)


def test_lsp_identity_example():
    shape = ChannelShape.from_dims(2, 3, 2, 3)
    ch = make_lsp(LspParams([np.eye(2)], [np.eye(3)], [1.0], [1.0]), shape)
    assert channels.channel_distance(ch, channels.identity_channel(5)) <= 1e-12


def test_lsp_without_coherence_kills_cross_blocks():
    shape = ChannelShape.from_dims(2, 2, 2, 2)
    p = random_params("C1", shape, 3)
    p = LspParams(p.kraus1, p.kraus2, np.zeros(len(p.kraus1)), np.zeros(len(p.kraus2)))
    q = ginibre(4, 4, 1)
    out = make_lsp(p, shape)(q)
    assert np.max(np.abs(out[:2, 2:])) <= 1e-13
    assert np.max(np.abs(out[2:, :2])) <= 1e-13


def test_lsp_rejects_bad_params():
    shape = ChannelShape.from_dims(1, 1, 1, 1)
    with pytest.raises(DomainError):
        make_lsp(LspParams([[[1.0]]], [[[1.0]]], [1.5], [1.0]), shape)
    with pytest.raises(DomainError):
        make_lsp(LspParams([[[0.5]]], [[[1.0]]], [1.0], [1.0]), shape)
    with pytest.raises(ShapeError):
        make_lsp(LspParams([[[1.0]]], [[[1.0]]], [1.0, 0.0], [1.0]), shape)
    two = ChannelShape.from_dims(1, 1, 2, 1)
    dup = np.array([[1.0], [0.0]]) / np.sqrt(2)
    with pytest.raises(DomainError):
        make_lsp(LspParams([dup, dup], [[[1.0]]], [0, 0], [1.0]), two)


def test_c2_smallest_case_is_swap_unitary():
    shape = ChannelShape.from_dims(1, 1, 1, 1)
    ch = make_c2(SwapParams([[1.0]], [[1.0]], [[1.0]], [[1.0]]), shape)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    assert channels.channel_distance(ch, KrausChannel((x,))) <= 1e-12


def test_c2_without_coherence():
    shape = ChannelShape.from_dims(2, 1, 2, 3)
    r1, r2 = random_density(2, 2, 1), random_density(3, 2, 2)
    p = SwapParams(r1, r2, np.zeros((2, 2)), np.zeros((2, 1)))
    q = ginibre(3, 3, 5)
    expected = np.zeros((5, 5), dtype=complex)
    expected[:2, :2] = r1 * q[2, 2]
    expected[2:, 2:] = r2 * (q[0, 0] + q[1, 1])
    assert np.allclose(make_c2(p, shape)(q), expected, atol=1e-12)


def test_c2_rejects_large_c():
    shape = ChannelShape.from_dims(1, 1, 1, 1)
    with pytest.raises(DomainError):
        make_c2(SwapParams([[1.0]], [[1.0]], [[1.1]], [[1.0]]), shape)
    with pytest.raises(DomainError):
        make_c2(SwapParams([[0.5]], [[1.0]], [[1.0]], [[1.0]]), shape)


def test_c4_identity_inner():
    shape = ChannelShape.from_dims(2, 2, 2, 1)
    rho = random_density(2, 2, 7)
    ch = make_c4(AbsorbParams(rho, channels.identity_channel(2)), shape)
    q1 = np.zeros((4, 4), dtype=complex)
    q1[:2, :2] = random_density(2, 2, 8)
    out = ch(q1)
    assert np.allclose(out[:2, :2], q1[:2, :2], atol=1e-12)
    q2 = np.zeros((4, 4), dtype=complex)
    q2[2:, 2:] = random_density(2, 2, 9)
    assert np.allclose(ch(q2)[:2, :2], rho, atol=1e-12)


def test_c3_moves_all_weight():
    shape = ChannelShape.from_dims(2, 3, 1, 2)
    p = random_params("C3", shape, 11)
    ch = make_c3(p, shape)
    for seed in range(5):
        q = ginibre(5, 5, seed)
        out = ch(q)
        assert abs(np.trace(projector(shape.target, 2) @ out) - np.trace(q)) <= 1e-11 * np.abs(q).sum()


def test_absorbing_rejects_bad_params():
    shape = ChannelShape.from_dims(1, 1, 1, 1)
    with pytest.raises(DomainError):
        make_c3(AbsorbParams([[1.0]], KrausChannel(([[0.5]],))), shape)
    with pytest.raises(DomainError):
        make_class("C7", None, shape)


@pytest.mark.parametrize("tag", TAGS)
@given(seed=seeds)
def test_generators_match_displays(tag, seed):
    shape = seeded_shape(seed)
    ch, p = random_member(tag, shape, seed)
    assert channels.verify_channel(ch, 1e-10).ok
    q = ginibre(shape.source.total, shape.source.total, seed ^ 0x5A5A)
    if tag == "C1":
        expected = lsp_by_formula(p, shape, q)
    elif tag == "C2":
        expected = swap_by_formula(p, shape, q)
    else:
        expected = absorb_by_formula(p, shape, tag, q)
    assert np.linalg.norm(ch(q) - expected) <= 1e-10 * max(1, np.linalg.norm(q))


@pytest.mark.parametrize("tag", TAGS)
@given(seed=seeds)
def test_trace_identities(tag, seed):
    shape = seeded_shape(seed)
    ch, _ = random_member(tag, shape, seed)
    assert np.max(np.abs(transfer_operators(ch) - ideal_transfer(tag, shape))) <= 1e-10


def test_random_member_is_seeded():
    shape = ChannelShape.from_dims(2, 2, 2, 2)
    a, _ = random_member("C2", shape, 4)
    b, _ = random_member("C2", shape, 4)
    assert channels.channel_distance(a, b) == 0


def test_constant_channel():
    rho = random_density(3, 2, 1)
    ch = constant_channel(rho, 2)
    assert channels.is_tp(ch)
    q = random_density(2, 2, 2)
    assert np.allclose(ch(q), rho, atol=1e-12)
    u = random_unitary(2, 3)
    assert np.allclose(ch(u @ q @ u.conj().T), rho, atol=1e-12)
