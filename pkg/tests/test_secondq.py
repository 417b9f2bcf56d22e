import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sublocal import channels, secondq
from sublocal.channels import KrausChannel
from sublocal.errors import DomainError, ShapeError
from sublocal.params import AbsorbParams, LspParams, SwapParams, random_params
from sublocal.sl import make_class
from sublocal.spaces import ChannelShape, SubspaceSplit, random_density, random_unitary

from conftest import seeded_shape

TAGS = ("C1", "C2", "C3", "C4")
seeds = st.integers(0, 2**32 - 1)


def restriction_by_action(pair: secondq.ProductChannelPair) -> KrausChannel:
    """Oracle: evaluate ``M_T^+ (phi1 x phi2)(M_S Q M_S^+) M_T`` on matrix units."""
    emb = pair.embeddings()
    full = pair.tensor()
    ms, mt = emb.m_source, emb.m_target
    choi = channels.choi_from_action(
        lambda q: mt.conj().T @ full(ms @ q @ ms.conj().T) @ mt,
        emb.shape.target.total, emb.shape.source.total, emb.shape,
    )
    return channels.kraus_from_choi(choi)


def test_product_embedding_smallest_case():
    m = secondq.product_embedding(SubspaceSplit(1, 1))
    expected = np.zeros((4, 2))
    expected[2, 0] = 1
    expected[1, 1] = 1
    assert np.array_equal(m, expected)


@given(st.integers(1, 5), st.integers(1, 5))
def test_product_embedding_isometry(d1, d2):
    m = secondq.product_embedding(SubspaceSplit(d1, d2))
    assert np.array_equal(m.conj().T @ m, np.eye(d1 + d2))
    assert np.trace(m @ m.conj().T) == d1 + d2
    e1 = np.zeros(d1 + 1)
    e1[1] = 1
    # first basis vector of s1 is a particle in factor 1, vacuum in factor 2
    assert np.array_equal(m[:, 0], np.kron(e1, secondq.vacuum(d2)))


def test_sector_projectors_partition():
    split = SubspaceSplit(2, 3)
    p0 = secondq.sector_projector(split, 0)
    p1 = secondq.sector_projector(split, 1)
    assert np.trace(p0) == 1 and np.trace(p1) == 5
    assert np.array_equal(p0 @ p1, np.zeros_like(p0))
    with pytest.raises(DomainError):
        secondq.sector_projector(split, 2)


def test_identity_restriction():
    shape = ChannelShape.from_dims(1, 1, 1, 1)
    emb = secondq.build_embeddings(shape)
    out = secondq.one_restriction(channels.identity_channel(4), emb)
    assert channels.channel_distance(out, channels.identity_channel(2)) == 0
    with pytest.raises(ShapeError):
        secondq.one_restriction(channels.identity_channel(3), emb)


def test_unitary_pair_restricts_to_block_unitary():
    shape = ChannelShape.from_dims(2, 3, 2, 3)
    u1, u2 = random_unitary(2, 1), random_unitary(3, 2)
    pair = secondq.lift_lsp(LspParams([u1], [u2], [1.0], [1.0]), shape)
    block = np.zeros((5, 5), dtype=complex)
    block[:2, :2], block[2:, 2:] = u1, u2
    out = secondq.one_restriction(pair.tensor(), pair.embeddings())
    assert channels.channel_distance(out, KrausChannel((block,))) <= 1e-12
    assert channels.is_tp(out)


def test_respects_examples():
    shape = ChannelShape.from_dims(1, 2, 1, 2)
    emb = secondq.build_embeddings(shape)
    n = emb.fock_source
    ident = channels.identity_channel(n)
    assert secondq.respects_n_states(ident, 0, emb) and secondq.respects_n_states(ident, 1, emb)
    ops = []
    for j in range(n):
        op = np.zeros((n, n))
        op[0, j] = 1
        ops.append(op)
    to_vac = KrausChannel(tuple(ops))
    assert secondq.respects_n_states(to_vac, 0, emb)
    assert not secondq.respects_n_states(to_vac, 1, emb)
    assert not channels.is_tp(secondq.one_restriction(to_vac, emb))
    with pytest.raises(DomainError):
        secondq.respects_n_states(ident, 1)


def test_lsp_factor_examples():
    shape = ChannelShape.from_dims(2, 1, 2, 1)
    pair = secondq.lift_lsp(LspParams([np.eye(2)], [np.eye(1)], [1.0], [1.0]), shape)
    assert channels.channel_distance(pair.phi1, channels.identity_channel(3)) <= 1e-12
    u = random_unitary(2, 4)
    pair = secondq.lift_lsp(LspParams([u], [np.eye(1)], [0.0], [1.0]), shape)
    j = channels.choi_from_kraus(pair.phi1).tensor()
    # no coherence between the vacuum and the particle sector
    assert np.max(np.abs(j[0, 0, 1:, 1:])) <= 1e-12
    assert np.max(np.abs(j[1:, 1:, 0, 0])) <= 1e-12


def test_swap_factor_smallest_case():
    shape = ChannelShape.from_dims(1, 1, 1, 1)
    p = SwapParams([[1.0]], [[1.0]], [[1.0]], [[1.0]])
    pair = secondq.lift_c2(p, shape)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    assert channels.channel_distance(pair.phi1, KrausChannel((x,))) <= 1e-12
    assert channels.channel_distance(pair.phi2, KrausChannel((x,))) <= 1e-12
    out = secondq.one_restriction(pair.tensor(), pair.embeddings())
    assert channels.channel_distance(out, KrausChannel((x,))) <= 1e-12


def test_swap_factor_without_coherence():
    shape = ChannelShape.from_dims(2, 1, 2, 2)
    rho1, rho2 = random_density(2, 2, 1), random_density(2, 1, 2)
    pair = secondq.lift_c2(SwapParams(rho1, rho2, np.zeros((2, 2)), np.zeros((1, 1))), shape)
    j = channels.choi_from_kraus(pair.phi1).tensor()
    assert np.max(np.abs(j[:, 0, :, 1:])) <= 1e-12
    e0 = np.diag([1.0, 0, 0])
    assert np.allclose(pair.phi1(e0)[1:, 1:], rho1, atol=1e-12)
    assert np.allclose(pair.phi1(np.diag([0, 0.3, 0.7])), np.diag([1.0, 0, 0]), atol=1e-12)


def test_fill_factor_reads_off_display():
    shape = ChannelShape.from_dims(2, 2, 2, 2)
    rho = random_density(2, 2, 5)
    pair = secondq.lift_c34(AbsorbParams(rho, channels.identity_channel(2)), shape, "C3")
    vac = np.zeros((3, 3))
    vac[0, 0] = 1
    filled = np.zeros((3, 3), dtype=complex)
    filled[1:, 1:] = rho
    assert np.allclose(pair.phi2(vac), filled, atol=1e-12)
    q = np.zeros((3, 3), dtype=complex)
    q[1:, 1:] = random_density(2, 2, 6)
    assert np.allclose(pair.phi2(q), q, atol=1e-12)
    assert np.allclose(pair.phi1(q), vac, atol=1e-12)
    assert channels.is_tp(pair.phi1, 1e-10) and channels.is_tp(pair.phi2, 1e-10)


@pytest.mark.parametrize("tag", TAGS)
@given(seed=seeds)
def test_lift_matches_generator(tag, seed):
    shape = seeded_shape(seed)
    p = random_params(tag, shape, seed)
    pair = secondq.lift(tag, p, shape)
    for phi in (pair.phi1, pair.phi2):
        assert channels.is_tp(phi, 1e-10)
    assert secondq.respects_n_states(pair, 1)
    assert secondq.respects_n_states(pair, 0) == (tag == "C1")
    out = secondq.one_restriction(pair.tensor(), pair.embeddings())
    ref = make_class(tag, p, shape)
    assert channels.channel_distance(out, ref) <= 1e-9
    assert channels.channel_distance(restriction_by_action(pair), ref) <= 1e-9
    assert secondq.leca_case(pair) == int(tag[1])


def test_lift_rejects_unknown_tag():
    with pytest.raises(DomainError):
        secondq.lift("C5", None, ChannelShape.from_dims(1, 1, 1, 1))


@given(seeds)
def test_restriction_tp_iff_respects_one_states(seed):
    rng = np.random.default_rng(seed)
    shape = seeded_shape(seed, 2)
    f1, f2 = secondq.build_embeddings(shape).factor_shapes()
    phi1 = channels.random_channel(f1, int(rng.integers(3, 6)), rng)
    phi2 = channels.random_channel(f2, int(rng.integers(3, 6)), rng)
    pair = secondq.ProductChannelPair(phi1, phi2, shape)
    out = secondq.one_restriction(pair.tensor(), pair.embeddings())
    assert secondq.respects_n_states(pair, 1, tol=1e-9) == channels.is_tp(out, 1e-9)


def test_leca_case_none_for_generic_pair():
    shape = ChannelShape.from_dims(2, 2, 2, 2)
    f1, f2 = secondq.build_embeddings(shape).factor_shapes()
    pair = secondq.ProductChannelPair(channels.random_channel(f1, 3, 0), channels.random_channel(f2, 3, 1), shape)
    assert secondq.leca_case(pair) is None
