"""Orbit context construction and the minimal-isotropy witness."""

import numpy as np
import pytest

from suborbit import (block_scalar, bracket, build_setup,
                      build_witness_x0, centralizer, pairing, sigma,
                      subspace_residual)
from suborbit.generic import sample_element
from suborbit.orbit import ad_a_inverse_apply


def test_dimension_table_112(setup_112):
    st = setup_112
    assert (st.g.dim, st.k.dim, st.m.dim) == (16, 6, 10)
    assert (st.k_tilde.dim, st.k_prime.dim) == (1, 5)
    assert (st.m_tilde.dim, st.m_prime.dim) == (5, 5)


def test_dimension_table_11():
    st = build_setup((1, 1), (1.0, 2.0))
    assert (st.g.dim, st.k.dim, st.m.dim) == (4, 2, 2)
    assert (st.m_tilde.dim, st.m_prime.dim) == (1, 1)


def test_duplicate_spectrum_rejected():
    with pytest.raises(ValueError):
        build_setup((1, 1, 2), (1.0, 2.0, 2.0))


def test_nonpositive_multiplicity_rejected():
    with pytest.raises(ValueError):
        build_setup((1, 0, 2), (1.0, 2.0, 3.0))
    with pytest.raises(ValueError):
        build_setup((1, -1), (1.0, 2.0))


def test_anchor_properties(setup_112):
    st = setup_112
    assert st.k_prime.contains(st.a.coords, 1e-12)
    assert st.z_of_k.contains(st.a.coords, 1e-12)
    assert np.allclose(sigma(st.a).coords, -st.a.coords)


def test_splittings_are_orthogonal(setup_112):
    st = setup_112
    pieces = [st.k_tilde, st.k_prime, st.m_tilde, st.m_prime]
    for i in range(4):
        for j in range(i + 1, 4):
            overlap = np.abs(pieces[i].basis.T @ pieces[j].basis)
            assert overlap.size == 0 or overlap.max() < 1e-10


def test_bracket_k_m_containment(setup_112):
    st = setup_112
    rng = np.random.default_rng(0)
    for _ in range(5):
        z = sample_element(st.k, rng, st.n)
        x = sample_element(st.m, rng, st.n)
        assert st.m.contains(bracket(z, x).coords, 1e-10)


def test_block_modules(setup_112):
    st = setup_112
    dims = {key: sp.dim for key, sp in st.blocks.items()}
    assert dims == {(1, 1): 1, (2, 2): 1, (3, 3): 4,
                    (1, 2): 2, (1, 3): 4, (2, 3): 4}
    # every block is a module for the isotropy algebra
    rng = np.random.default_rng(1)
    for key, sp in st.blocks.items():
        if sp.dim == 0:
            continue
        v = sample_element(sp, rng, st.n)
        z = sample_element(st.k, rng, st.n)
        assert sp.contains(bracket(z, v).coords, 1e-10), key


def test_ad_a_maps_tilde_to_prime_bijectively(setup_112):
    st = setup_112
    rng = np.random.default_rng(2)
    xt = sample_element(st.m_tilde, rng, st.n)
    image = bracket(st.a, xt)
    assert st.m_prime.contains(image.coords, 1e-10)
    xp = sample_element(st.m_prime, rng, st.n)
    assert st.m_tilde.contains(bracket(st.a, xp).coords, 1e-10)
    assert st.m_tilde.dim == st.m_prime.dim


def test_ad_a_inverse_roundtrip(setup_112):
    st = setup_112
    rng = np.random.default_rng(3)
    x = sample_element(st.m, rng, st.n)
    y = ad_a_inverse_apply(st, x)
    assert np.allclose(bracket(st.a, y).coords, x.coords, atol=1e-10)
    # applying the inverse twice matches the inverse of the squared operator
    twice = ad_a_inverse_apply(st, y)
    sq = np.linalg.inv(st.ad_a_m @ st.ad_a_m)
    direct = st.m.basis @ (sq @ st.m.coeffs(x.coords))
    assert np.allclose(twice.coords, direct, atol=1e-10)


def test_block_scalar_validation(setup_112):
    with pytest.raises(ValueError):
        block_scalar(setup_112, (1.0, 2.0))
    b = block_scalar(setup_112, (1.0, 3.0, 7.0))
    assert np.allclose(b.matrix, np.diag([1j, 3j, 7j, 7j]))


@pytest.mark.parametrize("mult,expected", [
    ((1, 1, 2), 1),          # enough small blocks: isotropy collapses to the center
    ((1, 1, 4), 5),          # tail of the big block survives as a unitary algebra
    ((1, 2), 2),             # two blocks: torus plus tail algebra
    ((2, 2), 2),
    ((1, 1, 1, 1), 1),
    ((1, 2, 3), 1),
    ((1, 1, 3), 2),          # gap 3 - 1 - 1 = 1, so 1 + 1
])
def test_witness_dimensions(mult, expected):
    spectrum = tuple(float(j + 1) for j in range(len(mult)))
    st = build_setup(mult, spectrum)
    x0, rep = build_witness_x0(st, seed=0)
    assert rep.centralizer_dim == expected
    assert rep.expected_dim == expected
    assert st.m_tilde.contains(x0.coords, 1e-12)
    # real skew-symmetric matrix
    assert np.max(np.abs(x0.matrix.imag)) < 1e-13


def test_witness_deterministic(setup_114):
    x1, r1 = build_witness_x0(setup_114, seed=5)
    x2, r2 = build_witness_x0(setup_114, seed=5)
    assert np.array_equal(x1.coords, x2.coords)
    x3, _ = build_witness_x0(setup_114, seed=6)
    assert r1.centralizer_dim == r2.centralizer_dim == 5


def test_witness_unsorted_input_conjugates_back():
    st = build_setup((2, 1, 1), (3.0, 1.0, 2.0))
    x0, rep = build_witness_x0(st, seed=0)
    assert rep.block_order == (1, 2, 0)
    assert rep.centralizer_dim == 1
    assert st.m_tilde.contains(x0.coords, 1e-12)


def test_witness_chain_stage_dimension(setup_114):
    # the chain alone keeps a torus plus the tail unitary algebra
    _, rep = build_witness_x0(setup_114, seed=0)
    assert rep.chain_dim == 1 + (4 - 1) ** 2


@pytest.mark.parametrize("mult,expected", [
    ((2, 2, 3), 1),    # enough room before the tail: center only
    ((1, 2, 4), 2),    # gap 4 - 2 - 1 = 1 survives
    ((3, 4), 4),       # two blocks: 3 + (4 - 3)^2
])
def test_witness_dimensions_beyond_rank_six(mult, expected):
    spectrum = tuple(float(j + 1) for j in range(len(mult)))
    st = build_setup(mult, spectrum)
    _, rep = build_witness_x0(st, seed=0)
    assert rep.centralizer_dim == expected
