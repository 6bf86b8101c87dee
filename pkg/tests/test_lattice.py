import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lossybloch.lattice import (LatticeSpec, build_chiral_operator,
                                build_effective_hamiltonian,
                                build_translation_operator, loss_pattern,
                                uniform_gamma)


def test_effective_hamiltonian_small_chain():
    spec = LatticeSpec.uniform(1, tilt=0.3, gamma=0.2)
    H = build_effective_hamiltonian(spec)
    np.testing.assert_allclose(np.diag(H), [-0.3 - 0.4j, 0.0, 0.3 - 0.4j], atol=1e-15)
    np.testing.assert_allclose(np.diag(H, 1), [-1.0, -1.0])
    np.testing.assert_allclose(np.diag(H, -1), [-1.0, -1.0])


def test_lossless_chain_is_hermitian():
    H = build_effective_hamiltonian(LatticeSpec.uniform(7, tilt=0.4, gamma=0.0))
    assert np.abs(H - H.conj().T).max() == 0.0
    assert np.abs(H.imag).max() == 0.0


def test_loss_pattern_only_on_odd_sites():
    # -2i*gamma on the odd sites j = +-1, nothing on the even sites (the
    # centre j = 0 is lossless)
    spec = LatticeSpec.uniform(2, tilt=0.0, gamma=0.05)
    H = build_effective_hamiltonian(spec)
    np.testing.assert_allclose(np.diag(H), [0.0, -0.1j, 0.0, -0.1j, 0.0], atol=1e-15)


def test_chiral_operator_small_chain():
    X = build_chiral_operator(LatticeSpec.uniform(1))
    # anti-diagonal entries read off at j = -1, 0, 1
    assert X[2, 0] == -1.0 and X[1, 1] == 1.0 and X[0, 2] == -1.0
    assert np.abs(X - X.T).max() == 0.0


def test_chiral_operator_is_involution():
    X = build_chiral_operator(LatticeSpec.uniform(5))
    np.testing.assert_allclose(X @ X, np.eye(11), atol=0)


def test_chiral_identity_uniform_decay():
    spec = LatticeSpec.uniform(5, tilt=0.3, gamma=0.2)
    H = build_effective_hamiltonian(spec)
    X = build_chiral_operator(spec)
    assert np.abs(X @ H.conj().T @ X + H).max() < 1e-14


def test_chiral_identity_fails_for_random_decay():
    spec = LatticeSpec.random_decay(5, tilt=0.3, lo=0.05, hi=0.4, seed=3)
    H = build_effective_hamiltonian(spec)
    X = build_chiral_operator(spec)
    assert np.abs(X @ H.conj().T @ X + H).max() > 1e-3


@settings(deadline=None, max_examples=50)
@given(L=st.integers(1, 12), F=st.floats(0, 3), gamma=st.floats(0, 2))
def test_chiral_identity_property(L, F, gamma):
    spec = LatticeSpec.uniform(L, tilt=F, gamma=gamma)
    H = build_effective_hamiltonian(spec)
    X = build_chiral_operator(spec)
    assert np.abs(X @ H.conj().T @ X + H).max() < 1e-12


def test_translation_zero_is_identity():
    S = build_translation_operator(LatticeSpec.uniform(3), 0)
    np.testing.assert_allclose(S, np.eye(7))


def test_translation_by_one():
    S = build_translation_operator(LatticeSpec.uniform(1), 1)
    expected = np.zeros((3, 3))
    expected[0, 1] = 1.0  # site -1 <- site 0
    expected[1, 2] = 1.0  # site 0 <- site 1
    np.testing.assert_allclose(S, expected)


def test_translation_range_error():
    with pytest.raises(ValueError):
        build_translation_operator(LatticeSpec.uniform(2), 5)


def test_translation_commutator_identity_interior():
    # [S_m, H] = i*gamma*(1 - (-1)^m)*sum (-1)^j |j-m><j| + m*F*S_m, assembled
    # independently and compared on the interior block |j| <= L - |m|
    L, m, F, gamma = 6, 2, 0.3, 0.2
    spec = LatticeSpec.uniform(L, tilt=F, gamma=gamma)
    H = build_effective_hamiltonian(spec)
    S = build_translation_operator(spec, m)
    lhs = S @ H - H @ S
    rhs = np.zeros_like(H)
    for j in spec.sites:
        if -L <= j - m <= L:
            rhs[L + j - m, L + j] = (1j * gamma * (-1.0) ** j * (1 - (-1.0) ** m)
                                     + m * F)
    interior = np.abs(spec.sites) <= L - abs(m)
    block = np.ix_(interior, interior)
    assert np.abs(lhs[block] - rhs[block]).max() < 1e-13


def test_translation_commutator_identity_odd_shift():
    L, m, F, gamma = 7, 3, 0.5, 0.15
    spec = LatticeSpec.uniform(L, tilt=F, gamma=gamma)
    H = build_effective_hamiltonian(spec)
    S = build_translation_operator(spec, m)
    lhs = S @ H - H @ S
    rhs = np.zeros_like(H)
    for j in spec.sites:
        if -L <= j - m <= L:
            rhs[L + j - m, L + j] = (1j * gamma * (-1.0) ** j * (1 - (-1.0) ** m)
                                     + m * F)
    interior = np.abs(spec.sites) <= L - abs(m)
    block = np.ix_(interior, interior)
    assert np.abs(lhs[block] - rhs[block]).max() < 1e-13


def test_spec_validation():
    with pytest.raises(ValueError):
        LatticeSpec(half_width=-1)
    with pytest.raises(ValueError):
        LatticeSpec.uniform(2, gamma=-0.1)
    with pytest.raises(ValueError):
        LatticeSpec(half_width=2, decay=np.ones(3))
    with pytest.raises(ValueError):
        LatticeSpec(half_width=1, tilt=-0.2)


def test_random_decay_seeded_and_bounded():
    a = LatticeSpec.random_decay(10, 0.2, 0.025, 0.125, seed=7)
    b = LatticeSpec.random_decay(10, 0.2, 0.025, 0.125, seed=7)
    np.testing.assert_array_equal(a.decay, b.decay)
    odd = a.sites % 2 != 0
    assert np.all((a.decay[odd] >= 0.025) & (a.decay[odd] <= 0.125))
    assert np.all(a.decay[~odd] == 0.0)
    with pytest.raises(ValueError):
        uniform_gamma(a)


def test_loss_pattern_values():
    spec = LatticeSpec.uniform(2, gamma=0.3)
    np.testing.assert_allclose(loss_pattern(spec), [0.0, -0.6, 0.0, -0.6, 0.0])
