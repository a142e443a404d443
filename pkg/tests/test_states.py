"""State types, invariants and factories."""

import numpy as np
import pytest

import entmono as em


def test_tensor_product_basis_composition():
    zero = em.basis_state((2,), 0)
    one = em.basis_state((2,), 1)
    out = em.tensor_product(zero, one)
    assert out.dims == (2, 2)
    expected = np.zeros(4)
    expected[1] = 1.0
    np.testing.assert_allclose(out.amplitudes, expected)


def test_tensor_product_plus_plus_is_uniform():
    plus = em.PureState(np.array([1.0, 1.0]) / np.sqrt(2), (2,))
    out = em.tensor_product(plus, plus)
    np.testing.assert_allclose(out.amplitudes, np.full(4, 0.5), atol=1e-15)


def test_tensor_product_superposition_with_zero():
    plus = em.PureState(np.array([1.0, 1.0]) / np.sqrt(2), (2,))
    zero = em.basis_state((2,), 0)
    out = em.tensor_product(plus, zero)
    np.testing.assert_allclose(
        out.amplitudes, np.array([1.0, 0.0, 1.0, 0.0]) / np.sqrt(2), atol=1e-15
    )


def test_to_density_basis_state():
    rho = em.to_density(em.basis_state((2,), 0))
    np.testing.assert_allclose(rho.matrix, np.diag([1.0, 0.0]), atol=1e-15)


def test_to_density_bell_corners():
    rho = em.to_density(em.bell_state()).matrix
    expected = np.zeros((4, 4))
    for i, j in ((0, 0), (0, 3), (3, 0), (3, 3)):
        expected[i, j] = 0.5
    np.testing.assert_allclose(rho, expected, atol=1e-15)


def test_to_density_is_projector():
    psi = em.random_pure_state((2, 3, 2), seed=5)
    rho = em.to_density(psi).matrix
    assert abs(np.trace(rho @ rho).real - 1.0) < 1e-12


def test_ghz_two_qubits_is_bell():
    np.testing.assert_allclose(em.ghz_state(2).amplitudes, em.bell_state().amplitudes)


def test_ghz_three_amplitudes():
    amps = em.ghz_state(3).amplitudes
    assert abs(amps[0] - 1 / np.sqrt(2)) < 1e-15
    assert abs(amps[7] - 1 / np.sqrt(2)) < 1e-15
    assert np.all(amps[1:7] == 0)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_ghz_single_qubit_marginal_is_maximally_mixed(n):
    rho = em.to_density(em.ghz_state(n))
    marg = em.partial_trace(rho, (0,))
    np.testing.assert_allclose(marg.matrix, np.eye(2) / 2, atol=1e-12)


def test_ghz_needs_two_qubits():
    with pytest.raises(ValueError):
        em.ghz_state(1)


def test_w_two_qubits():
    np.testing.assert_allclose(
        em.w_state(2).amplitudes, np.array([0, 1, 1, 0]) / np.sqrt(2), atol=1e-15
    )


def test_w_three_amplitudes():
    amps = em.w_state(3).amplitudes
    for idx in (1, 2, 4):
        assert abs(amps[idx] - 1 / np.sqrt(3)) < 1e-15
    for idx in (0, 3, 5, 6, 7):
        assert amps[idx] == 0


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_w_pairwise_concurrence(n):
    rho = em.to_density(em.w_state(n))
    for k in range(1, n):
        marg = em.partial_trace(rho, (0, k))
        assert abs(em.concurrence_two_qubit(marg).value - 2.0 / n) < 1e-12


def test_w_needs_two_qubits():
    with pytest.raises(ValueError):
        em.w_state(1)


def test_random_pure_deterministic_per_seed():
    a = em.random_pure_state((2, 2, 2), seed=42)
    b = em.random_pure_state((2, 2, 2), seed=42)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)


def test_random_pure_unit_norm():
    rng = np.random.default_rng(3)
    for _ in range(50):
        psi = em.random_pure_state((2, 3), rng)
        assert abs(np.linalg.norm(psi.amplitudes) - 1.0) < 1e-12


def test_random_pure_haar_first_moment():
    # E|amp_0|^2 = 1/4 for dims (2, 2); |amp_0|^2 ~ Beta(1, 3)
    rng = np.random.default_rng(7)
    samples = 10_000
    acc = 0.0
    for _ in range(samples):
        acc += abs(em.random_pure_state((2, 2), rng).amplitudes[0]) ** 2
    mean = acc / samples
    sigma = np.sqrt(3.0 / 80.0 / samples)
    assert abs(mean - 0.25) < 3 * sigma


def test_random_mixed_passes_invariants():
    rng = np.random.default_rng(11)
    for rank in (1, 2, 3, 4):
        rho = em.random_mixed_state((2, 2), rank, rng)
        assert rho.dims == (2, 2)  # construction re-validates all invariants


def test_random_mixed_rank():
    rho = em.random_mixed_state((2, 2), rank=4, seed=13)
    eigs = np.linalg.eigvalsh(rho.matrix)
    assert np.sum(eigs > 1e-8) == 4


def test_random_mixed_rank_one_is_pure():
    rho = em.random_mixed_state((2, 2), rank=1, seed=17)
    assert abs(np.trace(rho.matrix @ rho.matrix).real - 1.0) < 1e-10


def test_random_mixed_rank_out_of_range():
    with pytest.raises(ValueError):
        em.random_mixed_state((2, 2), rank=5, seed=0)
    with pytest.raises(ValueError):
        em.random_mixed_state((2, 2), rank=0, seed=0)


def test_pure_state_rejects_bad_norm():
    with pytest.raises(ValueError):
        em.PureState(np.array([1.0, 1.0]), (2,))


def test_pure_state_rejects_bad_length():
    with pytest.raises(ValueError):
        em.PureState(np.array([1.0, 0.0, 0.0]), (2,))


def test_density_matrix_rejects_non_hermitian():
    mat = np.array([[0.5, 0.3], [0.0, 0.5]], dtype=complex)
    with pytest.raises(ValueError):
        em.DensityMatrix(mat, (2,))


def test_density_matrix_rejects_bad_trace():
    with pytest.raises(ValueError):
        em.DensityMatrix(np.eye(2), (2,))


def test_density_matrix_rejects_negative_eigenvalue():
    with pytest.raises(ValueError):
        em.DensityMatrix(np.diag([1.5, -0.5]).astype(complex), (2,))


def test_bipartition_validation():
    with pytest.raises(ValueError):
        em.Bipartition((0,), (0, 1))  # overlap
    with pytest.raises(ValueError):
        em.Bipartition((0,), (2,))  # gap
    with pytest.raises(ValueError):
        em.Bipartition((), (0, 1))  # empty side


def test_bipartition_of_and_swap():
    cut = em.Bipartition.of((1,), 3)
    assert cut.side_a == (1,) and cut.side_b == (0, 2)
    assert cut.swapped().side_a == (0, 2)


def test_schmidt_spectrum_validation():
    with pytest.raises(ValueError):
        em.SchmidtSpectrum(np.array([0.3, 0.6]))  # wrong sum
    with pytest.raises(ValueError):
        em.SchmidtSpectrum(np.array([0.3, 0.7]))  # ascending
    spec = em.SchmidtSpectrum(np.array([0.7, 0.3]))
    assert spec.coefficients[0] == 0.7


def test_random_unitary_is_unitary():
    u = em.random_unitary(4, seed=23)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(4), atol=1e-12)


def test_basis_state_bounds():
    with pytest.raises(ValueError):
        em.basis_state((2, 2), 4)


def test_states_are_immutable():
    psi = em.bell_state()
    with pytest.raises(ValueError):
        psi.amplitudes[0] = 0.0
    rho = em.to_density(psi)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 0.0
