import numpy as np
import pytest

from carlab import intertwiner, linalg, sequences, truncation
from carlab.errors import InvalidInputError, LevelError
from carlab.states import evaluate


def _angles(desc, n):
    return sequences.angles_from_descriptor(desc, n)


def test_truncated_product_state_zero_angles():
    state = intertwiner.truncated_product_state(np.zeros(4), 3)
    a = np.diag(np.arange(8.0))
    assert evaluate(state, a) == pytest.approx(0.0)
    assert state.level == 3


def test_truncated_product_state_single_factor():
    state = intertwiner.truncated_product_state([0.3], 1)
    np.testing.assert_allclose(state.vector, [np.cos(0.3), np.sin(0.3)])


def test_truncated_product_state_needs_enough_angles():
    with pytest.raises(InvalidInputError):
        intertwiner.truncated_product_state([0.1, 0.2], 3)


def test_truncated_state_embedding_consistency():
    rng = np.random.default_rng(0)
    alpha = rng.uniform(-1.0, 1.0, size=6)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    low = evaluate(intertwiner.truncated_product_state(alpha, 2), a)
    high = evaluate(intertwiner.truncated_product_state(alpha, 6), truncation.embed(a, 6))
    assert abs(low - high) <= 1e-12


def test_step_unitary_carries_angle_vectors():
    u = intertwiner.step_unitary(0.3, -0.5)
    got = u @ np.array([np.cos(0.3), np.sin(0.3)])
    np.testing.assert_allclose(got, [np.cos(-0.5), np.sin(-0.5)], atol=1e-14)


def test_chain_identity_when_angles_equal():
    alpha = _angles("harmonic", 5)
    chain = intertwiner.build_chain(alpha, alpha, 5)
    for record in chain.levels:
        np.testing.assert_allclose(record.unitary, np.eye(2**record.n), atol=1e-14)
        assert record.gap_to_prev == pytest.approx(0.0, abs=1e-12)


def test_chain_single_step_gap():
    theta = 0.7
    chain = intertwiner.build_chain([theta], [0.0], 1)
    record = chain.level(1)
    assert record.gap_to_prev == pytest.approx(2 * abs(np.sin(theta / 2)), abs=1e-12)
    assert record.gap_to_prev == pytest.approx(np.sqrt(2 * (1 - np.cos(theta))), abs=1e-12)
    assert record.overlap_bound == pytest.approx(record.gap_to_prev, abs=1e-12)


def test_chain_per_step_gap_identity():
    alpha = _angles("harmonic", 8)
    beta = _angles("zero", 8)
    chain = intertwiner.build_chain(alpha, beta, 8)
    for record in chain.levels:
        theta = alpha[record.n - 1]
        assert abs(record.gap_to_prev - np.sqrt(2 * (1 - np.cos(theta)))) <= 1e-10
        assert abs(record.eigenphase_norm - record.gap_to_prev) <= 1e-10


def test_chain_carries_product_vectors():
    rng = np.random.default_rng(1)
    alpha = rng.uniform(-1.2, 1.2, size=7)
    beta = rng.uniform(-1.2, 1.2, size=7)
    chain = intertwiner.build_chain(alpha, beta, 7)
    for n in (1, 4, 7):
        xi = truncation.product_vector(alpha[:n])
        eta = truncation.product_vector(beta[:n])
        assert np.linalg.norm(chain.level(n).unitary @ xi - eta) <= 1e-9


def test_chain_length_validation():
    with pytest.raises(InvalidInputError):
        intertwiner.build_chain([0.1, 0.2], [0.0], 2)
    with pytest.raises(InvalidInputError):
        intertwiner.build_chain([0.1], [0.0], 2)


def test_block_gap_measured_equals_eigenphase_formula():
    alpha = _angles("harmonic", 7)
    beta = _angles("zero", 7)
    chain = intertwiner.build_chain(alpha, beta, 7)
    for gap in intertwiner.block_gaps(chain, max_span=6):
        assert abs(gap.measured - gap.eigenphase_norm) <= 1e-8
    # the harmonic family makes long blocks overshoot the claimed bound
    flagged = [g for g in intertwiner.block_gaps(chain, max_span=6) if g.exceeds_bound]
    assert flagged


def test_block_gap_against_tail_product_example():
    alpha = _angles("harmonic", 6)
    beta = _angles("zero", 6)
    chain = intertwiner.build_chain(alpha, beta, 6)
    gap = intertwiner.block_gap(chain, 2, 6)
    prod = np.prod(np.cos(alpha[2:6]))
    assert gap.overlap_bound == pytest.approx(np.sqrt(2 * (1 - prod)), abs=1e-12)
    assert gap.measured == pytest.approx(
        linalg.rotation_block_norm(alpha[2:6]), abs=1e-10
    )


def test_block_gap_bad_indices():
    chain = intertwiner.build_chain([0.1, 0.2], [0.0, 0.0], 2)
    with pytest.raises(LevelError):
        intertwiner.block_gap(chain, 2, 2)


def test_intertwining_gap_identity_element():
    alpha = _angles("random:0.8:3", 6)
    beta = _angles("random:0.8:4", 6)
    chain = intertwiner.build_chain(alpha, beta, 6)
    assert intertwiner.intertwining_gap(chain, 6, [np.eye(4)]) <= 1e-12


def test_intertwining_gap_random_elements():
    rng = np.random.default_rng(2)
    alpha = rng.uniform(-1.0, 1.0, size=8)
    beta = rng.uniform(-1.0, 1.0, size=8)
    chain = intertwiner.build_chain(alpha, beta, 8)
    hermitians = []
    for _ in range(10):
        h = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        hermitians.append((h + h.conj().T) / 4)
    assert intertwiner.intertwining_gap(chain, 6, hermitians) <= 1e-10
    batch = intertwiner.default_test_elements(2, seed=7, n_random=50)
    assert intertwiner.intertwining_gap(chain, 8, batch) <= 1e-9


def test_intertwining_gap_with_phase_policy():
    alpha = _angles("harmonic", 6)
    beta = _angles("zero", 6)
    chain = intertwiner.build_chain(alpha, beta, 6, phase_policy="eigenvalue-one")
    batch = intertwiner.default_test_elements(2, seed=8, n_random=10)
    # phases cancel inside a -> v a v*, so the identity still holds
    assert intertwiner.intertwining_gap(chain, 6, batch) <= 1e-9
    # but the per-step gaps differ from the bare-rotation chain
    bare = intertwiner.build_chain(alpha, beta, 6)
    assert chain.level(1).gap_to_prev > bare.level(1).gap_to_prev


def test_default_test_elements_are_contractions():
    elements = intertwiner.default_test_elements(2, seed=9, n_random=25)
    assert len(elements) == 16 + 25
    for a in elements:
        assert linalg.operator_norm(a) <= 1.0 + 1e-9


def test_separation_rows_equal_angles():
    alpha = _angles("harmonic", 6)
    rows = intertwiner.separation_rows(alpha, alpha, start=1, stop=6)
    for row in rows:
        assert row.state_distance == pytest.approx(0.0, abs=1e-10)
        assert row.overlap == pytest.approx(1.0, abs=1e-12)


def test_separation_rows_invsqrt_marches_to_two():
    alpha = _angles("invsqrt", 10)
    beta = _angles("zero", 10)
    rows = intertwiner.separation_rows(alpha, beta, start=1, stop=10)
    distances = [row.state_distance for row in rows]
    assert all(b >= a - 1e-12 for a, b in zip(distances, distances[1:]))
    assert distances[-1] > 1.9
    for row in rows:
        # witness expectations follow the overlap exactly
        assert abs(row.witness_first - (1 - row.overlap**2)) <= 1e-10
        assert abs(row.witness_second - (row.overlap**2 - 1)) <= 1e-10


def test_separation_near_orthogonal_single_factor():
    theta = np.pi / 2 - 1e-6
    rows = intertwiner.separation_rows([theta], [0.0], start=1, stop=1)
    assert rows[0].state_distance >= 2 - 1e-5


def test_distance_crossing_level_invsqrt():
    alpha = _angles("invsqrt", 64)
    beta = _angles("zero", 64)
    level = intertwiner.distance_crossing_level(alpha, beta, threshold=1.9)
    assert level == 4
    none = intertwiner.distance_crossing_level(
        _angles("power:2", 64), beta, threshold=1.9
    )
    assert none is None
