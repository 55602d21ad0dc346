import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wotsim.errors import LayoutError, NotPSDError, ShapeError
from wotsim.qcore import (
    ALICE,
    BOB,
    TOL_SPECTRAL,
    DensityOp,
    Factor,
    RegisterLayout,
    StateVector,
    TwoOutcomeMeasurement,
    embed_operator,
    fidelity,
    guess_prob,
    haar_unitary,
    helstrom,
    herm_sqrt,
    kron,
    partial_trace,
    pure_density,
    random_density,
    trace_norm,
    uhlmann_unitary,
)

KET0 = DensityOp(np.diag([1.0, 0.0]).astype(complex))
KET1 = DensityOp(np.diag([0.0, 1.0]).astype(complex))
PLUS = DensityOp(np.full((2, 2), 0.5, dtype=complex))


def qubit_pair_layout():
    return RegisterLayout((Factor("L", 2, ALICE), Factor("R", 2, BOB)))


# --- kron ------------------------------------------------------------------

def test_kron_identities():
    assert np.allclose(kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.allclose(kron(np.diag([1, -1]), np.eye(2)), np.diag([1, 1, -1, -1]))
    e11 = np.zeros((2, 2))
    e11[0, 0] = 1.0
    expected = np.zeros((4, 4))
    expected[0, 0] = 1.0
    assert np.allclose(kron(e11, e11), expected)


# --- partial trace ---------------------------------------------------------

def test_partial_trace_product_state():
    lay = qubit_pair_layout()
    rho = partial_trace(pure_density(StateVector(lay, [1, 0, 0, 0])), lay, ["L"])
    assert np.allclose(rho.mat, KET0.mat)


def test_partial_trace_bell_state():
    lay = qubit_pair_layout()
    bell = StateVector(lay, np.array([1, 0, 0, 1]) / np.sqrt(2))
    for keep in (["L"], ["R"]):
        rho = partial_trace(pure_density(bell), lay, keep)
        assert np.allclose(rho.mat, np.eye(2) / 2)


def test_partial_trace_dim_mismatch():
    lay = qubit_pair_layout()
    with pytest.raises(LayoutError):
        partial_trace(DensityOp(np.eye(2) / 2), lay, ["L"])


def test_partial_trace_unknown_name():
    lay = qubit_pair_layout()
    rho = random_density(4, np.random.default_rng(0))
    with pytest.raises(LayoutError):
        partial_trace(rho, lay, ["nope"])


def test_partial_trace_preserves_trace_and_psd(rng):
    lay = RegisterLayout((Factor("L", 2, ALICE), Factor("R", 3, BOB)))
    for _ in range(25):
        rho = random_density(6, rng)
        red = partial_trace(rho, lay, ["R"])
        assert abs(np.trace(red.mat) - 1.0) < TOL_SPECTRAL
        assert np.linalg.eigvalsh(red.mat).min() > -TOL_SPECTRAL


# --- trace norm and guessing probability ------------------------------------

def test_trace_norm_diag():
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0, abs=1e-12)
    assert trace_norm(np.zeros((3, 3))) == pytest.approx(0.0, abs=1e-12)


def test_trace_norm_ket0_minus_plus():
    # eigenvalues of |0><0| - |+><+| are +/- 1/sqrt(2), derived by eigensolver
    diff = KET0.mat - PLUS.mat
    eigs = np.linalg.eigvalsh((diff + diff.conj().T) / 2)
    assert np.allclose(sorted(np.abs(eigs)), [1 / np.sqrt(2)] * 2)
    assert trace_norm(diff) == pytest.approx(np.sqrt(2), abs=1e-12)


def test_trace_norm_rejects_nonsquare():
    with pytest.raises(ShapeError):
        trace_norm(np.ones((2, 3)))


def test_guess_prob_examples():
    rho = random_density(3, np.random.default_rng(5))
    assert guess_prob(rho, rho) == pytest.approx(0.5, abs=1e-9)
    assert guess_prob(KET0, KET1) == pytest.approx(1.0, abs=1e-12)
    assert guess_prob(KET0, PLUS) == pytest.approx(0.5 + np.sqrt(2) / 4, abs=1e-12)


def test_guess_prob_dim_mismatch():
    with pytest.raises(ShapeError):
        guess_prob(KET0, random_density(3, np.random.default_rng(0)))


# --- helstrom ----------------------------------------------------------------

def test_helstrom_orthogonal_states():
    meas, success = helstrom(KET0, KET1)
    assert success == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(meas.pos, KET0.mat)
    assert np.allclose(meas.neg, KET1.mat)


def test_helstrom_identical_states(rng):
    rho = random_density(3, rng)
    _, success = helstrom(rho, rho)
    assert success == pytest.approx(0.5, abs=1e-9)


def test_helstrom_beats_random_measurements(rng):
    from wotsim.oracle import helstrom_oracle

    rho, xi = random_density(2, rng), random_density(2, rng)
    _, success = helstrom(rho, xi)
    assert success >= helstrom_oracle(rho, xi, 1000, seed=0) - 1e-6


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3, 4]))
def test_helstrom_matches_guess_prob(seed, dim):
    gen = np.random.default_rng(seed)
    rho, xi = random_density(dim, gen), random_density(dim, gen)
    _, success = helstrom(rho, xi)
    assert success == pytest.approx(guess_prob(rho, xi), abs=TOL_SPECTRAL)


# --- herm_sqrt and fidelity --------------------------------------------------

def test_herm_sqrt_examples():
    assert np.allclose(herm_sqrt(DensityOp(np.eye(2) / 2)), np.eye(2) / np.sqrt(2))
    assert np.allclose(herm_sqrt(KET0), KET0.mat)
    root = herm_sqrt(DensityOp(np.diag([0.25, 0.75]).astype(complex)))
    assert np.allclose(root, np.diag([0.5, np.sqrt(0.75)]))


def test_herm_sqrt_squares_back(rng):
    rho = random_density(4, rng)
    root = herm_sqrt(rho)
    assert np.allclose(root @ root, rho.mat, atol=1e-9)
    assert np.allclose(root, root.conj().T)


def test_herm_sqrt_rejects_negative():
    mat = np.diag([1.5, -0.5]).astype(complex)
    with pytest.raises(NotPSDError):
        DensityOp(mat)


def test_fidelity_extremes(rng):
    rho = random_density(3, rng)
    assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-9)
    assert fidelity(KET0, KET1) == pytest.approx(0.0, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_fidelity_pure_states_inner_product(seed):
    gen = np.random.default_rng(seed)
    phi = haar_unitary(3, gen)[:, 0]
    psi = haar_unitary(3, gen)[:, 0]
    f = fidelity(
        DensityOp(np.outer(phi, phi.conj())), DensityOp(np.outer(psi, psi.conj()))
    )
    assert f == pytest.approx(abs(np.vdot(phi, psi)), abs=TOL_SPECTRAL)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3, 4]))
def test_fidelity_symmetric_and_fuchs_van_de_graaf(seed, dim):
    gen = np.random.default_rng(seed)
    rho, xi = random_density(dim, gen), random_density(dim, gen)
    f = fidelity(rho, xi)
    assert f == pytest.approx(fidelity(xi, rho), abs=TOL_SPECTRAL)
    tn = trace_norm(rho.mat - xi.mat)
    assert 1.0 - tn / 2.0 <= f + TOL_SPECTRAL
    assert f <= np.sqrt(max(0.0, 1.0 - tn**2 / 4.0)) + TOL_SPECTRAL


# --- uhlmann -----------------------------------------------------------------

def _random_state(lay, gen):
    amps = gen.standard_normal(lay.dim) + 1j * gen.standard_normal(lay.dim)
    return StateVector(lay, amps / np.linalg.norm(amps))


def test_uhlmann_identical_states(rng):
    lay = qubit_pair_layout()
    phi = _random_state(lay, rng)
    _, overlap = uhlmann_unitary(phi, phi, ["R"])
    assert overlap == pytest.approx(1.0, abs=1e-9)


def test_uhlmann_orthogonal_reduced_states():
    lay = qubit_pair_layout()
    phi = StateVector(lay, [1, 0, 0, 0])  # reduced |0><0| on L
    psi = StateVector(lay, [0, 0, 1, 0])  # reduced |1><1| on L
    _, overlap = uhlmann_unitary(phi, psi, ["R"])
    assert overlap == pytest.approx(0.0, abs=1e-9)


def test_uhlmann_rejects_bad_subsets(rng):
    lay = qubit_pair_layout()
    phi = _random_state(lay, rng)
    with pytest.raises(LayoutError):
        uhlmann_unitary(phi, phi, [])
    with pytest.raises(LayoutError):
        uhlmann_unitary(phi, phi, ["L", "R"])


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_uhlmann_attains_fidelity_and_is_unitary(seed):
    gen = np.random.default_rng(seed)
    lay = RegisterLayout((Factor("S", 2, ALICE), Factor("E", 3, BOB)))
    phi, psi = _random_state(lay, gen), _random_state(lay, gen)
    u, overlap = uhlmann_unitary(phi, psi, ["E"])
    assert np.allclose(u.conj().T @ u, np.eye(3), atol=1e-9)
    f = fidelity(
        partial_trace(pure_density(phi), lay, ["S"]),
        partial_trace(pure_density(psi), lay, ["S"]),
    )
    assert overlap == pytest.approx(f, abs=TOL_SPECTRAL)
    assert overlap >= -TOL_SPECTRAL
    # the overlap really is <phi|(I x U)|psi>
    full = embed_operator(u, lay, ["E"])
    direct = np.vdot(phi.amps, full @ psi.amps)
    assert abs(direct - overlap) < 1e-9


def test_uhlmann_noncontiguous_bipartition(rng):
    # b factors straddle a kept factor in layout order
    lay = RegisterLayout((
        Factor("B1", 2, BOB), Factor("K", 2, ALICE), Factor("B2", 2, BOB),
    ))
    phi, psi = _random_state(lay, rng), _random_state(lay, rng)
    u, overlap = uhlmann_unitary(phi, psi, ["B1", "B2"])
    f = fidelity(
        partial_trace(pure_density(phi), lay, ["K"]),
        partial_trace(pure_density(psi), lay, ["K"]),
    )
    assert overlap == pytest.approx(f, abs=TOL_SPECTRAL)
    full = embed_operator(u, lay, ["B1", "B2"])
    assert abs(np.vdot(phi.amps, full @ psi.amps) - overlap) < 1e-9


# --- trace norm is a norm ----------------------------------------------------

@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dim=st.sampled_from([2, 3, 4]))
def test_trace_norm_properties(seed, dim):
    gen = np.random.default_rng(seed)
    a = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    b = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
    assert trace_norm(a) >= 0.0
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + TOL_SPECTRAL
    u, v = haar_unitary(dim, gen), haar_unitary(dim, gen)
    assert trace_norm(u @ a @ v) == pytest.approx(trace_norm(a), abs=TOL_SPECTRAL)


# --- validation of the domain types ------------------------------------------

def test_layout_rejects_duplicates_and_small_dims():
    with pytest.raises(LayoutError):
        RegisterLayout((Factor("A", 2, ALICE), Factor("A", 2, BOB)))
    with pytest.raises(LayoutError):
        Factor("A", 1, ALICE)
    with pytest.raises(LayoutError):
        Factor("A", 2, "Nobody")


def test_state_vector_requires_unit_norm():
    lay = qubit_pair_layout()
    with pytest.raises(ShapeError):
        StateVector(lay, [1, 0, 0, 1])


def test_density_op_validation():
    with pytest.raises(ShapeError):
        DensityOp(np.array([[0.5, 0.1], [0.3, 0.5]]))  # not hermitian
    with pytest.raises(ShapeError):
        DensityOp(np.eye(2))  # trace 2


def test_measurement_validation():
    pos = np.diag([1.0, 0.0]).astype(complex)
    TwoOutcomeMeasurement(pos, np.eye(2) - pos)
    with pytest.raises(ShapeError):
        TwoOutcomeMeasurement(pos, pos)  # does not sum to identity
    with pytest.raises(ShapeError):
        TwoOutcomeMeasurement(0.5 * pos, np.eye(2) - 0.5 * pos)  # not idempotent


def test_haar_unitary_is_unitary_and_deterministic():
    u1 = haar_unitary(4, np.random.default_rng(11))
    u2 = haar_unitary(4, np.random.default_rng(11))
    assert np.allclose(u1, u2)
    assert np.allclose(u1.conj().T @ u1, np.eye(4), atol=1e-12)
