import numpy as np
import pytest
import scipy.linalg

from coherence_game import fock
from coherence_game.errors import ConfigurationError, UnsupportedOccupancyError, ValidationError
from coherence_game.fock import AM, AS, BM, BS, FockBasisElement, StateVector, Statistics

BOTH = list(Statistics)


def random_state(rng, mode_count=4, with_loss=False):
    amps = {}
    for occ in fock.enumerate_occupancies(mode_count):
        amps[FockBasisElement(occ)] = complex(rng.normal(), rng.normal())
    st = StateVector(mode_count, amps).normalize()
    if with_loss:
        for mode in range(mode_count):
            if rng.random() < 0.5:
                st = fock.apply_blocker(st, mode)
    return st


def basis_state(occ):
    return StateVector(len(occ), {FockBasisElement(tuple(occ)): 1.0})


# make_vacuum ---------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 4, 8])
def test_vacuum(m):
    vac = fock.make_vacuum(m)
    assert dict(vac.amplitudes) == {FockBasisElement((0,) * m): 1.0}


@pytest.mark.parametrize("m", [0, 9, -1])
def test_vacuum_out_of_range(m):
    with pytest.raises(ConfigurationError):
        fock.make_vacuum(m)


# apply_creation ------------------------------------------------------------


def test_single_creation_has_no_sign():
    for stats in BOTH:
        st = fock.apply_creation(fock.make_vacuum(4), AS, stats)
        assert st.amplitude((1, 0, 0, 0)) == 1


@pytest.mark.parametrize("stats,sign", [(Statistics.BOSON, 1), (Statistics.FERMION, -1)])
def test_source_b_ancilla_a_sign(stats, sign):
    # b_S^+ a_M^+ |vac>: a_M^+ acts first
    st = fock.apply_creation(fock.apply_creation(fock.make_vacuum(4), AM, stats), BS, stats)
    assert st.amplitude((0, 1, 1, 0)) == sign
    assert len(st) == 1


def test_pauli_exclusion_drops_component():
    st = fock.apply_creation(basis_state((1, 0, 0, 0)), AS, Statistics.FERMION)
    assert st.is_empty()
    assert not st.normalized


def test_bosonic_double_occupancy_rejected():
    with pytest.raises(UnsupportedOccupancyError):
        fock.apply_creation(basis_state((1, 0, 0, 0)), AS, Statistics.BOSON)


def test_creation_mode_out_of_range():
    with pytest.raises(ConfigurationError):
        fock.apply_creation(fock.make_vacuum(2), 2, Statistics.BOSON)


@pytest.mark.parametrize("i,j", [(i, j) for i in range(4) for j in range(4) if i != j])
def test_exchange_statistics_on_full_basis(i, j):
    for occ in fock.enumerate_occupancies(4):
        if occ[i] or occ[j]:
            continue
        st = basis_state(occ)
        ij = fock.apply_creation(fock.apply_creation(st, i, Statistics.FERMION), j, Statistics.FERMION)
        ji = fock.apply_creation(fock.apply_creation(st, j, Statistics.FERMION), i, Statistics.FERMION)
        assert dict(ij.amplitudes) == dict((-1 * ji).amplitudes)
        ij_b = fock.apply_creation(fock.apply_creation(st, i, Statistics.BOSON), j, Statistics.BOSON)
        ji_b = fock.apply_creation(fock.apply_creation(st, j, Statistics.BOSON), i, Statistics.BOSON)
        assert dict(ij_b.amplitudes) == dict(ji_b.amplitudes)


# apply_blocker -------------------------------------------------------------


def test_blocker_absorbs_particle():
    st = fock.apply_blocker(basis_state((1, 0, 0, 0)), AS)
    ((key, amp),) = list(st)
    assert key.occupancy == (0, 0, 0, 0)
    assert key.absorbed == 1
    assert amp == 1


def test_blocker_on_superposition():
    sup = StateVector(4, {FockBasisElement((1, 0, 0, 0)): 1 / np.sqrt(2), FockBasisElement((0, 0, 1, 0)): 1 / np.sqrt(2)})
    st = fock.apply_blocker(sup, AS)
    got = {(k.occupancy, k.absorbed): a for k, a in st}
    assert got == pytest.approx({((0, 0, 0, 0), 1): 1 / np.sqrt(2), ((0, 0, 1, 0), 0): 1 / np.sqrt(2)})


def test_blocker_idempotent_on_occupancy_marginal():
    rng = np.random.default_rng(11)
    for _ in range(100):
        st = random_state(rng)
        mode = int(rng.integers(0, 4))
        once = fock.apply_blocker(st, mode)
        twice = fock.apply_blocker(once, mode)
        assert dict(once.amplitudes) == dict(twice.amplitudes)
        assert once.occupancy_probabilities() == twice.occupancy_probabilities()


def test_blocker_preserves_norm_and_particle_number():
    rng = np.random.default_rng(12)
    for _ in range(50):
        st = random_state(rng, with_loss=True)
        for mode in range(4):
            out = fock.apply_blocker(st, mode)
            assert out.norm() ** 2 == pytest.approx(st.norm() ** 2, abs=1e-15)
            numbers_in = sorted(k.particle_number for k, _ in st)
            numbers_out = sorted(k.particle_number for k, _ in out)
            assert numbers_in == numbers_out


def test_loss_from_different_blockers_stays_orthogonal():
    # particle absorbed at AS vs at BS must not interfere
    sup = StateVector(4, {FockBasisElement((1, 1, 0, 0)): 0.5 ** 0.5, FockBasisElement((0, 1, 1, 0)): -(0.5 ** 0.5)})
    out = fock.apply_blocker(fock.apply_blocker(sup, AS), BS)
    assert out.norm() == pytest.approx(1.0, abs=1e-15)
    assert len(out) == 2


def test_blocker_refuses_to_merge_refilled_branches():
    st = StateVector(4, {FockBasisElement((1, 0, 0, 0)): 0.5 ** 0.5, FockBasisElement((0, 1, 0, 0)): 0.5 ** 0.5})
    st = fock.apply_blocker(st, AS)
    swap = fock.lift_su2(np.array([[0, 1], [1, 0]]), (AS, AM))
    with pytest.raises(UnsupportedOccupancyError):
        fock.apply_blocker(swap(st), AS)


# lift_su2 --------------------------------------------------------------------


def jordan_wigner_annihilators(m):
    """Dense fermionic annihilation matrices on the 2**m occupancy basis."""
    basis = fock.enumerate_occupancies(m)
    index = {occ: i for i, occ in enumerate(basis)}
    ops = []
    for mode in range(m):
        c = np.zeros((len(basis), len(basis)))
        for occ in basis:
            if occ[mode]:
                new = list(occ)
                new[mode] = 0
                c[index[tuple(new)], index[occ]] = (-1) ** sum(occ[:mode])
        ops.append(c)
    return basis, index, ops


def state_to_vec(state, index):
    v = np.zeros(len(index), dtype=complex)
    for key, amp in state:
        v[index[key.occupancy]] += amp
    return v


def random_unitary(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


@pytest.mark.parametrize("pair", [(0, 1), (2, 3), (0, 2), (1, 3), (3, 0)])
def test_lift_matches_hamiltonian_exponential_fermions(pair):
    rng = np.random.default_rng(10 * pair[0] + pair[1])
    basis, index, c = jordan_wigner_annihilators(4)
    u = random_unitary(rng)
    h = -1j * scipy.linalg.logm(u)
    p, q = pair
    modes = (p, q)
    H = sum(h[i, j] * c[modes[i]].T @ c[modes[j]] for i in range(2) for j in range(2))
    U_ref = scipy.linalg.expm(1j * H)
    lifted = fock.lift_su2(u, pair, Statistics.FERMION)
    for occ in basis:
        got = state_to_vec(lifted(basis_state(occ)), index)
        np.testing.assert_allclose(got, U_ref[:, index[occ]], atol=1e-10)


@pytest.mark.parametrize("stats", BOTH)
def test_lift_single_particle_block_is_u(stats):
    theta = 0.37
    u = scipy.linalg.expm(1j * theta * np.array([[0, -1j], [1j, 0]]))
    lifted = fock.lift_su2(u, (AS, AM), stats)
    cols = [lifted(basis_state((1, 0, 0, 1))), lifted(basis_state((0, 1, 0, 1)))]
    block = np.array([[c.amplitude((1, 0, 0, 1)), c.amplitude((0, 1, 0, 1))] for c in cols]).T
    np.testing.assert_allclose(block, u, atol=1e-12)


def test_lift_identity():
    lifted = fock.lift_su2(np.eye(2), (AS, BS))
    for occ in fock.enumerate_occupancies(4):
        assert dict(lifted(basis_state(occ)).amplitudes) == dict(basis_state(occ).amplitudes)


def test_lift_rejects_non_unitary():
    with pytest.raises(ValidationError):
        fock.lift_su2(np.array([[1, 1], [0, 1]]), (0, 1))
    with pytest.raises(ValidationError):
        fock.lift_su2(np.eye(2), (1, 1))


@pytest.mark.parametrize("stats", BOTH)
def test_lift_preserves_norm_and_number(stats):
    rng = np.random.default_rng(5)
    for _ in range(100):
        st = random_state(rng, with_loss=True)
        u = random_unitary(rng)
        pair = tuple(int(v) for v in rng.choice(4, size=2, replace=False))
        out = fock.lift_su2(u, pair, stats)(st)
        assert out.norm() == pytest.approx(st.norm(), abs=1e-12)
        weight_in, weight_out = {}, {}
        for k, a in st:
            weight_in[k.particle_number] = weight_in.get(k.particle_number, 0) + abs(a) ** 2
        for k, a in out:
            weight_out[k.particle_number] = weight_out.get(k.particle_number, 0) + abs(a) ** 2
        assert weight_in.keys() == weight_out.keys()
        for n in weight_in:
            assert weight_out[n] == pytest.approx(weight_in[n], abs=1e-12)


def test_lift_is_homomorphism_on_single_particle_block():
    rng = np.random.default_rng(9)
    for _ in range(20):
        u, v = random_unitary(rng), random_unitary(rng)
        for occ in ((1, 0, 1, 0), (0, 1, 0, 0)):
            st = basis_state(occ)
            lhs = fock.lift_su2(u @ v, (AS, AM))(st)
            rhs = fock.lift_su2(u, (AS, AM))(fock.lift_su2(v, (AS, AM))(st))
            for key in set(lhs.amplitudes) | set(rhs.amplitudes):
                assert abs(lhs.amplitudes.get(key, 0) - rhs.amplitudes.get(key, 0)) < 1e-10


# occupancy_sector ------------------------------------------------------------


def test_sector_of_vacuum():
    prob, st = fock.occupancy_sector(fock.make_vacuum(4), lambda occ: sum(occ) == 0)
    assert prob == 1.0
    assert dict(st.amplitudes) == dict(fock.make_vacuum(4).amplitudes)


def test_sector_zero_probability_is_empty():
    prob, st = fock.occupancy_sector(fock.make_vacuum(4), lambda occ: sum(occ) == 2)
    assert prob == 0.0 and st.is_empty()


@pytest.mark.parametrize("stats", BOTH)
def test_sector_probabilities_of_joint_state(stats):
    from coherence_game.scheme_one import prepare_joint_state

    st = prepare_joint_state(stats)
    p_split, _ = fock.occupancy_sector(st, lambda o: o[AS] + o[AM] == 1 and o[BS] + o[BM] == 1)
    p_alice, _ = fock.occupancy_sector(st, lambda o: o[AS] + o[AM] == 2)
    assert p_split == pytest.approx(0.5, abs=1e-12)
    assert p_alice == pytest.approx(0.25, abs=1e-12)


def test_sector_partition_sums_to_one():
    rng = np.random.default_rng(3)
    for _ in range(50):
        st = fock.apply_blocker(random_state(rng), int(rng.integers(0, 4)))
        total = sum(fock.occupancy_sector(st, lambda o, n=n: sum(o) == n)[0] for n in range(5))
        assert total == pytest.approx(1.0, abs=1e-12)


def test_state_vector_rejects_wrong_width():
    with pytest.raises(ValidationError):
        StateVector(3, {FockBasisElement((0, 0)): 1})


def test_states_are_immutable():
    vac = fock.make_vacuum(2)
    with pytest.raises(TypeError):
        vac.amplitudes[FockBasisElement((1, 0))] = 1
