"""Speed caps: spectral limits, superoperator norms, separability bounds,
spin squeezing, curve length, and the entanglement witness."""

import math

import numpy as np
import pytest

from qspeed import bounds, matcore, quantum
from qspeed.bounds import Partition
from qspeed.errors import (DegenerateInputError, InvalidInputError,
                          NumericalConsistencyError)
from qspeed.quantum import ParametricFamily
from qspeed.seeding import generator

SZ = np.diag([1.0, -1.0]).astype(complex)
PLUS = np.array([1.0, 1.0]) / np.sqrt(2.0)


def haar_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_hermitian(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2


def random_density(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return m / np.trace(m).real


def jz(n_qubits):
    return bounds.collective_spin(n_qubits, [0.0, 0.0, 1.0]).operator


def ghz(n_qubits):
    psi = np.zeros(2 ** n_qubits, dtype=complex)
    psi[0] = psi[-1] = 1 / np.sqrt(2.0)
    return psi


# -- collective spin and embedding ------------------------------------


def test_collective_spin_spectrum():
    for n in (1, 2, 3):
        j = bounds.collective_spin(n, [0, 0, 1])
        w = np.linalg.eigvalsh(j.operator)
        assert w[0] == pytest.approx(-n / 2, abs=1e-12)
        assert w[-1] == pytest.approx(n / 2, abs=1e-12)


def test_collective_spin_rejects_bad_direction():
    with pytest.raises(InvalidInputError):
        bounds.collective_spin(2, [0, 0, 2.0])
    with pytest.raises(InvalidInputError):
        bounds.collective_spin(2, [0, 0])


def test_embed_qubit_places_operator():
    op = bounds.embed_qubit(SZ, 1, 2)
    assert np.allclose(op, np.kron(np.eye(2), SZ))
    with pytest.raises(InvalidInputError):
        bounds.embed_qubit(SZ, 2, 2)


# -- spectral limits --------------------------------------------------


def test_heisenberg_limit_values():
    limit = bounds.heisenberg_limit(np.diag([0.0, 1.0, 3.0]))
    assert limit.f1_max == pytest.approx(3.0)
    assert limit.f2_max == pytest.approx(9.0)


def test_heisenberg_limit_saturated_by_extremal_superposition():
    h = np.diag([0.0, 1.0, 3.0]).astype(complex)
    psi = np.array([1.0, 0.0, 1.0]) / np.sqrt(2.0)
    fam = ParametricFamily.unitary(h, psi)
    limit = bounds.heisenberg_limit(h)
    assert quantum.trace_speed(fam, 0.0) == pytest.approx(limit.f1_max,
                                                          abs=1e-9)
    assert quantum.qfi(fam, 0.0) == pytest.approx(limit.f2_max, abs=1e-8)


@pytest.mark.parametrize("seed", range(6))
def test_heisenberg_limit_caps_random_states(seed):
    rng = generator(400, seed)
    h = random_hermitian(rng, 4)
    fam = ParametricFamily.unitary(h, random_density(rng, 4))
    limit = bounds.heisenberg_limit(h)
    assert quantum.trace_speed(fam, 0.0) <= limit.f1_max + 1e-9
    assert quantum.qfi(fam, 0.0) <= limit.f2_max + 1e-8


def test_bhatia_davis_bound_values():
    assert bounds.bhatia_davis_bound(SZ, np.diag([1.0, 0.0])) == \
        pytest.approx(0.0)
    plus = np.outer(PLUS, PLUS)
    assert bounds.bhatia_davis_bound(SZ, plus) == pytest.approx(4.0)


@pytest.mark.parametrize("seed", range(6))
def test_bhatia_davis_tightens_heisenberg(seed):
    rng = generator(401, seed)
    h = random_hermitian(rng, 3)
    rho = random_density(rng, 3)
    bd = bounds.bhatia_davis_bound(h, rho)
    fam = ParametricFamily.unitary(h, rho)
    assert quantum.qfi(fam, 0.0) <= bd + 1e-8
    assert bd <= bounds.heisenberg_limit(h).f2_max + 1e-12


# -- induced superoperator norm ---------------------------------------


def test_superop_norm_commutator_equals_gap():
    op = matcore.commutator_map(np.diag([0.0, 1.0]))
    res = bounds.superop_norm(op, 1.0, restarts=8, seed=0)
    assert res.converged
    assert res.value == pytest.approx(1.0, abs=1e-6)
    # the reported value is attained by the reported state
    attained = matcore.schatten_norm(
        op.apply(np.outer(res.state, res.state.conj())), 1.0)
    assert attained == pytest.approx(res.value, abs=1e-10)


def test_superop_norm_commutator_alpha_two():
    # || -i[H, psi psi^dag] ||_2 = sqrt(2) Delta_psi H, maximized at gap/2
    op = matcore.commutator_map(np.diag([0.0, 1.0]))
    res = bounds.superop_norm(op, 2.0, restarts=8, seed=0)
    assert res.value == pytest.approx(1.0 / np.sqrt(2.0), abs=1e-6)


@pytest.mark.parametrize("seed", range(4))
def test_superop_norm_random_hamiltonian_gap(seed):
    rng = generator(402, seed)
    h = random_hermitian(rng, 3)
    w = np.linalg.eigvalsh(h)
    res = bounds.superop_norm(matcore.commutator_map(h), 1.0,
                              restarts=12, seed=seed)
    assert res.value == pytest.approx(float(w[-1] - w[0]), abs=1e-6)


def test_superop_norm_deterministic():
    op = matcore.commutator_map(np.diag([0.0, 0.3, 1.0]))
    a = bounds.superop_norm(op, 1.0, restarts=6, seed=5)
    b = bounds.superop_norm(op, 1.0, restarts=6, seed=5)
    assert a.value == b.value
    assert np.array_equal(a.state, b.state)


def test_superop_norm_rejects_non_hermiticity_preserving():
    mat = np.eye(4, dtype=complex)
    mat[0, 1] = 1.0  # breaks L[X]^dag = L[X^dag]
    op = matcore.Superoperator.from_matrix(mat)
    with pytest.raises(InvalidInputError):
        bounds.superop_norm(op, 1.0, restarts=2, seed=0)


# -- non-Hermitian speed caps -----------------------------------------


def test_nonhermitian_bound_reduces_to_gap():
    res = bounds.nonhermitian_speed_bound(np.diag([0.0, 1.0]),
                                          np.zeros((2, 2)))
    assert res.f1_bound == pytest.approx(1.0, abs=1e-9)
    assert res.f2_bound == pytest.approx(1.0, abs=1e-9)
    assert res.r_opt == pytest.approx(0.5, abs=1e-6)


def test_nonhermitian_bound_scalar_gamma():
    gamma = 1.0
    res = bounds.nonhermitian_speed_bound(SZ / 2, gamma * np.eye(2))
    assert res.f1_bound == pytest.approx(2 * np.sqrt(gamma ** 2 + 0.25),
                                         abs=1e-9)
    assert res.f2_bound == pytest.approx(4 * (gamma ** 2 + 0.25), abs=1e-8)
    assert res.r_opt == pytest.approx(0.0, abs=1e-6)


def test_nonhermitian_bound_pure_dephasing_uses_full_norm():
    # H = 0: the cap is 2 ||Gamma||_inf, which differs from the largest
    # eigenvalue when Gamma has a large negative branch
    res = bounds.nonhermitian_speed_bound(np.zeros((2, 2)),
                                          np.diag([1.0, -3.0]))
    assert res.f1_bound == pytest.approx(6.0, abs=1e-8)


def test_nonhermitian_bound_commuting_apex_case():
    # one parabola dominates at its apex: min is |g_2| at r = h_2
    res = bounds.nonhermitian_speed_bound(np.diag([1.0, 2.0]),
                                          np.diag([0.5, 3.0]))
    assert res.f1_bound == pytest.approx(6.0, abs=1e-8)
    assert res.r_opt == pytest.approx(2.0, abs=1e-6)


def test_nonhermitian_bound_commuting_crossing_case():
    res = bounds.nonhermitian_speed_bound(np.diag([0.0, 2.0]), np.eye(2))
    assert res.f1_bound == pytest.approx(2 * np.sqrt(2.0), abs=1e-8)
    assert res.r_opt == pytest.approx(1.0, abs=1e-6)


@pytest.mark.parametrize("seed", range(10))
def test_nonhermitian_bound_caps_pure_speeds(seed):
    rng = generator(403, seed)
    dim = 2 + seed % 3
    h = random_hermitian(rng, dim)
    gamma = random_hermitian(rng, dim)
    cap = bounds.nonhermitian_speed_bound(h, gamma)
    psi = haar_state(rng, dim)
    f1 = quantum.nonhermitian_pure_speed(psi, h, gamma, 1.0)
    assert f1 <= cap.f1_bound + 1e-8 * max(1.0, cap.f1_bound)


@pytest.mark.parametrize("seed", range(6))
def test_nonhermitian_bound_caps_superop_norm(seed):
    rng = generator(404, seed)
    h = random_hermitian(rng, 2)
    gamma = random_hermitian(rng, 2)
    op = matcore.Superoperator.from_non_hermitian(h, gamma)
    norm = bounds.superop_norm(op, 1.0, restarts=8, seed=seed)
    cap = bounds.nonhermitian_speed_bound(h, gamma)
    assert norm.value <= cap.f1_bound + 1e-6


# -- separability caps ------------------------------------------------


def test_ksep_bound_arithmetic():
    assert bounds.ksep_bound(4, 1, 1.0) == pytest.approx(2.0)
    assert bounds.ksep_bound(10, 3, 1.0) == pytest.approx(np.sqrt(28.0))
    assert bounds.ksep_bound(9, 1, 1.0) == pytest.approx(3.0)
    assert bounds.ksep_bound(4, 4, 2.0) == pytest.approx(4.0 / np.sqrt(2.0))
    assert bounds.ksep_bound(4, 1, np.inf) == pytest.approx(1.0)


def test_ksep_bound_monotone_in_k():
    vals = [bounds.ksep_bound(6, k, 1.0) for k in range(1, 7)]
    for lo, hi in zip(vals, vals[1:]):
        assert lo <= hi + 1e-12


def test_ksep_bound_rejects_bad_k():
    with pytest.raises(InvalidInputError):
        bounds.ksep_bound(4, 0, 1.0)
    with pytest.raises(InvalidInputError):
        bounds.ksep_bound(4, 5, 1.0)


def bell_partition():
    h0 = bounds.embed_qubit(SZ / 2, 0, 2)
    h1 = bounds.embed_qubit(SZ / 2, 1, 2)
    return Partition(((0,), (1,)), (h0, h1))


def test_partition_validation():
    h0 = bounds.embed_qubit(SZ / 2, 0, 2)
    h1 = bounds.embed_qubit(SZ / 2, 1, 2)
    Partition(((0,), (1,)), (h0, h1))
    with pytest.raises(InvalidInputError):
        Partition(((0,), (0,)), (h0, h1))  # overlap
    with pytest.raises(InvalidInputError):
        Partition(((0,), (2,)), (h0, h1))  # gap in coverage
    with pytest.raises(InvalidInputError):
        Partition(((0,), (1,)), (h0,))  # one Hamiltonian short
    with pytest.raises(InvalidInputError):
        Partition(((0,), (1,)), (h0, SZ / 2))  # mixed dimensions


def test_asep_bound_bell_pair():
    bell = np.outer(ghz(2), ghz(2).conj())
    assert bounds.asep_bound(bell, bell_partition(), 1.0) == \
        pytest.approx(np.sqrt(2.0))
    fam = ParametricFamily.unitary(jz(2), ghz(2))
    assert quantum.trace_speed(fam, 0.0) == pytest.approx(2.0, abs=1e-9)


def test_local_generator_sep_bound_hamiltonian_kind():
    for n in (2, 3, 4):
        maps = [matcore.commutator_map(SZ / 2) for _ in range(n)]
        assert bounds.local_generator_sep_bound(maps) == pytest.approx(
            float(n), abs=1e-9)


def test_local_generator_sep_bound_matches_exact_for_matrix_kind():
    # the same commutator generator submitted as a bare matrix goes
    # through the optimizer and must land on the same value
    h2 = SZ / 2
    exact_map = matcore.commutator_map(h2)
    blind = matcore.Superoperator.from_matrix(exact_map.matrix)
    exact = bounds.local_generator_sep_bound([exact_map, exact_map])
    found = bounds.local_generator_sep_bound([blind, blind], seed=1,
                                             restarts=12)
    assert found == pytest.approx(exact, abs=1e-5)


# -- spin squeezing ---------------------------------------------------


def test_spin_squeezing_css_is_one():
    for n in (2, 3):
        plus_n = PLUS
        for _ in range(n - 1):
            plus_n = np.kron(plus_n, PLUS)
        rho = np.outer(plus_n, plus_n.conj())
        xi = bounds.spin_squeezing_xi(
            rho, n, ([0, 1, 0], [0, 0, 1], [1, 0, 0]), beta=2.0)
        assert xi == pytest.approx(1.0, abs=1e-9)


def test_spin_squeezing_moment_ordering():
    rng = generator(405)
    rho = random_density(rng, 4)
    triad = ([0, 1, 0], [0, 0, 1], [1, 0, 0])
    try:
        xi2 = bounds.spin_squeezing_xi(rho, 2, triad, beta=2.0)
    except DegenerateInputError:
        pytest.skip("random state has vanishing mean spin")
    for beta in (2.5, 3.0, 4.0):
        assert bounds.spin_squeezing_xi(rho, 2, triad, beta=beta) >= \
            xi2 - 1e-9 * max(1.0, xi2)


def test_spin_squeezing_rejects_bad_inputs():
    plus2 = np.kron(PLUS, PLUS)
    rho = np.outer(plus2, plus2.conj())
    with pytest.raises(InvalidInputError):
        bounds.spin_squeezing_xi(rho, 2, ([0, 1, 0], [0, 0, 1], [1, 0, 0]),
                                 beta=1.5)
    with pytest.raises(InvalidInputError):
        bounds.spin_squeezing_xi(rho, 2, ([0, 1, 0], [0, 1, 0], [1, 0, 0]))
    ghz3 = np.outer(ghz(3), ghz(3).conj())
    with pytest.raises(DegenerateInputError):
        bounds.spin_squeezing_xi(ghz3, 3, ([0, 1, 0], [0, 0, 1], [1, 0, 0]))


# -- curve length -----------------------------------------------------


def test_curve_length_constant_speed():
    fam = ParametricFamily.unitary(SZ / 2, PLUS)
    length = bounds.curve_length(fam, 0.0, np.pi, kind="schatten", alpha=2.0)
    assert length == pytest.approx(np.pi / 2.0, abs=1e-8)
    length_b = bounds.curve_length(fam, 0.0, np.pi, kind="bures")
    assert length_b == pytest.approx(np.pi * np.sqrt(1.0 / 8.0), abs=1e-8)


def test_curve_length_interval_rules():
    fam = ParametricFamily.unitary(SZ / 2, PLUS)
    assert bounds.curve_length(fam, 0.3, 0.3) == 0.0
    with pytest.raises(InvalidInputError):
        bounds.curve_length(fam, 1.0, 0.0)


def test_curve_length_additive():
    rng = generator(406)
    fam = ParametricFamily.unitary(random_hermitian(rng, 2),
                                   random_density(rng, 2))
    whole = bounds.curve_length(fam, 0.0, 1.0, kind="trace")
    split = bounds.curve_length(fam, 0.0, 0.37, kind="trace") \
        + bounds.curve_length(fam, 0.37, 1.0, kind="trace")
    assert whole == pytest.approx(split, abs=1e-7)


# -- witness ----------------------------------------------------------


def test_witness_flags_bell_pair():
    fam = ParametricFamily.unitary(jz(2), ghz(2))
    report = bounds.witness(fam, kind="ksep", alpha=1.0, k=1)
    assert report.verdict == "entangled"
    assert report.speed == pytest.approx(2.0, abs=1e-9)
    assert report.bound == pytest.approx(np.sqrt(2.0))


def test_witness_undecided_on_product_state():
    plus2 = np.kron(PLUS, PLUS)
    fam = ParametricFamily.unitary(jz(2), plus2)
    report = bounds.witness(fam, kind="ksep", alpha=1.0, k=1)
    assert report.verdict == "undecided"
    assert report.speed <= report.bound * (1 + 1e-9)


def test_witness_asep_kind():
    part = bell_partition()
    fam = ParametricFamily.unitary(jz(2), ghz(2))
    report = bounds.witness(fam, kind="asep", alpha=1.0, partition=part)
    assert report.verdict == "entangled"
    assert report.bound == pytest.approx(np.sqrt(2.0))
    with pytest.raises(InvalidInputError):
        bounds.witness(fam, kind="asep", alpha=1.0)  # no partition


def test_witness_accepts_state_generator_pairs():
    report = bounds.witness(np.outer(ghz(2), ghz(2).conj()), jz(2),
                            kind="ksep", alpha=1.0)
    assert report.verdict == "entangled"
    with pytest.raises(InvalidInputError):
        bounds.witness(np.outer(ghz(2), ghz(2).conj()), kind="ksep")


def test_witness_rejects_non_qubit_register():
    fam = ParametricFamily.unitary(np.diag([0.0, 1.0, 2.0]),
                                   haar_state(generator(407), 3))
    with pytest.raises(InvalidInputError):
        bounds.witness(fam, kind="ksep")


def test_witness_report_json_shape():
    fam = ParametricFamily.unitary(jz(2), ghz(2))
    js = bounds.witness(fam, kind="ksep", alpha=1.0).to_json()
    assert set(js) == {"speed", "bound", "kind", "alpha", "verdict"}


def test_ghz_speed_values():
    for n in (2, 3, 4):
        fam = ParametricFamily.unitary(jz(n), ghz(n))
        assert quantum.trace_speed(fam, 0.0) == pytest.approx(float(n),
                                                              abs=1e-9)
        assert quantum.qfi(fam, 0.0) == pytest.approx(float(n * n), abs=1e-8)
