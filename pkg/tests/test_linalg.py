import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entangle_hierarchy.config import Tolerances
from entangle_hierarchy.errors import DimensionError, InvalidStateError, NumericError, UsageError
from entangle_hierarchy.linalg import (PureVector, QuantumState, hermitian_eig, hermitian_spectrum,
                                       majorizes, numerical_rank, partial_trace, partial_transpose,
                                       permute_subsystems, purify, tensor_product,
                                       von_neumann_entropy)
from entangle_hierarchy.states import (antisymmetric_tripartite, bell, ghz3, horodecki_locking,
                                       locking_purification, max_entangled, random_density, random_pure, reduce_all)
from oracles import locking_loop, pt_loop, trace_first_loop, trace_last_loop

seeds = st.integers(min_value=0, max_value=2**64 - 1)


def proj(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


# -- tensor_product -------------------------------------------------------------

def test_tensor_identity():
    assert np.array_equal(tensor_product(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_basis_projectors():
    out = tensor_product(np.diag([1, 0]), np.diag([0, 1]))
    assert np.array_equal(out, np.diag([0, 1, 0, 0]))


def test_tensor_with_bell_projector_by_hand():
    out = tensor_product(np.diag([1, 0]), bell().matrix)
    expected = np.zeros((8, 8))
    # |0>|00> = index 0, |0>|11> = index 3; all entries 1/2
    for i in (0, 3):
        for j in (0, 3):
            expected[i, j] = 0.5
    np.testing.assert_allclose(out, expected, atol=1e-15)
    assert numerical_rank(out) == 1
    assert np.trace(out).real == pytest.approx(1.0)


def test_tensor_dimension_cap():
    with pytest.raises(DimensionError):
        tensor_product(np.eye(128), np.eye(64))


# -- states -----------------------------------------------------------------------

def test_state_validation():
    with pytest.raises(InvalidStateError):
        QuantumState(np.diag([0.5, 0.6]))
    with pytest.raises(InvalidStateError):
        QuantumState(np.diag([1.5, -0.5]))
    with pytest.raises(InvalidStateError):
        QuantumState(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(DimensionError):
        QuantumState(np.eye(4) / 4, (2, 3))
    with pytest.raises(InvalidStateError):
        PureVector([1, 1], (2,))


def test_state_is_immutable():
    rho = bell()
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 0


# -- partial trace ----------------------------------------------------------------

def test_partial_trace_product():
    a = random_density(2, 2, 1).matrix
    b = random_density(3, 2, 2).matrix
    rho = QuantumState(np.kron(a, b), (2, 3))
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, a, atol=1e-14)
    np.testing.assert_allclose(partial_trace(rho, [1]).matrix, b, atol=1e-14)


def test_partial_trace_ghz_against_basis_sum():
    rho = ghz3().density()
    expected = trace_last_loop(rho.matrix, 4, 2)
    np.testing.assert_allclose(expected, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
    np.testing.assert_allclose(partial_trace(rho, [0, 1]).matrix, expected, atol=1e-15)


def test_partial_trace_max_entangled_marginal():
    rho = max_entangled(3).density()
    np.testing.assert_allclose(partial_trace(rho, [0]).matrix, np.eye(3) / 3, atol=1e-15)


def test_partial_trace_middle_subsystem():
    psi = random_pure((2, 3, 2), 11).density()
    m = psi.matrix
    # trace B out of (A, B, C): move B last, then sum over it
    moved = permute_subsystems(psi, (0, 2, 1)).matrix
    expected = trace_last_loop(moved, 4, 3)
    np.testing.assert_allclose(partial_trace(psi, [0, 2]).matrix, expected, atol=1e-14)
    np.testing.assert_allclose(partial_trace(psi, [1, 2]).matrix, trace_first_loop(m, 2, 6),
                               atol=1e-14)


@pytest.mark.parametrize("keep", [[], [2], [1, 0], [0, 0]])
def test_partial_trace_usage_errors(keep):
    with pytest.raises(UsageError):
        partial_trace(bell(), keep)


# -- partial transpose ------------------------------------------------------------

def test_partial_transpose_product_stays_psd():
    a, b = random_density(2, 2, 3).matrix, random_density(3, 3, 4).matrix
    rho = QuantumState(np.kron(a, b), (2, 3))
    spec = hermitian_spectrum(partial_transpose(rho, 1))
    np.testing.assert_allclose(np.sort(spec), np.sort(hermitian_spectrum(rho)), atol=1e-14)
    assert spec[-1] >= -1e-14


def test_partial_transpose_bell_matches_loop_oracle():
    m = bell().matrix
    oracle = pt_loop(m, 2, 2)
    np.testing.assert_array_equal(partial_transpose(bell(), 1), oracle)
    assert np.linalg.eigvalsh(oracle)[0] == pytest.approx(-0.5, abs=1e-12)


def test_partial_transpose_antisymmetric_marginal():
    ab = reduce_all(antisymmetric_tripartite()).ab
    lmin = hermitian_spectrum(partial_transpose(ab, 1))[-1]
    assert lmin == pytest.approx(-1 / 3, abs=1e-9)


def test_partial_transpose_errors():
    with pytest.raises(UsageError):
        partial_transpose(bell(), 2)
    with pytest.raises(UsageError):
        partial_transpose(QuantumState(np.eye(2) / 2))


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 3), (4, 4), (2, 2, 2)]), st.data())
def test_partial_transpose_involution(seed, dims, data):
    n = int(np.prod(dims))
    rho = random_density(n, data.draw(st.integers(1, n)), seed, dims)
    sys = data.draw(st.integers(0, len(dims) - 1))
    once = partial_transpose(rho, sys)
    twice = partial_transpose(once, sys, dims)
    assert np.array_equal(twice, rho.matrix)


def test_trace_and_hermiticity_preserved_1000_states():
    shapes = [(2, 2), (2, 3), (3, 2), (3, 3), (2, 4), (4, 4)]
    for i in range(1000):
        dims = shapes[i % len(shapes)]
        n = dims[0] * dims[1]
        rho = random_density(n, 1 + i % n, i, dims)
        for keep in ([0], [1]):
            red = partial_trace(rho, keep).matrix
            assert abs(np.trace(red) - 1) < 1e-12
            assert np.max(np.abs(red - red.conj().T)) < 1e-14
        pt = partial_transpose(rho, i % 2)
        assert abs(np.trace(pt) - 1) < 1e-12
        assert np.max(np.abs(pt - pt.conj().T)) < 1e-14


# -- spectra ----------------------------------------------------------------------

def test_spectrum_maximally_mixed():
    np.testing.assert_allclose(hermitian_spectrum(np.eye(4) / 4), [0.25] * 4, atol=1e-15)


def test_spectrum_antisymmetric_marginal():
    spec = hermitian_spectrum(reduce_all(antisymmetric_tripartite()).ab)
    np.testing.assert_allclose(spec[:3], [1 / 3] * 3, atol=1e-9)
    np.testing.assert_allclose(spec[3:], 0, atol=1e-9)


def test_spectrum_locking_against_loop_construction():
    oracle = np.linalg.eigvalsh(locking_loop(2))[::-1]
    spec = hermitian_spectrum(horodecki_locking(2))
    np.testing.assert_allclose(spec, oracle, atol=1e-12)
    nonzero = spec[spec > 1e-9]
    np.testing.assert_allclose(nonzero, [0.5, 0.125, 0.125, 0.125, 0.125], atol=1e-12)


def test_spectrum_rejects_non_hermitian():
    with pytest.raises(NumericError) as info:
        hermitian_spectrum(np.array([[0, 1], [0, 0]]))
    assert info.value.asymmetry == pytest.approx(1.0)


@given(seeds, st.integers(2, 12))
def test_reconstruction_residual(seed, n):
    m = random_density(n, n, seed).matrix
    w, v = hermitian_eig(m)
    assert np.all(np.diff(w) <= 1e-15)
    assert np.linalg.norm(m - v @ np.diag(w) @ v.conj().T) <= 1e-8 * np.linalg.norm(m)


# -- entropy ------------------------------------------------------------------------

def test_entropy_pure_and_mixed():
    assert von_neumann_entropy(bell()) == pytest.approx(0.0, abs=1e-9)
    for d in (2, 3, 5):
        assert von_neumann_entropy(QuantumState(np.eye(d) / d)) == pytest.approx(np.log2(d), abs=1e-12)


def test_entropy_locking():
    assert von_neumann_entropy(horodecki_locking(2)) == pytest.approx(2.0, abs=1e-9)


@given(seeds, st.integers(2, 9))
def test_entropy_bounds(seed, n):
    rho = random_density(n, 1 + seed % n, seed)
    s = von_neumann_entropy(rho)
    assert -1e-12 <= s <= np.log2(n) + 1e-12


# -- majorization -------------------------------------------------------------------

def test_majorization_basics():
    p = [0.5, 0.3, 0.2]
    assert majorizes(p, p)
    assert majorizes([1, 0], [0.5, 0.5])
    res = majorizes([0.5, 0.5], [1, 0])
    assert not res and res.violated_prefix == 1


def test_majorization_pads_with_zeros():
    assert majorizes([1.0], [0.5, 0.5])
    assert not majorizes([0.25] * 4, [0.5, 0.5])


def test_majorization_locking_one_sided():
    rho = horodecki_locking(2)
    spec_ac = hermitian_spectrum(rho)
    spec_a = hermitian_spectrum(partial_trace(rho, [0]))
    spec_c = hermitian_spectrum(partial_trace(rho, [1]))
    assert not majorizes(spec_a, spec_ac)
    assert majorizes(spec_c, spec_ac)


def _dirichlet(seed, n):
    return np.random.default_rng(seed).dirichlet(np.ones(n))


@given(seeds, seeds, seeds, st.integers(2, 5))
def test_majorization_preorder(s1, s2, s3, n):
    p, q, r = _dirichlet(s1, n), _dirichlet(s2, n), _dirichlet(s3, n)
    assert majorizes(p, p)
    if majorizes(p, q) and majorizes(q, r):
        assert majorizes(p, r)


def test_majorization_transitive_on_chain():
    # explicit chain built by T-transforms, so both premises hold
    p = np.array([0.7, 0.2, 0.1])
    q = np.array([0.6, 0.3, 0.1])
    r = np.array([0.5, 0.3, 0.2])
    assert majorizes(p, q) and majorizes(q, r) and majorizes(p, r)


# -- rank ---------------------------------------------------------------------------

def test_rank_examples():
    assert numerical_rank(np.eye(3) / 3) == 3
    assert numerical_rank(np.zeros((3, 3))) == 0
    m = reduce_all(locking_purification(2))
    assert numerical_rank(m.b) == 5
    assert numerical_rank(m.ab) == 2


def test_majorization_implies_rank_order_on_samples():
    for seed in range(300):
        rho = random_density(6, 1 + seed % 6, seed, (2, 3))
        a = partial_trace(rho, [0])
        if majorizes(hermitian_spectrum(a), hermitian_spectrum(rho)):
            assert numerical_rank(a) <= numerical_rank(rho)


# -- purification -----------------------------------------------------------------------

def test_purify_pure_state():
    psi = random_pure((2, 2), 5)
    out = purify(psi.density())
    assert out.dims == (2, 2, 1)
    overlap = abs(np.vdot(out.amplitudes, psi.amplitudes))
    assert overlap == pytest.approx(1.0, abs=1e-12)


def test_purify_maximally_mixed_qubit():
    out = purify(QuantumState(np.eye(2) / 2))
    assert out.dims == (2, 2)
    np.testing.assert_allclose(partial_trace(out.density(), [0]).matrix, np.eye(2) / 2, atol=1e-15)
    assert von_neumann_entropy(partial_trace(out.density(), [1])) == pytest.approx(1.0)


def test_purify_locking_round_trip():
    rho = horodecki_locking(2)
    psi = purify(rho)
    assert psi.amplitudes.size == 40 and psi.dims == (4, 2, 5)
    back = partial_trace(psi.density(), [0, 1]).matrix
    assert np.max(np.abs(back - rho.matrix)) < 1e-9


def test_purify_phase_convention_is_deterministic():
    rho = random_density(4, 3, 9)
    a, b = purify(rho), purify(rho)
    assert np.array_equal(a.amplitudes, b.amplitudes)


@given(seeds, st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_entropy_invariant_under_purification_round_trip(seed, dims):
    n = dims[0] * dims[1]
    rho = random_density(n, 1 + seed % n, seed, dims)
    psi = purify(rho)
    back = partial_trace(psi.density(), [0, 1])
    assert von_neumann_entropy(back) == pytest.approx(von_neumann_entropy(rho), abs=1e-9)
    # ancilla carries the same entropy
    anc = partial_trace(psi.density(), [2])
    assert von_neumann_entropy(anc) == pytest.approx(von_neumann_entropy(rho), abs=1e-9)


@given(seeds, st.sampled_from([(2, 2, 2), (2, 3, 2), (3, 3, 3), (2, 2, 4)]))
def test_schmidt_correspondence(seed, dims):
    psi = random_pure(dims, seed)
    m = reduce_all(psi)
    for x, y in ((m.ab, m.c), (m.ac, m.b), (m.bc, m.a)):
        sx, sy = hermitian_spectrum(x), hermitian_spectrum(y)
        n = max(sx.size, sy.size)
        sx, sy = np.pad(sx, (0, n - sx.size)), np.pad(sy, (0, n - sy.size))
        np.testing.assert_allclose(sx, sy, atol=1e-8)


def test_tolerances_override():
    tol = Tolerances().override(psd=1e-6)
    assert tol.psd == 1e-6 and tol.herm == 1e-9
    with pytest.raises(KeyError):
        Tolerances().override(bogus=1.0)
