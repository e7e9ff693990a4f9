import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entangle_hierarchy.errors import UsageError
from entangle_hierarchy.linalg import (hermitian_spectrum, numerical_rank, partial_trace,
                                       partial_transpose, von_neumann_entropy)
from entangle_hierarchy.states import (BUILTIN_NAMES, CertificateKind, StateCertificate,
                                       antisymmetric_tripartite, builtin, derive_seed, ghz3,
                                       horodecki_locking, local_unitary_orbit, locking_purification,
                                       max_entangled, random_density, random_pure, random_separable,
                                       reduce_all, tiles_bound_entangled, tiles_upb)
from oracles import locking_loop

seeds = st.integers(min_value=0, max_value=2**63)


def test_max_entangled_marginals():
    for d in (2, 3, 4):
        rho = max_entangled(d).density()
        np.testing.assert_allclose(partial_trace(rho, [1]).matrix, np.eye(d) / d, atol=1e-15)


def test_ghz_marginals_and_certificates():
    psi = ghz3()
    m = reduce_all(psi)
    for cut in ("AB", "AC", "BC"):
        rho = m.cut(cut)
        np.testing.assert_allclose(rho.matrix, np.diag([0.5, 0, 0, 0.5]), atol=1e-15)
        assert rho.certificate.validate(rho) <= 1e-12


def test_locking_matches_loop_construction():
    for d in (2, 3):
        np.testing.assert_allclose(horodecki_locking(d).matrix, locking_loop(d), atol=1e-15)
        assert horodecki_locking(d).dims == (2 * d, d)


def test_locking_purification_marginal():
    for d in (2, 3):
        m = reduce_all(locking_purification(d))
        np.testing.assert_allclose(m.ac.matrix, horodecki_locking(d).matrix, atol=1e-12)
        assert numerical_rank(m.ab) == d
        assert numerical_rank(m.b) == d * d + 1


def test_antisymmetric_state():
    psi = antisymmetric_tripartite()
    v = psi.amplitudes.reshape(3, 3, 3)
    # totally antisymmetric under every transposition
    np.testing.assert_allclose(v, -v.transpose(1, 0, 2), atol=1e-15)
    np.testing.assert_allclose(v, -v.transpose(0, 2, 1), atol=1e-15)
    m = reduce_all(psi)
    np.testing.assert_allclose(m.ab.matrix, m.ac.matrix, atol=1e-12)
    np.testing.assert_allclose(m.a.matrix, np.eye(3) / 3, atol=1e-15)


def test_tiles_upb():
    vecs = tiles_upb()
    assert len(vecs) == 5
    gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    np.testing.assert_allclose(gram, np.eye(5), atol=1e-12)
    rho = tiles_bound_entangled()
    assert numerical_rank(rho) == 4
    assert hermitian_spectrum(partial_transpose(rho, 1))[-1] > -1e-12
    assert rho.certificate.kind is CertificateKind.KNOWN_ENTANGLED


def test_random_pure_norm_and_determinism():
    a = random_pure((2, 3), 7)
    b = random_pure((2, 3), 7)
    assert np.array_equal(a.amplitudes, b.amplitudes)
    assert np.linalg.norm(a.amplitudes) == pytest.approx(1.0, abs=1e-12)


@given(seeds, st.integers(1, 16))
def test_random_density_rank(seed, rank):
    rho = random_density(16, rank, seed, (4, 4))
    assert numerical_rank(rho) == rank


def test_random_density_rank_bounds():
    with pytest.raises(UsageError):
        random_density(4, 5, 0)
    with pytest.raises(UsageError):
        random_density(4, 0, 0)


@given(seeds, st.integers(1, 8), st.sampled_from([(2, 2), (2, 3), (3, 3)]))
def test_separable_certificate_reconstructs(seed, terms, dims):
    rho = random_separable(*dims, terms, seed)
    assert rho.certificate.validate(rho) <= 1e-12


def test_certificate_validation_rejects_mismatch():
    rho = random_separable(2, 2, 3, 1)
    other = random_separable(2, 2, 3, 2)
    with pytest.raises(ValueError):
        rho.certificate.validate(other)
    bad = StateCertificate(CertificateKind.SEPARABLE_DECOMPOSITION,
                           tuple((p * 2, a, b) for p, a, b in rho.certificate.payload))
    with pytest.raises(ValueError):
        bad.validate(rho)


def test_seed_determinism_and_distinctness():
    mats = [random_density(4, 4, derive_seed(0, i)).matrix for i in range(100)]
    again = [random_density(4, 4, derive_seed(0, i)).matrix for i in range(100)]
    assert all(np.array_equal(a, b) for a, b in zip(mats, again))
    keys = {m.tobytes() for m in mats}
    assert len(keys) == 100
    assert len({derive_seed(s, 0) for s in range(100)}) == 100


def test_local_unitary_orbit_preserves_invariants():
    rho = tiles_bound_entangled()
    out = local_unitary_orbit(rho, 3)
    np.testing.assert_allclose(hermitian_spectrum(out), hermitian_spectrum(rho), atol=1e-12)
    assert von_neumann_entropy(partial_trace(out, [0])) == pytest.approx(
        von_neumann_entropy(partial_trace(rho, [0])), abs=1e-9)
    assert out.certificate is rho.certificate
    sep = random_separable(2, 2, 2, 0)
    assert local_unitary_orbit(sep, 1).certificate is None


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_registry(name):
    b = builtin(name)
    assert b.name == name


@pytest.mark.parametrize("name", ["nope", "maxent", "locking:x", "maxent:1"])
def test_builtin_registry_errors(name):
    with pytest.raises(UsageError):
        builtin(name)
