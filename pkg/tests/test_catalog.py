import math

import numpy as np
import pytest

from ameforge.catalog import (
    CATALOG_NAMES,
    UPS52_SIGNS,
    XI62_SIGNS,
    catalog_state,
    clock_matrix,
    displacement_block_matrix,
    displacement_operator,
    hilbert_schmidt_gram,
    magic_square,
    o8_matrix,
    omega_43,
    phi_state,
    shift_matrix,
    tensor_displacement_basis,
    u_p_matrix,
    up_factorization,
    up_power_classification,
    uprime_printed,
)
from ameforge.errors import DomainError, UnsupportedError
from ameforge.multiunitary import is_k_unitary, matrix_from_state, state_from_matrix
from ameforge.state import PureState
from ameforge.uniformity import entanglement_potential, is_ame, is_k_uniform, purity_profile

W = np.exp(2j * np.pi / 3)


def ket_vector(terms, n):
    v = np.zeros(2**n, dtype=complex)
    for k, a in terms.items():
        v[int(k, 2)] += a
    return v


def test_every_entry_loads():
    for name in CATALOG_NAMES:
        entry = catalog_state(name)
        assert entry.name == name


def test_unknown_entry():
    with pytest.raises(DomainError):
        catalog_state("nope")


def test_omega_words_and_amplitudes():
    om = omega_43()
    ws = om.words()
    for w in [(0, 0, 0, 0), (0, 1, 1, 2), (0, 2, 2, 1), (1, 0, 1, 1)]:
        assert w in ws
    assert np.all(om.amplitudes == 1 / 3)
    assert matrix_from_state(om).as_perm() == (0, 5, 7, 4, 6, 2, 8, 1, 3)


def test_phi_examples():
    assert set(phi_state(3).words()) == set(omega_43().words())
    assert phi_state(5).num_parties == 6 and len(phi_state(5).words()) == 25
    st4 = phi_state(4)
    assert np.allclose(st4.amplitudes, 0.25)
    assert is_ame(st4).is_uniform
    with pytest.raises(UnsupportedError):
        phi_state(6)


def test_sign_states_follow_tables():
    ups = catalog_state("ups52").obj
    assert len(ups.words()) == 32
    assert np.array_equal(np.sign(ups.to_vector().real), UPS52_SIGNS)
    xi = catalog_state("xi62").obj
    assert np.array_equal(np.sign(xi.to_vector().real), XI62_SIGNS)
    assert np.allclose(o8_matrix().entries.ravel() * math.sqrt(8), XI62_SIGNS)


def test_logical_state():
    st_ = catalog_state("omega52_logical").obj
    assert len(st_.words()) == 8
    assert is_ame(st_).is_uniform


def test_four_qubit_states_match_printed_forms():
    hs = ket_vector({"0011": 1, "1100": 1, "0101": W, "1010": W, "0110": W**2, "1001": W**2}, 4)
    hd = ket_vector({"0001": 1, "0010": 1, "0100": 1, "1000": 1, "1111": math.sqrt(2)}, 4)
    lv = ket_vector({"0000": 1 + W, "1111": 1 + W, "0011": 1 - W, "1100": 1 - W,
                     "0101": W**2, "0110": W**2, "1001": W**2, "1010": W**2}, 4)
    a, b = 1j / 2 + 1 / math.sqrt(12), 1j / 2 - 1 / math.sqrt(12)
    mv = ket_vector({"0000": a, "1111": a, "0011": b, "1100": b,
                     "0101": 1 / math.sqrt(3), "1010": 1 / math.sqrt(3)}, 4)
    for name, vec in [("HS", hs / math.sqrt(6)), ("HD", hd / math.sqrt(6)),
                      ("L", lv / math.sqrt(12)), ("M", mv / math.sqrt(2))]:
        assert np.abs(catalog_state(name).obj.to_vector() - vec).max() < 1e-15, name


def test_four_qubit_purity_floor():
    for name in ("HS", "HD", "L", "M"):
        st_ = catalog_state(name).obj
        assert all(abs(p - 1 / 3) < 1e-12 for p in purity_profile(st_).values())
        assert is_k_uniform(st_, 1).is_uniform
        assert not is_ame(st_).is_uniform
    assert entanglement_potential(catalog_state("HD").obj) == pytest.approx(1 / 3, abs=1e-12)


def test_matrix_entries():
    assert np.allclose(o8_matrix().entries, o8_matrix().entries.T)
    assert is_k_unitary(catalog_state("oa16_perm").obj).is_k_unitary
    assert catalog_state("O8").hadamard


def test_displacement_basics():
    assert np.allclose(displacement_operator(3, 0, 0), np.eye(3))
    x, z = shift_matrix(5), clock_matrix(5)
    w5 = np.exp(2j * np.pi / 5)
    # Weyl commutation Z X = omega X Z
    assert np.allclose(z @ x, w5 * x @ z)
    with pytest.raises(UnsupportedError):
        displacement_operator(2, 1, 1)
    with pytest.raises(UnsupportedError):
        displacement_block_matrix(9)


def test_displacement_tau_for_odd_d():
    # -exp(i pi/d) equals omega^((d+1)/2)
    for d in (3, 5, 7):
        tau = displacement_operator(d, 1, 1) @ np.linalg.inv(shift_matrix(d) @ clock_matrix(d))
        assert np.allclose(tau, np.exp(2j * np.pi * (d + 1) / 2 / d) * np.eye(d))


@pytest.mark.parametrize("d", [3, 5, 7])
def test_displacement_block_matrix(d):
    m = displacement_block_matrix(d)
    assert is_k_unitary(m).is_k_unitary
    assert is_ame(state_from_matrix(m)).is_uniform
    ops = [displacement_operator(d, j, k) for j in range(d) for k in range(d)]
    assert np.allclose(hilbert_schmidt_gram(ops), d * np.eye(d * d))


def test_printed_block_matrix_matches():
    assert np.abs(uprime_printed().entries - displacement_block_matrix(3).entries).max() < 1e-12


def test_tensor_basis():
    one = tensor_displacement_basis(1, 3)
    assert len(one) == 9
    assert np.allclose(hilbert_schmidt_gram(one), 3 * np.eye(9))
    two = tensor_displacement_basis(2, 3)
    assert len(two) == 81
    assert np.allclose(hilbert_schmidt_gram(two), 9 * np.eye(81))
    assert all(abs(np.trace(op)) < 1e-12 for op in one[1:])
    with pytest.raises(DomainError):
        tensor_displacement_basis(3, 5)


def test_up_algebra():
    cls = up_power_classification()
    assert [m for m, v in cls.items() if v["hadamard"]] == [1, 2, 3, 5, 6, 7]
    assert cls[8]["identity_deviation"] < 1e-10
    assert cls[4]["identity_deviation"] > 0.5
    _, dev = up_factorization()
    assert dev < 1e-10
    assert is_k_unitary(u_p_matrix()).is_k_unitary


def test_magic_square():
    g = magic_square(omega_43())
    assert g.tolist() == [[0, 5, 7], [4, 6, 2], [8, 1, 3]]
    assert g.sum(axis=1).tolist() == [12, 12, 12]
    assert g.sum(axis=0).tolist() == [12, 12, 12]
    with pytest.raises(DomainError):
        magic_square(phi_state(5))
    with pytest.raises(DomainError):
        magic_square(PureState.from_terms(4, 3, {(0, 0, 0, 0): 1.0}))
