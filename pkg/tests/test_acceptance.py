"""End-to-end acceptance checks, one test per criterion, each with its runtime budget."""
import itertools
import math
import time

import numpy as np
import pytest

import oracles
from ameforge.catalog import (
    AME64_WORDS,
    ame64_code,
    catalog_state,
    displacement_block_matrix,
    hadamard_cube,
    magic_square,
    o8_matrix,
    oa16_matrix,
    omega_43,
    omega_code,
    phi_state,
    u_p_matrix,
    up_factorization,
    up_power_classification,
)
from ameforge.circuit import build_ame43_circuit, simulate_circuit, zero_state
from ameforge.codes import (
    Code,
    code_to_state,
    drop_letter,
    existence_bound,
    greedy_mds_search,
    is_mds,
    permute_coordinates,
    rs_code,
    shorten_code,
)
from ameforge.designs import (
    are_mutually_orthogonal,
    hypercube_planes,
    hypercubes_from_code,
    are_mutually_orthogonal_hypercubes,
    is_irredundant_oa,
    is_latin_hypercube,
    is_latin_square,
    is_orthogonal_array,
    mols,
    planes_are_mols,
    sudoku_digit_to_permutation,
    verify_symmetric_sudoku,
)
from ameforge.multiunitary import (
    IndexedMatrix,
    is_complex_hadamard,
    is_k_unitary,
    reorder,
    state_from_matrix,
    undo_reorder,
)
from ameforge.sampling import haar_unitary
from ameforge.search import AnnealConfig, average_page_entropy, minimize_potential
from ameforge.state import apply_local_unitaries, minimize_support_by_hadamards, partial_trace, support
from ameforge.uniformity import entanglement_potential, is_ame, is_k_uniform

S9 = np.array([
    [8, 1, 6, 2, 4, 9, 5, 7, 3],
    [3, 5, 7, 6, 8, 1, 9, 2, 4],
    [4, 9, 2, 7, 3, 5, 1, 6, 8],
    [7, 3, 5, 1, 6, 8, 4, 9, 2],
    [2, 4, 9, 5, 7, 3, 8, 1, 6],
    [6, 8, 1, 9, 2, 4, 3, 5, 7],
    [9, 2, 4, 3, 5, 7, 6, 8, 1],
    [1, 6, 8, 4, 9, 2, 7, 3, 5],
    [5, 7, 3, 8, 1, 6, 2, 4, 9],
])


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert elapsed < self.seconds, f"took {elapsed:.1f} s, budget {self.seconds} s"


def test_criterion_01_ame_verdicts():
    with Budget(5):
        om = omega_43()
        vec = oracles.dense(om)
        for pair in itertools.combinations(range(4), 2):
            rho = partial_trace(om, pair)
            assert np.abs(rho - np.eye(9) / 9).max() <= 1e-10
            assert np.abs(oracles.reduced_tensordot(vec, 4, 3, pair) - np.eye(9) / 9).max() <= 1e-10
        assert is_k_uniform(om, 2, tol=1e-10).is_uniform
        expected = {"ups52": (5, 2), "omega52_logical": (5, 2), "xi62": (6, 2),
                    "ame64": (6, 4), "ame54": (5, 4)}
        for name, (n, d) in expected.items():
            st_ = catalog_state(name).obj
            assert (st_.num_parties, st_.local_dim) == (n, d)
            rep = is_ame(st_, tol=1e-10)
            assert rep.is_uniform and rep.max_deviation <= 1e-10, name


def _matrix_cases():
    return [("O8", o8_matrix(), True), ("H^3", hadamard_cube(), False),
            ("U_P", u_p_matrix(), True), ("oa16", oa16_matrix(), True)] + [
        (f"disp{d}", displacement_block_matrix(d), True) for d in (3, 5, 7)
    ]


def test_criterion_02_multiunitarity():
    with Budget(10):
        for name, m, expected in _matrix_cases():
            rep = is_k_unitary(m, tol=1e-10)
            assert rep.is_k_unitary == expected, name
            # a k-unitary matrix of order d^k is the same thing as an AME(2k, d) state
            assert is_ame(state_from_matrix(m), tol=1e-10).is_uniform == expected, name
            if m.order <= 16:
                assert oracles.is_multi_unitary(m.entries, m.local_dim, m.half_order) == expected
        assert o8_matrix().half_order == 3
        assert is_complex_hadamard(u_p_matrix())


def test_criterion_03_up_algebra():
    cls = up_power_classification(tol=1e-10)
    assert sorted(m for m, v in cls.items() if v["hadamard"]) == [1, 2, 3, 5, 6, 7]
    assert set(cls) == set(range(1, 9))
    u = u_p_matrix().entries
    assert np.abs(np.linalg.matrix_power(u, 8) - np.eye(9)).max() <= 1e-10
    _, dev = up_factorization()
    assert dev <= 1e-10


def test_criterion_04_code_reproduction():
    with Budget(30):
        res = greedy_mds_search(6, 4)
        assert res.success
        assert "\n".join(res.code.strings()) == "\n".join(AME64_WORDS)
        # the generator yields (a, a+b, a+2b, b); moving the last coordinate to slot 1 gives Omega
        rs3 = rs_code(3)
        assert len(rs3) == 9 and is_mds(rs3)
        assert sorted(permute_coordinates(rs3, [0, 3, 1, 2]).words) == sorted(omega_43().words())
        rs7 = rs_code(7)
        assert len(rs7) == 2401
        arr = rs7.array()
        # independent check: the code is linear, so min distance is the min nonzero weight
        weights = np.count_nonzero(arr, axis=1)
        assert weights[weights > 0].min() == 5
        assert rs7.min_distance == 5
        c5 = shorten_code(ame64_code())
        assert (c5.length, len(c5), c5.min_distance) == (5, 16, 4) and is_mds(c5)
        assert all(w[0] == 0 for w in ame64_code().sorted().words[:16])
        for pos in range(5):
            c4 = drop_letter(c5, pos)
            assert (c4.length, len(c4), c4.min_distance) == (4, 16, 3) and is_mds(c4)
            assert c4.min_distance == oracles.min_distance(c4.words)


def test_criterion_05_designs():
    for d in (3, 4, 5, 7, 8, 9):
        squares = mols(d)
        assert len(squares) == d - 1
        assert all(is_latin_square(s) for s in squares)
        assert are_mutually_orthogonal(squares)
    cubes = hypercubes_from_code(ame64_code().words, 4)
    assert len(cubes) == 3 and all(is_latin_hypercube(c) for c in cubes)
    assert are_mutually_orthogonal_hypercubes(cubes)
    planes = hypercube_planes(cubes)
    assert len(planes) == 12 and planes_are_mols(cubes)
    assert all(len(sq) == 3 and are_mutually_orthogonal(sq) for _, _, sq in planes)
    om_rows = omega_code().array()
    assert om_rows.shape == (9, 4)
    assert is_orthogonal_array(om_rows, 4, 3, 2) and is_irredundant_oa(om_rows, 4, 3, 2)
    rows64 = ame64_code().array()
    assert rows64.shape == (64, 6)
    assert is_orthogonal_array(rows64, 6, 4, 3) and is_irredundant_oa(rows64, 6, 4, 3)
    assert all(r.passed for r in verify_symmetric_sudoku(S9))
    for digit in range(1, 10):
        m = sudoku_digit_to_permutation(S9, digit)
        assert is_k_unitary(m).is_k_unitary, digit
        assert oracles.is_multi_unitary(m.entries, 3, 2)


@pytest.mark.slow
def test_criterion_06_four_qubit_floor():
    with Budget(180):
        for name in ("HS", "HD"):
            assert abs(entanglement_potential(catalog_state(name).obj) - 1 / 3) <= 1e-12
        cfg = AnnealConfig()
        assert cfg.restarts == 8
        r42 = minimize_potential(4, 2, cfg)
        assert r42.best_value <= 0.3339
        assert len(r42.restart_values) == 8
        assert min(r42.restart_values) >= 1 / 3 - 1e-6
        assert minimize_potential(4, 3, cfg).best_value <= 0.1121
        assert minimize_potential(5, 2, cfg).best_value <= 0.2510


def test_criterion_07_page_entropy():
    with Budget(60):
        mean, err = average_page_entropy(10, 500, np.random.default_rng(1))
        assert abs(mean - (5 * math.log(2) - 0.5)) <= 0.02
        assert err < 0.01


def test_criterion_08_support_minimization():
    with Budget(10):
        xi, ups = catalog_state("xi62").obj, catalog_state("ups52").obj
        assert support(xi) == 64 and support(ups) == 32
        rep, _ = minimize_support_by_hadamards(xi)
        assert support(rep) == 16
        rep, _ = minimize_support_by_hadamards(ups)
        assert support(rep) == 8


def test_criterion_09_circuit():
    out = simulate_circuit(build_ame43_circuit(), zero_state(4, 3))
    assert abs(out.fidelity(omega_43()) - 1) <= 1e-12
    g = magic_square(omega_43())
    assert g.tolist() == [[0, 5, 7], [4, 6, 2], [8, 1, 3]]
    assert set(g.sum(axis=0)) == {12} and set(g.sum(axis=1)) == {12}


def _random_code(rng, n, d, size):
    idx = rng.choice(d**n, size=size, replace=False)
    words = [tuple(int(x) for x in np.unravel_index(i, (d,) * n)) for i in idx]
    return Code.from_words(words, d)


def test_criterion_10_property_suites():
    rng = np.random.default_rng(2024)
    # local unitaries never change a uniformity verdict
    states = [catalog_state(n).obj for n in ("omega43", "ups52", "HS", "ame54")]
    for trial in range(200):
        st_ = states[trial % len(states)]
        k = 1 if st_.num_parties == 4 and st_.local_dim == 2 else st_.num_parties // 2
        before = is_ame(st_).is_uniform
        us = haar_unitary(st_.local_dim, rng, size=st_.num_parties)
        moved = apply_local_unitaries(st_, dict(enumerate(us)))
        assert is_ame(moved).is_uniform == before
        assert is_k_uniform(moved, k, tol=1e-9).is_uniform
    # a code of d^k words is MDS exactly when its uniform superposition is k-uniform
    catalog_codes = [omega_code(), ame64_code(), rs_code(3), rs_code(5)] + [
        Code.from_words(phi_state(d).words(), d) for d in (4, 5)
    ]
    for code in catalog_codes:
        k = round(math.log(len(code), code.alphabet))
        assert is_mds(code) and is_k_uniform(code_to_state(code), k).is_uniform
    negatives = 0
    for trial in range(100):
        n, d = ((4, 3), (5, 4), (6, 2))[trial % 3]
        code = _random_code(rng, n, d, d ** (n // 2))
        mds = is_mds(code)
        assert mds == is_ame(code_to_state(code)).is_uniform
        negatives += not mds
    assert negatives >= 95
    # the existence bound rules out binary minimal-support AME states
    for n in (4, 6, 8):
        assert not existence_bound(n, 2)
        assert not greedy_mds_search(n, 2).success
    # reorderings preserve the Frobenius norm and undo exactly
    for trial in range(100):
        d, k = ((2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (4, 1), (2, 4), (4, 2))[trial % 8]
        size = d**k
        if size not in (4, 8, 9, 16):
            continue
        m = IndexedMatrix(d, k, rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size)))
        for rows in itertools.combinations(range(2 * k), k):
            r = reorder(m, rows)
            assert math.isclose(np.linalg.norm(r.entries), np.linalg.norm(m.entries), rel_tol=1e-12)
            assert np.array_equal(undo_reorder(r, rows).entries, m.entries)
