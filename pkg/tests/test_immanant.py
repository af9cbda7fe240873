import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from immanons import DomainError, RangeError
from immanons.immanant import (
    column_permuted_immanants,
    determinant,
    dump_matrix,
    immanant,
    immanants,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    normalized_immanant,
    permanent,
)
from immanons.partitions import enumerate_partitions
from oracles import (
    all_partitions,
    frobenius_character,
    naive_determinant,
    naive_immanant,
    naive_permanent,
    perm_cycle_type,
    random_complex,
)


def _naive_all(M):
    """Naive immanants for every shape plus the error scale sum |chi * prod|."""
    n = M.shape[0]
    prods, types = [], []
    for p in itertools.permutations(range(n)):
        term = 1 + 0j
        for j in range(n):
            term *= M[j, p[j]]
        prods.append(term)
        types.append(perm_cycle_type(p))
    out = {}
    for lam in all_partitions(n):
        chis = [frobenius_character(lam, t) for t in types]
        out[lam] = (sum(c * t for c, t in zip(chis, prods)), sum(abs(c * t) for c, t in zip(chis, prods)))
    return out


@pytest.mark.parametrize("n", range(2, 7))
def test_immanant_matches_naive(n):
    rng = np.random.default_rng(100 + n)
    for _ in range(100):
        M = random_complex((n, n), rng)
        fast = immanants(M)
        for lam, (ref, scale) in _naive_all(M).items():
            assert abs(immanant(lam, M) - ref) <= 1e-12 * scale
            assert abs(fast[lam] - ref) <= 1e-12 * scale


def test_immanant_examples():
    assert immanant((1, 1, 1), np.eye(3)) == pytest.approx(1)
    assert abs(immanant((2, 1), np.ones((3, 3)))) < 1e-14
    assert immanant((3,), np.ones((3, 3))) == pytest.approx(6)
    assert immanant((2, 1), np.eye(3)) == pytest.approx(2)


def test_immanant_errors():
    with pytest.raises(DomainError):
        immanant((2, 1), np.eye(4))
    with pytest.raises(DomainError):
        immanant((2, 1), np.ones((3, 2)))
    with pytest.raises(DomainError):
        immanant((2, 1), np.array([[1, np.nan, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(RangeError):
        immanant((10, 1), np.eye(11))


def test_immanant_upper_bound_n10():
    rng = np.random.default_rng(10)
    M = rng.standard_normal((10, 10))
    # only the identity permutation contributes: imm(I) = chi(e) = 768
    assert immanant((4, 3, 2, 1), np.eye(10)) == pytest.approx(768)
    assert np.isfinite(immanant((5, 3, 2), M))


def test_permanent_examples():
    a, b, c, d = 1.5 - 2j, 0.3j, -2.0, 4 + 1j
    assert permanent([[a, b], [c, d]]) == pytest.approx(a * d + b * c)
    for n in range(1, 11):
        assert permanent(np.ones((n, n))) == pytest.approx(math.factorial(n), rel=1e-12)
    rng = np.random.default_rng(4)
    M = random_complex((4, 4), rng)
    assert permanent(M) == pytest.approx(naive_permanent(M), rel=1e-12)
    with pytest.raises(RangeError):
        permanent(np.eye(25))


def test_permanent_beyond_inner_table():
    # 14 columns forces the outer Gray-code loop
    M = np.eye(14)
    M[0, 1] = M[1, 0] = 1.0
    assert permanent(M) == pytest.approx(2.0, rel=1e-12)
    rng = np.random.default_rng(5)
    A = random_complex((7, 7), rng)
    B = random_complex((7, 7), rng)
    block = np.zeros((14, 14), dtype=complex)
    block[:7, :7], block[7:, 7:] = A, B
    assert permanent(block) == pytest.approx(permanent(A) * permanent(B), rel=1e-10)


def test_determinant_examples():
    assert determinant(np.eye(5)) == pytest.approx(1)
    rng = np.random.default_rng(6)
    M = random_complex((4, 4), rng)
    assert determinant(M) == pytest.approx(naive_determinant(M), rel=1e-12)
    M[:, 2] = M[:, 0]
    assert abs(determinant(M)) < 1e-12


def test_normalized_immanant():
    assert normalized_immanant((2, 1), np.eye(3)) == pytest.approx(1)
    rng = np.random.default_rng(7)
    M = random_complex((4, 4), rng)
    assert normalized_immanant((4,), M) == pytest.approx(permanent(M))
    for x in (0.0, 0.3, 0.5, 1.0):
        T = np.full((3, 3), x)
        np.fill_diagonal(T, 1.0)
        assert normalized_immanant((2, 1), T) == pytest.approx(1 - x**3, abs=1e-14)


def test_column_permuted_immanants():
    rng = np.random.default_rng(8)
    M = random_complex((3, 3), rng)
    values = column_permuted_immanants((2, 1), M)
    for k, rho in enumerate(itertools.permutations(range(3))):
        assert values[k] == pytest.approx(naive_immanant((2, 1), M[:, list(rho)]), abs=1e-12)
    M4 = random_complex((4, 4), rng)
    assert np.allclose(column_permuted_immanants((4,), M4), permanent(M4), atol=1e-12)
    signs = [(-1) ** sum(k - 1 for k in perm_cycle_type(p)) for p in itertools.permutations(range(4))]
    assert np.allclose(column_permuted_immanants((1, 1, 1, 1), M4), np.array(signs) * determinant(M4), atol=1e-12)
    with pytest.raises(RangeError):
        column_permuted_immanants((7, 1), np.eye(8))


@settings(max_examples=60, deadline=None)
@given(
    arrays(np.complex128, (4, 4), elements=st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)),
    st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False),
    st.sampled_from([tuple(p) for p in enumerate_partitions(4)]),
)
def test_multilinearity_in_rows(M, c, lam):
    scale = np.prod(np.abs(M).sum(axis=1)) * abs(c) ** 4 + 1e-300
    assert abs(immanant(lam, c * M) - c**4 * immanant(lam, M)) <= 1e-12 * max(scale, 1.0)


@settings(max_examples=60, deadline=None)
@given(arrays(np.float64, (5, 5), elements=st.floats(-3, 3)), st.integers(0, 4), st.integers(0, 4))
def test_row_swap(M, i, j):
    swapped = M.copy()
    swapped[[i, j]] = swapped[[j, i]]
    scale = max(1.0, np.prod(np.abs(M).sum(axis=1)))
    sign = -1 if i != j else 1
    assert abs(immanant((1,) * 5, swapped) - sign * immanant((1,) * 5, M)) <= 1e-12 * scale
    assert abs(immanant((5,), swapped) - immanant((5,), M)) <= 1e-12 * scale


def test_deterministic_repeat():
    rng = np.random.default_rng(9)
    M = random_complex((7, 7), rng)
    assert immanant((4, 2, 1), M) == immanant((4, 2, 1), M)
    assert immanants(M) == immanants(M)


def test_matrix_json_roundtrip(tmp_path):
    rng = np.random.default_rng(11)
    M = random_complex((3, 3), rng)
    path = tmp_path / "m.json"
    dump_matrix(M, path)
    assert np.array_equal(load_matrix(path), M)
    assert json.loads(path.read_text())["n"] == 3
    real = matrix_from_json({"n": 2, "re": [[1, 2], [3, 4]]})
    assert real.dtype == np.complex128 and real[1, 0] == 3
    assert matrix_to_json(np.eye(2), seed=5)["seed"] == 5
    for bad in ({"n": 3, "re": [[1, 2], [3, 4]]}, {"re": [[1, 2]]}, {"re": [[1, 2], [3, 4]], "im": [[0]]}, [1, 2]):
        with pytest.raises(DomainError):
            matrix_from_json(bad)
    (tmp_path / "broken.json").write_text("{not json")
    with pytest.raises(DomainError):
        load_matrix(tmp_path / "broken.json")
