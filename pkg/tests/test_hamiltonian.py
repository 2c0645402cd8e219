import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lekac.divided_power import SuperPolynomial
from lekac.hamiltonian import (
    LE,
    LEBAR,
    VectorField,
    Weight,
    all_weights,
    anticommutativity_failures,
    buttin_bracket,
    build_algebra,
    de,
    de_homomorphism_failures,
    de_rank,
    euler_field,
    hamiltonian_shape,
    jacobi_failures,
    operator_matrix,
    structure_tensor,
    super_commutator,
)
from lekac.field_linalg import CapacityError

SH = hamiltonian_shape(2, 5)


def dense(D):
    return operator_matrix(D, SH).toarray() % 5


@pytest.mark.parametrize("n,p", [(1, 5), (1, 7), (2, 5)])
def test_dimension_against_de_rank(n, p):
    assert build_algebra(LE, n, p).dim == de_rank(n, p) == 2**n * p**n - 1
    assert build_algebra(LEBAR, n, p).dim == 2**n * p**n


def test_capacity_error():
    with pytest.raises(CapacityError):
        build_algebra(LE, 4, 5)


def test_de_of_generators():
    # n = 2: De_{x_1} = d_3, and De_{x_3} = -d_1 since both x_3 and d_3 are odd
    assert de(SuperPolynomial.generator(SH, 1)) == VectorField(SH, {(2, (0, 0, 0, 0)): 1})
    assert de(SuperPolynomial.generator(SH, 3)) == VectorField(SH, {(0, (0, 0, 0, 0)): -1})
    x1, x3 = SuperPolynomial.generator(SH, 1), SuperPolynomial.generator(SH, 3)
    assert buttin_bracket(x1, x3) == SuperPolynomial.one(SH)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**31))
def test_super_commutator_matches_operator_commutator(seed):
    alg = build_algebra(LEBAR, 2, 5)
    rng = random.Random(seed)
    a, b = rng.randrange(alg.dim), rng.randrange(alg.dim)
    Da, Db = alg.vector_field(a), alg.vector_field(b)
    sign = -1 if alg.parity[a] and alg.parity[b] else 1
    lhs = dense(super_commutator(Da, Db))
    rhs = (dense(Da) @ dense(Db) - sign * dense(Db) @ dense(Da)) % 5
    assert np.array_equal(lhs, rhs)


def test_table_brackets_match_vector_fields(lebar25):
    rng = random.Random(0)
    for _ in range(200):
        a, b = rng.randrange(lebar25.dim), rng.randrange(lebar25.dim)
        vf = super_commutator(lebar25.vector_field(a), lebar25.vector_field(b))
        assert lebar25.to_element(vf) == {k: c % 5 for k, c in lebar25.bracket(a, b).items() if c % 5}


def test_de_homomorphism_sampled():
    assert de_homomorphism_failures(2, 5, 200, seed=1) == []


def test_euler_grades_by_degree(lebar25):
    E = euler_field(SH)
    for i in range(lebar25.dim):
        if i == lebar25.euler:
            continue
        D = lebar25.vector_field(i)
        assert super_commutator(E, D) == D.scale(lebar25.degree[i])


def test_weights_from_cartan_brackets(lebar25):
    cart = lebar25.cartan()
    for i in range(lebar25.dim):
        w = lebar25.weight_of(i).coords()
        for k, h in enumerate(cart):
            assert lebar25.bracket(h, i).get(i, 0) % 5 == w[k] % 5
            assert set(lebar25.bracket(h, i)) <= {i}


def test_parity_counts(le25):
    even = sum(1 for x in le25.parity if x == 0)
    assert (even, le25.dim - even) == (50, 49)
    assert len(le25.graded_piece(-1)) == 4


def test_p_map_is_pth_power_on_functions(lebar25):
    p = 5
    for x in lebar25.even_basis():
        M = dense(lebar25.vector_field(x))
        Mp = np.linalg.matrix_power(M, p) % p
        target = dense(lebar25.element_field(lebar25.ppower(x)))
        assert np.array_equal(Mp, target), lebar25.label(x)


def test_p_map_rejects_odd(lebar25):
    odd = next(i for i in range(lebar25.dim) if lebar25.parity[i])
    with pytest.raises(ValueError):
        lebar25.ppower(odd)


def test_identities_on_small_table():
    alg = build_algebra(LEBAR, 1, 5)
    C = structure_tensor(alg)
    assert anticommutativity_failures(alg, C) == []
    assert jacobi_failures(alg, C) == []


def test_identity_checks_detect_corruption():
    alg = build_algebra(LE, 1, 7)
    C = structure_tensor(alg)
    i, j = 2, 4
    C[i, j] = (C[i, j] + 1) % 7
    assert anticommutativity_failures(alg, C)
    assert jacobi_failures(alg, C)


def test_to_element_rejects_outside(lebar25):
    with pytest.raises(ValueError):
        # x1 d1 alone is not in lebar(2)
        lebar25.to_element(VectorField(SH, {(0, (1, 0, 0, 0)): 1}))


def test_weight_syntax():
    lam = Weight.parse("1,3|4", 2, 5)
    assert str(lam) == "1,3|4" and lam.coords() == (1, 3, 4)
    assert str(Weight.parse("1,3", 2, 5, with_delta=False)) == "1,3"
    with pytest.raises(ValueError):
        Weight.parse("1,3|4", 2, 5, with_delta=False)
    with pytest.raises(ValueError):
        Weight.parse("1,3", 2, 5)
    with pytest.raises(ValueError):
        Weight.parse("1,5|0", 2, 5)
    with pytest.raises(ValueError):
        Weight.parse("1|0", 2, 5)
    assert len(all_weights(2, 5)) == 125 and len(all_weights(2, 5, False)) == 25
