import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from lekac.field_linalg import (
    CapacityError,
    Subspace,
    as_operator,
    binom_mod_p,
    check_capacity,
    closure,
    inv_mod,
    nullspace,
    rank,
    rref,
    simultaneous_kernel,
    solve,
)

primes = st.sampled_from([5, 7, 11])


def matrices(max_rows=7, max_cols=7):
    return st.tuples(primes, st.integers(1, max_rows), st.integers(1, max_cols), st.integers(0, 2**31)).map(
        lambda t: (t[0], np.random.default_rng(t[3]).integers(0, t[0], size=(t[1], t[2])))
    )


def sympy_rank(m, p):
    return DomainMatrix([[GF(p)(int(x)) for x in row] for row in m.tolist()], m.shape, GF(p)).rank()


@given(primes, st.integers(0, 200), st.integers(0, 200))
def test_binom_matches_integer_binomial(p, a, b):
    assert binom_mod_p(a, b, p) == math.comb(a, b) % p


@given(primes, st.integers(1, 10**6))
def test_inverse(p, a):
    if a % p:
        assert a * inv_mod(a, p) % p == 1
    else:
        with pytest.raises(ZeroDivisionError):
            inv_mod(a, p)


@settings(max_examples=60)
@given(matrices())
def test_rank_against_sympy(pm):
    p, m = pm
    assert rank(m, p) == sympy_rank(m, p)


@settings(max_examples=60)
@given(matrices())
def test_rref_shape_and_pivots(pm):
    p, m = pm
    R, piv = rref(m, p)
    assert R.shape[0] == len(piv)
    for r, c in enumerate(piv):
        assert R[r, c] == 1
        assert np.count_nonzero(R[:, c]) == 1
    # the row space is preserved
    assert rank(np.vstack([R, m]), p) == len(piv)


@settings(max_examples=60)
@given(matrices())
def test_nullspace_is_kernel_of_right_size(pm):
    p, m = pm
    ns = nullspace(m, p)
    assert not (m @ ns.T % p).any()
    assert ns.shape[0] == m.shape[1] - rank(m, p)


@settings(max_examples=40)
@given(matrices())
def test_solve(pm):
    p, m = pm
    x0 = np.arange(m.shape[1]) % p
    b = m @ x0 % p
    x = solve(m, b, p)
    assert np.array_equal(m @ x % p, b)


def test_solve_inconsistent():
    assert solve(np.array([[1, 0], [1, 0]]), np.array([0, 1]), 5) is None


def test_subspace_membership_and_order():
    S = Subspace(3, 5, np.array([[1, 2, 0]]))
    assert np.array([2, 4, 0]) in S
    assert np.array([0, 0, 1]) not in S
    T = S.extend(np.array([[0, 0, 1]]))
    assert S <= T and T.dim == 2
    assert Subspace.full(3, 5) == Subspace(3, 5, np.eye(3, dtype=np.int64))


def test_closure_under_shift_is_everything():
    d, p = 6, 7
    shift = np.eye(d, k=-1, dtype=np.int64)
    seed = Subspace(d, p, np.eye(d, dtype=np.int64)[:1])
    assert closure(seed, [shift]).dim == d
    # the last basis vector spans an invariant line
    tail = Subspace(d, p, np.eye(d, dtype=np.int64)[-1:])
    assert closure(tail, [shift]).dim == 1


def test_closure_is_invariant():
    rng = np.random.default_rng(3)
    p, d = 5, 8
    ops = [np.triu(rng.integers(0, p, (d, d)), 1) for _ in range(2)]
    seed = Subspace(d, p, np.eye(d, dtype=np.int64)[4:5])
    C = closure(seed, ops)
    for op in ops:
        for v in C.basis:
            assert (op @ v % p) in C


def test_simultaneous_kernel():
    p = 5
    a = np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    b = np.array([[0, 0, 0], [0, 0, 1], [0, 0, 0]])
    K = simultaneous_kernel([a, b], 3, p)
    assert K.dim == 1 and np.array([1, 0, 0]) in K
    assert simultaneous_kernel([], 3, p).dim == 3


def test_as_operator_switches_to_sparse():
    small = as_operator(np.eye(3, dtype=np.int64) * 6, 5)
    assert isinstance(small, np.ndarray) and small[0, 0] == 1
    big = as_operator(np.eye(80, dtype=np.int64), 5)
    assert hasattr(big, "tocsr")


def test_capacity(monkeypatch):
    check_capacity(2, 5)
    with pytest.raises(CapacityError):
        check_capacity(4, 5)
    with pytest.raises(CapacityError):
        check_capacity(2, 13)
    monkeypatch.setenv("LEKAC_NO_CAPACITY_CHECK", "1")
    check_capacity(4, 13)
