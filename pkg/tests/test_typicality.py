import itertools

import pytest

from lekac.hamiltonian import Weight, all_weights
from lekac.typicality import (
    chain_length,
    fact_a_holds,
    facts_table,
    is_atypical,
    is_typical,
    length_case,
    matching_rules,
    omega,
    predicted_chain,
    predicted_length,
    predicted_shift,
    sweep_one,
    sweep_scope,
)


def W(eps, b, p=5):
    return Weight(list(eps), b, p)


def brute_atypical(lam):
    """Oracle: build every family member directly from its coefficient pattern."""
    n, p = lam.n, lam.p
    bs = range(p) if lam.has_delta else [None]
    cands = set()
    for i in range(1, n + 1):
        for a, b in itertools.product(range(p), bs):
            cands.add(Weight([1] * (i - 1) + [a] + [0] * (n - i), b, p))
            cands.add(Weight([1] * (i - 1) + [2] * (n - i + 1), b, p))
    return lam in cands


def test_zero_is_atypical():
    v = is_atypical(W([0, 0], 0))
    assert v.atypical and v.family == ("first", 1, 0, 0)


def test_two_eps2_is_typical():
    assert is_typical(W([0, 2], 0))
    assert is_typical(Weight([0, 2], None, 5))


def test_first_family_example():
    v = is_atypical(W([1, 3], 4))
    assert v.atypical and v.family == ("first", 2, 3, 4)


@pytest.mark.parametrize("n,p", [(1, 5), (2, 5), (2, 7), (3, 5)])
def test_omega_matches_oracle(n, p):
    for with_delta in (True, False):
        for lam in all_weights(n, p, with_delta):
            assert is_atypical(lam).atypical == brute_atypical(lam)


def test_omega_size_rank_two():
    # first family: a*eps_1 (5) and eps_1 + a*eps_2 (5), second: 2eps_1+2eps_2, eps_1+2eps_2 (dup)
    assert len({lam.eps for lam in omega(2, 5, False)}) == 10
    assert len(omega(2, 5, True)) == 50


def test_shift_examples():
    p = 5
    # rule 1: lam(h_1) = 0 when every other eps coefficient vanishes
    assert predicted_shift(W([3, 0], 2), 1) == (W([3, 0], 2), 1)
    assert predicted_shift(W([3, 1], 2), 1) == (W([2, 1], 1), 2)
    # rule 4 and rule 6 at step n + i
    assert predicted_shift(W([0, 0], 2), 3) == (W([0, 0], 2), 4)
    lam = W([0, 1], 2)
    shifted, rule = predicted_shift(lam, 3)
    assert rule == 6 and shifted == lam.shift((0, p - 2, -(p - 2)))
    with pytest.raises(ValueError):
        predicted_shift(W([0, 0], 0), 5)
    with pytest.raises(ValueError):
        predicted_shift(Weight([0, 0], None, 5), 1)


def test_exactly_one_rule_everywhere():
    for n, p in [(1, 5), (2, 5), (2, 7), (3, 5)]:
        for lam in all_weights(n, p, True):
            for k in range(1, 2 * n + 1):
                assert len(matching_rules(lam, k)) == 1


def test_predicted_chain_composes():
    lam = W([2, 3], 1)
    cur = lam
    for k, w, rule in predicted_chain(lam):
        assert (w, rule) == predicted_shift(cur, k)
        cur = w


def test_length_table_examples():
    assert predicted_length(W([0, 0], 3)) == 0
    assert length_case(W([1, 2], 1)) == 3 and predicted_length(W([1, 2], 1)) == 5
    assert predicted_length(W([0, 2], 0)) == 10
    assert predicted_length(W([3, 0], 0)) == 9
    assert predicted_length(W([2, 2], 0)) == 9


def test_chain_length_of_typical_weights_is_pn():
    for lam in all_weights(2, 5, True):
        if is_typical(lam):
            assert chain_length(lam) == 10


def test_fact_d():
    for b in range(5):
        assert facts_table(W([1, 2], b), 2) == W([0, 2], b - 1)


def test_fact_e_literal_pattern():
    # k = 3, n = 2: slot 1 carries 1 + a, slot 2 carries 2
    assert facts_table(W([3, 2], 4), 3) == W([2, 0], 3)
    assert facts_table(W([0, 0], 0), 3) is None


def test_fact_a_for_multiples_of_delta():
    for b in range(5):
        lam = W([0, 0, 0], b)
        assert fact_a_holds(lam, 2, lam) and fact_a_holds(lam, 3, lam)


def test_sweep_scope_deterministic():
    a = sweep_scope(2, 5, "atypical-plus-sample", 10, seed=3)
    b = sweep_scope(2, 5, "atypical-plus-sample", 10, seed=3)
    assert a == b
    assert sum(is_typical(lam) for lam in a) == 10
    assert all(lam in a for lam in all_weights(2, 5, True) if not is_typical(lam))
    assert sweep_scope(2, 5, "all") == all_weights(2, 5, True)
    with pytest.raises(ValueError):
        sweep_scope(2, 5, "some")


def test_sweep_one_rank_one():
    rec = sweep_one(Weight([2], 3, 5))
    assert rec.error is None
    # at rank one the first family already covers every weight
    assert not rec.typical and rec.computed_irreducible is False
    assert rec.le_irreducible is False
    assert rec.dimKac == 10 and rec.dimL0 == 1
    assert rec.shift_pass and rec.restricted_failures == 0 and rec.representation_failures == 0
    assert rec.chain_jdrop == rec.chain_length == rec.computed_length


def test_sweep_one_records_errors():
    rec = sweep_one(Weight([2], 3, 5), chain=False, le=False, probes=0, pairs=0)
    assert rec.error is None and rec.chain_shifts == []
    bad = sweep_one(Weight([2], 3, 13), chain=False, le=False)
    assert bad.error is not None and not bad.passed
