"""Atypical weights, predicted highest-weight shifts and predicted lengths.

Indices ``i`` below are 1-based, matching the usual eps_1..eps_n labelling.
Weights for lebar(n) carry a delta coefficient; for le(n) ``delta is None``.
"""

from __future__ import annotations

import random
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .hamiltonian import LE, LEBAR, Weight, all_weights, build_algebra


@dataclass(frozen=True)
class TypicalityVerdict:
    lam: Weight
    atypical: bool
    family: tuple | None  # ("first", i, a, b) | ("second", i, b) | None


def _first_family(n, i, a, b, p, with_delta):
    eps = [1] * (i - 1) + [a] + [0] * (n - i)
    return Weight(eps, b if with_delta else None, p)


def _second_family(n, i, b, p, with_delta):
    eps = [1] * (i - 1) + [2] * (n - i + 1)
    return Weight(eps, b if with_delta else None, p)


def omega(n, p, with_delta=True):
    """The atypical set as {weight: first matching family}."""
    out = {}
    bs = range(p) if with_delta else [None]
    for i in range(1, n + 1):
        for a in range(p):
            for b in bs:
                out.setdefault(_first_family(n, i, a, b, p, with_delta), ("first", i, a, b))
    for i in range(1, n + 1):
        for b in bs:
            out.setdefault(_second_family(n, i, b, p, with_delta), ("second", i, b))
    return out


def is_atypical(lam):
    """Membership of lam in Omega by enumeration of both families."""
    table = omega(lam.n, lam.p, lam.has_delta)
    fam = table.get(lam)
    return TypicalityVerdict(lam, fam is not None, fam)


def is_typical(lam):
    return not is_atypical(lam).atypical


def vanishes_on_h(lam, i):
    """lam(h_i) == 0, where h_i is spanned by De_{x_j x_j'} for j != i."""
    return all(c == 0 for j, c in enumerate(lam.eps, start=1) if j != i)


def predicted_shift(lam_prev, k):
    """Weight after chain step k (1..2n) and the number of the rule used.

    Steps k <= n use rules 1-2 for i = k; steps k = n + i use rules 3-6 for
    the slot n - i + 1.  Rules 3 and 5 give the same shift.
    """
    n, p = lam_prev.n, lam_prev.p
    if not 1 <= k <= 2 * n:
        raise ValueError(f"step {k} outside 1..{2 * n}")
    if not lam_prev.has_delta:
        raise ValueError("shift rules are stated for lebar(n) weights")
    if k <= n:
        i = k
        if vanishes_on_h(lam_prev, i):
            return lam_prev, 1
        return lam_prev.shift(_unit(n, i, -1, -1)), 2
    i = k - n
    s = n - i + 1
    if not vanishes_on_h(lam_prev, s):
        return lam_prev.shift(_unit(n, s, p - 1, -(p - 1))), 3
    a = lam_prev.eps[s - 1]
    if a == 0:
        return lam_prev, 4
    if a != 1:
        return lam_prev.shift(_unit(n, s, p - 1, -(p - 1))), 5
    return lam_prev.shift(_unit(n, s, p - 2, -(p - 2))), 6


def matching_rules(lam_prev, k):
    """All rules whose hypothesis holds at step k (a completeness audit)."""
    n = lam_prev.n
    out = []
    if k <= n:
        out.append(1 if vanishes_on_h(lam_prev, k) else 2)
        return out
    s = n - (k - n) + 1
    a = lam_prev.eps[s - 1]
    if not vanishes_on_h(lam_prev, s):
        out.append(3)
    elif a == 0:
        out.append(4)
    else:
        out.append(5 if a != 1 else 6)
    return out


# J-degree change of the highest weight vector under each rule
def rule_jdrop(rule, p):
    return {1: 0, 2: 1, 3: p - 1, 4: 0, 5: p - 1, 6: p - 2}[rule]


def _unit(n, slot, eps_coef, delta_coef):
    lift = [0] * (n + 1)
    lift[slot - 1] = eps_coef
    lift[n] = delta_coef
    return tuple(lift)


def predicted_chain(lam):
    """Compose the shift rules along the whole chain: [(k, weight, rule)]."""
    out = []
    cur = lam
    for k in range(1, 2 * lam.n + 1):
        cur, rule = predicted_shift(cur, k)
        out.append((k, cur, rule))
    return out


def chain_length(lam):
    """Length implied by composing the shift rules (sum of J-degree drops)."""
    return sum(rule_jdrop(rule, lam.p) for _, _, rule in predicted_chain(lam))


def length_case(lam):
    """Which line of the five-case length table applies (1..5)."""
    n, p = lam.n, lam.p
    eps = list(lam.eps)
    if all(c == 0 for c in eps):
        return 1
    for i in range(1, n):
        if eps[: i - 1] == [1] * (i - 1) and eps[i - 1] != 0 and all(c == 0 for c in eps[i:]):
            return 2
    if eps[: n - 1] == [1] * (n - 1) and eps[n - 1] != 0:
        return 3
    for i in range(1, n):
        if eps == [1] * (i - 1) + [2] * (n - i + 1):
            return 4
    return 5


def predicted_length(lam):
    """Length of L^{b0}(lam) according to the five-case table."""
    n, p = lam.n, lam.p
    return {1: 0, 2: p * n - 1, 3: p * n - p, 4: p * n - 1, 5: p * n}[length_case(lam)]


def facts_table(lam, k):
    """The predicted lam_k for the atypical patterns with a closed form, else None."""
    n, p = lam.n, lam.p
    eps = list(lam.eps)
    b = lam.delta
    if k == n and eps[: n - 1] == [1] * (n - 1) and eps[n - 1] != 0:
        a = eps[n - 1]
        return Weight([0] * (n - 1) + [a], b - n + 1, p)
    if n < k < 2 * n:
        s = 2 * n - k
        for a in range(1, p):
            pattern = [1] * s + [0] * (n - s)
            pattern[s - 1] += a
            for j in range(s, n):
                pattern[j] += 2
            if [c % p for c in pattern] == eps:
                out = [0] * n
                out[s - 1] = a
                return Weight(out, b - 2 * n + k, p)
    return None


def fact_a_holds(lam, k, lam_prev):
    """Fact (a)/(b)/(c) as a biconditional between lam and the computed lam_{k-1}."""
    n = lam.n
    eps = list(lam.eps)
    if 2 <= k <= n:
        lhs = vanishes_on_h(lam_prev, k)
        rhs = all(c == 0 for c in eps) or (
            eps[: k - 1] == [1] * (k - 1) and eps[k - 1] != 0 and all(c == 0 for c in eps[k:])
        )
        return lhs == rhs
    return None


@dataclass
class SweepRecord:
    lam: Weight
    typical: bool
    predicted_irreducible: bool
    computed_irreducible: bool | None = None
    dimL0: int | None = None
    dimKac: int | None = None
    dim_head: int | None = None
    predicted_length: int | None = None
    chain_length: int | None = None
    computed_length: int | None = None
    kac_length: int | None = None
    chain_shifts: list = field(default_factory=list)  # (k, predicted, computed, rule)
    chain_jdrop: int | None = None  # l_0 - l_2n from the b_k-highest weight vectors
    le_irreducible: bool | None = None
    restricted_failures: int | None = None  # over I(lam) and its head
    representation_failures: int | None = None  # sampled pairs on the head
    error: str | None = None

    @property
    def lambda_text(self):
        return str(self.lam)

    @property
    def theorem_pass(self):
        return self.error is None and self.computed_irreducible == self.predicted_irreducible

    @property
    def length_pass(self):
        return self.error is None and self.computed_length == self.predicted_length

    @property
    def shift_pass(self):
        return self.error is None and all(pred == comp for _, pred, comp, _ in self.chain_shifts)

    @property
    def passed(self):
        return self.theorem_pass and self.length_pass and self.shift_pass


# -- sweeps ------------------------------------------------------------------


def sweep_scope(n, p, scope="all", sample=10, seed=0):
    """Weights to visit, in canonical order.

    ``scope`` is "all" or "atypical-plus-sample" (every atypical weight plus
    ``sample`` typical ones drawn with ``seed``).
    """
    lams = all_weights(n, p, True)
    if scope == "all":
        return lams
    if scope != "atypical-plus-sample":
        raise ValueError(f"unknown scope {scope!r}")
    atyp = [lam for lam in lams if not is_typical(lam)]
    typ = [lam for lam in lams if is_typical(lam)]
    rng = random.Random(seed)
    picked = set(rng.sample(range(len(typ)), min(sample, len(typ))))
    keep = set(atyp) | {typ[i] for i in picked}
    return [lam for lam in lams if lam in keep]


def sweep_one(lam, chain=True, le=True, probes=20, pairs=10):
    """Build I(lam), its head and (optionally) the chain data for one weight.

    ``probes`` basis vectors test x^p = x^[p] on both modules; ``pairs``
    random basis pairs test the bracket relation on the head.
    """
    from .borel_chain import reflection_chain
    from .highest_weight import (
        check_representation,
        check_restricted,
        highest_weight_wrt,
        irreducible_quotient,
        is_irreducible,
        j_length,
        kac_module,
    )

    n, p = lam.n, lam.p
    rec = SweepRecord(lam, is_typical(lam), is_typical(lam))
    rec.predicted_length = predicted_length(lam)
    rec.chain_length = chain_length(lam)
    try:
        alg = build_algebra(LEBAR, n, p)
        K = kac_module(alg, lam)
        L = irreducible_quotient(K)
        rec.dimKac = K.dim
        rec.dimL0 = K.dim // (2**n * p**n)
        rec.dim_head = L.dim
        rec.computed_irreducible = L.dim == K.dim
        rec.kac_length = j_length(K)
        rec.computed_length = j_length(L)
        if probes:
            seed = zlib.crc32(str(lam).encode())
            rec.restricted_failures = len(check_restricted(K, sample=probes, seed=seed)) + len(
                check_restricted(L, sample=probes, seed=seed)
            )
        if pairs:
            rng = random.Random(str(lam))
            sample = [(rng.randrange(alg.dim), rng.randrange(alg.dim)) for _ in range(pairs)]
            rec.representation_failures = len(check_representation(L, sample))
        if chain:
            steps = reflection_chain(alg, validate=False)
            prev = highest_weight_wrt(L, steps[0].n_plus, 0)
            first = prev
            for d in steps[1:]:
                rules = matching_rules(prev.weight, d.k)
                if len(rules) != 1:
                    raise RuntimeError(f"step {d.k}: rules {rules} apply")
                pred, rule = predicted_shift(prev.weight, d.k)
                hw = highest_weight_wrt(L, d.n_plus, d.k)
                rec.chain_shifts.append((d.k, pred, hw.weight, rule))
                prev = hw
            rec.chain_jdrop = first.jdegree - prev.jdegree
        if le:
            lealg = build_algebra(LE, n, p)
            rec.le_irreducible = is_irreducible(kac_module(lealg, lam.restrict()))
    except Exception as exc:  # recorded, the sweep goes on
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _sweep_job(args):
    return sweep_one(*args)


def check_theorem(n, p, scope="all", sample=10, seed=0, chain=True, le=True, workers=1):
    """SweepRecords for every weight in scope, in canonical weight order."""
    lams = sweep_scope(n, p, scope, sample, seed)
    jobs = [(lam, chain, le) for lam in lams]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(_sweep_job, jobs))
    return [_sweep_job(j) for j in jobs]


def check_le_theorem(n, p):
    """(lambda, typical, irreducible) for every weight of le(n)."""
    from .highest_weight import is_irreducible, kac_module

    alg = build_algebra(LE, n, p)
    out = []
    for lam in all_weights(n, p, False):
        out.append((lam, is_typical(lam), is_irreducible(kac_module(alg, lam))))
    return out
