"""Triangular decompositions of lebar(n) and the chain b_0, ..., b_2n.

Step k adjoins one element of lebar(n)_[-1] to the positive part, in the
order De_{x_1}, ..., De_{x_n}, De_{x_2n}, ..., De_{x_{n+1}}, and removes a
set W_k of positive elements.  The positive parts are cut out by linear
functionals on the integral root lattice,

    ell_c(eps_i) = -(n + 1 - i),   ell_c(delta) = c,

with c decreasing through the thresholds where the adjoined lowering
elements change sign.  ``literal_W`` gives the closed-form removal sets
W_k, for comparison with what the functionals produce.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .hamiltonian import LEBAR, AlgebraTable
from .highest_weight import degree_zero_decomposition


class ChainConsistencyError(RuntimeError):
    """A chain step violates the direct-sum or subalgebra property."""


@dataclass
class BorelDatum:
    k: int
    n_plus: list
    n_minus: list
    cartan: list
    added: int | None = None
    removed: list = field(default_factory=list)
    literal_removed: list | None = None

    @property
    def literal_match(self):
        if self.literal_removed is None:
            return None
        return sorted(self.removed) == sorted(self.literal_removed)


def _eps_weights(n):
    return [Fraction(n + 1 - i) for i in range(1, n + 1)]


def ell(alg, i, c):
    root = alg.root[i]
    n = alg.n
    a = _eps_weights(n)
    return -sum(a[j] * root[j] for j in range(n)) + c * root[n]


def adjoined_order(n):
    """0-based slots s such that step k adjoins De_{x_{s+1}}."""
    return list(range(n)) + list(range(2 * n - 1, n - 1, -1))


def chain_parameters(alg):
    """The value of c used for each b_k, k = 0..2n."""
    n = alg.n
    a = _eps_weights(n)
    # generic offset so that no root vector ever has ell == 0
    tiny = Fraction(1, 1009)
    big = Fraction(4 * n * alg.p * (n + 2))
    cs = [big]
    for k in range(1, 2 * n + 1):
        if k < n:
            cs.append((a[k - 1] + a[k]) / 2 - tiny)
        elif k == n:
            cs.append(-tiny)
        elif k < 2 * n:
            j = k - n  # adjoined De_{x_{2n-j+1}}, threshold at -a[n-j]
            cs.append(-(a[n - j] + a[n - j - 1]) / 2 - tiny)
        else:
            cs.append(-big)
    return cs


def _positive(alg, c, n_plus0, cartan):
    out = []
    for i in range(alg.dim):
        if i in cartan:
            continue
        if alg.degree[i] == 0:
            if i in n_plus0:
                out.append(i)
            continue
        v = ell(alg, i, c)
        if v == 0:
            raise ChainConsistencyError(f"root of {alg.label(i)} is not generic for c={c}")
        if v > 0:
            out.append(i)
    return out


def standard_decomposition(alg: AlgebraTable) -> BorelDatum:
    if alg.which != LEBAR:
        raise ValueError("the chain is defined for lebar(n)")
    nm0, cart, np0 = degree_zero_decomposition(alg)
    n_plus = list(np0) + [i for i in range(alg.dim) if alg.degree[i] > 0]
    n_minus = list(nm0) + alg.graded_piece(-1)
    return BorelDatum(0, sorted(n_plus), sorted(n_minus), cart)


def literal_W(alg, k):
    """Closed-form removal set for step k (1..2n), restricted to nonzero monomials."""
    n, p = alg.n, alg.p
    out = set()

    def add(base, slots):
        r = list(base)
        for s in slots:
            r[s] += 1
        r = tuple(r)
        if alg.shape.valid(r) and r in alg.index:
            out.add(alg.index[r])

    bases = []
    if k <= n:
        for free in itertools.product((0, 1), repeat=k - 1):
            base = [0] * (2 * n)
            for t, v in enumerate(free):
                base[n + t] = v
            base[n + k - 1] = 1
            bases.append(base)
    else:
        kk = k - n - 1
        lo = n - kk - 1  # slots 0..lo-1 vanish, lo..n-1 at least 1
        for ev in itertools.product(range(1, p), repeat=n - lo):
            for od in itertools.product((0, 1), repeat=n):
                bases.append([0] * lo + list(ev) + list(od))
    for base in bases:
        for i in range(1, n + 1):
            for j in range(1, i + 1):
                add(base, (n + i - 1, n + j - 1))
                add(base, (i - 1, n + j - 1))
    return sorted(out)


def reflection_chain(alg: AlgebraTable, validate=True):
    """The 2n+1 decompositions b_0..b_2n."""
    b0 = standard_decomposition(alg)
    nm0, cart, np0 = degree_zero_decomposition(alg)
    cs = chain_parameters(alg)
    n = alg.n
    everything = set(range(alg.dim)) - set(cart)
    chain = [b0]
    slots = adjoined_order(n)
    prev = set(b0.n_plus)
    for k in range(1, 2 * n + 1):
        pos = set(_positive(alg, cs[k], set(np0), set(cart)))
        r = [0] * (2 * n)
        r[slots[k - 1]] = 1
        added = alg.index[tuple(r)]
        gained = pos - prev
        if gained != {added}:
            raise ChainConsistencyError(
                f"step {k}: expected to adjoin {alg.label(added)}, got {[alg.label(i) for i in gained]}"
            )
        removed = sorted(prev - pos)
        datum = BorelDatum(
            k,
            sorted(pos),
            sorted(everything - pos),
            cart,
            added=added,
            removed=removed,
            literal_removed=literal_W(alg, k),
        )
        chain.append(datum)
        prev = pos
    if validate:
        for d in chain:
            problems = validate_datum(alg, d)
            if problems:
                raise ChainConsistencyError(f"b_{d.k}: {problems}")
        final = set(np0) | set(alg.graded_piece(-1))
        if set(chain[-1].n_plus) != final:
            raise ChainConsistencyError("n+_2n differs from n+_[0] + g_[-1]")
    return chain


def is_closed(alg, elems):
    s = set(elems)
    for i in elems:
        for j in elems:
            if not set(alg.bracket(i, j)) <= s:
                return False
    return True


def ad_nilpotent(alg, elems):
    """Iterated brackets with the set eventually vanish on the whole algebra."""
    s = list(elems)
    current = set(range(alg.dim))
    for _ in range(4 * alg.dim):
        nxt = set()
        for i in s:
            for j in current:
                nxt.update(alg.bracket(i, j))
        if not nxt:
            return True
        if nxt == current:
            return False
        current = nxt
    return False


def validate_datum(alg, d):
    """List of failed properties (empty when consistent)."""
    problems = []
    plus, minus, cart = set(d.n_plus), set(d.n_minus), set(d.cartan)
    if plus & minus or plus & cart or minus & cart:
        problems.append("pieces overlap")
    if plus | minus | cart != set(range(alg.dim)):
        problems.append("pieces do not span")
    if not is_closed(alg, d.n_plus):
        problems.append("n+ not closed")
    if not is_closed(alg, d.n_minus):
        problems.append("n- not closed")
    if not ad_nilpotent(alg, d.n_plus):
        problems.append("n+ not ad-nilpotent")
    return problems
