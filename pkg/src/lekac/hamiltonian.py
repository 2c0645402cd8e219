"""Odd Hamiltonian Lie superalgebras le(n) and its extension by the Euler field.

``le(n)`` is the image of the map ``De`` on O(n) = O(n, 1 | n); ``lebar(n)``
adds the grading element ``E = sum_i x_i d_i``.  Slots ``0..n-1`` of a
monomial are even, ``n..2n-1`` odd, and slot ``i`` is paired with
``i' = i + n (mod 2n)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .divided_power import (
    Shape,
    SuperPolynomial,
    format_monomial,
    format_polynomial,
    mono_mul,
    mono_partial,
    monomial_degree,
    monomial_parity,
)
from .field_linalg import check_capacity, rref

LE = "le"
LEBAR = "lebar"


def conj(i, n):
    """0-based partner slot i'."""
    return i + n if i < n else i - n


def hamiltonian_shape(n, p, N=None):
    return Shape(m=n, n=n, p=p, N=N)


# -- vector fields ------------------------------------------------------------


class VectorField:
    """A finite sum  sum_k f_k d_k  stored as {(k, monomial): coefficient}."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape, terms=None):
        self.shape = shape
        p = shape.p
        clean = {}
        if terms:
            for key, c in terms.items():
                c %= p
                if c:
                    clean[key] = c
        self.terms = clean

    @classmethod
    def from_components(cls, shape, comps):
        """``comps`` maps a 0-based slot k to the SuperPolynomial f_k."""
        terms = {}
        for k, f in comps.items():
            for r, c in f.terms.items():
                terms[(k, r)] = terms.get((k, r), 0) + c
        return cls(shape, terms)

    def component(self, k):
        return SuperPolynomial(self.shape, {r: c for (j, r), c in self.terms.items() if j == k})

    def term_parity(self, key):
        k, r = key
        return (monomial_parity(r, self.shape) + (1 if k >= self.shape.m else 0)) % 2

    def parts_by_parity(self):
        parts = ({}, {})
        for key, c in self.terms.items():
            parts[self.term_parity(key)][key] = c
        return VectorField(self.shape, parts[0]), VectorField(self.shape, parts[1])

    def parity(self):
        ps = {self.term_parity(key) for key in self.terms}
        if len(ps) != 1:
            raise ValueError("not Z2-homogeneous")
        return ps.pop()

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return VectorField(self.shape, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return VectorField(self.shape, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, VectorField) and self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __call__(self, g):
        return apply(self, g)

    def __repr__(self):
        items = sorted(self.terms.items())
        body = " + ".join(f"{c}*{format_monomial(r)}*d{k + 1}" for (k, r), c in items) or "0"
        return f"VectorField({body})"


def apply(D, g):
    """Evaluate sum_k f_k d_k(g)."""
    if D.shape != g.shape:
        raise ValueError("shape mismatch")
    shape = D.shape
    p = shape.p
    out = {}
    for (k, r), a in D.terms.items():
        for s, b in g.terms.items():
            c1, t = mono_partial(k, s, shape)
            if not c1:
                continue
            c2, u = mono_mul(r, t, shape)
            if c2:
                out[u] = (out.get(u, 0) + a * b * c1 * c2) % p
    return SuperPolynomial(shape, out)


def euler_field(shape):
    """The grading element sum_i x_i d_i."""
    terms = {}
    for i in range(shape.nvars):
        r = [0] * shape.nvars
        r[i] = 1
        terms[(i, tuple(r))] = 1
    return VectorField(shape, terms)


@lru_cache(maxsize=None)
def _de_monomial(r, shape):
    n = shape.m
    par = monomial_parity(r, shape)
    p = shape.p
    terms = {}
    for i in range(2 * n):
        c, t = mono_partial(i, r, shape)
        if not c:
            continue
        if i >= n and par:
            c = -c
        terms[(conj(i, n), t)] = c % p
    return tuple(terms.items())


def de(f):
    """De_f = sum_i (-1)^{|d_i||f|} d_i(f) d_{i'}."""
    shape = f.shape
    if shape.m != shape.n:
        raise ValueError("De needs m == n")
    out = {}
    for r, a in f.terms.items():
        for key, c in _de_monomial(r, shape):
            out[key] = out.get(key, 0) + a * c
    return VectorField(shape, out)


def buttin_bracket(f, g):
    """{f, g}_B = De_f(g)."""
    if f.shape != g.shape:
        raise ValueError("shape mismatch")
    return apply(de(f), g)


def super_commutator(D, E):
    """[D, E] = D o E - (-1)^{|D||E|} E o D, returned as a vector field."""
    shape = D.shape
    nv = shape.nvars
    total = VectorField(shape)
    for Dp in D.parts_by_parity():
        if not Dp:
            continue
        a = Dp.parity()
        for Ep in E.parts_by_parity():
            if not Ep:
                continue
            b = Ep.parity()
            sign = -1 if (a * b) % 2 else 1
            comps = {}
            for k in range(nv):
                ek = Ep.component(k)
                dk = Dp.component(k)
                val = apply(Dp, ek) - apply(Ep, dk).scale(sign)
                if val:
                    comps[k] = val
            total = total + VectorField.from_components(shape, comps)
    return total


def operator_matrix(D, shape=None):
    """Matrix of a vector field acting on O(n) in the monomial basis (columns = inputs)."""
    shape = shape or D.shape
    monos = shape.monomials()
    index = {r: i for i, r in enumerate(monos)}
    rows, cols, vals = [], [], []
    for j, r in enumerate(monos):
        img = apply(D, SuperPolynomial.monomial(shape, r))
        for s, c in img.terms.items():
            rows.append(index[s])
            cols.append(j)
            vals.append(c)
    d = len(monos)
    return sp.csr_matrix((vals, (rows, cols)), shape=(d, d), dtype=np.int64)


# -- weights ---------------------------------------------------------------


@dataclass(frozen=True)
class Weight:
    """An element of span_{F_p}(eps_1..eps_n, delta); ``delta is None`` for le(n)."""

    eps: tuple
    delta: int | None
    p: int

    def __post_init__(self):
        object.__setattr__(self, "eps", tuple(int(a) % self.p for a in self.eps))
        if self.delta is not None:
            object.__setattr__(self, "delta", int(self.delta) % self.p)

    @classmethod
    def zero(cls, n, p, with_delta=True):
        return cls((0,) * n, 0 if with_delta else None, p)

    @property
    def n(self):
        return len(self.eps)

    @property
    def has_delta(self):
        return self.delta is not None

    def coords(self):
        return self.eps + ((self.delta,) if self.has_delta else ())

    def shift(self, lift):
        """Add an integral vector (n eps-coefficients, then the delta coefficient)."""
        eps = tuple(a + b for a, b in zip(self.eps, lift[: self.n]))
        delta = None if self.delta is None else self.delta + lift[self.n]
        return Weight(eps, delta, self.p)

    def __add__(self, other):
        return self.shift(other.eps + ((other.delta or 0),))

    def __sub__(self, other):
        return self.shift(tuple(-a for a in other.eps) + (-(other.delta or 0),))

    def restrict(self):
        """Drop the delta part (weight of le(n))."""
        return Weight(self.eps, None, self.p)

    def with_delta(self, b):
        return Weight(self.eps, b, self.p)

    def __str__(self):
        s = ",".join(str(a) for a in self.eps)
        return s if self.delta is None else f"{s}|{self.delta}"

    @classmethod
    def parse(cls, text, n, p, with_delta=True):
        text = text.strip()
        if "|" in text:
            if not with_delta:
                raise ValueError("le(n) weights carry no delta part")
            left, right = text.split("|")
            delta = int(right)
        else:
            if with_delta:
                raise ValueError("lebar(n) weights need a '|b' part")
            left, delta = text, None
        eps = tuple(int(t) for t in left.split(",")) if left.strip() else ()
        if len(eps) != n:
            raise ValueError(f"expected {n} eps coefficients, got {len(eps)}")
        vals = eps + ((delta,) if delta is not None else ())
        if any(not 0 <= v < p for v in vals):
            raise ValueError("weight coefficients must lie in 0..p-1")
        return cls(eps, delta, p)


def all_weights(n, p, with_delta=True):
    rng = range(p)
    if with_delta:
        return [Weight(e[:n], e[n], p) for e in itertools.product(rng, repeat=n + 1)]
    return [Weight(e, None, p) for e in itertools.product(rng, repeat=n)]


def root_lift(r, n):
    """Integral torus character of De_{x^(r)}: (r_{i'} - r_i)_i and deg - 2."""
    return tuple(r[i + n] - r[i] for i in range(n)) + (monomial_degree(r) - 2,)


# -- the algebra table ----------------------------------------------------------


class AlgebraTable:
    """Basis, brackets, grading, weights and p-mapping of le(n) or lebar(n).

    Basis element ``i`` is ``De_{x^(r)}`` for ``potentials[i] = r``; for lebar
    the last basis element is the Euler field and its potential is ``None``.
    """

    def __init__(self, which, n, p, N=None):
        if which not in (LE, LEBAR):
            raise ValueError(f"unknown algebra {which!r}")
        check_capacity(n, p)
        self.which = which
        self.n = n
        self.p = p
        self.shape = hamiltonian_shape(n, p, N)
        zero = (0,) * (2 * n)
        monos = [r for r in self.shape.monomials() if r != zero]
        monos.sort(key=lambda r: (monomial_degree(r), r))
        self.potentials = list(monos)
        if which == LEBAR:
            self.potentials.append(None)
            self.euler = len(monos)
        else:
            self.euler = None
        self.index = {r: i for i, r in enumerate(monos)}
        self.dim = len(self.potentials)
        self.parity = []
        self.degree = []
        self.root = []
        for r in self.potentials:
            if r is None:
                self.parity.append(0)
                self.degree.append(0)
                self.root.append((0,) * (n + 1))
            else:
                self.parity.append((monomial_parity(r, self.shape) + 1) % 2)
                self.degree.append(monomial_degree(r) - 2)
                self.root.append(root_lift(r, n))
        self._bracket_cache = {}
        self._ppower_cache = {}
        self._solver = None

    # basic lookups

    def element_index(self, r):
        return self.index[tuple(r)]

    def cartan(self):
        """Indices of h = De_{x_i x_{i'}} (i = 1..n), then the Euler field for lebar."""
        n = self.n
        out = []
        for i in range(n):
            r = [0] * (2 * n)
            r[i] = r[i + n] = 1
            out.append(self.index[tuple(r)])
        if self.euler is not None:
            out.append(self.euler)
        return out

    def weight_of(self, i):
        lift = self.root[i]
        w = Weight(lift[: self.n], lift[self.n] if self.euler is not None else None, self.p)
        return w

    def graded_piece(self, j):
        return [i for i in range(self.dim) if self.degree[i] == j]

    def degrees(self):
        return sorted(set(self.degree))

    def vector_field(self, i):
        r = self.potentials[i]
        if r is None:
            return euler_field(self.shape)
        return de(SuperPolynomial.monomial(self.shape, r))

    def label(self, i):
        r = self.potentials[i]
        return "E" if r is None else f"De[{format_monomial(r)}]"

    # structure constants

    def bracket(self, i, j):
        """[b_i, b_j] as {k: coefficient}."""
        key = (i, j)
        hit = self._bracket_cache.get(key)
        if hit is not None:
            return hit
        p = self.p
        if i == self.euler or j == self.euler:
            if i == j:
                out = {}
            elif i == self.euler:
                out = {j: self.degree[j] % p} if self.degree[j] % p else {}
            else:
                out = {i: (-self.degree[i]) % p} if self.degree[i] % p else {}
        else:
            f = SuperPolynomial.monomial(self.shape, self.potentials[i])
            g = SuperPolynomial.monomial(self.shape, self.potentials[j])
            h = buttin_bracket(f, g)
            out = {}
            for r, c in h.terms.items():
                k = self.index.get(r)
                if k is not None:
                    out[k] = c
        self._bracket_cache[key] = out
        return out

    def bracket_vec(self, x, y):
        """Bracket of two sparse combinations {index: coef}."""
        p = self.p
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket(i, j).items():
                    out[k] = (out.get(k, 0) + a * b * c) % p
        return {k: c for k, c in out.items() if c}

    def brackets_sparse(self):
        """All nonzero structure constants as (i, j, k, c) with i <= j."""
        out = []
        for i in range(self.dim):
            for j in range(i, self.dim):
                for k, c in sorted(self.bracket(i, j).items()):
                    out.append((i, j, k, c))
        return out

    # identification of vector fields with algebra elements

    def _build_solver(self):
        keys = {}
        cols = []
        for i in range(self.dim):
            vf = self.vector_field(i)
            for key in vf.terms:
                keys.setdefault(key, len(keys))
            cols.append(vf.terms)
        mat = np.zeros((len(keys), self.dim), dtype=np.int64)
        for i, terms in enumerate(cols):
            for key, c in terms.items():
                mat[keys[key], i] = c
        self._solver = (keys, mat)

    def to_element(self, vf):
        """Express a vector field in the basis; raises if it is not in the span."""
        from .field_linalg import solve

        if self._solver is None:
            self._build_solver()
        keys, mat = self._solver
        rhs = np.zeros(mat.shape[0], dtype=np.int64)
        for key, c in vf.terms.items():
            if key not in keys:
                raise ValueError("vector field not in the algebra span")
            rhs[keys[key]] = c
        x = solve(mat, rhs, self.p)
        if x is None:
            raise ValueError("vector field not in the algebra span")
        return {int(i): int(c) for i, c in enumerate(x) if c}

    def element_field(self, x):
        out = VectorField(self.shape)
        for i, c in x.items():
            out = out + self.vector_field(i).scale(c)
        return out

    # restricted structure

    def ppower(self, i):
        """x^[p] for an even basis element, as {index: coefficient}."""
        if self.parity[i] != 0:
            raise ValueError("p-mapping is defined on even elements only")
        hit = self._ppower_cache.get(i)
        if hit is not None:
            return hit
        D = self.vector_field(i)
        comps = {}
        for k in range(self.shape.nvars):
            g = SuperPolynomial.generator(self.shape, k + 1)
            for _ in range(self.p):
                g = apply(D, g)
                if not g:
                    break
            if g:
                comps[k] = g
        out = self.to_element(VectorField.from_components(self.shape, comps))
        self._ppower_cache[i] = out
        return out

    def even_basis(self):
        return [i for i in range(self.dim) if self.parity[i] == 0]


_TABLES = {}


def build_algebra(which, n, p):
    """Cached AlgebraTable for (which, n, p) with N = 1."""
    key = (which, n, p)
    if key not in _TABLES:
        _TABLES[key] = AlgebraTable(which, n, p)
    return _TABLES[key]


def de_rank(n, p):
    """Rank of De on the monomial basis of O(n) (independent oracle for dim le(n))."""
    shape = hamiltonian_shape(n, p)
    monos = shape.monomials()
    keys = {}
    rows = []
    for r in monos:
        vf = de(SuperPolynomial.monomial(shape, r))
        row = {}
        for key, c in vf.terms.items():
            row[keys.setdefault(key, len(keys))] = c
        rows.append(row)
    mat = np.zeros((len(monos), max(len(keys), 1)), dtype=np.int64)
    for a, row in enumerate(rows):
        for b, c in row.items():
            mat[a, b] = c
    return len(rref(mat, p)[1])


# -- identity checks ----------------------------------------------------------


def structure_tensor(alg):
    """Dense C[i, j, k] with [b_i, b_j] = sum_k C[i, j, k] b_k."""
    d = alg.dim
    C = np.zeros((d, d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            for k, c in alg.bracket(i, j).items():
                C[i, j, k] = c
    return C


def anticommutativity_failures(alg, C=None):
    """Pairs with [a, b] != -(-1)^{|a||b|} [b, a]."""
    C = structure_tensor(alg) if C is None else C
    par = np.asarray(alg.parity)
    sign = np.where(np.outer(par, par) % 2 == 1, -1, 1)
    lhs = C % alg.p
    rhs = (-sign[:, :, None] * C.transpose(1, 0, 2)) % alg.p
    bad = np.argwhere((lhs != rhs).any(axis=2))
    return [tuple(map(int, ij)) for ij in bad]


def jacobi_failures(alg, C=None):
    """Triples violating [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]."""
    C = structure_tensor(alg) if C is None else C
    p = alg.p
    par = np.asarray(alg.parity)
    d = alg.dim
    # entries are < p and sums have < d terms, so float64 products are exact
    Cf = C.astype(np.float64)
    flat = Cf.reshape(d * d, d)
    right = Cf.reshape(d, d * d)
    swapped = Cf.transpose(1, 0, 2).reshape(d, d * d)
    bad = []
    for a in range(d):
        # [a,[b,c]] = sum_k C[b,c,k] C[a,k,m]
        t1 = flat @ Cf[a]
        # [[a,b],c] = sum_k C[a,b,k] C[k,c,m]
        t2 = (Cf[a] @ right).reshape(d * d, d)
        # [b,[a,c]] = sum_k C[a,c,k] C[b,k,m], computed as [c, b, m]
        t3 = (Cf[a] @ swapped).reshape(d, d, d).transpose(1, 0, 2)
        s = np.where((par[a] * par) % 2 == 1, -1.0, 1.0)
        t3 = (t3 * s[:, None, None]).reshape(d * d, d)
        diff = np.rint(t1 - t2 - t3).astype(np.int64) % p
        for bc in np.flatnonzero(diff.any(axis=1)):
            bad.append((a, int(bc) // d, int(bc) % d))
    return bad


def random_polynomial(shape, rng, terms=3):
    monos = shape.monomials()
    picks = {monos[rng.randrange(len(monos))]: rng.randrange(1, shape.p) for _ in range(terms)}
    return SuperPolynomial(shape, picks)


def homogeneous_parts(f):
    return [g for g in f.parts_by_parity() if g]


def de_homomorphism_failures(n, p, samples, seed):
    """Sampled pairs with [De_f, De_g] != De_{f, g}_B (f, g parity-homogeneous)."""
    import random

    rng = random.Random(seed)
    shape = hamiltonian_shape(n, p)
    bad = []
    for _ in range(samples):
        f = random_polynomial(shape, rng)
        g = random_polynomial(shape, rng)
        f = rng.choice(homogeneous_parts(f))
        g = rng.choice(homogeneous_parts(g))
        if super_commutator(de(f), de(g)) != de(buttin_bracket(f, g)):
            bad.append((format_polynomial(f), format_polynomial(g)))
    return bad
