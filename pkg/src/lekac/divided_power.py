"""The divided power superalgebra O(m, N | n) over F_p.

Monomials are exponent tuples ``r`` of length m+n: slots ``0..m-1`` are even
(divided powers, ``r_i < p**N_i``), slots ``m..m+n-1`` are odd (``r_i`` in
{0, 1}).  Odd generators in a monomial are ordered by increasing slot, so
``x_{m+1} * x_{m+2}`` is the monomial ``x^(e_{m+1} + e_{m+2})`` itself.

Indices in the public API (``partial``, the text syntax) are 1-based, as in
the usual notation; tuples are 0-based internally.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .field_linalg import binom_mod_p, is_prime


@dataclass(frozen=True)
class Shape:
    m: int
    n: int
    p: int
    N: tuple = None

    def __post_init__(self):
        if self.N is None:
            object.__setattr__(self, "N", (1,) * self.m)
        if len(self.N) != self.m:
            raise ValueError("N must have length m")
        if not is_prime(self.p) or self.p <= 3:
            raise ValueError(f"p={self.p} must be a prime > 3")

    @property
    def nvars(self):
        return self.m + self.n

    def bounds(self):
        return tuple(self.p**k for k in self.N) + (2,) * self.n

    def is_odd_slot(self, i):
        return i >= self.m

    def valid(self, r):
        return len(r) == self.nvars and all(0 <= a < b for a, b in zip(r, self.bounds()))

    def monomials(self):
        """All basis exponents, lexicographic with even slots first."""
        return [tuple(r) for r in itertools.product(*(range(b) for b in self.bounds()))]

    def dim(self):
        out = 1
        for b in self.bounds():
            out *= b
        return out


def monomial_parity(r, shape):
    return sum(r[shape.m:]) % 2


def monomial_degree(r):
    return sum(r)


@lru_cache(maxsize=None)
def _mono_mul(r, s, shape):
    p = shape.p
    m = shape.m
    coef = 1
    for i in range(m):
        if r[i] and s[i]:
            coef = coef * binom_mod_p(r[i] + s[i], r[i], p) % p
            if coef == 0:
                return 0, None
    # odd part: move each odd generator of s left past the higher-indexed
    # odd generators of r
    sign = 0
    ones_r = 0
    for i in range(shape.nvars - 1, m - 1, -1):
        if s[i]:
            if r[i]:
                return 0, None
            sign += ones_r
        if r[i]:
            ones_r += 1
    t = tuple(a + b for a, b in zip(r, s))
    if sign % 2:
        coef = (-coef) % p
    return coef, t


def mono_mul(r, s, shape):
    """Product of two monomials: (coefficient, exponent) or (0, None)."""
    return _mono_mul(r, s, shape)


@lru_cache(maxsize=None)
def _mono_partial(i, r, shape):
    if r[i] == 0:
        return 0, None
    t = r[:i] + (r[i] - 1,) + r[i + 1:]
    if i < shape.m:
        return 1, t
    before = sum(r[shape.m:i])
    return (shape.p - 1 if before % 2 else 1), t


def mono_partial(i, r, shape):
    """``d_i`` (0-based slot) applied to x^(r): (coefficient, exponent) or (0, None)."""
    return _mono_partial(i, r, shape)


class SuperPolynomial:
    """A finite F_p-combination of divided-power monomials."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape, terms=None):
        self.shape = shape
        p = shape.p
        clean = {}
        if terms:
            for r, c in terms.items():
                c %= p
                if c:
                    clean[tuple(r)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, shape, r, coef=1):
        return cls(shape, {tuple(r): coef})

    @classmethod
    def one(cls, shape):
        return cls.monomial(shape, (0,) * shape.nvars)

    @classmethod
    def generator(cls, shape, i):
        """x_i with 1-based index i."""
        r = [0] * shape.nvars
        r[i - 1] = 1
        return cls.monomial(shape, r)

    def _check(self, other):
        if not isinstance(other, SuperPolynomial) or other.shape != self.shape:
            raise ValueError("shape mismatch")

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for r, c in other.terms.items():
            out[r] = out.get(r, 0) + c
        return SuperPolynomial(self.shape, out)

    def __neg__(self):
        return SuperPolynomial(self.shape, {r: -c for r, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return SuperPolynomial(self.shape, {r: c * v for r, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        return multiply(self, other)

    __rmul__ = scale

    def __eq__(self, other):
        return isinstance(other, SuperPolynomial) and self.shape == other.shape and self.terms == other.terms

    def __hash__(self):
        return hash((self.shape, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def parts_by_parity(self):
        """Split into (even part, odd part)."""
        even, odd = {}, {}
        for r, c in self.terms.items():
            (odd if monomial_parity(r, self.shape) else even)[r] = c
        return SuperPolynomial(self.shape, even), SuperPolynomial(self.shape, odd)

    def parity(self):
        """Parity of a homogeneous nonzero element; raises on mixed input."""
        ps = {monomial_parity(r, self.shape) for r in self.terms}
        if len(ps) != 1:
            raise ValueError("not Z2-homogeneous")
        return ps.pop()

    def drop_constant(self):
        zero = (0,) * self.shape.nvars
        return SuperPolynomial(self.shape, {r: c for r, c in self.terms.items() if r != zero})

    def __repr__(self):
        return f"SuperPolynomial({format_polynomial(self)!r})"


def multiply(f, g):
    f._check(g)
    shape = f.shape
    p = shape.p
    out = {}
    for r, a in f.terms.items():
        for s, b in g.terms.items():
            c, t = _mono_mul(r, s, shape)
            if c:
                out[t] = (out.get(t, 0) + a * b * c) % p
    return SuperPolynomial(shape, out)


def partial(i, f):
    """Distinguished partial derivative d_i (1-based index)."""
    shape = f.shape
    if not 1 <= i <= shape.nvars:
        raise IndexError(f"derivative index {i} out of range 1..{shape.nvars}")
    out = {}
    for r, a in f.terms.items():
        c, t = _mono_partial(i - 1, r, shape)
        if c:
            out[t] = (out.get(t, 0) + a * c) % shape.p
    return SuperPolynomial(shape, out)


# -- text syntax ------------------------------------------------------------

_FACTOR = re.compile(r"^x(\d+)(?:\^\((\d+)\))?$")


def format_monomial(r):
    parts = []
    for i, e in enumerate(r, start=1):
        if e == 1:
            parts.append(f"x{i}")
        elif e > 1:
            parts.append(f"x{i}^({e})")
    return "*".join(parts) if parts else "1"


def parse_monomial(text, shape):
    text = text.strip()
    r = [0] * shape.nvars
    if text == "1":
        return tuple(r)
    for factor in text.split("*"):
        m = _FACTOR.match(factor.strip())
        if not m:
            raise ValueError(f"bad monomial factor {factor!r}")
        i = int(m.group(1))
        e = int(m.group(2) or 1)
        if not 1 <= i <= shape.nvars or r[i - 1]:
            raise ValueError(f"bad or repeated variable index in {text!r}")
        r[i - 1] = e
    r = tuple(r)
    if not shape.valid(r):
        raise ValueError(f"exponent out of range in {text!r}")
    return r


def format_polynomial(f):
    if not f.terms:
        return "0"
    items = sorted(f.terms.items())
    return " + ".join(format_monomial(r) if c == 1 else f"{c}*{format_monomial(r)}" for r, c in items)


def basis_dim(shape):
    return shape.dim()
