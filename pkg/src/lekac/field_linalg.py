"""Exact linear algebra over the prime field F_p.

Vectors and matrices are int64 numpy arrays with entries in ``[0, p)``.
Operators may also be ``scipy.sparse`` matrices; anything supporting ``@``
against a dense 2-d array works.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp

from ._kernels import rref_inplace

SUPPORTED_PRIMES = (5, 7, 11)
SUPPORTED_RANKS = (1, 2, 3)
DENSE_CUTOFF = 64


class CapacityError(ValueError):
    """Raised when a request falls outside the supported (n, p) range or size caps."""


def check_capacity(n, p):
    if os.environ.get("LEKAC_NO_CAPACITY_CHECK"):
        return
    if p not in SUPPORTED_PRIMES:
        raise CapacityError(f"p={p} not in supported primes {SUPPORTED_PRIMES}")
    if n not in SUPPORTED_RANKS:
        raise CapacityError(f"n={n} not in supported ranks {SUPPORTED_RANKS}")


def is_prime(p):
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def inv_mod(a, p):
    a %= p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


def binom_mod_p(a, b, p):
    """C(a, b) mod p by Lucas' theorem."""
    if b < 0 or a < 0 or b > a:
        return 0
    out = 1
    while a or b:
        ad, bd = a % p, b % p
        if bd > ad:
            return 0
        num = den = 1
        for k in range(bd):
            num = num * (ad - k) % p
            den = den * (k + 1) % p
        out = out * num * pow(den, p - 2, p) % p
        a //= p
        b //= p
    return out


def as_operator(mat, p):
    """Normalise a matrix mod p; dense below ``DENSE_CUTOFF``, CSR above."""
    if sp.issparse(mat):
        m = sp.csr_matrix(mat, dtype=np.int64)
        m.data %= p
        m.eliminate_zeros()
        if m.shape[0] < DENSE_CUTOFF:
            return m.toarray()
        return m
    m = np.asarray(mat, dtype=np.int64) % p
    if m.shape[0] >= DENSE_CUTOFF:
        return sp.csr_matrix(m)
    return m


def to_dense(mat):
    return mat.toarray() if sp.issparse(mat) else np.asarray(mat)


def matmul(a, b, p):
    out = a @ b
    if sp.issparse(out):
        out = out.toarray()
    return np.asarray(out, dtype=np.int64) % p


def rref(mat, p):
    """Return (R, pivots): reduced echelon form with zero rows dropped."""
    a = np.array(mat, dtype=np.int64, copy=True) % p
    if a.ndim == 1:
        a = a.reshape(1, -1)
    piv = rref_inplace(a, p)
    return a[: len(piv)].copy(), np.asarray(piv, dtype=np.int64)


def rank(mat, p):
    return len(rref(mat, p)[1])


def nullspace(mat, p):
    """Basis (as rows) of {v : mat @ v = 0}."""
    mat = np.asarray(mat, dtype=np.int64)
    ncols = mat.shape[1]
    if mat.shape[0] == 0:
        return np.eye(ncols, dtype=np.int64)
    r, piv = rref(mat, p)
    free = [c for c in range(ncols) if c not in set(piv.tolist())]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        basis[k, piv] = (-r[:, f]) % p
    return basis


def solve(mat, rhs, p):
    """One solution x of mat @ x = rhs, or None when inconsistent."""
    mat = np.asarray(mat, dtype=np.int64)
    rhs = np.asarray(rhs, dtype=np.int64).reshape(-1, 1)
    aug = np.hstack([mat, rhs])
    r, piv = rref(aug, p)
    ncols = mat.shape[1]
    if len(piv) and piv[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    x[piv] = r[:, ncols]
    return x % p


class Subspace:
    """A subspace of F_p^d held as a reduced echelon basis."""

    __slots__ = ("ambient_dim", "p", "basis", "pivots")

    def __init__(self, ambient_dim, p, generators=None):
        self.ambient_dim = int(ambient_dim)
        self.p = p
        if generators is None or len(generators) == 0:
            self.basis = np.zeros((0, self.ambient_dim), dtype=np.int64)
            self.pivots = np.zeros(0, dtype=np.int64)
        else:
            g = np.asarray(generators, dtype=np.int64).reshape(-1, self.ambient_dim)
            self.basis, self.pivots = rref(g, p)

    @classmethod
    def full(cls, d, p):
        return cls(d, p, np.eye(d, dtype=np.int64))

    @property
    def dim(self):
        return self.basis.shape[0]

    def reduce(self, vecs):
        """Residues of ``vecs`` (rows) modulo the subspace."""
        v = np.asarray(vecs, dtype=np.int64).reshape(-1, self.ambient_dim) % self.p
        if self.dim == 0:
            return v
        return (v - v[:, self.pivots] @ self.basis) % self.p

    def contains(self, vec):
        return not self.reduce(vec).any()

    def __contains__(self, vec):
        return self.contains(vec)

    def extend(self, vecs):
        vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, self.ambient_dim)
        return Subspace(self.ambient_dim, self.p, np.vstack([self.basis, vecs]))

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis.shape == other.basis.shape
            and bool(np.array_equal(self.basis, other.basis))
        )

    def __le__(self, other):
        return not other.reduce(self.basis).any()

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, p={self.p})"


def closure(seed, operators):
    """Smallest subspace containing ``seed`` and stable under every operator."""
    p = seed.p
    d = seed.ambient_dim
    current = seed
    frontier = seed.basis
    while frontier.shape[0]:
        images = [matmul(op, frontier.T, p).T for op in operators]
        if not images:
            break
        cand = current.reduce(np.vstack(images))
        cand = cand[cand.any(axis=1)]
        if cand.shape[0] == 0:
            break
        new, _ = rref(cand, p)
        current = Subspace(d, p, np.vstack([current.basis, new]))
        frontier = new
    return current


def simultaneous_kernel(operators, dim, p):
    """Joint kernel of a list of square operators on F_p^dim."""
    if not operators:
        return Subspace.full(dim, p)
    stacked = np.vstack([to_dense(op) for op in operators]) % p
    return Subspace(dim, p, nullspace(stacked, p))
