"""Automorphisms of O(n) from CSP(n), the induced automorphisms of lebar(n),
and the torus action on induced modules.

A CSP element is stored by its even block ``A`` and odd block ``B``, with
``phi(x_i) = sum_j A[j, i] x_j`` for i <= n and ``phi(x_{n+i}) = sum_j B[j, i] x_{n+j}``.
It is symplectic when ``A^T B = 1`` (this is ``M^T J M = J`` for
``M = diag(A, B)`` and ``J`` the form pairing x_i with x_{i'}).

``f_phi(D) = phi o D o phi^{-1}``.  With this order the scalar, torus and
symplectic identities below hold as stated; the reverse order inverts every
eigenvalue.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .divided_power import SuperPolynomial
from .field_linalg import inv_mod, matmul, rank, solve
from .hamiltonian import LEBAR, VectorField, build_algebra, de, euler_field, operator_matrix


class NotInTorusError(ValueError):
    pass


@dataclass(frozen=True)
class CSPElement:
    A: tuple  # n x n, row-major, even block
    B: tuple  # n x n, odd block
    p: int
    kind: str = "general"  # "scalar" | "torus" | "symplectic" | "general"
    torus: tuple | None = None  # (t, t_1..t_n) when kind == "torus"

    @property
    def n(self):
        return len(self.A)

    def matrices(self):
        return np.asarray(self.A, dtype=np.int64), np.asarray(self.B, dtype=np.int64)

    def is_symplectic(self):
        A, B = self.matrices()
        return np.array_equal(matmul(A.T, B, self.p), np.eye(self.n, dtype=np.int64))

    def is_invertible(self):
        A, B = self.matrices()
        return rank(A, self.p) == self.n and rank(B, self.p) == self.n

    def compose(self, other):
        """self o other."""
        A1, B1 = self.matrices()
        A2, B2 = other.matrices()
        return csp_from_blocks(matmul(A1, A2, self.p), matmul(B1, B2, self.p), self.p)


def csp_from_blocks(A, B, p, kind="general", torus=None):
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    return CSPElement(tuple(map(tuple, A.tolist())), tuple(map(tuple, B.tolist())), p, kind, torus)


def scalar_element(n, p, t):
    t %= p
    if not t:
        raise ValueError("t must be nonzero")
    return csp_from_blocks(t * np.eye(n, dtype=np.int64), t * np.eye(n, dtype=np.int64), p, "scalar", (t,) + (1,) * n)


def torus_element(t, ts, p):
    """diag(t t_1, .., t t_n, t t_1^{-1}, .., t t_n^{-1})."""
    n = len(ts)
    if t % p == 0 or any(s % p == 0 for s in ts):
        raise ValueError("torus parameters must be nonzero")
    A = np.diag([t * s % p for s in ts])
    B = np.diag([t * inv_mod(s, p) % p for s in ts])
    return csp_from_blocks(A, B, p, "torus", (t % p,) + tuple(s % p for s in ts))


def _inverse(A, p):
    n = A.shape[0]
    cols = [solve(A, np.eye(n, dtype=np.int64)[:, j], p) for j in range(n)]
    if any(c is None for c in cols):
        raise ValueError("singular block")
    return np.stack(cols, axis=1) % p


def random_symplectic(n, p, rng, max_factors=20):
    """Product of elementary transvections and a diagonal, paired with A^{-T}."""
    A = np.eye(n, dtype=np.int64)
    for _ in range(rng.randint(0, max_factors)):
        if n > 1:
            i, j = rng.sample(range(n), 2)
            E = np.eye(n, dtype=np.int64)
            E[i, j] = rng.randrange(1, p)
        else:
            E = np.eye(n, dtype=np.int64)
        A = matmul(E, A, p)
    D = np.diag([rng.randrange(1, p) for _ in range(n)])
    A = matmul(D, A, p)
    B = _inverse(A, p).T.copy()
    phi = csp_from_blocks(A, B, p, "symplectic")
    if not phi.is_symplectic():
        raise AssertionError("sampled element is not symplectic")
    return phi


def random_csp(n, p, rng):
    """(scalar, symplectic, product)."""
    s = scalar_element(n, p, rng.randrange(1, p))
    y = random_symplectic(n, p, rng)
    return s, y, s.compose(y)


# -- action on O(n) ----------------------------------------------------------


def _linear_image(phi, i, shape):
    n, p = phi.n, phi.p
    A, B = phi.matrices()
    if i < n:
        return {j: int(A[j, i]) for j in range(n) if A[j, i]}
    return {n + j: int(B[j, i - n]) for j in range(n) if B[j, i - n]}


def _divided_power_of_linear(coeffs, k, shape):
    """(sum_j a_j x_j)^(k) for even variables: sum over |s| = k of prod a_j^{s_j} x^(s)."""
    p = shape.p
    slots = sorted(coeffs)
    out = {}
    for split in itertools.product(range(k + 1), repeat=len(slots)):
        if sum(split) != k:
            continue
        r = [0] * shape.nvars
        c = 1
        for j, e in zip(slots, split):
            r[j] = e
            c = c * pow(coeffs[j], e, p) % p
        r = tuple(r)
        if shape.valid(r):
            out[r] = (out.get(r, 0) + c) % p
    return SuperPolynomial(shape, out)


def image_of_monomial(phi, r, shape):
    """phi(x^(r)): product over slots, in slot order, of phi(x_i)^(r_i)."""
    factors = []
    for i, e in enumerate(r):
        if not e:
            continue
        lin = _linear_image(phi, i, shape)
        if shape.is_odd_slot(i):
            factors.append(SuperPolynomial(shape, {_unit(shape, j): c for j, c in lin.items()}))
        else:
            factors.append(_divided_power_of_linear(lin, e, shape))
    return reduce(lambda f, g: f * g, factors, SuperPolynomial.one(shape))


def _unit(shape, j):
    r = [0] * shape.nvars
    r[j] = 1
    return tuple(r)


def extend_to_algebra(phi, shape):
    """Matrix of the extension of phi to O(n) in the monomial basis (columns = inputs)."""
    if not phi.is_invertible():
        raise ValueError("singular block")
    monos = shape.monomials()
    index = {r: k for k, r in enumerate(monos)}
    M = np.zeros((len(monos), len(monos)), dtype=np.int64)
    for col, r in enumerate(monos):
        for s, c in image_of_monomial(phi, r, shape).terms.items():
            M[index[s], col] = c
    return M


def apply_to_polynomial(phi, f):
    out = SuperPolynomial(f.shape)
    for r, c in f.terms.items():
        out = out + image_of_monomial(phi, r, f.shape).scale(c)
    return out


class Conjugator:
    """f_phi on vector fields, with phi and phi^{-1} tabulated on O(n)."""

    def __init__(self, phi, shape):
        self.phi = phi
        self.shape = shape
        self.monos = shape.monomials()
        self.index = {r: k for k, r in enumerate(self.monos)}
        self.M = extend_to_algebra(phi, shape)
        A, B = phi.matrices()
        inv = csp_from_blocks(_inverse(A, phi.p), _inverse(B, phi.p), phi.p)
        self.Minv = extend_to_algebra(inv, shape)

    def _poly(self, vec):
        return SuperPolynomial(self.shape, {self.monos[k]: int(c) for k, c in enumerate(vec) if c})

    def __call__(self, D):
        """phi o D o phi^{-1}, as a vector field (a derivation is fixed by the generators)."""
        p = self.shape.p
        Dm = operator_matrix(D, self.shape).toarray() % p
        T = matmul(self.M, matmul(Dm, self.Minv, p), p)
        comps = {}
        for k in range(self.shape.nvars):
            col = T[:, self.index[_unit(self.shape, k)]]
            if col.any():
                comps[k] = self._poly(col)
        return VectorField.from_components(self.shape, comps)

    def operator(self, D):
        p = self.shape.p
        Dm = operator_matrix(D, self.shape).toarray() % p
        return matmul(self.M, matmul(Dm, self.Minv, p), p)


def conjugate(phi, D):
    return Conjugator(phi, D.shape)(D)


# -- identities --------------------------------------------------------------


def check_identities(alg, phis, pairs):
    """Verify the scalar / symplectic identities and the automorphism property.

    ``phis`` is a list of (scalar, symplectic, product) triples and ``pairs``
    a list of basis-index pairs, one per triple.  Returns {name: [failures]}.
    """
    shape = alg.shape
    p = alg.p
    E = euler_field(shape)
    fails = {"scalar-euler": [], "scalar-de": [], "symplectic-euler": [], "symplectic-de": [], "automorphism": [], "derivation": []}
    for (s, y, phi), (a, b) in zip(phis, pairs):
        cs, cy, cphi = Conjugator(s, shape), Conjugator(y, shape), Conjugator(phi, shape)
        t = s.torus[0]
        if cs(E) != E:
            fails["scalar-euler"].append((s, "E"))
        if cy(E) != E:
            fails["symplectic-euler"].append((y, "E"))
        for i in (a, b):
            r = alg.potentials[i]
            if r is None:
                continue
            f = SuperPolynomial.monomial(shape, r)
            D = de(f)
            if cs(D) != D.scale(pow(t, (sum(r) - 2) % (p - 1), p)):
                fails["scalar-de"].append((s, alg.label(i)))
            if cy(D) != de(apply_to_polynomial(y, f)):
                fails["symplectic-de"].append((y, alg.label(i)))
        Da, Db = alg.vector_field(a), alg.vector_field(b)
        # the conjugated operator is again a derivation given by its generator values
        if not np.array_equal(cphi.operator(Da), operator_matrix(cphi(Da), shape).toarray() % p):
            fails["derivation"].append((phi, alg.label(a)))
        try:
            fa = alg.to_element(cphi(Da))
            fb = alg.to_element(cphi(Db))
            fab = alg.to_element(cphi(alg.element_field(alg.bracket(a, b))))
        except ValueError:
            fails["automorphism"].append((phi, alg.label(a), alg.label(b), "left the algebra"))
            continue
        if alg.bracket_vec(fa, fb) != fab:
            fails["automorphism"].append((phi, alg.label(a), alg.label(b)))
    return fails


def sample_checks(n, p, samples, seed):
    alg = build_algebra(LEBAR, n, p)
    rng = random.Random(seed)
    phis = [random_csp(n, p, rng) for _ in range(samples)]
    pairs = [(rng.randrange(alg.dim), rng.randrange(alg.dim)) for _ in range(samples)]
    return check_identities(alg, phis, pairs)


# -- characters and the torus action -----------------------------------------


@dataclass(frozen=True)
class Character:
    """sum_i c_i Lambda_i, i = 1..n+1."""

    coeffs: tuple

    def __call__(self, torus, p):
        t, ts = torus[0], torus[1:]
        val = pow(t, self.coeffs[-1] % (p - 1), p)
        for c, s in zip(self.coeffs[:-1], ts):
            # Lambda_i(tbar) = t_i^{-1}
            val = val * pow(inv_mod(s, p), c % (p - 1), p) % p
        return val

    def reduce(self, p):
        return tuple(c % p for c in self.coeffs)

    def __add__(self, other):
        return Character(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))


def basis_character(alg, i):
    """Integral character of the torus on basis element i (the root lift)."""
    return Character(tuple(alg.root[i]))


def torus_eigenvalue(alg, phi, i, conj=None):
    """Eigenvalue of f_phi on basis element i, computed by conjugation."""
    if phi.kind not in ("torus", "scalar"):
        raise NotInTorusError("only torus elements act diagonally")
    conj = conj or Conjugator(phi, alg.shape)
    img = alg.to_element(conj(alg.vector_field(i)))
    if set(img) - {i}:
        raise AssertionError(f"{alg.label(i)} is not an eigenvector")
    return img.get(i, 0)


def cartan_weight(alg, i):
    """h-bar weight of basis element i from brackets with the Cartan basis."""
    coords = []
    for h in alg.cartan():
        out = alg.bracket(h, i)
        coords.append(out.get(i, 0) % alg.p)
        if set(out) - {i}:
            raise AssertionError("basis element is not an h-eigenvector")
    return tuple(coords)


def check_weight_reduction(alg, tori):
    """Torus eigenvalues match the integral character, and the character reduces to the h-bar weight."""
    fails = []
    conjs = [Conjugator(t, alg.shape) for t in tori]
    for i in range(alg.dim):
        ch = basis_character(alg, i)
        for t, c in zip(tori, conjs):
            if torus_eigenvalue(alg, t, i, c) != ch(t.torus, alg.p):
                fails.append((alg.label(i), t.torus, "eigenvalue"))
        if ch.reduce(alg.p) != cartan_weight(alg, i):
            fails.append((alg.label(i), "reduction"))
    return fails


def ad_action(alg, phi, word):
    """Ad(tbar) on a PBW monomial (tuple of basis indices): a scalar multiple of it."""
    if phi.kind not in ("torus", "scalar"):
        raise NotInTorusError("Ad is implemented for torus elements only")
    c = 1
    for i in word:
        c = c * basis_character(alg, i)(phi.torus, alg.p) % alg.p
    return c, tuple(word)


def check_ad_ppower(alg, phi):
    """Ad(tbar)(x^[p]) == Ad(tbar)(x)^p for every even basis element x."""
    p = alg.p
    fails = []
    for x in alg.even_basis():
        cx, _ = ad_action(alg, phi, (x,))
        for k in alg.ppower(x):
            ck, _ = ad_action(alg, phi, (k,))
            if ck != pow(cx, p, p):
                fails.append((alg.label(x), alg.label(k)))
    return fails


def lift_weight(lam):
    """Integral lift of lam with residues in 0..p-1, as a Character."""
    return Character(tuple(lam.coords()))


def module_character(V, idx):
    return lift_weight(V.lam) + Character(tuple(int(v) for v in V.offsets[idx]))


def j_weights(V):
    """Occupied J-degrees (Euler grading, top normalized to 0)."""
    return sorted({int(v) for v in V.offsets[:, -1]})


def check_uT_structure(V, samples=20, seed=0):
    """t(a.v) = Ad(t)(a) t(v) on sampled (t, a, v), and h acts by the stored weights."""
    alg = V.alg
    p = alg.p
    n = alg.n
    rng = random.Random(seed)
    fails = []
    for _ in range(samples):
        t = torus_element(rng.randrange(1, p), [rng.randrange(1, p) for _ in range(n)], p)
        a = rng.randrange(alg.dim)
        v = rng.randrange(V.dim)
        col = V.action[a][:, [v]]
        col = col.toarray().ravel() if hasattr(col, "toarray") else np.asarray(col).ravel()
        lhs_scale = None
        ad, _ = ad_action(alg, t, (a,))
        rhs = ad * module_character(V, v)(t.torus, p) % p
        for w in np.nonzero(col % p)[0]:
            lhs_scale = module_character(V, int(w))(t.torus, p)
            if lhs_scale != rhs:
                fails.append(("equivariance", t.torus, alg.label(a), int(v), int(w)))
    coords_count = len(V.lam.coords())
    for k, h in enumerate(alg.cartan()[:coords_count]):
        m = V.action[h]
        m = m.toarray() if hasattr(m, "toarray") else np.asarray(m)
        m = m % p
        diag = np.diag(m)
        if np.count_nonzero(m - np.diag(diag)):
            fails.append(("h not diagonal", alg.label(h)))
            continue
        for idx in range(V.dim):
            if diag[idx] != V.weight(idx).coords()[k] % p:
                fails.append(("weight label", alg.label(h), idx))
                break
    return fails
