"""Restricted induced modules: Verma modules, Kac modules and their simple heads.

Every module built here is induced, ``u(g) (x)_{u(b)} W``, so it has a PBW
basis ``word (x) w`` where ``word`` is an ordered monomial in a fixed basis
of the complement ``n-`` of ``b``.  Straightening ``x . word`` is done once
per algebra and reused for every weight, because the result has the form
``sum c * word' * beta`` with ``beta`` a single basis element of ``b`` (or
the identity); only the action of ``beta`` on ``W`` depends on the weight.

Each basis vector carries an integral torus offset in Z^{n+1} (eps part,
then J-degree) relative to the generating vector, so its h-bar weight is
``lambda + offset (mod p)``.
"""

from __future__ import annotations

import sys
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .field_linalg import (
    CapacityError,
    Subspace,
    as_operator,
    closure,
    inv_mod,
    matmul,
    nullspace,
    rref,
    to_dense,
)
from .hamiltonian import LEBAR, AlgebraTable, Weight

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

LINE_CAP = 6


class NonuniquenessError(RuntimeError):
    """A highest weight vector or maximal submodule was not unique."""


# -- PBW straightening -----------------------------------------------------------


class Straightener:
    """Normal ordering in u(g) relative to a splitting g = n- (+) b.

    ``g`` is a list of basis indices of ``alg`` spanning a subalgebra; ``nminus``
    lists the lowering elements (ordered odd first, then even, each ascending).
    Words are exponent tuples over ``nminus``.
    """

    def __init__(self, alg: AlgebraTable, g, nminus):
        self.alg = alg
        self.p = alg.p
        self.g = list(g)
        gs = set(self.g)
        nm = [i for i in nminus]
        nm.sort(key=lambda i: (0 if alg.parity[i] else 1, i))
        self.nminus = nm
        self.pos = {i: k for k, i in enumerate(nm)}
        self.b = [i for i in self.g if i not in self.pos]
        for i in self.g:
            for j in self.g:
                if not set(alg.bracket(i, j)) <= gs:
                    raise ValueError("g is not closed under the bracket")
        self._mul = {}
        self._str = {}

    def word_parity(self, word):
        return sum(e for k, e in enumerate(word) if self.alg.parity[self.nminus[k]]) % 2

    def words(self):
        """All PBW words: exponents < p for even letters, <= 1 for odd."""
        import itertools

        ranges = [range(2) if self.alg.parity[i] else range(self.p) for i in self.nminus]
        return [tuple(w) for w in itertools.product(*ranges)]

    def _add(self, acc, key, c):
        v = (acc.get(key, 0) + c) % self.p
        if v:
            acc[key] = v
        else:
            acc.pop(key, None)

    def mul_left(self, k, word):
        """Letter ``nminus[k]`` times a word, as {word: coef}."""
        key = (k, word)
        hit = self._mul.get(key)
        if hit is not None:
            return hit
        alg, p = self.alg, self.p
        y = self.nminus[k]
        first = next((j for j, e in enumerate(word) if e), None)
        out = {}
        if first is None or k < first:
            w = list(word)
            w[k] = 1
            out[tuple(w)] = 1
        elif k == first:
            rest = list(word)
            if alg.parity[y]:
                # y*y = [y, y]/2 for odd y
                rest[k] = 0
                rest = tuple(rest)
                half = inv_mod(2, p)
                for z, c in alg.bracket(y, y).items():
                    for w, d in self.mul_left(self.pos[z], rest).items():
                        self._add(out, w, half * c * d)
            elif word[k] + 1 < p:
                rest[k] += 1
                out[tuple(rest)] = 1
            else:
                rest[k] = 0
                rest = tuple(rest)
                for z, c in alg.ppower(y).items():
                    if z not in self.pos:
                        raise ValueError("p-th power leaves n-")
                    for w, d in self.mul_left(self.pos[z], rest).items():
                        self._add(out, w, c * d)
        else:
            f = self.nminus[first]
            rest = list(word)
            rest[first] -= 1
            rest = tuple(rest)
            sign = -1 if alg.parity[y] and alg.parity[f] else 1
            for w, c in self.mul_left(k, rest).items():
                for w2, d in self.mul_left(first, w).items():
                    self._add(out, w2, sign * c * d)
            for z, c in alg.bracket(y, f).items():
                for w, d in self.mul_left(self.pos[z], rest).items():
                    self._add(out, w, c * d)
        self._mul[key] = out
        return out

    def straighten(self, x, word):
        """x . word  as {(word', beta): coef}; beta is a b-index or None."""
        key = (x, word)
        hit = self._str.get(key)
        if hit is not None:
            return hit
        alg = self.alg
        out = {}
        if x in self.pos:
            for w, c in self.mul_left(self.pos[x], word).items():
                out[(w, None)] = c
        else:
            first = next((j for j, e in enumerate(word) if e), None)
            if first is None:
                out[(word, x)] = 1
            else:
                f = self.nminus[first]
                rest = list(word)
                rest[first] -= 1
                rest = tuple(rest)
                sign = -1 if alg.parity[x] and alg.parity[f] else 1
                for (w, beta), c in self.straighten(x, rest).items():
                    for w2, d in self.mul_left(first, w).items():
                        self._add(out, (w2, beta), sign * c * d)
                for z, c in alg.bracket(x, f).items():
                    for (w, beta), d in self.straighten(z, rest).items():
                        self._add(out, (w, beta), c * d)
        self._str[key] = out
        return out

    def structure(self):
        """For each x in g: {beta: sparse word matrix S} with x.(w (x) v) = sum S[w', w] w' (x) beta.v."""
        words = self.words()
        windex = {w: i for i, w in enumerate(words)}
        nw = len(words)
        out = {}
        for x in self.g:
            acc = defaultdict(lambda: ([], [], []))
            for j, w in enumerate(words):
                for (w2, beta), c in self.straighten(x, w).items():
                    r, cidx, v = acc[beta]
                    r.append(windex[w2])
                    cidx.append(j)
                    v.append(c)
            out[x] = {
                beta: sp.csr_matrix((v, (r, c)), shape=(nw, nw), dtype=np.int64)
                for beta, (r, c, v) in acc.items()
            }
        return words, out


_STRAIGHTENERS = {}


def get_straightener(alg, g, nminus):
    key = (alg.which, alg.n, alg.p, tuple(sorted(g)), tuple(sorted(nminus)))
    if key not in _STRAIGHTENERS:
        st = Straightener(alg, g, nminus)
        _STRAIGHTENERS[key] = (st, *st.structure())
    return _STRAIGHTENERS[key]


# -- modules -----------------------------------------------------------------


@dataclass
class ModuleRep:
    """A finite-dimensional restricted module with labelled basis.

    ``action[i]`` is the matrix of algebra basis element ``i``; ``offsets`` is
    a (dim, n+1) integer array, ``parity`` a length-dim array.
    """

    alg: AlgebraTable
    lam: Weight
    action: dict
    parity: np.ndarray
    offsets: np.ndarray
    top: int | None = 0
    provenance: str = ""
    generators: list = field(default_factory=list)
    _keys: dict | None = field(default=None, repr=False, compare=False)
    _where: tuple | None = field(default=None, repr=False, compare=False)
    _block_cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def dim(self):
        return len(self.parity)

    @property
    def p(self):
        return self.alg.p

    def weight(self, idx):
        return self.lam.shift(tuple(int(v) for v in self.offsets[idx]))

    def jdegrees(self):
        return self.offsets[:, -1]

    def op(self, x):
        """Matrix of a sparse algebra combination {index: coef}."""
        total = None
        for i, c in x.items():
            m = self.action[i] * c
            total = m if total is None else total + m
        if total is None:
            return sp.csr_matrix((self.dim, self.dim), dtype=np.int64)
        return total

    def block_keys(self):
        if self._keys is None:
            keys = defaultdict(list)
            for idx in range(self.dim):
                keys[(tuple(int(v) for v in self.offsets[idx]), int(self.parity[idx]))].append(idx)
            self._keys = {k: np.asarray(v) for k, v in keys.items()}
        return self._keys

    def blocks(self, x):
        """{src block key: (dst block key, dense block)} for the action of basis element x.

        Every basis element shifts (offset, parity) by a fixed amount, so each
        source block lands in a single target block.
        """
        hit = self._block_cache.get(x)
        if hit is not None:
            return hit
        keys = self.block_keys()
        if self._where is None:
            kid = np.empty(self.dim, dtype=np.int64)
            local = np.empty(self.dim, dtype=np.int64)
            order = list(keys)
            for b, k in enumerate(order):
                kid[keys[k]] = b
                local[keys[k]] = np.arange(len(keys[k]))
            self._where = (order, kid, local)
        order, kid, local = self._where
        m = self.action[x]
        coo = m.tocoo() if sp.issparse(m) else sp.coo_matrix(m)
        vals = coo.data % self.p
        keep = vals != 0
        rows, cols, vals = coo.row[keep], coo.col[keep], vals[keep]
        out = {}
        if len(vals):
            root = self.alg.root[x]
            xp = self.alg.parity[x]
            srcb = kid[cols]
            srt = np.argsort(srcb, kind="stable")
            srcb, rows, cols, vals = srcb[srt], rows[srt], cols[srt], vals[srt]
            cuts = np.flatnonzero(np.diff(srcb)) + 1
            for seg in np.split(np.arange(len(vals)), cuts):
                src = order[srcb[seg[0]]]
                off, par = src
                dst = (tuple(int(a + b) for a, b in zip(off, root)), (par + xp) % 2)
                blk = np.zeros((len(keys[dst]), len(keys[src])), dtype=np.int64)
                np.add.at(blk, (local[rows[seg]], local[cols[seg]]), vals[seg])
                out[src] = (dst, blk % self.p)
        self._block_cache[x] = out
        return out


def _weight_action(alg, lam, i):
    """Scalar by which b-element i acts on F v_lam (Cartan: lam(h); others 0)."""
    cart = alg.cartan()
    if i in cart:
        k = cart.index(i)
        coords = lam.coords()
        return coords[k] if k < len(coords) else 0
    return 0


def induce(alg, g, nminus, W_action, W_parity, W_offsets, lam, provenance, top_local=0):
    """u(g) (x)_{u(b)} W for a b-module W given by matrices on its basis."""
    st, words, struct = get_straightener(alg, g, nminus)
    dW = len(W_parity)
    p = alg.p
    action = {}
    eye = sp.identity(dW, dtype=np.int64, format="csr")
    for x in st.g:
        total = None
        for beta, S in struct[x].items():
            if beta is None:
                B = eye
            else:
                B = W_action.get(beta)
                if B is None:
                    continue
                B = sp.csr_matrix(B)
                if B.nnz == 0:
                    continue
            term = sp.kron(S, B, format="csr")
            total = term if total is None else total + term
        if total is None:
            total = sp.csr_matrix((len(words) * dW, len(words) * dW), dtype=np.int64)
        action[x] = as_operator(total, p)
    roots = np.asarray([alg.root[i] for i in st.nminus], dtype=np.int64).reshape(len(st.nminus), alg.n + 1)
    wpar = np.asarray([st.word_parity(w) for w in words], dtype=np.int64)
    woff = np.asarray(words, dtype=np.int64).reshape(len(words), len(st.nminus)) @ roots
    parity = (wpar[:, None] + np.asarray(W_parity)[None, :]).reshape(-1) % 2
    offsets = (woff[:, None, :] + np.asarray(W_offsets)[None, :, :]).reshape(-1, roots.shape[1])
    zero_word = words.index(tuple([0] * len(st.nminus)))
    return ModuleRep(
        alg=alg,
        lam=lam,
        action=action,
        parity=parity,
        offsets=offsets,
        top=zero_word * dW + top_local,
        provenance=provenance,
        generators=list(st.g),
    )


def check_weight(alg, lam):
    if lam.p != alg.p or lam.n != alg.n or lam.has_delta != (alg.which == LEBAR):
        raise ValueError(f"weight {lam} does not belong to Lambda of {alg.which}({alg.n})")


def restricted_verma(alg, g, nplus, lam, parity0=0, label="verma"):
    """u(g) (x)_{u(h + nplus)} F v_lam for a subalgebra g with Cartan part h."""
    check_weight(alg, lam)
    cart = [i for i in alg.cartan() if i in set(g)]
    bset = set(nplus) | set(cart)
    nminus = [i for i in g if i not in bset]
    W = {}
    for i in bset:
        c = _weight_action(alg, lam, i) % alg.p
        if c:
            W[i] = np.array([[c]], dtype=np.int64)
    n1 = alg.n + 1
    return induce(alg, g, nminus, W, [parity0], np.zeros((1, n1), dtype=np.int64), lam, f"{label}({lam})")


def degree_zero_decomposition(alg):
    """(n-_[0], cartan, n+_[0]) as lists of basis indices."""
    n = alg.n
    nminus, nplus = [], []
    for i in alg.graded_piece(0):
        r = alg.potentials[i]
        if r is None:
            continue
        ev = [k for k in range(n) for _ in range(r[k])]
        od = [k - n for k in range(n, 2 * n) if r[k]]
        if len(ev) == 1 and len(od) == 1:
            a, b = ev[0], od[0]
            if a > b:
                nminus.append(i)
            elif a < b:
                nplus.append(i)
        elif len(od) == 2:
            nminus.append(i)
        elif len(ev) == 2:
            nplus.append(i)
    cart = alg.cartan()
    return nminus, cart, nplus


def g0_verma(alg, lam):
    g0 = alg.graded_piece(0)
    _, _, nplus0 = degree_zero_decomposition(alg)
    return restricted_verma(alg, g0, nplus0, lam, label="g0-verma")


# -- simple heads ---------------------------------------------------------------


def _blocks(V):
    keys = V.block_keys()
    return keys, {k: i for i, k in enumerate(keys)}


def _generating_set(V):
    return [x for x in V.generators if x in V.action]


def maximal_submodule_functionals(V, ops=None):
    """Annihilator of the maximal submodule of V (cyclic on its top vector).

    Returns {block key: RREF functional rows}.  The maximal submodule is
    graded by torus offset and parity, and it is the largest submodule not
    meeting the top block, which must be one-dimensional.
    """
    p = V.p
    keys, _ = _blocks(V)
    top_key = (tuple(int(v) for v in V.offsets[V.top]), int(V.parity[V.top]))
    if len(keys[top_key]) != 1:
        raise NonuniquenessError("top weight space is not one-dimensional")
    ops = ops if ops is not None else _generating_set(V)
    # for each target block, the blocks mapping into it: dst -> [(x, src, B)]
    into = defaultdict(list)
    for x in ops:
        for src, (dst, B) in V.blocks(x).items():
            if B.any():
                into[dst].append((x, src, B))

    phi = {top_key: np.zeros((1, 1), dtype=np.int64) + 1}
    work = [top_key]
    while work:
        dst = work.pop()
        F = phi[dst]
        for x, src, B in into.get(dst, ()):
            new = matmul(F, B, p)
            if not new.any():
                continue
            old = phi.get(src)
            stacked = new if old is None else np.vstack([old, new])
            R, piv = rref(stacked, p)
            if old is None or R.shape[0] > old.shape[0]:
                phi[src] = R
                if src not in work:
                    work.append(src)
    return phi, keys


def irreducible_quotient(V, ops=None):
    """The unique simple quotient of a module generated by its top vector."""
    p = V.p
    phi, keys = maximal_submodule_functionals(V, ops)
    order = sorted(phi, key=lambda k: (-k[0][-1], k))
    start = {}
    total = 0
    for k in order:
        start[k] = total
        total += phi[k].shape[0]
    n1 = V.offsets.shape[1]
    parity = np.zeros(total, dtype=np.int64)
    offsets = np.zeros((total, n1), dtype=np.int64)
    for k in order:
        s, r = start[k], phi[k].shape[0]
        parity[s : s + r] = k[1]
        offsets[s : s + r] = k[0]
    pivots = {k: rref(phi[k], p)[1] for k in order}
    alg = V.alg
    action = {}
    for x in V.action:
        rows, cols, vals = [], [], []
        vb = V.blocks(x)
        for src in order:
            if src not in vb:
                continue
            dst, blk = vb[src]
            if dst not in phi:
                continue
            # phi[src] is in RREF, so a row-space element's coordinates are its pivot entries
            C = matmul(phi[dst], blk % p, p)[:, pivots[src]]
            nz = np.nonzero(C)
            rows.extend((nz[0] + start[dst]).tolist())
            cols.extend((nz[1] + start[src]).tolist())
            vals.extend(C[nz].tolist())
        action[x] = as_operator(sp.csr_matrix((vals, (rows, cols)), shape=(total, total), dtype=np.int64), p)
    top_key = (tuple(int(v) for v in V.offsets[V.top]), int(V.parity[V.top]))
    return ModuleRep(
        alg=alg,
        lam=V.lam,
        action=action,
        parity=parity,
        offsets=offsets,
        top=start[top_key],
        provenance=f"simple_head[{V.provenance}]",
        generators=V.generators,
    )


def kac_module(alg, lam, L0=None):
    """I(lam) = u(g) (x)_{u(g_{>=0})} L0(lam)."""
    check_weight(alg, lam)
    if L0 is None:
        L0 = irreducible_quotient(g0_verma(alg, lam))
    g = list(range(alg.dim))
    nminus = alg.graded_piece(-1)
    W = {}
    for x in alg.graded_piece(0):
        W[x] = to_dense(L0.action[x])
    return induce(alg, g, nminus, W, L0.parity, L0.offsets, lam, f"kac({lam})", top_local=L0.top)


def simple_head(alg, lam):
    """L^{b0}(lam) computed as the head of the Kac module."""
    return irreducible_quotient(kac_module(alg, lam))


# -- tests on modules -------------------------------------------------------


def raising_operators(V, nplus):
    return [V.action[x] for x in nplus if x in V.action]


def is_irreducible(V, nplus=None):
    """True iff V has no proper nonzero submodule.

    For modules generated by their top vector the head is compared with V.
    Otherwise every line of every weight component of the primitive space is
    tested, which is exact but capped at LINE_CAP dimensions per component.
    """
    if V.dim <= 1:
        return True
    if V.top is not None and nplus is None:
        phi, _ = maximal_submodule_functionals(V)
        return sum(f.shape[0] for f in phi.values()) == V.dim
    return _line_sweep_irreducible(V, nplus)


def _line_sweep_irreducible(V, nplus):
    import itertools

    p = V.p
    if nplus is None:
        nplus = [i for i in V.action if V.alg.degree[i] > 0] + degree_zero_decomposition(V.alg)[2]
    P = primitive_space(V, nplus)
    ops = list(V.action.values())
    comps = defaultdict(list)
    for row in P.basis:
        comps[None].append(row)
    # split the primitive space by h-bar weight (mod p) of its support
    wts = [tuple(V.weight(i).coords()) for i in range(V.dim)]
    bywt = defaultdict(list)
    for i, w in enumerate(wts):
        bywt[w].append(i)
    for w, idx in bywt.items():
        mask = np.zeros(V.dim, dtype=bool)
        mask[idx] = True
        # primitive vectors supported on this weight space
        sub = Subspace(V.dim, p, np.eye(V.dim, dtype=np.int64)[idx])
        inter = _intersect(P, sub)
        d = inter.dim
        if d == 0:
            continue
        if d > LINE_CAP:
            raise CapacityError(f"primitive weight component of dimension {d} exceeds {LINE_CAP}")
        for coeffs in itertools.product(range(p), repeat=d):
            nz = [c for c in coeffs if c]
            if not nz or nz[0] != 1:
                continue
            v = np.asarray(coeffs, dtype=np.int64) @ inter.basis % p
            if closure(Subspace(V.dim, p, v), ops).dim < V.dim:
                return False
    return True


def _intersect(A, B):
    p = A.p
    if A.dim == 0 or B.dim == 0:
        return Subspace(A.ambient_dim, p)
    M = np.vstack([A.basis, B.basis]).T
    ns = nullspace(M % p, p)
    vecs = ns[:, : A.dim] @ A.basis % p
    return Subspace(A.ambient_dim, p, vecs)


def primitive_space(V, nplus):
    """Joint kernel of the raising operators, computed block by block."""
    p = V.p
    keys, _ = _blocks(V)
    alg = V.alg
    vecs = []
    for src, idx in keys.items():
        off, par = src
        mats = []
        for x in nplus:
            if x not in V.action:
                continue
            hit = V.blocks(x).get(src)
            if hit is not None and hit[1].any():
                mats.append(hit[1])
        if mats:
            ns = nullspace(np.vstack(mats), p)
        else:
            ns = np.eye(len(idx), dtype=np.int64)
        for row in ns:
            v = np.zeros(V.dim, dtype=np.int64)
            v[idx] = row
            vecs.append(v)
    return Subspace(V.dim, p, np.asarray(vecs).reshape(-1, V.dim) if vecs else None)


@dataclass
class HighestWeightVector:
    vector: np.ndarray
    weight: Weight
    jdegree: int
    borel: int | None = None


def highest_weight_wrt(V, nplus, borel=None):
    """The b-highest weight of an irreducible V: joint kernel of ``nplus``.

    Raises NonuniquenessError if the kernel is not one-dimensional.
    """
    P = primitive_space(V, nplus)
    if P.dim != 1:
        raise NonuniquenessError(f"primitive space has dimension {P.dim}")
    v = P.basis[0]
    idx = int(np.nonzero(v)[0][0])
    return HighestWeightVector(v, V.weight(idx), int(V.offsets[idx, -1]), borel)


def j_length(V):
    return len(set(V.jdegrees().tolist())) - 1


def check_representation(V, pairs=None):
    """Max failures of rho([a,b]) = rho(a)rho(b) - (-1)^{|a||b|} rho(b)rho(a)."""
    alg, p = V.alg, V.p
    idx = list(V.action)
    if pairs is None:
        pairs = [(a, b) for a in idx for b in idx]
    bad = []
    for a, b in pairs:
        A, B = V.action[a], V.action[b]
        sign = -1 if alg.parity[a] and alg.parity[b] else 1
        lhs = to_dense(V.op(alg.bracket(a, b))) % p
        rhs = (to_dense(A @ B) - sign * to_dense(B @ A)) % p
        if not np.array_equal(lhs, rhs):
            bad.append((a, b))
    return bad


def check_restricted(V, elements=None, sample=None, seed=0):
    """Elements x (even) with rho(x)^p != rho(x^[p]) on the tested vectors."""
    alg, p = V.alg, V.p
    if elements is None:
        elements = [x for x in V.action if alg.parity[x] == 0]
    if sample is None or V.dim <= 200:
        probe = np.eye(V.dim, dtype=np.int64)
    else:
        rng = np.random.default_rng(seed)
        cols = rng.choice(V.dim, size=min(sample, V.dim), replace=False)
        probe = np.eye(V.dim, dtype=np.int64)[:, np.sort(cols)]
    bad = []
    for x in elements:
        A = V.action[x]
        y = probe
        for _ in range(p):
            y = matmul(A, y, p)
        z = matmul(V.op(alg.ppower(x)), probe, p)
        if not np.array_equal(y, z):
            bad.append(x)
    return bad
