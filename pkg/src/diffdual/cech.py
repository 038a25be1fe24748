"""Alternating Čech complexes of catalog sheaves, computed one torus weight at a time.

Each cochain value on a chart tuple I is a coefficient vector in the frame of
chart I[0], with entries Laurent polynomials in the chart-I[0] coordinates.
The coboundary preserves the chart-0 torus weight, and each weight piece is
finite dimensional, so cohomology is the sum over a box of weights (the
window). The window is checked by enlarging it by one and recomputing.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from .conventions import cech_sign, permutation_sign
from .ring import linalg
from .sheaves import ChartScheme, LocFreeSheaf, canonical_sheaf


class WindowInstability(RuntimeError):
    pass


class Cochain:
    """A Čech cochain: {increasing chart tuple: coefficient vector in the first chart's frame}."""

    __slots__ = ("sheaf", "degree", "values")

    def __init__(self, sheaf: LocFreeSheaf, degree: int, values: dict | None = None):
        self.sheaf = sheaf
        self.degree = degree
        clean = {}
        for I, vec in (values or {}).items():
            I = tuple(I)
            if len(I) != degree + 1:
                raise ValueError("tuple %r does not have degree %d" % (I, degree))
            if any(not p.is_zero() for p in vec):
                clean[I] = list(vec)
        self.values = clean

    def value(self, I) -> list:
        I = tuple(I)
        v = self.values.get(I)
        if v is None:
            R = self.sheaf.base.charts[I[0]]
            return [R.zero()] * self.sheaf.rank
        return v

    def is_zero(self) -> bool:
        return not self.values

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        out = {I: list(v) for I, v in self.values.items()}
        for I, v in other.values.items():
            if I in out:
                out[I] = [a + b for a, b in zip(out[I], v)]
            else:
                out[I] = list(v)
        return Cochain(self.sheaf, self.degree, out)

    def __neg__(self):
        return Cochain(self.sheaf, self.degree, {I: [-a for a in v] for I, v in self.values.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "Cochain":
        return Cochain(self.sheaf, self.degree, {I: [a * c for a in v] for I, v in self.values.items()})

    def _check(self, other):
        if other.sheaf is not self.sheaf or other.degree != self.degree:
            raise ValueError("cochains of different sheaves or degrees")

    def __eq__(self, other):
        return (isinstance(other, Cochain) and other.sheaf is self.sheaf and other.degree == self.degree
                and (self - other).is_zero())

    def terms(self):
        """Iterate over (I, frame index, exponent, coefficient)."""
        for I, vec in self.values.items():
            for l, p in enumerate(vec):
                for e, c in p.terms.items():
                    yield I, l, e, c

    def by_weight(self) -> dict:
        X = self.sheaf.base
        fw = self.sheaf.frame_weights
        out: dict = {}
        for I, l, e, c in self.terms():
            w = tuple(a + b for a, b in zip(X.monomial_weight(I[0], e), fw[I[0]][l]))
            out.setdefault(w, {})[(I, l, e)] = c
        return out

    def __repr__(self):
        parts = []
        for I in sorted(self.values):
            parts.append("%r: [%s]" % (I, ", ".join(str(p) for p in self.values[I])))
        return "Cochain(deg %d; %s)" % (self.degree, "; ".join(parts) or "0")


def coboundary(c: Cochain) -> Cochain:
    E = c.sheaf
    X = E.base
    N = X.nchart_count()
    k = c.degree
    out: dict = {}
    for I, vec in c.values.items():
        for j in range(N):
            if j in I:
                continue
            J = tuple(sorted(I + (j,)))
            p = J.index(j)
            v = E.convert(J[0], I[0], vec)
            s = cech_sign(p)
            if J in out:
                out[J] = [a + b * s for a, b in zip(out[J], v)]
            else:
                out[J] = [b * s for b in v]
    return Cochain(E, k + 1, out)


def default_window(E: LocFreeSheaf) -> int:
    m = 0
    for ws in E.frame_weights:
        for w in ws:
            for a in w:
                m = max(m, abs(a))
    return m + E.base.dim + 2


class CechComplex:
    """Per-weight cochain spaces and coboundary matrices of a locally free sheaf."""

    def __init__(self, sheaf: LocFreeSheaf, window: int | None = None):
        self.sheaf = sheaf
        self.base = sheaf.base
        self.field = sheaf.base.field
        self.window = default_window(sheaf) if window is None else window
        N = self.base.nchart_count()
        self.top = N - 1
        self.tuples = [list(combinations(range(N), k + 1)) for k in range(N)]
        self._basis: dict = {}
        self._delta: dict = {}

    def weights(self, window: int | None = None):
        W = self.window if window is None else window
        return product(range(-W, W + 1), repeat=self.base.weight_dim)

    def basis(self, k: int, w: tuple) -> list:
        """Monomial basis keys (I, l, exponent) of C^k in weight w."""
        key = (k, w)
        b = self._basis.get(key)
        if b is not None:
            return b
        b = []
        if 0 <= k <= self.top:
            X = self.base
            fw = self.sheaf.frame_weights
            for I in self.tuples[k]:
                i0 = I[0]
                for l in range(self.sheaf.rank):
                    target = tuple(a - c for a, c in zip(w, fw[i0][l]))
                    e = X.exponent_for_weight(i0, target)
                    if e is not None and X.allowed(I, e):
                        b.append((I, l, e))
        self._basis[key] = b
        return b

    def delta(self, k: int, w: tuple) -> list:
        """Matrix of d: C^k_w -> C^(k+1)_w (rows indexed by basis(k+1, w))."""
        key = (k, w)
        M = self._delta.get(key)
        if M is not None:
            return M
        src = self.basis(k, w)
        tgt = self.basis(k + 1, w)
        index = {b: r for r, b in enumerate(tgt)}
        F = self.field
        M = linalg.zeros(F, len(tgt), len(src))
        for col, key_ in enumerate(src):
            for (J, l, e), c in self.coboundary_of_key(key_).items():
                M[index[(J, l, e)]][col] = M[index[(J, l, e)]][col] + c
        self._delta[key] = M
        return M

    def coboundary_of_key(self, key_) -> dict:
        I, l, e = key_
        E = self.sheaf
        X = self.base
        R = X.charts[I[0]]
        vec = [R.monomial(e) if t == l else R.zero() for t in range(E.rank)]
        c = Cochain(E, len(I) - 1, {I: vec})
        out = {}
        for J, l2, e2, coef in coboundary(c).terms():
            out[(J, l2, e2)] = coef
        return out

    def cochain_from_vector(self, k: int, w: tuple, vec: Sequence) -> Cochain:
        E = self.sheaf
        X = self.base
        vals: dict = {}
        for (I, l, e), c in zip(self.basis(k, w), vec):
            if not c:
                continue
            if I not in vals:
                R = X.charts[I[0]]
                vals[I] = [R.zero()] * E.rank
            vals[I][l] = vals[I][l] + X.charts[I[0]].monomial(e, c)
        return Cochain(E, k, vals)

    def vector_from_terms(self, k: int, w: tuple, terms: dict) -> list:
        basis = self.basis(k, w)
        index = {b: r for r, b in enumerate(basis)}
        v = [self.field.zero] * len(basis)
        for key_, c in terms.items():
            if key_ not in index:
                raise ValueError("cochain term %r is not a section on its overlap" % (key_,))
            v[index[key_]] = v[index[key_]] + c
        return v

    def weight_cohomology(self, k: int, w: tuple):
        """(image generators, representatives) of H^k in weight w, as vectors in basis(k, w)."""
        F = self.field
        n_k = len(self.basis(k, w))
        if n_k == 0:
            return [], []
        dk = self.delta(k, w)
        Z = linalg.nullspace(F, dk, n_k) if dk else [[F.one if i == j else F.zero for i in range(n_k)] for j in range(n_k)]
        if k > 0 and self.basis(k - 1, w):
            dprev = self.delta(k - 1, w)
            B = linalg.transpose(dprev, len(self.basis(k - 1, w)))
            B = [row for row in linalg.rref(F, B, n_k)[0]]
        else:
            B = []
        reps = []
        current = list(B)
        r = len(current)
        for z in Z:
            trial = current + [z]
            rr = linalg.rank(F, trial, n_k)
            if rr > r:
                reps.append(z)
                current = trial
                r = rr
        return B, reps

    def preimage(self, c: Cochain) -> Cochain | None:
        """A cochain w with dw = c, or None when c is not a coboundary (within the window)."""
        k = c.degree
        F = self.field
        vals = Cochain(self.sheaf, k - 1, {})
        for w, terms in c.by_weight().items():
            vec = self.vector_from_terms(k, w, terms)
            n_prev = len(self.basis(k - 1, w))
            if n_prev == 0:
                if any(vec):
                    return None
                continue
            x = linalg.solve(F, self.delta(k - 1, w), vec, n_prev)
            if x is None:
                return None
            vals = vals + self.cochain_from_vector(k - 1, w, x)
        return vals

    def dimensions(self, window: int | None = None) -> list:
        dims = [0] * (self.top + 1)
        for w in self.weights(window):
            for k in range(self.top + 1):
                if self.basis(k, w):
                    dims[k] += len(self.weight_cohomology(k, w)[1])
        return dims


class CohomologyBasis:
    """Basis cocycles of H^k with a section map back from cocycles to coordinates."""

    def __init__(self, complex_: CechComplex, degree: int, entries: list):
        self.complex = complex_
        self.degree = degree
        self.entries = entries  # list of (weight, vector)
        self._solvers: dict = {}

    @property
    def dim(self) -> int:
        return len(self.entries)

    def representative(self, s: int) -> Cochain:
        w, v = self.entries[s]
        return self.complex.cochain_from_vector(self.degree, w, v)

    def representatives(self) -> list:
        return [self.representative(s) for s in range(self.dim)]

    def coordinates(self, c: Cochain, check_cocycle: bool = True) -> list:
        C = self.complex
        F = C.field
        if c.sheaf is not C.sheaf or c.degree != self.degree:
            raise ValueError("cochain of the wrong sheaf or degree")
        if check_cocycle and not coboundary(c).is_zero():
            raise ValueError("not a cocycle")
        out = [F.zero] * self.dim
        for w, terms in c.by_weight().items():
            vec = C.vector_from_terms(self.degree, w, terms)
            B, reps = C.weight_cohomology(self.degree, w)
            idx = [s for s, (ws, _) in enumerate(self.entries) if ws == w]
            if len(idx) != len(reps):
                raise WindowInstability("cocycle has a weight %r outside the stable window" % (w,))
            cols = B + reps
            n = len(vec)
            A = linalg.transpose(cols, n) if cols else [[] for _ in range(n)]
            x = linalg.solve(F, A, vec, len(cols))
            if x is None:
                raise ValueError("not a cocycle in weight %r" % (w,))
            for s, val in zip(idx, x[len(B):]):
                out[s] = out[s] + val
        return out

    def is_coboundary(self, c: Cochain) -> bool:
        return all(not x for x in self.coordinates(c))


class Cohomology:
    """All cohomology groups of a sheaf, with the window stability guard."""

    def __init__(self, sheaf: LocFreeSheaf, window: int | None = None, check_window: bool = True):
        self.sheaf = sheaf
        self.complex = CechComplex(sheaf, window)
        C = self.complex
        top = C.top
        entries = [[] for _ in range(top + 1)]
        for w in sorted(C.weights()):
            for k in range(top + 1):
                if C.basis(k, w):
                    for rep in C.weight_cohomology(k, w)[1]:
                        entries[k].append((w, rep))
        self.bases = [CohomologyBasis(C, k, entries[k]) for k in range(top + 1)]
        if check_window:
            bigger = CechComplex(sheaf, C.window + 1).dimensions()
            if bigger != self.dims:
                raise WindowInstability("window %d gives %r but %d gives %r"
                                        % (C.window, self.dims, C.window + 1, bigger))

    @property
    def dims(self) -> list:
        return [b.dim for b in self.bases]

    def dim(self, k: int) -> int:
        if 0 <= k < len(self.bases):
            return self.bases[k].dim
        return 0

    def basis(self, k: int) -> CohomologyBasis:
        if 0 <= k < len(self.bases):
            return self.bases[k]
        return CohomologyBasis(self.complex, k, [])


def cohomology(E: LocFreeSheaf, window: int | None = None) -> Cohomology:
    """Cached per sheaf object (sheaves are immutable)."""
    cache = E.__dict__.setdefault("_cohomology_cache", {})
    key = window
    if key not in cache:
        cache[key] = Cohomology(E, window)
    return cache[key]


def build_cech(E: LocFreeSheaf, window: int | None = None) -> CechComplex:
    return CechComplex(E, window)


def check_delta_squared(C: CechComplex, window: int | None = None) -> bool:
    F = C.field
    for w in C.weights(window):
        for k in range(C.top - 1):
            a, b = C.delta(k, w), C.delta(k + 1, w)
            if a and b:
                prod = linalg.matmul(F, b, a, ncols=len(C.basis(k, w)))
                if not linalg.is_zero_matrix(prod):
                    return False
    return True


# ---------------------------------------------------------------------------
# products of cochains

def tensor_pairing(rE: int, rF: int):
    return lambda a, b: ((a * rF + b, 1),)


def contraction_pairing(rE: int):
    """E (x) E* -> omega: e_a (x) (e_b^v (x) w) -> delta_ab w."""
    return lambda a, b: ((0, 1),) if a == b else ()


def cup(a: Cochain, b: Cochain, target: LocFreeSheaf, pairing) -> Cochain:
    """Alexander-Whitney cup product followed by a frame pairing E (x) F -> target."""
    E, F = a.sheaf, b.sheaf
    X = E.base
    if F.base is not X or target.base is not X:
        raise ValueError("cover mismatch")
    p, q = a.degree, b.degree
    N = X.nchart_count()
    out = {}
    if p + q > N - 1:
        return Cochain(target, p + q, {})
    for I in combinations(range(N), p + q + 1):
        va = a.values.get(I[:p + 1])
        vb = b.values.get(I[p:])
        if va is None or vb is None:
            continue
        vb = F.convert(I[0], I[p], vb)
        R = X.charts[I[0]]
        res = [R.zero()] * target.rank
        for la, fa in enumerate(va):
            if not fa:
                continue
            for lb, fb in enumerate(vb):
                if not fb:
                    continue
                for lg, c in pairing(la, lb):
                    res[lg] = res[lg] + fa * fb * c
        out[I] = res
    return Cochain(target, p + q, out)


def cross(a: Cochain, b: Cochain, target: LocFreeSheaf) -> Cochain:
    """Exterior cup product p1*a u p2*b on the product cover, valued in E [x] F."""
    P = target.base
    X, Y, index = P.factors
    F = b.sheaf
    p, q = a.degree, b.degree
    nx = X.dim
    pos_x = list(range(nx))
    pos_y = list(range(nx, P.dim))
    out = {}
    NP = P.nchart_count()
    for J in combinations(range(NP), p + q + 1):
        xs = [index[j][0] for j in J[:p + 1]]
        sgn_a, sa = permutation_sign(xs)
        if not sgn_a:
            continue
        ys = [index[j][1] for j in J[p:]]
        sgn_b, sb = permutation_sign(ys)
        if not sgn_b:
            continue
        va = a.values.get(sa)
        vb = b.values.get(sb)
        if va is None or vb is None:
            continue
        a0, b0 = index[J[0]]
        # sa[0] is the smallest first component, which is a0 by the lexicographic order
        vb = F.convert(b0, sb[0], vb)
        R = P.charts[J[0]]
        res = [R.zero()] * target.rank
        s = sgn_a * sgn_b
        for la, fa in enumerate(va):
            if not fa:
                continue
            fa_ = fa.embed(R, pos_x)
            for lb, fb in enumerate(vb):
                if fb:
                    res[la * F.rank + lb] = res[la * F.rank + lb] + fa_ * fb.embed(R, pos_y) * s
        out[J] = res
    return Cochain(target, p + q, out)


# ---------------------------------------------------------------------------
# trace

def _omega(X: ChartScheme) -> LocFreeSheaf:
    w = X.__dict__.get("_omega")
    if w is None:
        w = canonical_sheaf(X)
        X._omega = w
    return w


def omega_of(X: ChartScheme) -> LocFreeSheaf:
    return _omega(X)


def standard_generator(X: ChartScheme) -> Cochain:
    """The top cocycle u_1^-1 ... u_n^-1 du_1^...^du_n on U_0 cap ... cap U_n."""
    if X.recipe is None or X.recipe[0] != "projective":
        raise ValueError("trace is defined for projective spaces")
    W = _omega(X)
    n = X.dim
    R = X.charts[0]
    return Cochain(W, n, {tuple(range(n + 1)): [R.monomial((-1,) * n)]})


def trace(c: Cochain):
    X = c.sheaf.base
    W = _omega(X)
    if c.sheaf is not W:
        raise ValueError("trace expects a class of the canonical sheaf")
    if c.degree != X.dim:
        raise ValueError("trace expects a top-degree class")
    H = cohomology(W).basis(X.dim)
    gen = H.coordinates(standard_generator(X))
    val = H.coordinates(c)
    return val[0] / gen[0]
