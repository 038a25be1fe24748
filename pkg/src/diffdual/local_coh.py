"""Local cohomology along the diagonal, fraction classes and the copairing class tau.

On a chart with coordinates u_1..u_n, the product chart carries x (first factor)
and y (second factor); the diagonal is cut out by t_i = x_i - y_i. Fractions
m / prod t_i^k_i are handled in the coordinates (y, t): a class in the top
local cohomology is the part of the t-Laurent expansion in which every
t-exponent is <= -1. Operators in x act through d/dx = d/dt (y fixed),
operators in y through d/dy - d/dt (x fixed).
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from .cech import Cochain, coboundary
from .conventions import SIGMA
from .diffop import DividedPowerOp, adjoint, matrix_adjoint
from .diffop.operator import _subindices, divided_derivative
from .ring import linalg
from .ring.localized import LocalizedElement, LocalizedRing
from .ring.polynomial import Polynomial, PolynomialRing, exact_divide_binomial, taylor_shift
from .sheaves import ChartScheme, LocFreeSheaf, box, dual_star, product_scheme


class GluingError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# extended alternating Čech complex along coordinate sequences

class ExtAltCech:
    """0 -> M -> (+) M_{f_i} -> ... -> M_{f_1...f_c} for M = R^rank and f_i distinct variables of R.

    The complex is graded by exponent vectors; each graded piece is finite,
    so ranks are computed exactly piece by piece over a box of exponents.
    """

    def __init__(self, ring: PolynomialRing, sequence: Sequence[Polynomial], rank: int = 1):
        idx = []
        for f in sequence:
            f = ring(f)
            if not f.is_monomial() or sum(abs(a) for a in next(iter(f.terms))) != 1 or min(next(iter(f.terms))) < 0:
                raise ValueError("graded computation needs the sequence to consist of variables")
            idx.append(next(iter(f.terms)).index(1))
        if len(set(idx)) != len(idx):
            raise ValueError("repeated element in the sequence")
        self.ring = ring
        self.seq = idx
        self.c = len(idx)
        self.rank = rank

    def _basis(self, k: int, a: tuple) -> list:
        out = []
        for S in combinations(range(self.c), k):
            inv = {self.seq[s] for s in S}
            if all(e >= 0 or v in inv for v, e in enumerate(a)):
                out.extend((S, l) for l in range(self.rank))
        return out

    def _delta(self, k: int, a: tuple):
        F = self.ring.field
        src, tgt = self._basis(k, a), self._basis(k + 1, a)
        index = {b: r for r, b in enumerate(tgt)}
        M = linalg.zeros(F, len(tgt), len(src))
        for col, (S, l) in enumerate(src):
            for s in range(self.c):
                if s in S:
                    continue
                T = tuple(sorted(S + (s,)))
                pos = T.index(s)
                M[index[(T, l)]][col] = F((-1) ** pos)
        return M, len(src), len(tgt)

    def graded_dims(self, a: tuple) -> list:
        F = self.ring.field
        dims = []
        for k in range(self.c + 1):
            n_k = len(self._basis(k, a))
            Mk, _, _ = self._delta(k, a)
            rk = linalg.rank(F, Mk, n_k) if n_k and Mk else 0
            if k > 0:
                Mp, n_p, _ = self._delta(k - 1, a)
                rp = linalg.rank(F, Mp, n_p) if n_p and Mp else 0
            else:
                rp = 0
            dims.append(n_k - rk - rp)
        return dims

    def dims(self, window: int = 3) -> list:
        total = [0] * (self.c + 1)
        for a in product(range(-window, window + 1), repeat=self.ring.nvars):
            for k, d in enumerate(self.graded_dims(a)):
                total[k] += d
        return total


# ---------------------------------------------------------------------------
# the diagonal of one chart

class DiagonalChart:
    """The product of a chart with itself, in coordinates x, y and t = x - y."""

    def __init__(self, chart: PolynomialRing, inverted: Sequence[int] = ()):
        self.chart = chart
        self.field = chart.field
        self.n = chart.nvars
        names = chart.names
        self.x_names = ["x_" + s for s in names]
        self.y_names = ["y_" + s for s in names]
        self.t_names = ["t_" + s for s in names]
        self.R = PolynomialRing(self.field, self.x_names + self.y_names)
        self.S = PolynomialRing(self.field, self.y_names + self.t_names)
        self.inverted = tuple(inverted)
        n = self.n
        self.L = LocalizedRing(self.R, [self.R.gen(i) - self.R.gen(n + i) for i in range(n)])
        self.y_pos = list(range(n))
        self.t_pos = list(range(n, 2 * n))

    def __eq__(self, other):
        return isinstance(other, DiagonalChart) and self.chart == other.chart

    def xi(self) -> Polynomial:
        """1 / prod t_i in the (y, t) coordinates."""
        return self.S.monomial((0,) * self.n + (-1,) * self.n)

    def x_function(self, f: Polynomial, truncation: Sequence[int]) -> Polynomial:
        """f(x) = f(y + t), expanded up to the given t-orders."""
        var_map = {name: (y, t) for name, y, t in zip(f.ring.names, self.y_names, self.t_names)}
        return taylor_shift(f, var_map, self.S, {t: k for t, k in zip(self.t_names, truncation)})

    def y_function(self, f: Polynomial) -> Polynomial:
        return f.embed(self.S, self.y_pos)

    def principal(self, g: Polynomial) -> Polynomial:
        n = self.n
        return Polynomial(self.S, {e: c for e, c in g.terms.items() if all(a <= -1 for a in e[n:])})

    def pole_orders(self, g: Polynomial) -> list:
        n = self.n
        return [max([0] + [-e[n + i] for e in g.terms]) for i in range(n)]

    def apply_x(self, op: DividedPowerOp, g: Polynomial) -> Polynomial:
        """Principal part of op acting on the x-variables of g (given in y, t)."""
        if op.ring != self.chart:
            raise ValueError("operator lives on a different chart")
        n = self.n
        k = self.pole_orders(g)
        out = self.S.zero()
        for alpha, f in op.terms.items():
            d = divided_derivative(g, (0,) * n + tuple(alpha))
            if not d:
                continue
            trunc = [k[i] + alpha[i] for i in range(n)]
            out = out + self.x_function(f, trunc) * d
        return self.principal(out)

    def apply_y(self, op: DividedPowerOp, g: Polynomial) -> Polynomial:
        """Principal part of op acting on the y-variables of g, with x held fixed."""
        if op.ring != self.chart:
            raise ValueError("operator lives on a different chart")
        out = self.S.zero()
        for beta, f in op.terms.items():
            acc = self.S.zero()
            for a in _subindices(beta):
                b = tuple(bb - aa for aa, bb in zip(a, beta))
                d = divided_derivative(g, tuple(a) + b)
                if d:
                    acc = acc - d if sum(b) % 2 else acc + d
            if acc:
                out = out + self.y_function(f) * acc
        return self.principal(out)

    def class_of(self, element: LocalizedElement) -> "FractionClass":
        return normal_form(self, element)


class FractionClass:
    """A vector of top local-cohomology classes along the diagonal of one chart."""

    def __init__(self, chart: DiagonalChart, components: Sequence[Polynomial]):
        self.chart = chart
        self.components = [chart.principal(c) for c in components]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        return (isinstance(other, FractionClass) and self.chart == other.chart
                and self.components == other.components)

    def __sub__(self, other):
        return FractionClass(self.chart, [a - b for a, b in zip(self.components, other.components)])

    def __add__(self, other):
        return FractionClass(self.chart, [a + b for a, b in zip(self.components, other.components)])

    def __repr__(self):
        return "FractionClass[%s]" % ", ".join(str(c) for c in self.components)


def normal_form(chart: DiagonalChart, element) -> FractionClass:
    """Normal form of numerator / prod (x_i - y_i)^k_i (a LocalizedElement or a list of them)."""
    items = element if isinstance(element, (list, tuple)) else [element]
    comps = []
    for el in items:
        if isinstance(el, FractionClass):
            comps.extend(el.components)
            continue
        if el.ring != chart.L:
            raise ValueError("denominator outside the multiplicative set of the diagonal")
        k = el.denominator
        n = chart.n
        shifted = _shift_xy(chart, el.numerator, [max(a - 1, 0) for a in k])
        comps.append(shifted * chart.S.monomial((0,) * n + tuple(-a for a in k)))
    return FractionClass(chart, comps)


def _shift_xy(chart: DiagonalChart, p: Polynomial, trunc: Sequence[int]) -> Polynomial:
    """Rewrite p(x, y) in (y, t) coordinates, keeping t-orders up to trunc."""
    n = chart.n
    out = {}
    S = chart.S
    for e, c in p.terms.items():
        xpart = chart.chart.monomial(e[:n], c)
        term = chart.x_function(xpart, trunc)
        ye = (tuple(e[n:]) + (0,) * n)
        for te, tc in term.terms.items():
            if any(te[n + i] > trunc[i] for i in range(n)):
                continue
            ne = tuple(a + b for a, b in zip(te, ye))
            v = out.get(ne)
            out[ne] = tc if v is None else v + tc
    return Polynomial(S, {e: c for e, c in out.items() if c})


def op_action_on_xi(op: DividedPowerOp):
    """Decide whether D_x(xi) - D*_y(xi) lies in the image of the partial localizations.

    Returns (member, discrepancy class).
    """
    chart = DiagonalChart(op.ring)
    xi = chart.xi()
    diff = chart.apply_x(op, xi) - chart.apply_y(adjoint(op), xi)
    cls = FractionClass(chart, [diff])
    return cls.is_zero(), cls


# ---------------------------------------------------------------------------
# tau

class TauClass:
    """Per-chart diagonal classes sum_k e_k [x] (e_k^v (x) dy) / prod t plus a gluing certificate."""

    def __init__(self, sheaf: LocFreeSheaf, charts: list, classes: list, certificate: dict):
        self.sheaf = sheaf
        self.charts = charts
        self.classes = classes
        self.certificate = certificate

    @property
    def glued(self) -> bool:
        return all(self.certificate.values())


def _tau_components(chart: DiagonalChart, rank: int) -> list:
    xi = chart.xi()
    z = chart.S.zero()
    return [xi if k == l else z for k in range(rank) for l in range(rank)]


def _truncate(g: Polynomial, chart: DiagonalChart, order: Sequence[int]) -> Polynomial:
    n = chart.n
    return Polynomial(g.ring, {e: c for e, c in g.terms.items() if all(e[n + i] <= order[i] for i in range(n))})


def _series_inverse(u: Polynomial, chart: DiagonalChart, order: Sequence[int]) -> Polynomial:
    """Inverse of a unit whose t-free part is a monomial, modulo t_i^(order_i + 1)."""
    n = chart.n
    u0 = Polynomial(u.ring, {e: c for e, c in u.terms.items() if not any(e[n:])})
    if not u0.is_monomial():
        raise GluingError("Jacobian factor is not a unit near the diagonal")
    inv0 = u0.monomial_inverse()
    nil = _truncate(u * inv0 - 1, chart, order)
    total = u.ring.one()
    power = u.ring.one()
    for _ in range(sum(order) + 1):
        power = _truncate(power * (-nil), chart, order)
        if power.is_zero():
            break
        total = total + power
    return _truncate(total * inv0, chart, order)


def _divided_difference_matrix(chart: DiagonalChart, images, order: Sequence[int]) -> list:
    """H with phi_m(y + t) - phi_m(y) = sum_i t_i H[m][i] for Laurent monomials phi_m."""
    n = chart.n
    S = chart.S
    var_map = {chart.chart.names[j]: (chart.y_names[j], chart.t_names[j]) for j in range(n)}

    def shift_first(img, upto):
        # shift the first `upto` variables; t_j -> 0 for the others
        trunc = {chart.t_names[j]: (order[j] + 1 if j < upto else 0) for j in range(n)}
        return taylor_shift(chart.chart.monomial(img), var_map, S, trunc)

    H = []
    for img in images:
        row = []
        for i in range(n):
            diff = shift_first(img, i + 1) - shift_first(img, i)
            terms = {}
            for e, c in diff.terms.items():
                if e[n + i] <= 0:
                    raise GluingError("divided difference is not divisible by t")
                ne = list(e)
                ne[n + i] -= 1
                terms[tuple(ne)] = c
            row.append(_truncate(Polynomial(S, terms), chart, order))
        H.append(row)
    return H


def _poly_det(S, M):
    n = len(M)
    if n == 0:
        return S.one()
    if n == 1:
        return M[0][0]
    total = S.zero()
    for c in range(n):
        if M[0][c]:
            sub = [row[:c] + row[c + 1:] for row in M[1:]]
            term = M[0][c] * _poly_det(S, sub)
            total = total + term if c % 2 == 0 else total - term
    return total


def transported_tau(E: LocFreeSheaf, a: int, b: int, chart: DiagonalChart, order: Sequence[int] | None = None) -> FractionClass:
    """tau of chart b, rewritten in the coordinates and frames of chart a (on U_a cap U_b)."""
    X = E.base
    n = X.dim
    r = E.rank
    order = list(order) if order is not None else [0] * n
    Es = dual_star(E)
    TE = E.transitions[(a, b)]
    TS = Es.transitions[(a, b)]
    trunc = [order[i] for i in range(n)]
    H = _divided_difference_matrix(chart, X.coord_map[a][b], order)
    det_inv = _series_inverse(_poly_det(chart.S, H), chart, order)
    xi = chart.xi()
    comps = []
    for l in range(r):
        for m in range(r):
            acc = chart.S.zero()
            for k in range(r):
                if TE[l][k] and TS[m][k]:
                    acc = acc + _truncate(chart.x_function(TE[l][k], trunc) * chart.y_function(TS[m][k]), chart, order)
            comps.append(_truncate(acc * det_inv, chart, order) * xi)
    return FractionClass(chart, comps)


def build_tau(E: LocFreeSheaf) -> TauClass:
    X = E.base
    N = X.nchart_count()
    charts = [DiagonalChart(R) for R in X.charts]
    classes = [FractionClass(charts[a], _tau_components(charts[a], E.rank)) for a in range(N)]
    cert = {}
    for a in range(N):
        for b in range(N):
            if a == b:
                continue
            moved = transported_tau(E, a, b, charts[a])
            cert[(a, b)] = moved == classes[a]
    tau = TauClass(E, charts, classes, cert)
    if not tau.glued:
        bad = [k for k, v in cert.items() if not v]
        raise GluingError("tau does not glue on overlaps %r" % bad)
    return tau


# ---------------------------------------------------------------------------
# the well-definedness identity for two-term complexes

def two_term_tau_check(D) -> tuple:
    """(D [x] 1) tau_E = (1 [x] D*) tau_F chart by chart. Returns (ok, {chart: discrepancy})."""
    E, F = D.source, D.target
    X = E.base
    bad = {}
    for a, R in enumerate(X.charts):
        chart = DiagonalChart(R)
        Da = D.ops[a]
        Ds = matrix_adjoint(Da)
        xi = chart.xi()
        left, right = [], []
        for m in range(F.rank):
            for k in range(E.rank):
                left.append(chart.apply_x(Da.entries[m][k], xi))
                right.append(chart.apply_y(Ds.entries[k][m], xi))
        disc = FractionClass(chart, left) - FractionClass(chart, right)
        if not disc.is_zero():
            bad[X.labels[a]] = disc
    return not bad, bad


# ---------------------------------------------------------------------------
# from diagonal classes to Čech classes on the product (curves)

def _product_data(E: LocFreeSheaf, P: ChartScheme | None = None):
    X = E.base
    if P is None:
        P = X.__dict__.get("_self_product")
        if P is None:
            P = product_scheme(X)
            X._self_product = P
    return P


def diagonal_fraction(E: LocFreeSheaf, P: ChartScheme, j: int, Es: LocFreeSheaf):
    """(numerator vector, diagonal equation) representing tau_E on the product chart j.

    Works on curves: on U_a x U_b the diagonal is f = mu * (x - y_a(y)), and the
    inverse of the y-coordinate is replaced by x, which agrees with it modulo f.
    """
    X, Y, index = P.factors
    a, b = index[j]
    R = P.charts[j]
    r = E.rank
    x = R.gen(0)
    y = R.gen(1)
    s = X.coord_map[b][a][0][0]          # y-coordinate of chart a = (y-coordinate of chart b)^s
    TS = Es.transitions[(b, a)]          # eps^(a)_k = sum_m TS[m][k](y) eps^(b)_m
    mu_e = max(0, -s)
    f = (x - y ** s) * (y ** mu_e)
    num = [R.zero()] * (r * r)
    for k in range(r):
        for m in range(r):
            if TS[m][k]:
                num[k * r + m] = num[k * r + m] + TS[m][k].embed(R, [1]) * (y ** mu_e)
    fixed = []
    for p in num:
        out = R.zero()
        for e, c in p.terms.items():
            if e[1] < 0:
                if a == b:
                    raise GluingError("unexpected pole on a chart diagonal")
                out = out + R.monomial((e[0] - e[1], 0), c)
            else:
                out = out + R.monomial(e, c)
        fixed.append(out)
    return fixed, f


def to_global(tau: TauClass, P: ChartScheme | None = None) -> Cochain:
    """A Čech 1-cocycle on the product cover representing the image of tau (curves only)."""
    E = tau.sheaf
    X = E.base
    if not tau.glued:
        raise GluingError("tau has no gluing certificate")
    P = _product_data(E, P)
    Es = dual_star(E)
    G = box(E, Es, P)
    if X.dim != 1:
        raise NotImplementedError("passage to Čech classes on the product is implemented for curves")
    NP = P.nchart_count()
    if E.rank == 0 or NP == 1:
        return Cochain(G, 1, {})
    reps = [diagonal_fraction(E, P, j, Es) for j in range(NP)]
    values = {}
    for j0, j1 in combinations(range(NP), 2):
        N0, f0 = reps[j0]
        N1, f1 = reps[j1]
        N1c = G.convert(j0, j1, N1)
        f1c = P.to_chart(j0, j1, f1)
        u = exact_divide_binomial(f1c, f0)
        if u is None or not u.is_monomial():
            raise GluingError("diagonal equations of charts %d and %d differ by a non-unit" % (j0, j1))
        uinv = u.monomial_inverse()
        vec = []
        for p1, p0 in zip(N1c, N0):
            q = exact_divide_binomial(p1 * uinv - p0, f0)
            if q is None:
                raise GluingError("chart fractions %d and %d differ by a non-regular section" % (j0, j1))
            vec.append(q * SIGMA)
        if not all(P.allowed((j0, j1), e) for p in vec for e in p.terms):
            raise GluingError("difference of chart fractions has poles on the overlap")
        values[(j0, j1)] = vec
    c = Cochain(G, 1, values)
    if not coboundary(c).is_zero():
        raise GluingError("fraction differences do not form a cocycle")
    return c
