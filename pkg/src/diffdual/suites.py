"""Named verification checks, grouped into suites, for the command-line harness."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Callable

from .cech import WindowInstability, cohomology
from .diffop import (DividedPowerOp, MatrixDiffOp, adjoint, compose, format_operator, matrix_adjoint,
                     matrix_compose,                      parse_operator, transport, transport_dual)
from .filtered import (FilteredTwoTerm, Verdict, coevaluation_check, dual_differential_check, e1_differential,
                       graded_coevaluation_check, hypercohomology, serre_pairing)
from .local_coh import ExtAltCech, GluingError, build_tau, op_action_on_xi, two_term_tau_check
from .oracles import bott, convolution, monomial_count
from .randgen import random_invertible, random_operator
from .ring.field import Field
from .ring.polynomial import PolynomialRing
from .sheaves import (ChartScheme, GlobalDiffOp, IncompatibleOperator, adjoint_transport_discrepancy,
                      interior_sign_matrix,                       affine_space, box, differential_forms, exterior_derivative, product_scheme,
                      projective_space, scalar_op, structure_sheaf, twist, zero_op)

SUITES = ("adjoint", "cohomology", "serre", "tau", "well-defined", "coevaluation", "dual-diff", "derham", "kunneth")


@dataclass
class Check:
    name: str
    anchor: str
    inputs: dict
    run: Callable[[], Verdict]


@dataclass
class CheckResult:
    suite: str
    name: str
    anchor: str
    inputs: dict
    verdict: str
    message: str
    witness: dict = field(default_factory=dict)
    ms: int = 0


@dataclass
class Context:
    scheme: ChartScheme
    field: Field
    seed: int = 0
    count: int = 200
    window: int | None = None


def _skip(reason: str) -> Verdict:
    return Verdict(True, reason, skipped=True)


def _projective_dim(X: ChartScheme):
    if X.recipe is not None and X.recipe[0] == "projective":
        return X.recipe[1]
    return None


def _base_curve(X: ChartScheme):
    """The projective line underlying P1 or P1 x P1, else None."""
    if _projective_dim(X) == 1:
        return X
    if X.factors is not None and _projective_dim(X.factors[0]) == 1:
        return X.factors[0]
    return None


# ---------------------------------------------------------------------------
# adjoint

def _sweep(ctx: Context, salt: int, body) -> Verdict:
    rng = random.Random(ctx.seed * 1009 + salt)
    fails = []
    for i in range(ctx.count):
        n = rng.randint(1, 2)
        R = PolynomialRing(ctx.field, ["x%d" % (k + 1) for k in range(n)])
        out = body(R, rng)
        if out is not None:
            fails.append({"case": i, **out})
            if len(fails) >= 3:
                break
    if fails:
        return Verdict(False, "%d failing cases" % len(fails), {"cases": fails})
    return Verdict(True, "%d random cases" % ctx.count)


def check_anti_involution(ctx: Context) -> Verdict:
    def body(R, rng):
        a, b = random_operator(R, rng, 3), random_operator(R, rng, 3)
        lhs = adjoint(compose(a, b))
        rhs = compose(adjoint(b), adjoint(a))
        if lhs != rhs:
            return {"D1": format_operator(a), "D2": format_operator(b), "difference": format_operator(lhs - rhs)}
    return _sweep(ctx, 1, body)


def check_involution(ctx: Context) -> Verdict:
    def body(R, rng):
        a = random_operator(R, rng, 3)
        if adjoint(adjoint(a)) != a:
            return {"D": format_operator(a), "double_adjoint": format_operator(adjoint(adjoint(a)))}
    return _sweep(ctx, 2, body)


def check_d0_dual(ctx: Context) -> Verdict:
    """On affine n-space, the adjoint of the column d^0 is minus d^(n-1) in the alternating-sign frames."""
    witness = {}
    for n in (1, 2, 3):
        X = affine_space(n, ctx.field)
        d0 = exterior_derivative(X, 0).ops[0]
        dn = exterior_derivative(X, n - 1).ops[0]
        S = MatrixDiffOp.from_functions(dn.ring, interior_sign_matrix(n, ctx.field))
        lhs = matrix_adjoint(d0)
        rhs = -matrix_compose(dn, S)
        if lhs != rhs:
            witness[n] = {"adjoint": [[format_operator(e) for e in row] for row in lhs.entries],
                          "minus_d": [[format_operator(e) for e in row] for row in rhs.entries]}
    if witness:
        return Verdict(False, "mismatch for n in %s" % sorted(witness), witness)
    return Verdict(True, "n = 1, 2, 3")


def check_transport_linear(ctx: Context) -> Verdict:
    rng = random.Random(ctx.seed * 1009 + 3)
    R = PolynomialRing(ctx.field, ["x1", "x2"])
    cases = min(ctx.count, 50)
    for i in range(cases):
        d = random_operator(R, rng, 2)
        T = random_invertible(ctx.field, rng, 2)
        lhs = adjoint(transport(d, T))
        rhs = transport_dual(adjoint(d), T)
        if lhs != rhs:
            return Verdict(False, "case %d" % i, {"D": format_operator(d), "T": [[str(x) for x in r] for r in T],
                                                   "difference": format_operator(lhs - rhs)})
    return Verdict(True, "%d random operators under random linear changes" % cases)


def check_transport_charts(ctx: Context) -> Verdict:
    witness = {}
    rng = random.Random(ctx.seed * 1009 + 4)
    cases = min(ctx.count, 20)
    for n in (1, 2):
        X = projective_space(n, ctx.field)
        for i in range(cases):
            d = random_operator(X.charts[0], rng, 2)
            for j in range(1, n + 1):
                disc = adjoint_transport_discrepancy(X, d, 0, j)
                if disc.terms:
                    witness["P%d/%d/%d" % (n, i, j)] = {"D": format_operator(d), "discrepancy": format_operator(disc)}
    if witness:
        return Verdict(False, "%d incompatible cases" % len(witness), witness)
    return Verdict(True, "%d random operators per chart change of P1 and P2" % cases)


# ---------------------------------------------------------------------------
# cohomology

def check_line_bundle_dims(ctx: Context, n: int, d: int) -> Verdict:
    X = projective_space(n, ctx.field)
    got = cohomology(twist(X, d), ctx.window).dims
    want = [monomial_count(n, d)[k] for k in range(n + 1)]
    return Verdict(got == want, "Čech %s, oracle %s" % (got, want), {} if got == want else {"cech": got, "oracle": want})


def check_forms_dims(ctx: Context, n: int, p: int) -> Verdict:
    X = projective_space(n, ctx.field)
    got = cohomology(differential_forms(X, p), ctx.window).dims
    want = bott(n, p, 0)
    return Verdict(got == want, "Čech %s, oracle %s" % (got, want), {} if got == want else {"cech": got, "oracle": want})


# ---------------------------------------------------------------------------
# Serre pairing

def _catalog_serre(X: ChartScheme) -> list:
    n = _projective_dim(X)
    if n == 1:
        return [("O(%d)" % d, lambda d=d: twist(X, d)) for d in range(-3, 4)]
    if n == 2:
        return [("O", lambda: structure_sheaf(X)), ("O(1)", lambda: twist(X, 1)),
                ("O(-1)", lambda: twist(X, -1)), ("Omega^1", lambda: differential_forms(X, 1))]
    return []


def check_perfect(E) -> Verdict:
    n = E.base.dim
    sizes, bad = [], []
    for q in range(n + 1):
        P = serre_pairing(E, q)
        sizes.append((P.rows, P.cols))
        if not P.is_perfect():
            bad.append(q)
    if bad:
        return Verdict(False, "not perfect in degrees %s" % bad,
                       {"matrices": {q: [[str(x) for x in r] for r in serre_pairing(E, q).matrix] for q in bad}})
    return Verdict(True, "perfect; sizes %s" % sizes)


# ---------------------------------------------------------------------------
# tau and local cohomology

def _catalog_tau(X: ChartScheme) -> list:
    n = _projective_dim(X)
    if n == 1:
        return [("O", lambda: structure_sheaf(X))] + \
               [("O(%d)" % d, lambda d=d: twist(X, d)) for d in (-2, -1, 1, 2)] + \
               [("Omega^1", lambda: differential_forms(X, 1))]
    if n == 2:
        return [("O", lambda: structure_sheaf(X)), ("Omega^1", lambda: differential_forms(X, 1))]
    if X.recipe is not None and X.recipe[0] == "affine":
        return [("O", lambda: structure_sheaf(X))]
    return []


def check_tau_gluing(E) -> Verdict:
    try:
        tau = build_tau(E)
    except GluingError as exc:
        return Verdict(False, str(exc))
    return Verdict(True, "certificates on %d ordered overlaps" % len(tau.certificate))


def check_ext_cech(ctx: Context, c: int) -> Verdict:
    R = PolynomialRing(ctx.field, ["x%d" % (i + 1) for i in range(c)])
    window = 2 if c < 3 else 1
    witness = {}
    for rank in (1, 2):
        got = ExtAltCech(R, R.gens(), rank).dims(window)
        want = [0] * c + [rank * window ** c]
        if got != want:
            witness[rank] = {"got": got, "expected": want}
    if witness:
        return Verdict(False, "cohomology outside degree %d" % c, witness)
    return Verdict(True, "concentrated in degree %d (window %d, ranks 1 and 2)" % (c, window))


# ---------------------------------------------------------------------------
# well-definedness

def _generators(R: PolynomialRing) -> list:
    n = R.nvars
    p = R.field.characteristic
    gens = []
    for i in range(n):
        gens.append(("%s" % R.names[i], DividedPowerOp.multiplication(R.gen(i))))
        gens.append(("d_%s" % R.names[i], DividedPowerOp.partial(R, i, 1)))
        k = p if p else 2
        gens.append(("d_%s^[%d]" % (R.names[i], k), DividedPowerOp.partial(R, i, k)))
    return gens


def check_xi_membership(ctx: Context, n: int) -> Verdict:
    R = PolynomialRing(ctx.field, ["u%d" % (i + 1) for i in range(n)])
    gens = _generators(R)
    ops = list(gens) + [("%s*%s" % (a, b), compose(A, B)) for a, A in gens for b, B in gens]
    bad = {}
    for name, op in ops:
        member, cls = op_action_on_xi(op)
        if not member:
            bad[name] = str(cls)
    if bad:
        return Verdict(False, "%d operators outside the image" % len(bad), bad)
    return Verdict(True, "%d operators (generators and 2-fold compositions)" % len(ops))


def check_two_term(D: GlobalDiffOp) -> Verdict:
    ok, bad = two_term_tau_check(D)
    if not ok:
        return Verdict(False, "discrepancy on charts %s" % sorted(bad), {k: str(v) for k, v in bad.items()})
    return Verdict(True, "identity holds on every diagonal chart")


# ---------------------------------------------------------------------------
# catalog operators

def euler_operator(X: ChartScheme) -> GlobalDiffOp:
    """The derivation u d/du on O(1) over P1, a torus-invariant operator with nonzero H^0 action."""
    R0, R1 = X.charts
    u, v = R0.names[0], R1.names[0]
    E = twist(X, 1)
    ops = [MatrixDiffOp(R0, [[parse_operator("%s*d[1]" % u, R0)]], 1, 1),
           MatrixDiffOp(R1, [[parse_operator("-%s*d[1] + 1" % v, R1)]], 1, 1)]
    return GlobalDiffOp(E, E, ops, name="euler")


def twisted_derivative(X: ChartScheme) -> GlobalDiffOp:
    """d/du as an operator O -> O(1) on P1."""
    R0, R1 = X.charts
    v = R1.names[0]
    ops = [MatrixDiffOp(R0, [[parse_operator("d[1]", R0)]], 1, 1),
           MatrixDiffOp(R1, [[parse_operator("-%s^3*d[1]" % v, R1)]], 1, 1)]
    return GlobalDiffOp(structure_sheaf(X), twist(X, 1), ops, name="f*d")


def corrupted_operator(X: ChartScheme):
    """The same chart operators with a flipped sign on the second chart; must be rejected."""
    R0, R1 = X.charts
    v = R1.names[0]
    ops = [MatrixDiffOp(R0, [[parse_operator("d[1]", R0)]], 1, 1),
           MatrixDiffOp(R1, [[parse_operator("%s^3*d[1]" % v, R1)]], 1, 1)]
    return GlobalDiffOp(structure_sheaf(X), twist(X, 1), ops, name="corrupted")


def _catalog_complexes(X: ChartScheme) -> list:
    n = _projective_dim(X)
    out = []
    if n is None:
        return out
    out.append(("(O -d-> Omega^1)", lambda: FilteredTwoTerm(exterior_derivative(X, 0))))
    if n == 1:
        out.append(("(O(-2) -id-> O(-2))", lambda: FilteredTwoTerm(scalar_op(twist(X, -2)))))
        out.append(("(O -0-> Omega^1)", lambda: FilteredTwoTerm(zero_op(structure_sheaf(X),
                                                                        differential_forms(X, 1)))))
        out.append(("(O(1) -euler-> O(1))", lambda: FilteredTwoTerm(euler_operator(X))))
        out.append(("(O -f*d-> O(1))", lambda: FilteredTwoTerm(twisted_derivative(X))))
    if n == 2:
        out.append(("(Omega^1 -d-> Omega^2)", lambda: FilteredTwoTerm(exterior_derivative(X, 1))))
        out.append(("(O(-1) -id-> O(-1))", lambda: FilteredTwoTerm(scalar_op(twist(X, -1)))))
    return out


# ---------------------------------------------------------------------------
# de Rham

def check_derham_dims(X: ChartScheme) -> Verdict:
    n = X.dim
    M = FilteredTwoTerm(exterior_derivative(X, 0))
    H = hypercohomology(M)
    b0, b1 = bott(n, 0, 0), bott(n, 1, 0)
    want = [b0[k] + (b1[k - 1] if k >= 1 else 0) if k <= n else b1[n] for k in range(n + 2)]
    ok = H.dims == want and H.check_d_squared()
    return Verdict(ok, "hypercohomology %s, degenerate-E1 oracle %s" % (H.dims, want))


def check_e1_vanishing(X: ChartScheme) -> Verdict:
    n = X.dim
    nonzero = {}
    for p in range(min(n, 2)):
        M = FilteredTwoTerm(exterior_derivative(X, p))
        for q in range(n + 1):
            A = e1_differential(M, q)
            if any(x for row in A for x in row):
                nonzero["p=%d,q=%d" % (p, q)] = [[str(x) for x in r] for r in A]
    if nonzero:
        return Verdict(False, "nonzero E1 differentials", nonzero)
    return Verdict(True, "all E1 differentials vanish for p <= %d" % (min(n, 2) - 1))


def check_corrupted_rejected(X: ChartScheme) -> Verdict:
    try:
        corrupted_operator(X)
    except IncompatibleOperator as exc:
        return Verdict(True, "rejected", {"discrepancy": str(exc)})
    return Verdict(False, "incompatible chart operators were accepted")


# ---------------------------------------------------------------------------
# Künneth

def _pad(v, n: int) -> list:
    return list(v) + [0] * (n - len(v))


def check_kunneth(ctx: Context, X: ChartScheme, d1: int, d2: int) -> Verdict:
    P = X.__dict__.get("_self_product") or product_scheme(X)
    X._self_product = P
    G = box(twist(X, d1), twist(X, d2), P)
    got = cohomology(G, ctx.window).dims
    want = convolution(monomial_count(1, d1), monomial_count(1, d2))
    got, want = _pad(got, len(want)), _pad(want, len(got))
    ok = got == want
    return Verdict(ok, "product %s, convolution %s" % (got, want))


# ---------------------------------------------------------------------------
# assembly

A = {
    "anti": "(D1∘D2)* = D2*∘D1*",
    "inv": "(D*)* = D",
    "d0": "(d⁰)* = −d^{n−1}",
    "transport": "adjoint commutes with changes of coordinates",
    "dims": "H^k(ℙⁿ, O(d)) equals the monomial count",
    "bott": "H^q(ℙⁿ, Ω^p) equals the Bott formula",
    "serre": "Serre pairing H^q(E) × H^{n−q}(E*) → k is perfect",
    "tau": "c(id_E) glues to a global local-cohomology class",
    "ext": "local cohomology along a regular sequence is concentrated in top degree",
    "xi": "D_x(ξ) − D*_y(ξ) lies in the image of the partial localizations",
    "well-defined": "(D⊠1)τ_E = (1⊠D*)τ_F",
    "coev": "(1⊗ε)(η(1)⊗s) = s",
    "graded": "η is a graded coevaluation",
    "dual": "⟨H^q(D)s, t⟩ = σ⟨s, H^{n−q}(D*)t⟩",
    "derham": "hypercohomology of (O → Ω¹) by a degenerate first spectral sequence",
    "hodge": "E1 differentials of the Hodge filtration vanish",
    "reject": "incompatible chart operators are rejected",
    "kunneth": "H(X×X, E⊠F) = H(X, E) ⊗ H(X, F)",
}


def build_checks(suite: str, ctx: Context) -> list:
    X = ctx.scheme
    n = _projective_dim(X)
    checks = []

    def add(name, anchor, inputs, fn):
        checks.append(Check("%s.%s" % (suite, name), A[anchor], inputs, fn))

    if suite == "adjoint":
        add("anti_involution", "anti", {"count": ctx.count, "order": 3}, lambda: check_anti_involution(ctx))
        add("involution", "inv", {"count": ctx.count, "order": 3}, lambda: check_involution(ctx))
        add("d0_dual", "d0", {"n": [1, 2, 3]}, lambda: check_d0_dual(ctx))
        add("transport_linear", "transport", {"n": 2}, lambda: check_transport_linear(ctx))
        add("transport_charts", "transport", {"schemes": ["P1", "P2"]}, lambda: check_transport_charts(ctx))
    elif suite == "cohomology":
        if n is None:
            add("line_bundles", "dims", {}, lambda: _skip("needs a projective space"))
        else:
            for d in range(-4, 5):
                add("O(%+d)" % d, "dims", {"d": d}, lambda d=d: check_line_bundle_dims(ctx, n, d))
            for p in range(n + 1):
                add("Omega^%d" % p, "bott", {"p": p}, lambda p=p: check_forms_dims(ctx, n, p))
    elif suite == "serre":
        cat = _catalog_serre(X)
        if not cat:
            add("pairing", "serre", {}, lambda: _skip("needs P1 or P2"))
        for label, mk in cat:
            add(label, "serre", {"sheaf": label}, lambda mk=mk: check_perfect(mk()))
    elif suite == "tau":
        for label, mk in _catalog_tau(X):
            add("gluing." + label, "tau", {"sheaf": label}, lambda mk=mk: check_tau_gluing(mk()))
        for c in (1, 2, 3):
            add("ext_cech.c%d" % c, "ext", {"c": c}, lambda c=c: check_ext_cech(ctx, c))
    elif suite == "well-defined":
        for k in (1, 2):
            add("xi_membership.n%d" % k, "xi", {"n": k}, lambda k=k: check_xi_membership(ctx, k))
        if n is not None or (X.recipe and X.recipe[0] == "affine"):
            add("de_rham", "well-defined", {"D": "d0"}, lambda: check_two_term(exterior_derivative(X, 0)))
        if n == 1:
            add("euler", "well-defined", {"D": "euler"}, lambda: check_two_term(euler_operator(X)))
            add("twisted", "well-defined", {"D": "f*d"}, lambda: check_two_term(twisted_derivative(X)))
            add("reject_corrupted", "reject", {}, lambda: check_corrupted_rejected(X))
    elif suite == "coevaluation":
        if n != 1:
            add("identity", "coev", {}, lambda: _skip("implemented on curves (P1)"))
        else:
            for d in range(-2, 3):
                add("O(%+d)" % d, "coev", {"d": d}, lambda d=d: coevaluation_check(twist(X, d)))
            add("graded.de_rham", "graded", {"M": "(O -d-> Omega^1)"},
                lambda: graded_coevaluation_check(FilteredTwoTerm(exterior_derivative(X, 0))))
            add("graded.identity", "graded", {"M": "(O -id-> O)"},
                lambda: graded_coevaluation_check(FilteredTwoTerm(scalar_op(structure_sheaf(X)))))
    elif suite == "dual-diff":
        cat = _catalog_complexes(X)
        if not cat:
            add("adjointness", "dual", {}, lambda: _skip("needs P1 or P2"))
        for label, mk in cat:
            add(label, "dual", {"M": label}, lambda mk=mk: dual_differential_check(mk()))
    elif suite == "derham":
        if n is None:
            add("betti", "derham", {}, lambda: _skip("needs a projective space"))
        else:
            add("betti", "derham", {"M": "(O -d-> Omega^1)"}, lambda: check_derham_dims(X))
            add("duality", "dual", {"M": "(O -d-> Omega^1)"},
                lambda: dual_differential_check(FilteredTwoTerm(exterior_derivative(X, 0))))
            add("e1_vanishing", "hodge", {}, lambda: check_e1_vanishing(X))
    elif suite == "kunneth":
        C = _base_curve(X)
        if C is None:
            add("dims", "kunneth", {}, lambda: _skip("implemented over P1"))
        else:
            for d1 in (0, -2, 1):
                for d2 in (0, -2, 1):
                    add("O(%+d)xO(%+d)" % (d1, d2), "kunneth", {"E": d1, "F": d2},
                        lambda d1=d1, d2=d2: check_kunneth(ctx, C, d1, d2))
    else:
        raise ValueError("unknown suite %r" % suite)
    return checks


def run_check(suite: str, check: Check) -> CheckResult:
    t0 = time.perf_counter()
    try:
        v = check.run()
        verdict = "skip" if v.skipped else ("pass" if v.ok else "fail")
        message, witness = v.message, v.witness
    except IncompatibleOperator as exc:
        verdict, message = "fail", "%s: %s" % (type(exc).__name__, exc)
        witness = {"overlap": list(exc.overlap), "discrepancy": str(exc.discrepancy)}
    except (WindowInstability, GluingError, ValueError, NotImplementedError) as exc:
        verdict, message, witness = "fail", "%s: %s" % (type(exc).__name__, exc), {}
    ms = int(round((time.perf_counter() - t0) * 1000))
    return CheckResult(suite, check.name, check.anchor, check.inputs, verdict, message, witness, ms)


def run_suites(suites, ctx: Context) -> list:
    results = []
    for s in suites:
        for c in build_checks(s, ctx):
            results.append(run_check(s, c))
    return sorted(results, key=lambda r: r.name)


__all__ = ["SUITES", "Check", "CheckResult", "Context", "build_checks", "run_check", "run_suites",
           "euler_operator", "twisted_derivative", "corrupted_operator"]
