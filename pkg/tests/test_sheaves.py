import pytest
from hypothesis import given
from hypothesis import strategies as st

from diffdual.diffop import DividedPowerOp, MatrixDiffOp, parse_operator
from diffdual.ring import GF, QQ
from diffdual.sheaves import (GlobalDiffOp, IncompatibleOperator, adjoint_transport_discrepancy,
                              affine_space, differential_forms, dual, dual_star, exterior_derivative,
                              frame_isomorphism, global_adjoint, interior_sign_matrix,
                              line_bundle_isomorphism, product_scheme, projective_space, scalar_op,
                              scheme_from_name, section_multiplication, structure_sheaf, twist)
from strategies import operators


@pytest.fixture(scope="module")
def P1():
    return projective_space(1)


@pytest.fixture(scope="module")
def P2():
    return projective_space(2)


def test_projective_line_atlas(P1):
    assert P1.nchart_count() == 2
    assert [R.nvars for R in P1.charts] == [1, 1]
    # the chart-1 coordinate is the inverse of the chart-0 coordinate
    assert P1.coord_map[0][1] == [(-1,)]
    u = P1.charts[1].gen(0)
    assert P1.to_chart(0, 1, u) == P1.charts[0].gen(0) ** -1
    P1.verify_cocycle()


def test_product_atlas(P1):
    P = product_scheme(P1)
    assert P.nchart_count() == 4 and P.dim == 2
    assert P.labels == ["U0xU0", "U0xU1", "U1xU0", "U1xU1"]
    P.verify_cocycle()


def test_affine_plane_single_chart():
    A = affine_space(2)
    assert A.nchart_count() == 1 and A.charts[0].names == ("x1", "x2")


def test_scheme_names():
    assert scheme_from_name("P2").dim == 2
    assert scheme_from_name("A2").nchart_count() == 1
    assert scheme_from_name("P1xP1-selfproduct").nchart_count() == 4
    with pytest.raises(ValueError):
        scheme_from_name("Q7")


@pytest.mark.parametrize("d", range(-3, 4))
def test_dual_of_line_bundle_on_p1(P1, d):
    Es = dual_star(twist(P1, d))
    # equal to O(-d-2) after rescaling the chart-1 frame by -1 (the Jacobian sign)
    assert line_bundle_isomorphism(Es, twist(P1, -d - 2)) == [1, -1]
    assert line_bundle_isomorphism(Es, twist(P1, -d - 1)) is None


def test_canonical_of_p2(P2):
    W = dual_star(structure_sheaf(P2))
    assert W.transitions[(0, 1)][0][0].is_monomial()
    assert line_bundle_isomorphism(W, twist(P2, -3)) == [1, -1, 1]


@pytest.mark.parametrize("E", ["O(1)", "Omega1"])
def test_double_star_transitions(P1, P2, E):
    sheaf = twist(P1, 1) if E == "O(1)" else differential_forms(P2, 1)
    assert dual_star(dual_star(sheaf)).transitions == sheaf.transitions


def test_interior_sign_identification(P2):
    # (Omega^1)* = (Omega^1)^v (x) omega is Omega^1 via the alternating-sign matrix
    S = interior_sign_matrix(2, QQ)
    assert frame_isomorphism(dual_star(differential_forms(P2, 1)), differential_forms(P2, 1), S)


def test_de_rham_operator_accepted(P1):
    d = exterior_derivative(P1, 0)
    assert d.weight_shift() == (0,)


def test_mismatched_operators_rejected(P1):
    R0, R1 = P1.charts
    ops = [MatrixDiffOp(R0, [[DividedPowerOp.partial(R0, 0)]]),
           MatrixDiffOp(R1, [[DividedPowerOp.partial(R1, 0, 1, R1(2))]])]
    with pytest.raises(IncompatibleOperator) as info:
        GlobalDiffOp(structure_sheaf(P1), differential_forms(P1, 1), ops)
    assert info.value.overlap == ("U0", "U1")
    assert "d[1]" in str(info.value)


def test_scalar_accepted(P2):
    scalar_op(differential_forms(P2, 1), 3)


def test_global_adjoint_of_d0_is_minus_d(P1, P2):
    (g,) = global_adjoint(exterior_derivative(P1, 0)).ops[0].entries[0]
    assert g == DividedPowerOp.partial(P1.charts[0], 0, 1, P1.charts[0](-1))
    R = P2.charts[0]
    adj = global_adjoint(exterior_derivative(P2, 0)).ops[0]
    assert [e for e in adj.entries[0]] == [DividedPowerOp.partial(R, 0, 1, R(-1)),
                                           DividedPowerOp.partial(R, 1, 1, R(-1))]


def test_global_adjoint_of_multiplication(P1):
    D = section_multiplication(P1, 0, 1, {(1, 0): 2, (0, 1): -1})
    A = global_adjoint(D)
    for Dm, Am in zip(D.ops, A.ops):
        assert Am.entries[0][0] == Dm.entries[0][0]


def _vector_field(P1, c):
    """c0 + c1 d/du + c2 u d/du + c3 u^2 d/du on O over P1."""
    R0, R1 = P1.charts
    u, v = R0.names[0], R1.names[0]
    t0 = "%s + %s*d[1] + %s*%s*d[1] + %s*%s^2*d[1]" % (c[0], c[1], c[2], u, c[3], u)
    t1 = "%s - %s*%s^2*d[1] - %s*%s*d[1] - %s*d[1]" % (c[0], c[1], v, c[2], v, c[3])
    ops = [MatrixDiffOp(R0, [[parse_operator(t0, R0)]]), MatrixDiffOp(R1, [[parse_operator(t1, R1)]])]
    return GlobalDiffOp(structure_sheaf(P1), structure_sheaf(P1), ops)


@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_double_global_adjoint(c):
    P1 = projective_space(1)
    D = _vector_field(P1, c)
    DD = global_adjoint(global_adjoint(D))
    assert [m.entries for m in DD.ops] == [m.entries for m in D.ops]


@pytest.mark.parametrize("field", [QQ, GF(5)], ids=str)
@pytest.mark.parametrize("n", [1, 2])
def test_adjoint_compatible_with_chart_changes(field, n):
    X = projective_space(n, field)

    @given(operators(X.charts[0], 2))
    def check(d):
        for j in range(1, n + 1):
            assert not adjoint_transport_discrepancy(X, d, 0, j).terms

    check()


def test_dual_transitions_are_inverse_transpose(P2):
    E = differential_forms(P2, 1)
    Ed = dual(E)
    R = P2.charts[0]
    T, Td = E.transitions[(0, 1)], Ed.transitions[(0, 1)]
    prod = [[sum((T[k][a] * Td[k][b] for k in range(2)), R.zero()) for b in range(2)] for a in range(2)]
    assert prod == [[R.one(), R.zero()], [R.zero(), R.one()]]
