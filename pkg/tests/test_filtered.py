import pytest
from hypothesis import given
from hypothesis import strategies as st

from diffdual.cech import cohomology
from diffdual.filtered import (FilteredComplex, FilteredTwoTerm, coevaluation_check, coevaluation_matrices,
                               dual_differential_check, e1_differential, eta_copairing,
                               graded_coevaluation_check, gr_tensor_check, hypercohomology,
                               kunneth_coordinates, serre_pairing, tensor_filtered)
from diffdual.local_coh import build_tau, to_global
from diffdual.ring import GF, QQ, linalg
from diffdual.sheaves import (IncompatibleOperator, differential_forms, exterior_derivative, projective_space, scalar_op,
                              structure_sheaf, twist, zero_op, zero_sheaf)
from diffdual.suites import corrupted_operator, euler_operator, twisted_derivative


@pytest.fixture(scope="module")
def P1():
    return projective_space(1)


@pytest.fixture(scope="module")
def P2():
    return projective_space(2)


def de_rham(X):
    return FilteredTwoTerm(exterior_derivative(X, 0))


# ---------------------------------------------------------------------------
# hypercohomology

@pytest.mark.parametrize("field", [QQ, GF(5)], ids=str)
def test_de_rham_of_p1(field):
    assert hypercohomology(de_rham(projective_space(1, field))).dims == [1, 0, 1]


def test_de_rham_truncation_on_p2(P2):
    # H^k of (O -> Omega^1) on P2: H^0(O), then H^1(Omega^1), nothing else
    assert hypercohomology(de_rham(P2)).dims == [1, 0, 1, 0]


def test_zero_differential_splits(P1):
    O = structure_sheaf(P1)
    H = hypercohomology(FilteredTwoTerm(zero_op(O, O)))
    h = cohomology(O).dims + [0]
    assert H.dims == [h[k] + (h[k - 1] if k else 0) for k in range(3)]


def test_identity_is_acyclic(P1):
    assert hypercohomology(FilteredTwoTerm(scalar_op(structure_sheaf(P1)))).dims == [0, 0, 0]


def test_catalog_operators(P1):
    assert hypercohomology(FilteredTwoTerm(twisted_derivative(P1))).dims == [1, 2, 0]
    assert hypercohomology(FilteredTwoTerm(euler_operator(P1))).dims == [1, 1, 0]


def test_total_differential_squares_to_zero(P1, P2):
    for M in (de_rham(P1), de_rham(P2), FilteredTwoTerm(twisted_derivative(P1)),
              FilteredTwoTerm(euler_operator(P1))):
        assert hypercohomology(M).check_d_squared()


def test_corrupted_operator_never_reaches_a_complex(P1):
    with pytest.raises(IncompatibleOperator):
        corrupted_operator(P1)


# ---------------------------------------------------------------------------
# E_1 differentials and Serre pairings

def test_e1_de_rham(P1):
    M = de_rham(P1)
    assert e1_differential(M, 0) == []
    assert e1_differential(M, 1) == [[]]


def test_e1_twisted_derivative(P1):
    # d/du kills the constant section
    assert e1_differential(FilteredTwoTerm(twisted_derivative(P1)), 0) == [[0], [0]]


def test_e1_euler(P1):
    A = e1_differential(FilteredTwoTerm(euler_operator(P1)), 0)
    assert sorted(A[i][i] for i in range(2)) == [0, 1]
    assert A[0][1] == A[1][0] == 0


def test_serre_pairing_examples(P1, P2):
    P = serre_pairing(twist(P1, 2), 0)
    assert (P.rows, P.cols) == (3, 3) and P.is_perfect()
    assert serre_pairing(structure_sheaf(P1), 0).matrix in ([[1]], [[-1]])
    P = serre_pairing(differential_forms(P2, 1), 1)
    assert (P.rows, P.cols) == (1, 1) and P.is_perfect()


@pytest.mark.parametrize("d", [-3, -1, 0, 1])
def test_serre_pairing_perfect_on_p2(P2, d):
    E = twist(P2, d)
    for q in range(3):
        assert serre_pairing(E, q).is_perfect()


# ---------------------------------------------------------------------------
# coevaluation

def test_kunneth_coordinates_of_structure_sheaf(P1):
    O = structure_sheaf(P1)
    assert kunneth_coordinates(O, to_global(build_tau(O))) == {0: [[1]], 1: []}


@pytest.mark.parametrize("d", [-2, -1, 0, 1, 2])
def test_coevaluation_identity(P1, d):
    E = twist(P1, d)
    mats = coevaluation_matrices(E)
    for p, m in mats.items():
        assert m == linalg.identity(QQ, cohomology(E).dim(p))
    assert coevaluation_check(E).ok


def test_coevaluation_forms(P1):
    assert coevaluation_check(differential_forms(P1, 1)).ok


def test_coevaluation_over_f5():
    assert coevaluation_check(twist(projective_space(1, GF(5)), 1)).ok


# ---------------------------------------------------------------------------
# eta

def test_eta_de_rham(P1):
    eta = eta_copairing(de_rham(P1))
    assert eta.g_E.degree == 1 and eta.w.degree == 0


def test_eta_one_term_degenerations(P1):
    O = structure_sheaf(P1)
    Z = zero_sheaf(P1)
    eta = eta_copairing(FilteredTwoTerm(zero_op(O, Z)))
    assert eta.g_F.is_zero() and eta.w.is_zero()
    assert eta.g_E.values == to_global(build_tau(O), eta.g_E.sheaf.base).values
    eta = eta_copairing(FilteredTwoTerm(zero_op(Z, O)))
    assert eta.g_E.is_zero() and eta.w.is_zero() and not eta.g_F.is_zero()


@pytest.mark.parametrize("make", [
    lambda X: exterior_derivative(X, 0),
    lambda X: zero_op(structure_sheaf(X), differential_forms(X, 1)),
    lambda X: scalar_op(structure_sheaf(X)),
    twisted_derivative,
], ids=["de_rham", "zero", "identity", "twisted"])
def test_graded_coevaluation(P1, make):
    v = graded_coevaluation_check(FilteredTwoTerm(make(P1)))
    assert v.ok, v.message


# ---------------------------------------------------------------------------
# duality of differentials

@pytest.mark.parametrize("make", [
    lambda X: exterior_derivative(X, 0),
    lambda X: scalar_op(twist(X, -2)),
    lambda X: zero_op(structure_sheaf(X), differential_forms(X, 1)),
    euler_operator,
    twisted_derivative,
], ids=["de_rham", "identity_O(-2)", "zero", "euler", "twisted"])
def test_dual_differentials(P1, make):
    v = dual_differential_check(FilteredTwoTerm(make(P1)))
    assert v.ok, v.witness


def test_dual_differentials_p2(P2):
    v = dual_differential_check(de_rham(P2))
    assert v.ok
    # the dual side of d^0 is H^2(d^1) = 0, deduced from H^0(d^0) = 0 and perfect pairings
    assert v.witness[0]["B"] == [] or all(x == "0" for row in v.witness[0]["B"] for x in row)


def test_euler_dual_matrices(P1):
    v = dual_differential_check(FilteredTwoTerm(euler_operator(P1)))
    assert v.witness[0]["deduced_B_matches"]


def test_dual_of_dual(P1):
    M = de_rham(P1)
    assert M.dual().dual() is M
    assert M.gr(0) is M.E and M.gr(1) is M.F
    with pytest.raises(ValueError):
        M.gr(2)


# ---------------------------------------------------------------------------
# finite filtered complexes

@st.composite
def two_step_complexes(draw, field=QQ):
    """Two-term filtered complexes V^0 -> V^1 with levels in {0, 1} and a level-preserving differential."""
    n0 = draw(st.integers(0, 3))
    n1 = draw(st.integers(0, 3))
    l0 = draw(st.lists(st.integers(0, 1), min_size=n0, max_size=n0))
    l1 = draw(st.lists(st.integers(0, 1), min_size=n1, max_size=n1))
    M = [[field(draw(st.integers(-2, 2))) if l1[r] >= l0[c] else field.zero for c in range(n0)] for r in range(n1)]
    return FilteredComplex(field, {0: l0, 1: l1}, {0: M})


@given(two_step_complexes(), two_step_complexes())
def test_gr_commutes_with_tensor(L, Lp):
    assert tensor_filtered(L, Lp).is_complex()
    assert gr_tensor_check(L, Lp)


@given(two_step_complexes(GF(2)), two_step_complexes(GF(2)))
def test_gr_commutes_with_tensor_char2(L, Lp):
    assert gr_tensor_check(L, Lp)


def test_filtration_violation_rejected():
    with pytest.raises(ValueError):
        FilteredComplex(QQ, {0: [1], 1: [0]}, {0: [[QQ(1)]]})


def test_tensor_cohomology_kunneth():
    L = FilteredComplex(QQ, {0: [0, 1], 1: [1]}, {0: [[QQ(1), QQ(0)]]})
    T = tensor_filtered(L, L)
    assert T.cohomology_dims() == {0: 1, 1: 0, 2: 0}
