import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from glacalc.algebroid import bracket, standard_algebroid
from glacalc.connection import (Connection, VectorValuedForm, connection_forms, covariant_derivative,
                                curvature, curvature_components, torsion, torsion_components,
                                verify_bianchi_identities, verify_cartan_identities, verify_torsion_paths)
from glacalc.errors import DimensionError
from glacalc.expr import coords
from glacalc.forms import INTRINSIC, coframe, d, evaluate, wedge, zero_form
from glacalc.sampling import random_connection, random_section, so3
from strategies import corpus_algebras, rngs

R1 = coords("x")
R3 = coords("x", "y", "z")


def test_zero_connection_constant_section():
    A = standard_algebroid(R3)
    C = Connection(A)
    assert covariant_derivative(C, A.frame(0), A.section([1, 2, 3])).is_zero()
    assert all(w.is_zero() for row in connection_forms(C) for w in row)
    assert verify_cartan_identities(C).passed
    assert verify_bianchi_identities(C).passed
    assert torsion(C).is_zero()
    assert all(R.is_zero() for row in curvature(C) for R in row)


def test_frame_derivative_is_gamma():
    rng = random.Random(0)
    A = so3()
    C = random_connection(rng, A)
    t = A.frames()
    for b in range(3):
        for c in range(3):
            assert covariant_derivative(C, t[c], t[b]) == A.section([C.gamma(a, b, c) for a in range(3)])


def test_rank_one_line():
    A = standard_algebroid(R1)
    x = R1.coordinate(0)
    C = Connection(A, {(0, 0, 0): x})
    assert covariant_derivative(C, A.frame(0), A.frame(0)) == A.frame(0) * x
    assert curvature(C)[0][0].is_zero()
    assert curvature(C)[0][0].degree == 2


def test_connection_form_evaluates_to_gamma():
    rng = random.Random(1)
    A = standard_algebroid(R3)
    C = random_connection(rng, A)
    Om = connection_forms(C)
    for a in range(3):
        for b in range(3):
            for c in range(3):
                assert evaluate(Om[a][b], A.frame(c)) == C.gamma(a, b, c)


def test_symmetric_gamma_is_torsion_free():
    rng = random.Random(2)
    C = random_connection(rng, standard_algebroid(R3), symmetric=True)
    assert C.is_symmetric()
    assert torsion(C).is_zero()
    rep = verify_bianchi_identities(C)
    assert rep.passed
    assert any(f.check == "torsion_free_bianchi" for f in rep.findings)


def test_zero_connection_on_so3_torsion_is_minus_structure():
    A = so3()
    T = torsion_components(Connection(A))
    for c in range(3):
        for (a, b), v in T[c].items():
            assert v == -A.L(c, a, b)


def test_classical_first_structure_equation():
    # T^i = Omega^i_j ^ dx^j on the tangent algebroid
    rng = random.Random(3)
    A = standard_algebroid(R3)
    C = random_connection(rng, A)
    Om = connection_forms(C)
    t = [coframe(A, i) for i in range(3)]
    for i in range(3):
        rhs = zero_form(A, 2)
        for j in range(3):
            rhs = rhs + (Om[i][j] ^ t[j])
        assert torsion(C)[i] == rhs


def test_curvature_matches_structure_equation_standard_R3():
    rng = random.Random(4)
    A = standard_algebroid(R3)
    C = random_connection(rng, A, max_degree=2)
    Om = connection_forms(C)
    R = curvature(C)
    for a in range(3):
        for b in range(3):
            rhs = d(Om[a][b], method=INTRINSIC)
            for c in range(3):
                rhs = rhs + wedge(Om[a][c], Om[c][b], method=INTRINSIC)
            assert R[a][b] == rhs


def test_bad_index_and_vector_form_degree():
    with pytest.raises(DimensionError):
        Connection(so3(), {(0, 0, 3): 1})
    A = so3()
    with pytest.raises(DimensionError):
        VectorValuedForm(2, (zero_form(A, 2), zero_form(A, 1)))


def test_nested_gamma_input():
    A = standard_algebroid(R1)
    assert Connection(A, [[["x"]]]).gamma(0, 0, 0) == R1.coordinate(0)


def test_unknown_torsion_method():
    with pytest.raises(ValueError):
        torsion_components(Connection(so3()), method="other")


# -- properties -----------------------------------------------------------------------

@given(corpus_algebras(), rngs(), st.booleans())
def test_cartan_and_bianchi_on_random_connections(A, rng, symmetric):
    C = random_connection(rng, A, max_degree=1, symmetric=symmetric)
    assert verify_cartan_identities(C).passed
    assert verify_bianchi_identities(C).passed
    assert verify_torsion_paths(C).passed


@given(corpus_algebras(), rngs())
def test_torsion_and_curvature_antisymmetric(A, rng):
    C = random_connection(rng, A, max_degree=1)
    t = A.frames()
    T = torsion(C)
    R = curvature(C)
    for a in range(A.rank):
        for b in range(A.rank):
            assert evaluate(T[a], t[b], t[a]) == -evaluate(T[a], t[a], t[b])
            for c in range(A.rank):
                assert evaluate(R[a][b], t[c], t[a]) == -evaluate(R[a][b], t[a], t[c])


@given(corpus_algebras(), rngs())
def test_torsion_tensorial_in_sections(A, rng):
    # T(U, V) = D_U V - D_V U - [U, V] evaluated on arbitrary sections
    C = random_connection(rng, A, max_degree=1)
    U, V = random_section(rng, A, max_degree=1), random_section(rng, A, max_degree=1)
    direct = covariant_derivative(C, U, V) - covariant_derivative(C, V, U) - bracket(U, V)
    T = torsion(C)
    assert direct == A.section([evaluate(T[c], U, V) for c in range(A.rank)])


@given(corpus_algebras(), rngs())
def test_curvature_components_match_forms(A, rng):
    C = random_connection(rng, A, max_degree=1)
    comps = curvature_components(C)
    R = curvature(C)
    for a in range(A.rank):
        for b in range(A.rank):
            for key, v in comps[a][b].items():
                assert R[a][b][key] == v
