import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from glacalc.algebroid import (FrameAlgebra, GeneralizedLieAlgebroidSpec, anchor_apply, as_frame_algebra,
                               bracket, change_coordinates, effective_anchor, frame_change, lie_algebra,
                               pullback_algebroid, standard_algebroid, validate_axioms)
from glacalc.errors import AnchorError, DimensionError
from glacalc.expr import CoordinateSystem, coords
from glacalc.linalg import ExprMatrix
from glacalc.sampling import (SO3, corpus, generalized_spec, random_poly, random_section, random_unipotent,
                              so3, so3_action, so3_perturbed)
from strategies import XY, corpus_algebras, rngs

PT = CoordinateSystem(())


def jacobi_oracle(table, p):
    """Brute-force cyclic sum over structure constants of a Lie algebra."""
    full = {}
    for (g, a, b), v in table.items():
        full[(g, a, b)] = v
        full[(g, b, a)] = -v

    def L(g, a, b):
        return full.get((g, a, b), 0)
    bad = {}
    for a, b, c in product(range(p), repeat=3):
        if not a < b < c:
            continue
        for e in range(p):
            s = sum(L(d, a, b) * L(e, d, c) + L(d, b, c) * L(e, d, a) + L(d, c, a) * L(e, d, b)
                    for d in range(p))
            if s:
                bad.setdefault((a + 1, b + 1, c + 1), {})[e] = s
    return bad


def test_so3_bracket():
    A = so3()
    t = A.frames()
    assert bracket(t[0], t[1]) == t[2]
    assert bracket(t[1], t[2]) == t[0]
    assert bracket(t[2], t[0]) == t[1]
    assert bracket(t[1], t[0]) == -t[2]


def test_tangent_leibniz_example():
    A = standard_algebroid(XY)
    x = XY.coordinate("x")
    t1, t2 = A.frames()
    assert bracket(t1, t2 * x) == t2


def test_anchor_apply_examples():
    A = standard_algebroid(XY)
    x, y = XY.coordinates()
    assert anchor_apply(A.frame(0), x) == 1
    assert anchor_apply(A.frame(0), XY.const(5)).is_zero()
    z = A.section([y, x**2])
    assert anchor_apply(z, x * y) == y * y + x**3


def test_mismatched_algebras():
    with pytest.raises(Exception):
        bracket(so3().frame(0), standard_algebroid(XY).frame(0))


def test_validate_standard_and_so3():
    assert validate_axioms(standard_algebroid(coords("x", "y", "z"))).passed
    assert validate_axioms(so3()).passed
    assert validate_axioms(so3_action()).passed
    assert jacobi_oracle(SO3, 3) == {}


def test_scaled_so3_is_still_a_lie_algebra():
    # L^3_12 = 2, others 1: a rescaling of so(3), so Jacobi holds
    table = dict(SO3)
    table[(2, 0, 1)] = 2
    assert validate_axioms(lie_algebra(3, table)).passed
    assert jacobi_oracle(table, 3) == {}


def test_perturbed_so3_fails_jacobi_on_123():
    A = so3_perturbed()
    report = validate_axioms(A)
    assert not report.passed
    fails = report.failures
    assert [(f.check, f.indices) for f in fails] == [("jacobi", (1, 2, 3))]
    expected = jacobi_oracle({**SO3, (0, 0, 1): 1}, 3)[(1, 2, 3)]
    residual = fails[0].residual
    assert {a: residual[a] for a in range(3) if not residual[a].is_zero()} == expected


def test_anchor_morphism_failure_reports_triple():
    X = coords("x")
    x = X.coordinate(0)
    # [t1, t2] = 0 but the anchors x d/dx and d/dx do not commute
    A = FrameAlgebra(X, [[1, x]], rank=2)
    fails = validate_axioms(A).failures
    assert [(f.check, f.indices) for f in fails] == [("anchor_morphism", (1, 2, 1))]
    assert fails[0].residual == -1


# -- generalized declarations ------------------------------------------------------------

def test_effective_anchor_identity_maps():
    N = coords("x", "y")
    spec = GeneralizedLieAlgebroidSpec(coords("u", "v"), N, 2, ExprMatrix.identity(N, 2),
                                       ("u", "v"), ("x", "y"))
    assert effective_anchor(spec) == ExprMatrix.identity(N, 2)
    assert as_frame_algebra(spec).same_as(standard_algebroid(N))


def test_effective_anchor_over_a_point():
    spec = GeneralizedLieAlgebroidSpec(PT, PT, 3, ExprMatrix.zeros(PT, 0, 3), (), (), SO3)
    theta = effective_anchor(spec)
    assert theta.shape == (0, 3)
    assert as_frame_algebra(spec).same_as(so3())


def test_effective_anchor_square_map_is_rejected():
    M, N = coords("x"), coords("k")
    spec = GeneralizedLieAlgebroidSpec(M, N, 1, [[1]], ("x^2",), ("k",))
    with pytest.raises(AnchorError, match="no inverse"):
        effective_anchor(spec)


def test_effective_anchor_with_supplied_inverse():
    M, N = coords("x"), coords("k")
    # h = x + 1, eta = k: h o eta = k + 1
    spec = GeneralizedLieAlgebroidSpec(M, N, 1, [["k"]], ("x + 1",), ("k",), h_eta_inverse=("k - 1",))
    # theta(k) = rho(k - 1)
    assert effective_anchor(spec)[0, 0] == N.parse("k - 1")
    bad = GeneralizedLieAlgebroidSpec(M, N, 1, [["k"]], ("x + 1",), ("k",), h_eta_inverse=("k + 1",))
    with pytest.raises(AnchorError, match="not an inverse"):
        effective_anchor(bad)


def test_spec_shape_errors():
    M, N = coords("x"), coords("k")
    with pytest.raises(DimensionError):
        GeneralizedLieAlgebroidSpec(M, N, 2, [["k"]], ("x",), ("k",))
    with pytest.raises(DimensionError):
        GeneralizedLieAlgebroidSpec(M, N, 1, [["k"]], ("x", "x"), ("k",))


def test_pullback_examples():
    M, N = coords("x"), coords("k")
    spec = GeneralizedLieAlgebroidSpec(M, N, 1, [["k"]], ("x + 1",), ("k",), h_eta_inverse=("k - 1",))
    P = pullback_algebroid(spec)
    assert P.anchor[0, 0] == M.parse("x + 1")
    assert P.coords == M
    same = GeneralizedLieAlgebroidSpec(N, N, 1, [["k"]], ("k",), ("k",))
    assert pullback_algebroid(same).same_as(as_frame_algebra(same))


@pytest.mark.parametrize("entry", corpus(0), ids=lambda e: e.name)
def test_pullback_of_generalized_corpus_validates(entry):
    spec = generalized_spec(entry.algebra, random.Random(3))
    assert spec.h_eta_is_identity()
    assert as_frame_algebra(spec).same_as(entry.algebra)
    assert validate_axioms(pullback_algebroid(spec)).passed


def test_frame_and_coordinate_changes_preserve_validity():
    rng = random.Random(1)
    A = so3_action()
    B = frame_change(A, random_unipotent(rng, A.coords, 3))
    assert validate_axioms(B).passed
    X = coords("a", "b", "c")
    a, b, c = X.coordinates()
    C = change_coordinates(A, X, [a, b + a**2, c - b], ["x", "y - x^2", "z + y - x^2"])
    assert validate_axioms(C).passed
    with pytest.raises(AnchorError):
        change_coordinates(A, X, [a, b + a**2, c - b], ["x", "y", "z"])


# -- properties ------------------------------------------------------------------------

@given(corpus_algebras(), rngs())
def test_bracket_antisymmetric(A, rng):
    u, v = random_section(rng, A), random_section(rng, A)
    assert bracket(u, v) == -bracket(v, u)
    assert bracket(u, u).is_zero()


@given(corpus_algebras(), rngs())
def test_bracket_leibniz(A, rng):
    u, v = random_section(rng, A), random_section(rng, A)
    f = random_poly(rng, A.coords)
    assert bracket(u, v * f) == bracket(u, v) * f + v * anchor_apply(u, f)


@given(corpus_algebras(), rngs())
def test_anchor_is_a_derivation(A, rng):
    z = random_section(rng, A)
    f, g = random_poly(rng, A.coords), random_poly(rng, A.coords)
    assert anchor_apply(z, f * g) == anchor_apply(z, f) * g + f * anchor_apply(z, g)


@given(corpus_algebras(), rngs())
def test_anchor_preserves_brackets(A, rng):
    u, v = random_section(rng, A), random_section(rng, A)
    f = random_poly(rng, A.coords)
    lhs = anchor_apply(bracket(u, v), f)
    rhs = anchor_apply(u, anchor_apply(v, f)) - anchor_apply(v, anchor_apply(u, f))
    assert lhs == rhs


@given(corpus_algebras(), rngs())
def test_jacobi_on_random_sections(A, rng):
    u, v, w = (random_section(rng, A, max_degree=1) for _ in range(3))
    total = bracket(bracket(u, v), w) + bracket(bracket(v, w), u) + bracket(bracket(w, u), v)
    assert total.is_zero()


@given(st.dictionaries(st.sampled_from([(g, a, b) for g in range(3) for a in range(3) for b in range(a + 1, 3)]),
                       st.integers(-2, 2), max_size=5))
def test_validator_matches_jacobi_oracle(table):
    table = {k: v for k, v in table.items() if v}
    report = validate_axioms(lie_algebra(3, table))
    oracle = jacobi_oracle(table, 3)
    assert report.passed == (not oracle)
    assert {f.indices for f in report.failures} == set(oracle)
