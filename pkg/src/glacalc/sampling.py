"""Seeded random expressions, forms, sections and connections, plus a small
corpus of validated algebroids for property checks.

Randomized algebroids are built by transporting a known algebroid along a
triangular polynomial change of coordinates and a unipotent polynomial frame
change, so they satisfy the axioms by construction.
"""
from __future__ import annotations

import random
from itertools import combinations
from typing import List, NamedTuple, Optional, Sequence, Tuple

from . import _poly as P
from .algebroid import FrameAlgebra, GeneralizedLieAlgebroidSpec, lie_algebra, standard_algebroid
from .connection import Connection
from .expr import CoordinateSystem, Expr, coords
from .forms import Form, Morphism, induced_morphism
from .linalg import ExprMatrix


def _monomials(n: int, max_degree: int) -> List[Tuple[int, ...]]:
    out = [()] if n == 0 else []
    if n == 0:
        return [()]

    def rec(prefix, left, k):
        if k == n:
            out.append(tuple(prefix))
            return
        for e in range(left + 1):
            rec(prefix + [e], left - e, k + 1)

    rec([], max_degree, 0)
    return sorted(out, key=P.grlex_key)


def random_poly(rng: random.Random, X: CoordinateSystem, max_degree: int = 2, terms: int = 3,
                coeff: int = 3) -> Expr:
    """Polynomial with up to ``terms`` monomials and integer coefficients in ``[-coeff, coeff]``."""
    monos = _monomials(X.dimension, max_degree)
    num = {}
    for _ in range(terms):
        m = rng.choice(monos)
        c = rng.randint(-coeff, coeff)
        if c:
            num[m] = num.get(m, 0) + c
    num = {m: P.Fraction(c) for m, c in num.items() if c}
    return Expr(X, num)


def random_expr(rng: random.Random, X: CoordinateSystem, max_degree: int = 3) -> Expr:
    """Random rational function whose denominator is a nonzero polynomial."""
    num = random_poly(rng, X, max_degree, terms=4)
    if rng.random() < 0.5 or X.dimension == 0:
        return num
    den = random_poly(rng, X, max(1, max_degree - 1), terms=2)
    while den.is_zero():
        den = random_poly(rng, X, max(1, max_degree - 1), terms=2)
    return num / den


def random_form(rng: random.Random, A: FrameAlgebra, degree: int, max_degree: int = 2,
                density: float = 0.7) -> Form:
    keys = list(combinations(range(A.rank), degree)) if 0 <= degree <= A.rank else []
    comps = {}
    for k in keys:
        if degree == 0 or rng.random() < density:
            comps[k] = random_poly(rng, A.coords, max_degree)
    return Form(A, degree, comps)


def random_section(rng: random.Random, A: FrameAlgebra, max_degree: int = 2):
    return A.section([random_poly(rng, A.coords, max_degree) for _ in range(A.rank)])


def random_connection(rng: random.Random, A: FrameAlgebra, max_degree: int = 2, density: float = 0.5,
                      symmetric: bool = False) -> Connection:
    """Random polynomial coefficients; ``symmetric`` forces ``Gamma^a_{bc} = Gamma^a_{cb}``."""
    p = A.rank
    table = {}
    for a in range(p):
        for b in range(p):
            for c in range(b if symmetric else 0, p):
                if rng.random() < density:
                    v = random_poly(rng, A.coords, max_degree, terms=2)
                    table[(a, b, c)] = v
                    if symmetric:
                        table[(a, c, b)] = v
    return Connection(A, table)


def random_unipotent(rng: random.Random, X: CoordinateSystem, p: int, max_degree: int = 1) -> ExprMatrix:
    """Product of random upper and lower unitriangular polynomial matrices (det 1)."""
    one, zero = X.one(), X.zero()
    U = [[one if i == j else (random_poly(rng, X, max_degree, terms=1, coeff=2) if j > i else zero)
          for j in range(p)] for i in range(p)]
    L = [[one if i == j else (random_poly(rng, X, max_degree, terms=1, coeff=2) if j < i else zero)
          for j in range(p)] for i in range(p)]
    return ExprMatrix(X, U, cols=p) @ ExprMatrix(X, L, cols=p)


def random_triangular_map(rng: random.Random, Y: CoordinateSystem, X: CoordinateSystem,
                          max_degree: int = 2) -> Tuple[List[Expr], List[Expr]]:
    """``y = phi0(x)`` with ``y_i = x_i + c_i + f_i(x_0..x_{i-1})`` and its exact inverse."""
    n = X.dimension
    forward, backward = [], []
    for i in range(n):
        prev = CoordinateSystem(X.names[:i])
        f = random_poly(rng, prev, max_degree, terms=2, coeff=2) + rng.randint(-2, 2)
        f_x = f.substitute({name: X.coordinate(name) for name in prev.names}, X)
        forward.append(X.coordinate(i) + f_x)
        # x_i = y_i - f(x_0(y), ..., x_{i-1}(y))
        f_y = f.substitute(dict(zip(prev.names, backward)), Y)
        backward.append(Y.coordinate(i) - f_y)
    return forward, backward


def transported(rng: random.Random, A: FrameAlgebra, names: Optional[Sequence[str]] = None,
                max_degree: int = 2) -> Morphism:
    """Random algebroid isomorphic to ``A``; returned as the morphism onto ``A``."""
    names = list(names) if names is not None else [f"u{i + 1}" for i in range(A.dimension)]
    X = CoordinateSystem(tuple(names))
    fwd, back = random_triangular_map(rng, A.coords, X, max_degree)
    G = random_unipotent(rng, X, A.rank)
    return induced_morphism(A, X, G, fwd, back)


# -- named algebroids -----------------------------------------------------------------------

SO3 = {(2, 0, 1): 1, (0, 1, 2): 1, (1, 2, 0): 1}


def so3() -> FrameAlgebra:
    """``[t1, t2] = t3`` and cyclic, over a point."""
    return lie_algebra(3, SO3)


def so3_perturbed() -> FrameAlgebra:
    """so(3) with an extra ``L^1_12 = 1``; violates Jacobi."""
    table = dict(SO3)
    table[(0, 0, 1)] = 1
    return lie_algebra(3, table)


def so3_action() -> FrameAlgebra:
    """Rotation action of so(3) on R^3: ``t_a`` acts by ``-eps_{abc} x_b d/dx_c``."""
    X = coords("x", "y", "z")
    x, y, z = X.coordinates()
    zero = X.zero()
    fields = [[zero, z, -y], [-z, zero, x], [y, -x, zero]]
    anchor = ExprMatrix.from_columns(X, fields, 3)
    return FrameAlgebra(X, anchor, SO3, rank=3)


def affine_line() -> FrameAlgebra:
    """aff(1) acting on R: ``t1 -> d/dx``, ``t2 -> x d/dx``, ``[t1, t2] = t1``."""
    X = coords("x")
    return FrameAlgebra(X, [[1, X.coordinate(0)]], {(0, 0, 1): 1}, rank=2)


def line_plus_so3() -> FrameAlgebra:
    """``T R`` plus so(3) with zero anchor: rank 4 over R."""
    X = coords("x")
    table = {(g + 1, a + 1, b + 1): v for (g, a, b), v in SO3.items()}
    return FrameAlgebra(X, [[1, 0, 0, 0]], table, rank=4)


def heisenberg_plane() -> FrameAlgebra:
    """``t1 -> d/dx``, ``t2 -> d/dy``, ``t3 -> 0``, ``[t1, t2] = t3``."""
    X = coords("x", "y")
    return FrameAlgebra(X, [[1, 0, 0], [0, 1, 0]], {(2, 0, 1): 1}, rank=3)


def standard(n: int) -> FrameAlgebra:
    names = ["x", "y", "z"][:n] if n <= 3 else [f"x{i + 1}" for i in range(n)]
    return standard_algebroid(coords(*names))


class CorpusEntry(NamedTuple):
    name: str
    algebra: FrameAlgebra
    morphism: Optional[Morphism]  # onto the untransported model, when randomized


def corpus(seed: int = 0) -> List[CorpusEntry]:
    """Standard ``T R^3``, so(3), and five randomized validated algebroids."""
    rng = random.Random(seed)
    out = [CorpusEntry("standard_R3", standard(3), None), CorpusEntry("so3", so3(), None)]
    for name, model in [("so3_action", so3_action()), ("affine_line", affine_line()),
                        ("line_plus_so3", line_plus_so3()), ("heisenberg_plane", heisenberg_plane()),
                        ("standard_R2", standard(2))]:
        m = transported(rng, model, max_degree=2 if model.dimension < 3 else 1)
        out.append(CorpusEntry(f"random_{name}", m.source, m))
    return out


def generalized_spec(A: FrameAlgebra, rng: random.Random, M_names: Optional[Sequence[str]] = None
                     ) -> GeneralizedLieAlgebroidSpec:
    """Generalized algebroid over ``A.coords`` whose effective anchor is ``A``'s anchor.

    ``h`` is a random triangular diffeomorphism ``M -> N`` and ``eta`` its
    inverse; ``rho = D(eta) . anchor`` makes ``h o eta = Id`` and the
    pull-back a coordinate change of ``A``.
    """
    N = A.coords
    M = CoordinateSystem(tuple(M_names) if M_names else tuple(f"w{i + 1}" for i in range(N.dimension)))
    h, eta = random_triangular_map(rng, N, M)
    Deta = ExprMatrix(N, [[eta[i].partial(j) for j in range(N.dimension)] for i in range(M.dimension)],
                      cols=N.dimension) if N.dimension else ExprMatrix.zeros(N, 0, 0)
    rho = Deta @ A.anchor if N.dimension else ExprMatrix.zeros(N, 0, A.rank)
    return GeneralizedLieAlgebroidSpec(M, N, A.rank, rho, tuple(h), tuple(eta),
                                       dict(A.structure_items()))
