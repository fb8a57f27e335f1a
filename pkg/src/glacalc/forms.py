"""Exterior forms over a frame algebra.

A degree-``q`` form stores its components on strictly increasing index
tuples (0-based).  The wedge uses the determinant convention::

    (t^{a1} ^ ... ^ t^{aq})(t_{b1}, ..., t_{bq}) = det(delta)

so a form evaluates on sections as a sum of component times determinant.
Interior product of a 0-form is the zero form of degree -1, which keeps
graded identities well typed.

``d``, ``wedge``, ``interior`` and ``lie_derivative`` have two code paths:
``method="component"`` uses index formulas, ``method="intrinsic"`` evaluates
the defining formulas on frame sections through :func:`evaluate` and
:func:`bracket`.  The two share no component bookkeeping.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from .algebroid import FrameAlgebra, Section, anchor_apply, bracket, change_coordinates, frame_change
from .errors import AlgebraMismatch, DimensionError, ParseError
from .expr import CoordinateSystem, Expr, as_expr
from .linalg import ExprMatrix, rank
from .parser import Domain, parse_with
from .report import Report

Key = Tuple[int, ...]

COMPONENT = "component"
INTRINSIC = "intrinsic"


def _sort_sign(idx: Sequence[int]) -> Tuple[int, Optional[Key]]:
    """Sign of the sorting permutation and the sorted tuple; (0, None) on repeats."""
    idx = list(idx)
    if len(set(idx)) != len(idx):
        return 0, None
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign, tuple(sorted(idx))


def _perm_sign(perm: Sequence[int]) -> int:
    return _sort_sign(perm)[0]


class Form:
    """Sparse exterior form; zero components are never stored."""

    __slots__ = ("algebra", "degree", "_c")

    def __init__(self, algebra: FrameAlgebra, degree: int, components: Optional[Mapping] = None):
        if degree < -1:
            raise DimensionError(f"form degree {degree} < -1")
        self.algebra = algebra
        self.degree = degree
        c: Dict[Key, Expr] = {}
        if components and degree >= 0 and degree <= algebra.rank:
            coords = algebra.coords
            for key, value in components.items():
                key = tuple(key)
                if len(key) != degree:
                    raise DimensionError(f"index {key} has length {len(key)}, degree is {degree}")
                if any(not 0 <= k < algebra.rank for k in key):
                    raise DimensionError(f"index {key} out of range for rank {algebra.rank}")
                sign, skey = _sort_sign(key)
                if sign == 0:
                    continue
                v = as_expr(value, coords)
                if sign < 0:
                    v = -v
                if skey in c:
                    v = c[skey] + v
                c[skey] = v
            c = {k: v for k, v in sorted(c.items()) if not v.is_zero()}
        self._c = c

    @classmethod
    def _raw(cls, algebra, degree, comps: Dict[Key, Expr]) -> "Form":
        f = cls.__new__(cls)
        f.algebra = algebra
        f.degree = degree
        f._c = {k: comps[k] for k in sorted(comps) if comps[k].num} \
            if 0 <= degree <= algebra.rank else {}
        return f

    # -- access ---------------------------------------------------------------------
    def items(self):
        return self._c.items()

    def keys(self):
        return self._c.keys()

    def __getitem__(self, key) -> Expr:
        """Component on any index tuple, sign-adjusted; zero on repeats."""
        key = tuple(key) if not isinstance(key, int) else (key,)
        sign, skey = _sort_sign(key)
        if sign == 0:
            return self.algebra.coords.zero()
        v = self._c.get(skey)
        if v is None:
            return self.algebra.coords.zero()
        return v if sign > 0 else -v

    def scalar(self) -> Expr:
        if self.degree != 0:
            raise DimensionError(f"form of degree {self.degree} is not a function")
        return self[()]

    def is_zero(self) -> bool:
        return not self._c

    def __len__(self):
        return len(self._c)

    # -- arithmetic --------------------------------------------------------------------
    def _check(self, other: "Form"):
        if not (self.algebra is other.algebra or self.algebra.same_as(other.algebra)):
            raise AlgebraMismatch("forms belong to different algebras")

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._check(other)
        if self.degree != other.degree:
            raise DimensionError(f"cannot add forms of degree {self.degree} and {other.degree}")
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out[k] + v if k in out else v
        return Form._raw(self.algebra, self.degree, out)

    def __neg__(self):
        return Form._raw(self.algebra, self.degree, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, f):
        if isinstance(f, Form):
            return wedge(self, f)
        f = as_expr(f, self.algebra.coords)
        if f.is_zero():
            return Form._raw(self.algebra, self.degree, {})
        return Form._raw(self.algebra, self.degree, {k: f * v for k, v in self._c.items()})

    def __rmul__(self, f):
        return self.__mul__(f)

    def __xor__(self, other: "Form") -> "Form":
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        if self.degree != other.degree or self._c.keys() != other._c.keys():
            return False
        return all(v == other._c[k] for k, v in self._c.items())

    __hash__ = None

    def __call__(self, *sections: Section) -> Expr:
        return evaluate(self, *sections)

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"Form(degree={self.degree}, {format_form(self)})"


# -- constructors ----------------------------------------------------------------------------

def zero_form(A: FrameAlgebra, degree: int) -> Form:
    return Form._raw(A, degree, {})


def scalar_form(A: FrameAlgebra, f) -> Form:
    return Form(A, 0, {(): f})


def coframe(A: FrameAlgebra, alpha: int) -> Form:
    """Dual coframe element ``t^alpha`` (0-based)."""
    return Form(A, 1, {(alpha,): 1})


def basis_form(A: FrameAlgebra, key: Sequence[int], coeff=1) -> Form:
    return Form(A, len(key), {tuple(key): coeff})


def coordinate_form(A: FrameAlgebra, i: int) -> Form:
    """Coordinate function ``c^i`` as a 0-form."""
    return Form(A, 0, {(): A.coords.coordinate(i)})


# -- evaluation and wedge -----------------------------------------------------------------------

def _det(rows: List[List[Expr]], coords: CoordinateSystem) -> Expr:
    n = len(rows)
    if n == 0:
        return coords.one()
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = coords.zero()
    for j in range(n):
        a = rows[0][j]
        if not a.num:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * _det(minor, coords)
        total = total + term if j % 2 == 0 else total - term
    return total


def evaluate(omega: Form, *sections: Section) -> Expr:
    """``omega(z_1, ..., z_q)`` as component times determinant, summed."""
    A = omega.algebra
    if omega.degree < 0:
        raise DimensionError("a form of degree -1 cannot be evaluated")
    if len(sections) != omega.degree:
        raise DimensionError(f"form of degree {omega.degree} needs {omega.degree} arguments, got {len(sections)}")
    for z in sections:
        if not (z.algebra is A or z.algebra.same_as(A)):
            raise AlgebraMismatch("section and form belong to different algebras")
    total = A.coords.zero()
    for key, c in omega.items():
        m = [[z[k] for z in sections] for k in key]
        dv = _det(m, A.coords)
        if dv.num:
            total = total + c * dv
    return total


def wedge(omega: Form, theta: Form, method: str = COMPONENT) -> Form:
    omega._check(theta)
    A = omega.algebra
    q, r = omega.degree, theta.degree
    if q < 0 or r < 0:
        return zero_form(A, q + r)
    if q + r > A.rank:
        return zero_form(A, q + r)
    if method == INTRINSIC:
        return _wedge_intrinsic(omega, theta)
    out: Dict[Key, Expr] = {}
    for k1, a in omega.items():
        s1 = set(k1)
        for k2, b in theta.items():
            if s1.intersection(k2):
                continue
            sign, key = _sort_sign(k1 + k2)
            v = a * b if sign > 0 else -(a * b)
            out[key] = out[key] + v if key in out else v
    return Form._raw(A, q + r, out)


def _wedge_intrinsic(omega: Form, theta: Form) -> Form:
    A = omega.algebra
    q, r = omega.degree, theta.degree
    t = A.frames()
    scale = Fraction(1, factorial(q) * factorial(r))
    out = {}
    for key in combinations(range(A.rank), q + r):
        total = A.coords.zero()
        for perm in permutations(range(q + r)):
            args = [t[key[i]] for i in perm]
            a = evaluate(omega, *args[:q])
            if not a.num:
                continue
            b = evaluate(theta, *args[q:])
            if b.num:
                total = total + a * b * _perm_sign(perm)
        out[key] = total * scale
    return Form._raw(A, q + r, out)


def wedge_all(forms: Sequence[Form], A: Optional[FrameAlgebra] = None) -> Form:
    if not forms:
        if A is None:
            raise ValueError("empty wedge needs an algebra")
        return scalar_form(A, 1)
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


# -- interior, Lie derivative, d ---------------------------------------------------------------

def interior(z: Section, omega: Form, method: str = COMPONENT) -> Form:
    A = omega.algebra
    if not (z.algebra is A or z.algebra.same_as(A)):
        raise AlgebraMismatch("section and form belong to different algebras")
    q = omega.degree
    if q <= 0:
        return zero_form(A, q - 1)
    if method == INTRINSIC:
        t = A.frames()
        out = {}
        for key in combinations(range(A.rank), q - 1):
            out[key] = evaluate(omega, z, *[t[k] for k in key])
        return Form._raw(A, q - 1, out)
    out: Dict[Key, Expr] = {}
    for key, c in omega.items():
        for pos, a in enumerate(key):
            za = z[a]
            if not za.num:
                continue
            rest = key[:pos] + key[pos + 1:]
            v = za * c if pos % 2 == 0 else -(za * c)
            out[rest] = out[rest] + v if rest in out else v
    return Form._raw(A, q - 1, out)


def lie_derivative(z: Section, omega: Form, method: str = COMPONENT) -> Form:
    A = omega.algebra
    if not (z.algebra is A or z.algebra.same_as(A)):
        raise AlgebraMismatch("section and form belong to different algebras")
    q = omega.degree
    if q < 0:
        return omega
    if q == 0:
        return scalar_form(A, anchor_apply(z, omega.scalar()))
    if method == INTRINSIC:
        t = A.frames()
        out = {}
        for key in combinations(range(A.rank), q):
            args = [t[k] for k in key]
            v = anchor_apply(z, evaluate(omega, *args))
            for i in range(q):
                moved = list(args)
                moved[i] = bracket(z, args[i])
                v = v - evaluate(omega, *moved)
            out[key] = v
        return Form._raw(A, q, out)
    p = A.rank
    # w[j][g] = component g of [z, t_j]
    w = []
    for j in range(p):
        col = []
        for g in range(p):
            v = A.coords.zero()
            for a in range(p):
                if z[a].num:
                    L = A.L(g, a, j)
                    if L.num:
                        v = v + z[a] * L
            col.append(v - _frame_derivative(A, j, z[g]))
        w.append(col)
    out: Dict[Key, Expr] = {}

    def put(key, v):
        out[key] = out[key] + v if key in out else v

    for key, c in omega.items():
        put(key, anchor_apply(z, c))
        for pos, g in enumerate(key):
            for j in range(p):
                coeff = w[j][g]
                if not coeff.num:
                    continue
                sign, skey = _sort_sign(key[:pos] + (j,) + key[pos + 1:])
                if sign == 0:
                    continue
                v = coeff * c
                put(skey, -v if sign > 0 else v)
    return Form._raw(A, q, out)


def _frame_derivative(A: FrameAlgebra, alpha: int, f: Expr) -> Expr:
    """``anchor_apply(t_alpha, f)`` without building the frame section."""
    total = A.coords.zero()
    if not f.num:
        return total
    for i in range(A.dimension):
        a = A.anchor[i, alpha]
        if a.num:
            df = f.partial(i)
            if df.num:
                total = total + a * df
    return total


def d(omega: Form, method: str = COMPONENT) -> Form:
    """Exterior differential of the algebroid."""
    A = omega.algebra
    q = omega.degree
    if q < 0:
        return zero_form(A, q + 1)
    if q + 1 > A.rank:
        return zero_form(A, q + 1)
    if method == INTRINSIC:
        return _d_intrinsic(omega)
    p = A.rank
    out: Dict[Key, Expr] = {}

    def put(key, v):
        out[key] = out[key] + v if key in out else v

    structure = [[(a, b, L) for (g2, a, b), L in A.structure_items() if g2 == g] for g in range(p)]
    for key, c in omega.items():
        present = set(key)
        # anchor term
        grads = [c.partial(i) for i in range(A.dimension)]
        for k in range(p):
            if k in present:
                continue
            v = A.coords.zero()
            for i, gi in enumerate(grads):
                if gi.num:
                    a = A.anchor[i, k]
                    if a.num:
                        v = v + a * gi
            if not v.num:
                continue
            pos = sum(1 for x in key if x < k)
            put(tuple(sorted(key + (k,))), v if pos % 2 == 0 else -v)
        # structure term: component c sits at slot gamma = key[m]
        for m, g in enumerate(key):
            rest = key[:m] + key[m + 1:]
            rset = set(rest)
            for a, b, L in structure[g]:
                if a in rset or b in rset:
                    continue
                K = tuple(sorted(rest + (a, b)))
                i, j = K.index(a), K.index(b)
                v = L * c
                if (i + j + m) % 2:
                    v = -v
                put(K, v)
    return Form._raw(A, q + 1, out)


def _d_intrinsic(omega: Form) -> Form:
    A = omega.algebra
    q = omega.degree
    t = A.frames()
    out = {}
    for key in combinations(range(A.rank), q + 1):
        args = [t[k] for k in key]
        v = A.coords.zero()
        for i in range(q + 1):
            term = anchor_apply(args[i], evaluate(omega, *(args[:i] + args[i + 1:])))
            v = v + term if i % 2 == 0 else v - term
        for i in range(q + 1):
            for j in range(i + 1, q + 1):
                rest = args[:i] + args[i + 1:j] + args[j + 1:]
                term = evaluate(omega, bracket(args[i], args[j]), *rest)
                v = v + term if (i + j) % 2 == 0 else v - term
        out[key] = v
    return Form._raw(A, q + 1, out)


def d_oracle_agreement(omega: Form) -> Tuple[bool, Form]:
    """Coordinate ``d`` against intrinsic ``d``; returns (agree, difference)."""
    diff = d(omega) - d(omega, method=INTRINSIC)
    return diff.is_zero(), diff


# -- Maurer-Cartan --------------------------------------------------------------------------------

def maurer_cartan_check(A: FrameAlgebra) -> Report:
    """``d t^a = -sum_{b<c} L^a_bc t^b ^ t^c`` and ``d c^i = sum_a anchor^i_a t^a``."""
    report = Report("maurer_cartan")
    p = A.rank
    for a in range(p):
        expected = Form(A, 2, {(b, c): -A.L(a, b, c) for b in range(p) for c in range(b + 1, p)})
        report.add("structure_equation", (a + 1,), d(coframe(A, a)) - expected)
    for i in range(A.dimension):
        expected = Form(A, 1, {(a,): A.anchor[i, a] for a in range(p)})
        report.add("anchor_equation", (i + 1,), d(coordinate_form(A, i)) - expected)
    return report


# -- predicates ---------------------------------------------------------------------------------------

def is_closed(omega: Form) -> bool:
    return d(omega).is_zero()


def verify_exactness_witness(eta: Form, omega: Form) -> bool:
    if eta.degree + 1 != omega.degree:
        raise DimensionError(f"witness of degree {eta.degree} cannot produce a {omega.degree}-form")
    return d(eta) == omega


def component_matrix(omega: Form) -> ExprMatrix:
    if omega.degree != 2:
        raise DimensionError(f"need a 2-form, got degree {omega.degree}")
    p = omega.algebra.rank
    return ExprMatrix(omega.algebra.coords, [[omega[(a, b)] for b in range(p)] for a in range(p)], cols=p)


def is_symplectic(omega: Form) -> bool:
    """Closed and nondegenerate (component matrix of full generic rank)."""
    M = component_matrix(omega)
    if omega.algebra.rank % 2:
        return False
    return rank(M) == omega.algebra.rank and is_closed(omega)


# -- morphisms ---------------------------------------------------------------------------------------

class Morphism:
    """Bundle map ``(phi, phi0)`` from ``source`` to ``target``.

    ``phi`` is ``p_target x p_source`` over the source coordinates,
    ``phi0`` gives target coordinates as functions of source coordinates and
    ``phi0_inv`` is its declared inverse (checked on construction).
    """

    def __init__(self, source: FrameAlgebra, target: FrameAlgebra, phi, phi0: Sequence = None,
                 phi0_inv: Sequence = None):
        self.source = source
        self.target = target
        X, Y = source.coords, target.coords
        if not isinstance(phi, ExprMatrix):
            phi = ExprMatrix(X, phi, cols=source.rank)
        if phi.shape != (target.rank, source.rank):
            raise DimensionError(f"phi must be {target.rank}x{source.rank}, got {phi.shape}")
        if phi0 is None:
            if X != Y:
                raise DimensionError("base map required when coordinate systems differ")
            phi0, phi0_inv = X.coordinates(), Y.coordinates()
        if phi0_inv is None:
            raise DimensionError("base map needs a declared inverse")
        self.phi = phi
        self.phi0 = tuple(as_expr(v, X) for v in phi0)
        self.phi0_inv = tuple(as_expr(v, Y) for v in phi0_inv)
        from .algebroid import _check_inverse_pair
        _check_inverse_pair(Y, X, self.phi0, self.phi0_inv)

    def at_source(self, e: Expr) -> Expr:
        """Target-coordinate expression composed with ``phi0``."""
        return e.substitute(dict(zip(self.target.coords.names, self.phi0)), self.source.coords)

    def at_target(self, e: Expr) -> Expr:
        return e.substitute(dict(zip(self.source.coords.names, self.phi0_inv)), self.target.coords)


def identity_morphism(A: FrameAlgebra) -> Morphism:
    return Morphism(A, A, ExprMatrix.identity(A.coords, A.rank))


def push_section(m: Morphism, z: Section) -> Section:
    """``Gamma(phi, phi0) z`` as a section of the target."""
    comps = m.phi @ list(z.components)
    return Section(m.target, tuple(m.at_target(c) for c in comps))


def pullback(m: Morphism, omega: Form) -> Form:
    """``(phi, phi0)^* omega``: components ``sum_A omega_A(phi0) det phi[A, B]``."""
    if not (omega.algebra is m.target or omega.algebra.same_as(m.target)):
        raise AlgebraMismatch("form is not over the morphism's target")
    q = omega.degree
    S = m.source
    if q <= 0:
        if q < 0:
            return zero_form(S, q)
        return scalar_form(S, m.at_source(omega.scalar()))
    X = S.coords
    out: Dict[Key, Expr] = {}
    moved = {key: m.at_source(c) for key, c in omega.items()}
    for B in combinations(range(S.rank), q):
        v = X.zero()
        for key, c in moved.items():
            minor = [[m.phi[a, b] for b in B] for a in key]
            dv = _det(minor, X)
            if dv.num:
                v = v + c * dv
        out[B] = v
    return Form._raw(S, q, out)


def check_morphism(m: Morphism) -> Report:
    """Anchor compatibility and bracket preservation on frame sections."""
    report = Report("morphism")
    S, T = m.source, m.target
    X = S.coords
    J = [[m.phi0[i].partial(j) for j in range(X.dimension)] for i in range(T.dimension)]
    for a in range(S.rank):
        for i in range(T.dimension):
            lhs = X.zero()
            for b in range(T.rank):
                lhs = lhs + m.at_source(T.anchor[i, b]) * m.phi[b, a]
            rhs = X.zero()
            for j in range(X.dimension):
                rhs = rhs + J[i][j] * S.anchor[j, a]
            report.add("anchor_compatible", (a + 1, i + 1), lhs - rhs)
    s = S.frames()
    pushed = [push_section(m, z) for z in s]
    for a in range(S.rank):
        for b in range(a + 1, S.rank):
            lhs = [m.at_source(c) for c in bracket(pushed[a], pushed[b]).components]
            rhs = m.phi @ list(bracket(s[a], s[b]).components)
            for g in range(T.rank):
                report.add("bracket_preserved", (a + 1, b + 1, g + 1), lhs[g] - rhs[g])
    return report


def induced_morphism(target: FrameAlgebra, new_coords: CoordinateSystem, phi, phi0: Sequence,
                     phi0_inv: Sequence) -> Morphism:
    """Source algebra making ``(phi, phi0)`` an anchor-compatible isomorphism onto ``target``.

    ``phi`` (over ``new_coords``) must be generically invertible.
    """
    moved = change_coordinates(target, new_coords, phi0, phi0_inv)
    if not isinstance(phi, ExprMatrix):
        phi = ExprMatrix(new_coords, phi, cols=target.rank)
    source = frame_change(moved, phi)
    return Morphism(source, target, phi, phi0, phi0_inv)


# -- literals ------------------------------------------------------------------------------------------

class _FormDomain(Domain):
    def __init__(self, algebra: FrameAlgebra):
        super().__init__(algebra.coords)
        self.algebra = algebra

    def _form(self, v):
        return v if isinstance(v, Form) else scalar_form(self.algebra, v)

    def integer(self, value, tok):
        return scalar_form(self.algebra, value)

    def identifier(self, tok):
        return scalar_form(self.algebra, super().identifier(tok))

    def basis(self, tok):
        if tok.kind != "cobasis":
            raise ParseError(f"section atom {tok.text!r} is not allowed in a form", tok.pos)
        idx = tok.value
        if any(not 1 <= k <= self.algebra.rank for k in idx):
            raise ParseError(f"coframe index out of range 1..{self.algebra.rank} in {tok.text}", tok.pos)
        if list(idx) != sorted(set(idx)):
            raise ParseError(f"coframe indices must be strictly increasing in {tok.text}", tok.pos)
        return basis_form(self.algebra, [k - 1 for k in idx])

    def add(self, a, b, tok):
        return self._combine(a, b, tok, 1)

    def sub(self, a, b, tok):
        return self._combine(a, b, tok, -1)

    def _combine(self, a, b, tok, sign):
        if a.degree != b.degree:
            if a.is_zero() and a.degree == 0:
                a = zero_form(self.algebra, b.degree)
            elif b.is_zero() and b.degree == 0:
                b = zero_form(self.algebra, a.degree)
            else:
                raise ParseError(f"cannot add terms of degree {a.degree} and {b.degree}", tok.pos)
        return a + b if sign > 0 else a - b

    def mul(self, a, b, tok):
        return wedge(a, b)

    def div(self, a, b, tok):
        if b.degree != 0:
            raise ParseError("can only divide by a function", tok.pos)
        s = b.scalar()
        if s.is_zero():
            raise ParseError("division by zero", tok.pos)
        return a * s.inverse()

    def neg(self, a, tok):
        return -a

    def power(self, a, n, tok):
        if a.degree != 0:
            raise ParseError("only functions can be raised to a power", tok.pos)
        return scalar_form(self.algebra, a.scalar() ** n)


class _SectionDomain(Domain):
    def __init__(self, algebra: FrameAlgebra):
        super().__init__(algebra.coords)
        self.algebra = algebra

    def basis(self, tok):
        if tok.kind != "basis" or len(tok.value) != 1:
            raise ParseError(f"expected a frame section e_{{i}}, got {tok.text!r}", tok.pos)
        (k,) = tok.value
        if not 1 <= k <= self.algebra.rank:
            raise ParseError(f"frame index out of range 1..{self.algebra.rank} in {tok.text}", tok.pos)
        return self.algebra.frame(k - 1)

    def _lift(self, v, tok):
        if isinstance(v, Section):
            return v
        if v.is_zero():
            return self.algebra.zero_section()
        raise ParseError("cannot add a function to a section", tok.pos)

    def add(self, a, b, tok):
        if isinstance(a, Expr) and isinstance(b, Expr):
            return a + b
        return self._lift(a, tok) + self._lift(b, tok)

    def sub(self, a, b, tok):
        if isinstance(a, Expr) and isinstance(b, Expr):
            return a - b
        return self._lift(a, tok) - self._lift(b, tok)

    def mul(self, a, b, tok):
        if isinstance(a, Section) and isinstance(b, Section):
            raise ParseError("cannot multiply two sections", tok.pos)
        return a * b

    def div(self, a, b, tok):
        if isinstance(b, Section):
            raise ParseError("cannot divide by a section", tok.pos)
        if b.is_zero():
            raise ParseError("division by zero", tok.pos)
        return a * b.inverse() if isinstance(a, Section) else a / b

    def power(self, a, n, tok):
        if isinstance(a, Section):
            raise ParseError("sections cannot be raised to a power", tok.pos)
        return a ** n


def parse_form(text: str, A: FrameAlgebra, degree: Optional[int] = None) -> Form:
    """Parse ``"<expr> * e^{1,2} + ..."``; a bare expression is a 0-form.

    With ``degree`` given, ``"0"`` reads as the zero form of that degree and
    any other degree is an error.
    """
    w = parse_with(text, _FormDomain(A))
    if degree is not None and w.degree != degree:
        if w.is_zero():
            return zero_form(A, degree)
        raise ParseError(f"expected a {degree}-form, got degree {w.degree}", 0, text)
    return w


def parse_section(text: str, A: FrameAlgebra) -> Section:
    """Parse ``"<expr> * e_{1} + ..."``."""
    v = parse_with(text, _SectionDomain(A))
    if isinstance(v, Expr):
        if v.is_zero():
            return A.zero_section()
        raise ParseError("expected a section such as 'x * e_{1}'", 0, text)
    return v


def _coeff(e: Expr) -> str:
    s = str(e)
    if len(e.num) > 1 or not e.is_polynomial():
        return f"({s})"
    return s


def format_form(omega: Form) -> str:
    if omega.degree <= 0:
        return str(omega.scalar()) if omega.degree == 0 else "0"
    parts = []
    for key, c in omega.items():
        basis = "e^{" + ",".join(str(k + 1) for k in key) + "}"
        s = _coeff(c)
        if s == "1":
            term = basis
        elif s == "-1":
            term = "-" + basis
        else:
            term = f"{s} * {basis}"
        parts.append(term)
    if not parts:
        return "0"
    out = parts[0]
    for term in parts[1:]:
        out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
    return out
