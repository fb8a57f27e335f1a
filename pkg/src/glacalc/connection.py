"""Linear connections on a frame algebra: connection forms, torsion, curvature.

Index convention: ``D_{T_c} T_b = Gamma^a_{bc} T_a``, so the connection form
is ``Omega^a_b = Gamma^a_{bc} t^c``.  Torsion and curvature are computed from
their definitions on frame sections; the structure equations are checked
against forms built independently from ``d`` and the wedge.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

from .algebroid import FrameAlgebra, Section, anchor_apply, bracket
from .errors import AlgebraMismatch, DimensionError
from .expr import Expr, as_expr
from .forms import Form, coframe, d, wedge, zero_form
from .report import Report


class Connection:
    """Coefficients ``Gamma[a][b][c]`` (0-based) over ``algebra``."""

    def __init__(self, algebra: FrameAlgebra, gamma=None):
        self.algebra = algebra
        p = algebra.rank
        zero = algebra.coords.zero()
        table = [[[zero] * p for _ in range(p)] for _ in range(p)]
        if gamma:
            items = gamma.items() if isinstance(gamma, Mapping) else (
                ((a, b, c), gamma[a][b][c]) for a in range(p) for b in range(p) for c in range(p))
            for (a, b, c), v in items:
                if not all(0 <= k < p for k in (a, b, c)):
                    raise DimensionError(f"connection index {(a, b, c)} out of range for rank {p}")
                table[a][b][c] = as_expr(v, algebra.coords)
        self._g = tuple(tuple(tuple(r) for r in plane) for plane in table)

    def gamma(self, a: int, b: int, c: int) -> Expr:
        return self._g[a][b][c]

    def items(self):
        p = self.algebra.rank
        for a in range(p):
            for b in range(p):
                for c in range(p):
                    v = self._g[a][b][c]
                    if not v.is_zero():
                        yield (a, b, c), v

    def is_symmetric(self) -> bool:
        p = self.algebra.rank
        return all(self._g[a][b][c] == self._g[a][c][b]
                   for a in range(p) for b in range(p) for c in range(b + 1, p))


@dataclass
class VectorValuedForm:
    """``sum_a forms[a] S_a``; all parts share algebra and degree."""

    degree: int
    forms: Tuple[Form, ...]

    def __post_init__(self):
        self.forms = tuple(self.forms)
        for f in self.forms:
            if f.degree != self.degree:
                raise DimensionError("vector-valued form parts must share a degree")

    def __getitem__(self, a: int) -> Form:
        return self.forms[a]

    def __len__(self):
        return len(self.forms)

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.forms)


def covariant_derivative(C: Connection, U: Section, V: Section) -> Section:
    """``(D_U V)^a = U^c T_c(V^a) + Gamma^a_{bc} V^b U^c``."""
    A = C.algebra
    if not (U.algebra is A or U.algebra.same_as(A)) or not (V.algebra is A or V.algebra.same_as(A)):
        raise AlgebraMismatch("sections are not over the connection's algebra")
    p = A.rank
    out = []
    for a in range(p):
        v = anchor_apply(U, V[a])
        for b in range(p):
            if not V[b].num:
                continue
            for c in range(p):
                g = C.gamma(a, b, c)
                if g.num and U[c].num:
                    v = v + g * V[b] * U[c]
        out.append(v)
    return Section(A, tuple(out))


def connection_forms(C: Connection) -> List[List[Form]]:
    """``Omega[a][b] = Gamma^a_{bc} t^c``."""
    A, p = C.algebra, C.algebra.rank
    return [[Form(A, 1, {(c,): C.gamma(a, b, c) for c in range(p)}) for b in range(p)] for a in range(p)]


def torsion_components(C: Connection, method: str = "definition") -> List[Dict[Tuple[int, int], Expr]]:
    """``T[c][(a, b)]`` for ``a < b``: component ``c`` of ``D_{T_a}T_b - D_{T_b}T_a - [T_a, T_b]``.

    ``method="closed"`` uses ``Gamma^c_{ba} - Gamma^c_{ab} - L^c_{ab}`` instead.
    """
    A, p = C.algebra, C.algebra.rank
    out: List[Dict[Tuple[int, int], Expr]] = [{} for _ in range(p)]
    if method == "closed":
        for c in range(p):
            for a in range(p):
                for b in range(a + 1, p):
                    out[c][(a, b)] = C.gamma(c, b, a) - C.gamma(c, a, b) - A.L(c, a, b)
        return out
    if method != "definition":
        raise ValueError(f"unknown method {method!r}")
    t = A.frames()
    for a in range(p):
        for b in range(a + 1, p):
            v = covariant_derivative(C, t[a], t[b]) - covariant_derivative(C, t[b], t[a]) - bracket(t[a], t[b])
            for c in range(p):
                out[c][(a, b)] = v[c]
    return out


def torsion(C: Connection, method: str = "definition") -> VectorValuedForm:
    """Scalar torsion 2-forms with ``T^c(T_a, T_b) = T^c_{ab}``."""
    comps = torsion_components(C, method)
    return VectorValuedForm(2, tuple(Form(C.algebra, 2, comps[c]) for c in range(C.algebra.rank)))


def curvature_components(C: Connection) -> List[List[Dict[Tuple[int, int], Expr]]]:
    """``R[a][b][(c, d)]``: component ``a`` of ``R(T_c, T_d) T_b``, ``c < d``.

    ``R(Z, V)u = D_Z D_V u - D_V D_Z u - D_{[Z, V]} u``.
    """
    A, p = C.algebra, C.algebra.rank
    t = A.frames()
    out = [[{} for _ in range(p)] for _ in range(p)]
    D = covariant_derivative
    for c in range(p):
        for dd in range(c + 1, p):
            br = bracket(t[c], t[dd])
            for b in range(p):
                v = D(C, t[c], D(C, t[dd], t[b])) - D(C, t[dd], D(C, t[c], t[b])) - D(C, br, t[b])
                for a in range(p):
                    out[a][b][(c, dd)] = v[a]
    return out


def curvature(C: Connection) -> List[List[Form]]:
    """Scalar curvature 2-forms ``R^a_b`` with ``R^a_b(T_c, T_d) = R^a_{b,cd}``."""
    comps = curvature_components(C)
    p = C.algebra.rank
    return [[Form(C.algebra, 2, comps[a][b]) for b in range(p)] for a in range(p)]


def _sum(forms: Sequence[Form], A: FrameAlgebra, degree: int) -> Form:
    total = zero_form(A, degree)
    for f in forms:
        total = total + f
    return total


def verify_cartan_identities(C: Connection) -> Report:
    """``T^a = d t^a + Omega^a_b ^ t^b`` and ``R^a_b = d Omega^a_b + Omega^a_c ^ Omega^c_b``."""
    A, p = C.algebra, C.algebra.rank
    report = Report("cartan_identities")
    Om = connection_forms(C)
    T = torsion(C)
    R = curvature(C)
    t = [coframe(A, a) for a in range(p)]
    for a in range(p):
        rhs = d(t[a]) + _sum([wedge(Om[a][b], t[b]) for b in range(p)], A, 2)
        report.add("first_structure", (a + 1,), T[a] - rhs)
    for a in range(p):
        for b in range(p):
            rhs = d(Om[a][b]) + _sum([wedge(Om[a][c], Om[c][b]) for c in range(p)], A, 2)
            report.add("second_structure", (a + 1, b + 1), R[a][b] - rhs)
    return report


def verify_bianchi_identities(C: Connection) -> Report:
    """Both Bianchi identities, plus ``R^a_b ^ t^b = 0`` when torsion vanishes."""
    A, p = C.algebra, C.algebra.rank
    report = Report("bianchi_identities")
    Om = connection_forms(C)
    T = torsion(C)
    R = curvature(C)
    t = [coframe(A, a) for a in range(p)]
    for a in range(p):
        rhs = _sum([wedge(R[a][b], t[b]) for b in range(p)], A, 3) \
            - _sum([wedge(Om[a][c], T[c]) for c in range(p)], A, 3)
        report.add("first_bianchi", (a + 1,), d(T[a]) - rhs)
    for a in range(p):
        for b in range(p):
            rhs = _sum([wedge(R[a][c], Om[c][b]) for c in range(p)], A, 3) \
                - _sum([wedge(Om[a][c], R[c][b]) for c in range(p)], A, 3)
            report.add("second_bianchi", (a + 1, b + 1), d(R[a][b]) - rhs)
    if T.is_zero():
        for a in range(p):
            report.add("torsion_free_bianchi", (a + 1,), _sum([wedge(R[a][b], t[b]) for b in range(p)], A, 3))
    return report


def verify_torsion_paths(C: Connection) -> Report:
    """Definitional torsion against the closed formula, componentwise."""
    report = Report("torsion_paths")
    defn, closed = torsion_components(C), torsion_components(C, "closed")
    for c, (x, y) in enumerate(zip(defn, closed)):
        for key in x:
            report.add("torsion_closed_form", (c + 1, key[0] + 1, key[1] + 1), x[key] - y[key])
    return report
