"""Lie algebroids as anchored frame algebras.

A :class:`FrameAlgebra` stores, in one chart, the anchor matrix ``a[i][alpha]``
(component ``i`` of the vector field induced by the frame section
``t_alpha``) and the structure functions ``L[gamma][alpha][beta]`` with
``[t_alpha, t_beta] = L^gamma_{alpha beta} t_gamma``.  Both a generalized Lie
algebroid (through its effective anchor) and its pull-back Lie algebroid are
represented this way, so the exterior calculus is written once.

Python-level indices are 0-based; reports and text formats are 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Mapping, Optional, Sequence, Tuple

from .errors import AlgebraMismatch, AnchorError, DimensionError
from .expr import CoordinateSystem, Expr, as_expr
from .linalg import ExprMatrix, inverse
from .report import Report


class FrameAlgebra:
    """Anchor matrix and structure functions of a rank-``p`` algebroid."""

    def __init__(self, coords: CoordinateSystem, anchor, structure=None, *,
                 rank: Optional[int] = None, frame_names: Optional[Sequence[str]] = None):
        self.coords = coords
        if not isinstance(anchor, ExprMatrix):
            rows = list(anchor)
            cols = rank if not rows else None
            anchor = ExprMatrix(coords, rows, cols=cols)
        if anchor.coords != coords:
            raise DimensionError("anchor is not over the algebra's coordinates")
        if anchor.rows != coords.dimension:
            raise DimensionError(f"anchor has {anchor.rows} rows, base has dimension {coords.dimension}")
        p = anchor.cols if rank is None else rank
        if anchor.cols != p:
            raise DimensionError(f"anchor has {anchor.cols} columns, rank is {p}")
        if p < 1:
            raise DimensionError("rank must be at least 1")
        self.anchor = anchor
        self.rank = p
        if frame_names is None:
            frame_names = [f"t{a + 1}" for a in range(p)]
        self.frame_names = tuple(frame_names)
        if len(self.frame_names) != p:
            raise DimensionError(f"{len(self.frame_names)} frame names for rank {p}")
        self._L = _structure_table(coords, p, structure or {})

    # -- data access ------------------------------------------------------------
    @property
    def dimension(self) -> int:
        return self.coords.dimension

    def L(self, gamma: int, alpha: int, beta: int) -> Expr:
        return self._L[gamma][alpha][beta]

    def structure_items(self):
        """Nonzero ``((gamma, alpha, beta), expr)`` with ``alpha < beta``."""
        p = self.rank
        for g in range(p):
            for a in range(p):
                for b in range(a + 1, p):
                    v = self._L[g][a][b]
                    if not v.is_zero():
                        yield (g, a, b), v

    def anchor_field(self, alpha: int) -> List[Expr]:
        return self.anchor.column(alpha)

    def frame(self, alpha: int) -> "Section":
        zero, one = self.coords.zero(), self.coords.one()
        return Section(self, tuple(one if a == alpha else zero for a in range(self.rank)))

    def frames(self) -> List["Section"]:
        return [self.frame(a) for a in range(self.rank)]

    def section(self, components: Sequence) -> "Section":
        return Section(self, tuple(as_expr(c, self.coords) for c in components))

    def zero_section(self) -> "Section":
        return Section(self, tuple(self.coords.zero() for _ in range(self.rank)))

    def same_as(self, other: "FrameAlgebra") -> bool:
        if self is other:
            return True
        return (isinstance(other, FrameAlgebra) and self.coords == other.coords
                and self.rank == other.rank and self.anchor == other.anchor
                and all(self._L[g][a][b] == other._L[g][a][b]
                        for g in range(self.rank) for a in range(self.rank) for b in range(self.rank)))

    def __repr__(self):
        return (f"FrameAlgebra(coords={list(self.coords.names)}, rank={self.rank}, "
                f"structure={{{', '.join(f'L^{g+1}_{a+1}{b+1}: {v}' for (g, a, b), v in self.structure_items())}}})")


def _structure_table(coords: CoordinateSystem, p: int, structure) -> Tuple:
    zero = coords.zero()
    table = [[[zero] * p for _ in range(p)] for _ in range(p)]
    if isinstance(structure, Mapping):
        items = structure.items()
    else:
        items = [((g, a, b), structure[g][a][b]) for g in range(p) for a in range(p) for b in range(a + 1, p)]
    for (g, a, b), value in items:
        if not (0 <= g < p and 0 <= a < p and 0 <= b < p):
            raise DimensionError(f"structure index {(g, a, b)} out of range for rank {p}")
        if a == b:
            v = as_expr(value, coords)
            if not v.is_zero():
                raise DimensionError(f"L^{g+1}_{a+1}{b+1} must vanish (antisymmetry)")
            continue
        v = as_expr(value, coords)
        if a > b:
            a, b, v = b, a, -v
        table[g][a][b] = v
        table[g][b][a] = -v
    return tuple(tuple(tuple(row) for row in plane) for plane in table)


@dataclass(frozen=True, eq=False)
class Section:
    """Section ``z = z^alpha t_alpha`` of a frame algebra."""

    algebra: FrameAlgebra
    components: Tuple[Expr, ...]

    def __post_init__(self):
        if len(self.components) != self.algebra.rank:
            raise DimensionError(f"{len(self.components)} components for rank {self.algebra.rank}")

    def __getitem__(self, alpha: int) -> Expr:
        return self.components[alpha]

    def __len__(self):
        return len(self.components)

    def _check(self, other: "Section"):
        if not self.algebra.same_as(other.algebra):
            raise AlgebraMismatch("sections belong to different algebras")

    def __add__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(self.algebra, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(self.algebra, tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "Section":
        return Section(self.algebra, tuple(-a for a in self.components))

    def __mul__(self, f) -> "Section":
        f = as_expr(f, self.algebra.coords)
        return Section(self.algebra, tuple(f * a for a in self.components))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, Section):
            return NotImplemented
        return self.algebra.same_as(other.algebra) and all(
            a == b for a, b in zip(self.components, other.components))

    __hash__ = None

    def vector_field(self) -> List[Expr]:
        """Components of the anchored vector field."""
        A = self.algebra
        out = []
        for i in range(A.dimension):
            total = A.coords.zero()
            for a, z in enumerate(self.components):
                if z.num:
                    entry = A.anchor[i, a]
                    if entry.num:
                        total = total + z * entry
            out.append(total)
        return out

    def __str__(self):
        terms = []
        for a, c in enumerate(self.components):
            if c.is_zero():
                continue
            s = _paren(c)
            basis = f"e_{{{a + 1}}}"
            terms.append(basis if s == "1" else "-" + basis if s == "-1" else f"{s} * {basis}")
        if not terms:
            return "0"
        out = terms[0]
        for term in terms[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self):
        return f"Section({self})"


def _paren(e: Expr) -> str:
    s = str(e)
    return f"({s})" if (len(e.num) > 1 or not e.is_polynomial()) else s


def anchor_apply(z: Section, f: Expr) -> Expr:
    """Derivative of ``f`` along the anchored vector field of ``z``."""
    A = z.algebra
    total = A.coords.zero()
    for i, v in enumerate(z.vector_field()):
        if v.num:
            df = f.partial(i)
            if df.num:
                total = total + v * df
    return total


def bracket(u: Section, v: Section) -> Section:
    """Bracket of sections from the structure functions and the Leibniz rule."""
    u._check(v)
    A = u.algebra
    p = A.rank
    out = []
    for g in range(p):
        total = A.coords.zero()
        for a in range(p):
            if not u[a].num:
                continue
            for b in range(p):
                if not v[b].num:
                    continue
                L = A._L[g][a][b]
                if L.num:
                    total = total + u[a] * v[b] * L
        total = total + anchor_apply(u, v[g]) - anchor_apply(v, u[g])
        out.append(total)
    return Section(A, tuple(out))


def validate_axioms(A: FrameAlgebra) -> Report:
    """Jacobi identity on frame triples and the anchor-morphism identity."""
    report = Report("validate_axioms")
    p, n = A.rank, A.dimension
    t = A.frames()
    for a in range(p):
        for b in range(a + 1, p):
            for c in range(b + 1, p):
                r = (bracket(bracket(t[a], t[b]), t[c]) + bracket(bracket(t[b], t[c]), t[a])
                     + bracket(bracket(t[c], t[a]), t[b]))
                report.add("jacobi", (a + 1, b + 1, c + 1), r if not r.is_zero() else None,
                           passed=r.is_zero())
    for a in range(p):
        for b in range(a + 1, p):
            for i in range(n):
                lhs = A.coords.zero()
                for g in range(p):
                    lhs = lhs + A.L(g, a, b) * A.anchor[i, g]
                rhs = A.coords.zero()
                for j in range(n):
                    rhs = rhs + A.anchor[j, a] * A.anchor[i, b].partial(j) \
                        - A.anchor[j, b] * A.anchor[i, a].partial(j)
                report.add("anchor_morphism", (a + 1, b + 1, i + 1), lhs - rhs)
    return report


# -- constructions --------------------------------------------------------------------

def standard_algebroid(coords: CoordinateSystem) -> FrameAlgebra:
    """Tangent algebroid TM: identity anchor, zero brackets."""
    n = coords.dimension
    return FrameAlgebra(coords, ExprMatrix.identity(coords, n),
                        frame_names=[f"d{name}" for name in coords.names])


def lie_algebra(rank: int, structure: Mapping, frame_names=None) -> FrameAlgebra:
    """Lie algebra as an algebroid over a point."""
    pt = CoordinateSystem(())
    return FrameAlgebra(pt, ExprMatrix.zeros(pt, 0, rank), structure, rank=rank, frame_names=frame_names)


def frame_change(A: FrameAlgebra, G: ExprMatrix) -> FrameAlgebra:
    """Same algebroid in the frame ``s_beta = G^alpha_beta t_alpha``."""
    if G.shape != (A.rank, A.rank):
        raise DimensionError(f"frame change must be {A.rank}x{A.rank}")
    Ginv = inverse(G)
    s = [A.section(G.column(b)) for b in range(A.rank)]
    structure = {}
    for b in range(A.rank):
        for c in range(b + 1, A.rank):
            w = Ginv @ list(bracket(s[b], s[c]).components)
            for g in range(A.rank):
                if not w[g].is_zero():
                    structure[(g, b, c)] = w[g]
    return FrameAlgebra(A.coords, A.anchor @ G, structure, rank=A.rank)


def change_coordinates(A: FrameAlgebra, new_coords: CoordinateSystem, old_of_new: Sequence,
                       new_of_old: Sequence) -> FrameAlgebra:
    """Re-express ``A`` in coordinates ``x`` related by ``y = old_of_new(x)``.

    ``new_of_old`` is the inverse map; it is checked, not trusted.
    """
    y = A.coords
    phi0 = [as_expr(v, new_coords) for v in old_of_new]
    psi = [as_expr(v, y) for v in new_of_old]
    _check_inverse_pair(y, new_coords, phi0, psi)
    to_new = dict(zip(y.names, phi0))
    J = ExprMatrix(new_coords, [[phi0[i].partial(j) for j in range(new_coords.dimension)]
                                for i in range(y.dimension)], cols=new_coords.dimension)
    theta = A.anchor.map(lambda e: e.substitute(to_new, new_coords), new_coords)
    anchor = inverse(J) @ theta if y.dimension else ExprMatrix.zeros(new_coords, 0, A.rank)
    structure = {k: v.substitute(to_new, new_coords) for k, v in A.structure_items()}
    return FrameAlgebra(new_coords, anchor, structure, rank=A.rank, frame_names=A.frame_names)


def _check_inverse_pair(y: CoordinateSystem, x: CoordinateSystem, phi0, psi):
    if len(phi0) != y.dimension or len(psi) != x.dimension:
        raise DimensionError("base map and inverse have the wrong number of components")
    into_x = dict(zip(y.names, phi0))
    into_y = dict(zip(x.names, psi))
    for i, e in enumerate(psi):
        if e.substitute(into_x, x) != x.coordinate(i):
            raise AnchorError(f"declared inverse does not compose to the identity in {x.names[i]}")
    for i, e in enumerate(phi0):
        if e.substitute(into_y, y) != y.coordinate(i):
            raise AnchorError(f"declared inverse does not compose to the identity in {y.names[i]}")


# -- generalized Lie algebroids ----------------------------------------------------------

@dataclass
class GeneralizedLieAlgebroidSpec:
    """Chart data of a generalized Lie algebroid ``((F, nu, N), [,]_{F,h}, (rho, eta))``.

    ``rho`` is ``m x p`` over ``N_coords``; ``h: M -> N`` has ``n`` components
    over ``M_coords``; ``eta: N -> M`` has ``m`` components over ``N_coords``.
    """

    M_coords: CoordinateSystem
    N_coords: CoordinateSystem
    rank: int
    rho: ExprMatrix
    h: Tuple[Expr, ...]
    eta: Tuple[Expr, ...]
    structure: Mapping = field(default_factory=dict)
    h_eta_inverse: Optional[Tuple[Expr, ...]] = None
    frame_names: Optional[Tuple[str, ...]] = None

    def __post_init__(self):
        M, N = self.M_coords, self.N_coords
        if not isinstance(self.rho, ExprMatrix):
            rows = list(self.rho)
            self.rho = ExprMatrix(N, rows, cols=self.rank if not rows else None)
        self.h = tuple(as_expr(v, M) for v in self.h)
        self.eta = tuple(as_expr(v, N) for v in self.eta)
        if self.h_eta_inverse is not None:
            self.h_eta_inverse = tuple(as_expr(v, N) for v in self.h_eta_inverse)
        if self.rho.shape != (M.dimension, self.rank):
            raise DimensionError(f"rho must be {M.dimension}x{self.rank}, got {self.rho.shape}")
        if len(self.h) != N.dimension:
            raise DimensionError(f"h needs {N.dimension} components, got {len(self.h)}")
        if len(self.eta) != M.dimension:
            raise DimensionError(f"eta needs {M.dimension} components, got {len(self.eta)}")
        if self.h_eta_inverse is not None and len(self.h_eta_inverse) != N.dimension:
            raise DimensionError("h_eta_inverse has the wrong number of components")
        # normalizes and range-checks the structure table
        self._table = FrameAlgebra(N, ExprMatrix.zeros(N, N.dimension, self.rank), self.structure,
                                   rank=self.rank)

    def h_eta(self) -> Tuple[Expr, ...]:
        """``h o eta`` as expressions over ``N_coords``."""
        at_eta = dict(zip(self.M_coords.names, self.eta))
        return tuple(e.substitute(at_eta, self.N_coords) for e in self.h)

    def h_eta_is_identity(self) -> bool:
        N = self.N_coords
        return all(e == N.coordinate(i) for i, e in enumerate(self.h_eta()))


def effective_anchor(spec: GeneralizedLieAlgebroidSpec) -> ExprMatrix:
    """Coordinate matrix of ``Gamma(Th o rho, h o eta)``: ``n x p`` over ``N``.

    ``theta^i_alpha = sum_j (dh^i/dx^j o eta) rho^j_alpha``, re-expressed at
    ``(h o eta)^{-1}`` when ``h o eta`` is not the identity.
    """
    M, N, p = spec.M_coords, spec.N_coords, spec.rank
    n, m = N.dimension, M.dimension
    if n == 0:
        return ExprMatrix.zeros(N, 0, p)
    inv = None
    if not spec.h_eta_is_identity():
        if spec.h_eta_inverse is None:
            raise AnchorError("h o eta is not the identity and no inverse (h_eta_inverse) was supplied")
        inv = dict(zip(N.names, spec.h_eta_inverse))
        for i, e in enumerate(spec.h_eta()):
            if e.substitute(inv, N) != N.coordinate(i):
                raise AnchorError(f"h_eta_inverse is not an inverse of h o eta (component {i + 1})")
    at_eta = dict(zip(M.names, spec.eta))
    rows = []
    for i in range(n):
        dh = [spec.h[i].partial(j).substitute(at_eta, N) for j in range(m)]
        row = []
        for a in range(p):
            total = N.zero()
            for j in range(m):
                total = total + dh[j] * spec.rho[j, a]
            if inv is not None:
                total = total.substitute(inv, N)
            row.append(total)
        rows.append(row)
    return ExprMatrix(N, rows, cols=p)


def as_frame_algebra(spec: GeneralizedLieAlgebroidSpec) -> FrameAlgebra:
    return FrameAlgebra(spec.N_coords, effective_anchor(spec), dict(spec._table.structure_items()),
                        rank=spec.rank, frame_names=spec.frame_names)


def pullback_algebroid(spec: GeneralizedLieAlgebroidSpec) -> FrameAlgebra:
    """Pull-back Lie algebroid over ``M``: anchor ``rho o h``, structure ``L o h``."""
    M = spec.M_coords
    at_h = dict(zip(spec.N_coords.names, spec.h))
    anchor = spec.rho.map(lambda e: e.substitute(at_h, M), M)
    structure = {k: v.substitute(at_h, M) for k, v in spec._table.structure_items()}
    names = spec.frame_names or [f"T{a + 1}" for a in range(spec.rank)]
    return FrameAlgebra(M, anchor, structure, rank=spec.rank, frame_names=names)
