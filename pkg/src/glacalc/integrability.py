"""Interior differential systems: annihilators, involutivity, Frobenius and EDS checks.

An IDS is a rank-``r`` subbundle spanned by the columns of a ``p x r``
matrix over the algebra's coordinates.  Three decision procedures are
provided and are expected to agree:

* :func:`is_involutive` solves ``span x = [S_a, S_b]`` for every pair;
* :func:`frobenius_certificate` completes the span to a frame, takes the dual
  coframe and either finds ``Omega`` with ``d Theta^a = Omega^a_b ^ Theta^b``
  or reports the obstructing pair;
* :func:`eds_closure_check` tests ``d Theta ^ Theta^{r+1} ^ ... ^ Theta^p = 0``.

Everything is generic: ranks are over the function field.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .algebroid import FrameAlgebra, Section, bracket
from .errors import CrossCheckError, DimensionError, RankError
from .expr import Expr
from .forms import Form, d, evaluate, format_form, wedge, wedge_all, zero_form
from .linalg import NO_SOLUTION, ExprMatrix, echelon, inverse, nullspace, rank, solve


class IDS:
    """Subbundle spanned by the columns of ``span`` (``p x r``)."""

    def __init__(self, algebra: FrameAlgebra, span):
        if not isinstance(span, ExprMatrix):
            span = ExprMatrix(algebra.coords, span)
        if span.coords != algebra.coords:
            raise DimensionError("span is not over the algebra's coordinates")
        if span.rows != algebra.rank:
            raise DimensionError(f"span has {span.rows} rows, algebra rank is {algebra.rank}")
        r = span.cols
        if not 1 <= r <= algebra.rank:
            raise DimensionError(f"span must have between 1 and {algebra.rank} columns, got {r}")
        _, pivots = echelon(span.T.tolist(), span.rows)
        if len(pivots) < r:
            # find the first column dependent on its predecessors
            dep = next(k for k in range(1, r + 1) if rank(_columns(span, range(k))) < k) - 1
            raise RankError(f"span columns are dependent: column {dep + 1} lies in the span of "
                            f"columns 1..{dep}; generic rank {len(pivots)} < {r}",
                            len(pivots), [p + 1 for p in pivots])
        self.algebra = algebra
        self.span = span

    @property
    def r(self) -> int:
        return self.span.cols

    @property
    def p(self) -> int:
        return self.algebra.rank

    def sections(self) -> List[Section]:
        return [self.algebra.section(self.span.column(b)) for b in range(self.r)]

    def frame_changed(self, G: ExprMatrix) -> "IDS":
        """Same subbundle with spanning sections ``span @ G``."""
        return IDS(self.algebra, self.span @ G)


def _columns(M: ExprMatrix, idx) -> ExprMatrix:
    idx = list(idx)
    return ExprMatrix(M.coords, [[M[i, j] for j in idx] for i in range(M.rows)], cols=len(idx))


def _one_form(A: FrameAlgebra, comps) -> Form:
    return Form(A, 1, {(a,): c for a, c in enumerate(comps)})


@dataclass
class Annihilator:
    coframes: List[Form]

    def __len__(self):
        return len(self.coframes)

    def __iter__(self):
        return iter(self.coframes)


def annihilator(D: IDS) -> Annihilator:
    """Polynomial 1-forms ``Theta^{r+1..p}`` vanishing on the span."""
    A = D.algebra
    return Annihilator([_one_form(A, v) for v in nullspace(D.span.T)])


@dataclass
class InvolutivityResult:
    involutive: bool
    # (a, b) -> coefficients of [S_a, S_b] in the span (0-based pair)
    certificate: Dict[Tuple[int, int], List[Expr]] = field(default_factory=dict)
    # failing pair and the values Theta^alpha([S_a, S_b])
    counterexample: Optional[Tuple[Tuple[int, int], List[Expr]]] = None

    def __bool__(self):
        return self.involutive


def is_involutive(D: IDS, cross_check: bool = True) -> InvolutivityResult:
    """Decide closure of the span under the bracket, pair by pair."""
    S = D.sections()
    thetas = annihilator(D).coframes if cross_check else []
    result = InvolutivityResult(True)
    for a in range(D.r):
        for b in range(a + 1, D.r):
            br = bracket(S[a], S[b])
            x = solve(D.span, br.components)
            residual = [evaluate(th, br) for th in thetas]
            if cross_check and (x is NO_SOLUTION) != any(not v.is_zero() for v in residual):
                raise CrossCheckError(f"span-membership and annihilator tests disagree on pair ({a + 1}, {b + 1})")
            if x is NO_SOLUTION:
                if result.involutive:
                    result.involutive = False
                    result.counterexample = ((a, b), residual)
            else:
                result.certificate[(a, b)] = x
    return result


@dataclass
class NotInvolutive:
    """Obstruction: ``d Theta^alpha(S_b, S_c) != 0`` for span sections ``b < c``."""

    alpha: int
    pair: Tuple[int, int]
    value: Expr

    def __bool__(self):
        return False

    def __str__(self):
        b, c = self.pair
        return f"NOT_INVOLUTIVE: dTheta^{self.alpha + 1}(S_{b + 1}, S_{c + 1}) = {self.value}"


@dataclass
class FrobeniusCertificate:
    frame: ExprMatrix            # completed frame, columns S_1..S_p
    coframe: List[Form]          # dual coframe Theta^1..Theta^p
    r: int
    omega: Dict[Tuple[int, int], Form]   # (alpha, gamma) with alpha, gamma >= r

    def __bool__(self):
        return True

    def lines(self) -> List[str]:
        return [f"Omega^{a + 1}_{g + 1} = {format_form(w)}" for (a, g), w in sorted(self.omega.items())]


def complete_frame(D: IDS) -> ExprMatrix:
    """Append standard basis columns, in index order, that raise the generic rank."""
    A, p = D.algebra, D.p
    cols = [D.span.column(b) for b in range(D.r)]
    for k in range(p):
        if len(cols) == p:
            break
        e = [A.coords.one() if i == k else A.coords.zero() for i in range(p)]
        trial = ExprMatrix.from_columns(A.coords, cols + [e], p)
        if rank(trial) == len(cols) + 1:
            cols.append(e)
    if len(cols) != p:
        raise AssertionError("frame completion failed despite full-rank span")
    return ExprMatrix.from_columns(A.coords, cols, p)


def frobenius_certificate(D: IDS):
    """``Omega`` with ``d Theta^alpha = sum_gamma Omega^alpha_gamma ^ Theta^gamma`` or :class:`NotInvolutive`.

    Coefficients of ``d Theta^alpha`` in the dual basis are read off as
    ``d Theta^alpha(S_b, S_c)``; span-span coefficients must vanish.  The
    returned certificate is verified exactly before it is returned.
    """
    A, p, r = D.algebra, D.p, D.r
    frame = complete_frame(D)
    inv = inverse(frame)
    theta = [_one_form(A, inv.row(a)) for a in range(p)]
    S = [A.section(frame.column(b)) for b in range(p)]
    dtheta = {a: d(theta[a]) for a in range(r, p)}
    half = Fraction(1, 2)
    omega: Dict[Tuple[int, int], Form] = {}
    for a in range(r, p):
        for b in range(r):
            for c in range(b + 1, r):
                v = evaluate(dtheta[a], S[b], S[c])
                if not v.is_zero():
                    return NotInvolutive(a, (b, c), v)
    for a in range(r, p):
        for g in range(r, p):
            w = zero_form(A, 1)
            for b in range(r):
                B = evaluate(dtheta[a], S[b], S[g])
                if B.num:
                    w = w + theta[b] * B
            for be in range(r, p):
                Cv = evaluate(dtheta[a], S[be], S[g])
                if Cv.num:
                    w = w + theta[be] * (Cv * half)
            omega[(a, g)] = w
    for a in range(r, p):
        total = zero_form(A, 2)
        for g in range(r, p):
            total = total + wedge(omega[(a, g)], theta[g])
        if total != dtheta[a]:
            raise CrossCheckError(f"certificate fails for Theta^{a + 1}")
    return FrobeniusCertificate(frame, theta, r, omega)


def eds_closure_failures(D: IDS) -> List[Tuple[int, Form]]:
    """Generators whose ``d Theta ^ Theta^{r+1} ^ ... ^ Theta^p`` is nonzero."""
    thetas = annihilator(D).coframes
    if not thetas:
        return []
    top = wedge_all(thetas)
    out = []
    for a, th in enumerate(thetas):
        v = wedge(d(th), top)
        if not v.is_zero():
            out.append((a, v))
    return out


def eds_closure_check(D: IDS) -> bool:
    """Is the ideal generated by the annihilator differentially closed?"""
    return not eds_closure_failures(D)
