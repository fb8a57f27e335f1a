"""Exact rational functions over a declared coordinate system.

:class:`Expr` is an immutable quotient of two polynomials with rational
coefficients.  Zero testing is exact: an expression is zero iff its numerator
is the zero polynomial.  Only cheap cancellation is attempted (exact trial
division by the denominator and removal of common monomial factors), so two
equal values may carry different representations; ``==`` compares values by
cross-multiplication.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Optional, Sequence, Tuple, Union

from . import _poly as P
from .errors import CoordinateError, DivisionByZero

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

Scalar = Union["Expr", int, Fraction]


@dataclass(frozen=True)
class CoordinateSystem:
    """Ordered, distinct coordinate names.  Dimension 0 is allowed."""

    names: Tuple[str, ...] = ()

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        for name in names:
            if not isinstance(name, str) or not _IDENT.match(name):
                raise CoordinateError(f"invalid coordinate name {name!r}")
        if len(set(names)) != len(names):
            raise CoordinateError(f"duplicate coordinate names in {names}")

    @property
    def dimension(self) -> int:
        return len(self.names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise CoordinateError(f"unknown coordinate {name!r} (have {list(self.names)})") from None

    def coordinate(self, name_or_index: Union[str, int]) -> "Expr":
        i = name_or_index if isinstance(name_or_index, int) else self.index(name_or_index)
        return Expr(self, P.variable(i, self.dimension), _canonical=True)

    def coordinates(self) -> Tuple["Expr", ...]:
        return tuple(self.coordinate(i) for i in range(self.dimension))

    def const(self, value) -> "Expr":
        return Expr(self, P.const(value, self.dimension), _canonical=True)

    def zero(self) -> "Expr":
        return Expr(self, {}, _canonical=True)

    def one(self) -> "Expr":
        return Expr(self, P.one(self.dimension), _canonical=True)

    def parse(self, text: str) -> "Expr":
        from .parser import parse_expr

        return parse_expr(text, self)


def coords(*names: str) -> CoordinateSystem:
    """Shorthand: ``coords("x", "y")``."""
    if len(names) == 1 and not isinstance(names[0], str):
        names = tuple(names[0])
    return CoordinateSystem(tuple(names))


class Expr:
    """Rational function ``num / den`` over a :class:`CoordinateSystem`."""

    __slots__ = ("coords", "num", "den")

    def __init__(self, coords: CoordinateSystem, num: P.Poly, den: Optional[P.Poly] = None,
                 *, _canonical: bool = False):
        self.coords = coords
        n = coords.dimension
        if den is None:
            den = P.one(n)
        if _canonical:
            self.num, self.den = num, den
            return
        if not den:
            raise DivisionByZero("denominator is the zero polynomial")
        if not num:
            self.num, self.den = {}, P.one(n)
            return
        if P.is_constant(den):
            c = P.constant_value(den)
            self.num, self.den = (num if c == 1 else P.scale(num, 1 / c)), P.one(n)
            return
        q = P.divide_exact(num, den)
        if q is not None:
            self.num, self.den = q, P.one(n)
            return
        lo_n = P.monomial_content(num)
        lo_d = P.monomial_content(den)
        common = tuple(min(a, b) for a, b in zip(lo_n, lo_d))
        if any(common):
            num = P.shift_down(num, common)
            den = P.shift_down(den, common)
        _, lc = P.leading(den)
        if lc != 1:
            num = P.scale(num, 1 / lc)
            den = P.scale(den, 1 / lc)
        if P.is_constant(den):
            den = P.one(n)
        self.num, self.den = num, den

    # -- construction helpers ---------------------------------------------
    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            if other.coords != self.coords:
                raise CoordinateError(
                    f"coordinate systems differ: {self.coords.names} vs {other.coords.names}")
            return other
        if isinstance(other, (int, Rational)):
            return Expr(self.coords, P.const(other, self.coords.dimension), _canonical=True)
        return NotImplemented

    # -- predicates ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.num

    def is_polynomial(self) -> bool:
        return P.is_one(self.den)

    def is_constant(self) -> bool:
        return P.is_constant(self.num) and P.is_one(self.den)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return P.constant_value(self.num)

    def variables(self) -> Tuple[str, ...]:
        used = set()
        for p in (self.num, self.den):
            for mono in p:
                used.update(i for i, e in enumerate(mono) if e)
        return tuple(self.coords.names[i] for i in sorted(used))

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den == other.den:
            return Expr(self.coords, P.add(self.num, other.num), self.den)
        if P.is_one(other.den):
            return Expr(self.coords, P.add(self.num, P.mul(other.num, self.den)), self.den)
        if P.is_one(self.den):
            return Expr(self.coords, P.add(P.mul(self.num, other.den), other.num), other.den)
        num = P.add(P.mul(self.num, other.den), P.mul(other.num, self.den))
        return Expr(self.coords, num, P.mul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return Expr(self.coords, P.neg(self.num), self.den, _canonical=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return self.coords.zero()
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not P.is_one(d2):
            q = P.divide_exact(n1, d2)
            if q is not None:
                n1, d2 = q, P.one(self.coords.dimension)
        if not P.is_one(d1):
            q = P.divide_exact(n2, d1)
            if q is not None:
                n2, d1 = q, P.one(self.coords.dimension)
        den = P.mul(d1, d2)
        if P.is_one(den):
            return Expr(self.coords, P.mul(n1, n2), den, _canonical=True)
        return Expr(self.coords, P.mul(n1, n2), den)

    __rmul__ = __mul__

    def inverse(self) -> "Expr":
        if not self.num:
            raise DivisionByZero("division by an expression that is identically zero")
        return Expr(self.coords, self.den, self.num)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        dim = self.coords.dimension
        return Expr(self.coords, P.power(self.num, n, dim), P.power(self.den, n, dim),
                    _canonical=True)

    # -- equality -----------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Rational)):
            other = self._coerce(other)
        if not isinstance(other, Expr):
            return NotImplemented
        if other.coords != self.coords:
            return False
        if self.den == other.den:
            return self.num == other.num
        return not P.sub(P.mul(self.num, other.den), P.mul(other.num, self.den))

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    __hash__ = None

    def __bool__(self):
        return bool(self.num)

    # -- calculus -----------------------------------------------------------------
    def partial(self, coord: Union[str, int]) -> "Expr":
        """Exact partial derivative with respect to a coordinate."""
        i = coord if isinstance(coord, int) else self.coords.index(coord)
        if not 0 <= i < self.coords.dimension:
            raise CoordinateError(f"coordinate index {i} out of range")
        dn = P.derivative(self.num, i)
        if P.is_one(self.den):
            return Expr(self.coords, dn, self.den, _canonical=True)
        dd = P.derivative(self.den, i)
        if not dd:
            return Expr(self.coords, dn, self.den)
        num = P.sub(P.mul(dn, self.den), P.mul(self.num, dd))
        return Expr(self.coords, num, P.mul(self.den, self.den))

    def substitute(self, bindings: Mapping[str, "Expr"],
                   target: Optional[CoordinateSystem] = None) -> "Expr":
        """Compose with a map given by ``bindings`` (coordinate name -> Expr).

        Every coordinate occurring in the expression must be bound.  The
        result lives in ``target`` (inferred from the bound values when omitted).
        """
        for name in bindings:
            self.coords.index(name)
        if target is None:
            vals = [v for v in bindings.values() if isinstance(v, Expr)]
            target = vals[0].coords if vals else self.coords
        values = []
        for name in self.coords.names:
            v = bindings.get(name)
            if v is None:
                values.append(None)
                continue
            if isinstance(v, Expr):
                if v.coords != target:
                    raise CoordinateError(f"binding for {name!r} is not over {target.names}")
            else:
                v = target.const(v)
            values.append(v)
        for name in self.variables():
            if values[self.coords.index(name)] is None:
                raise CoordinateError(f"coordinate {name!r} is not bound")
        num = _eval_poly(self.num, values, target)
        if P.is_one(self.den):
            return num
        den = _eval_poly(self.den, values, target)
        if den.is_zero():
            raise DivisionByZero(f"denominator of {self} vanishes identically after substitution")
        return num / den

    def evaluate(self, point: Union[Sequence, Mapping[str, object]]) -> Fraction:
        """Exact value at a rational point."""
        if isinstance(point, Mapping):
            point = [point[name] for name in self.coords.names]
        den = P.evaluate(self.den, point)
        if den == 0:
            raise DivisionByZero(f"denominator of {self} vanishes at {list(point)}")
        return P.evaluate(self.num, point) / den

    # -- printing -----------------------------------------------------------------
    def to_string(self) -> str:
        names = self.coords.names
        num = format_poly(self.num, names)
        if P.is_one(self.den):
            return num
        if len(self.num) > 1 or "/" in num:
            num = f"({num})"
        den = format_poly(self.den, names)
        (mono,) = self.den if len(self.den) == 1 else (None,)
        if mono is None or sum(1 for e in mono if e) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    __str__ = to_string

    def __repr__(self):
        return f"Expr({self.to_string()!r})"


def _eval_poly(p: P.Poly, values, target: CoordinateSystem) -> Expr:
    if all(v is None or v.is_polynomial() for v in values):
        dim = target.dimension
        cache = {}
        total: P.Poly = {}
        for mono, c in p.items():
            term = P.const(c, dim)
            for i, e in enumerate(mono):
                if e:
                    key = (i, e)
                    if key not in cache:
                        cache[key] = P.power(values[i].num, e, dim)
                    term = P.mul(term, cache[key])
            total = P.add(total, term)
        return Expr(target, total, _canonical=True)
    total = target.zero()
    for mono, c in p.items():
        term = target.const(c)
        for i, e in enumerate(mono):
            if e:
                term = term * values[i] ** e
        total = total + term
    return total


def _format_coeff(c: Fraction) -> Tuple[str, str]:
    num = str(abs(c.numerator))
    den = str(c.denominator) if c.denominator != 1 else ""
    return num, den


def format_poly(p: P.Poly, names: Sequence[str]) -> str:
    """Canonical text of a polynomial: descending grlex, ``2*x*y - y^2/3``."""
    if not p:
        return "0"
    parts = []
    for k, (mono, c) in enumerate(P.sorted_terms(p)):
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        cnum, cden = _format_coeff(c)
        if factors:
            body = "*".join(factors if cnum == "1" else [cnum] + factors)
        else:
            body = cnum
        if cden:
            body = f"{body}/{cden}"
        if k == 0:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(parts)


# -- functional API ---------------------------------------------------------------

def add(e1: Expr, e2: Expr) -> Expr:
    return e1 + e2


def sub(e1: Expr, e2: Expr) -> Expr:
    return e1 - e2


def mul(e1: Expr, e2: Expr) -> Expr:
    return e1 * e2


def div(e1: Expr, e2: Expr) -> Expr:
    return e1 / e2


def partial(e: Expr, coord: Union[str, int]) -> Expr:
    return e.partial(coord)


def substitute(e: Expr, bindings: Mapping[str, Expr],
               target: Optional[CoordinateSystem] = None) -> Expr:
    return e.substitute(bindings, target)


def is_zero(e: Expr) -> bool:
    return e.is_zero()


def print_canonical(e: Expr) -> str:
    return e.to_string()


def as_expr(value, coords: CoordinateSystem) -> Expr:
    """Coerce ints, Fractions and expression strings into ``coords``."""
    if isinstance(value, Expr):
        if value.coords != coords:
            raise CoordinateError(f"{value} is not over {coords.names}")
        return value
    if isinstance(value, str):
        return coords.parse(value)
    if isinstance(value, (int, Rational)):
        return coords.const(value)
    raise TypeError(f"cannot interpret {value!r} as an expression")


def expr_sum(terms: Iterable[Expr], coords: CoordinateSystem) -> Expr:
    total = coords.zero()
    for t in terms:
        total = total + t
    return total
