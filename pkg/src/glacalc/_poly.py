"""Sparse multivariate polynomials over Q.

A polynomial is a plain ``dict`` mapping exponent tuples to nonzero
``Fraction`` coefficients.  Dicts produced here are never mutated after they
are returned, so they can be shared freely.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Tuple

Monomial = Tuple[int, ...]
Poly = Dict[Monomial, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def const(value, nvars: int) -> Poly:
    value = Fraction(value)
    if value == 0:
        return {}
    return {(0,) * nvars: value}


def one(nvars: int) -> Poly:
    return {(0,) * nvars: _ONE}


def variable(index: int, nvars: int) -> Poly:
    exps = [0] * nvars
    exps[index] = 1
    return {tuple(exps): _ONE}


def grlex_key(mono: Monomial):
    return (sum(mono), mono)


def sorted_terms(p: Poly):
    """Terms in descending graded-lexicographic order."""
    return sorted(p.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)


def leading(p: Poly) -> Tuple[Monomial, Fraction]:
    mono = max(p, key=grlex_key)
    return mono, p[mono]


def is_constant(p: Poly) -> bool:
    if not p:
        return True
    if len(p) > 1:
        return False
    (mono,) = p
    return not any(mono)


def constant_value(p: Poly) -> Fraction:
    if not p:
        return _ZERO
    (mono,) = p
    return p[mono]


def is_one(p: Poly) -> bool:
    return len(p) == 1 and is_constant(p) and constant_value(p) == 1


def add(a: Poly, b: Poly) -> Poly:
    if not a:
        return b
    if not b:
        return a
    if len(a) < len(b):
        a, b = b, a
    out = dict(a)
    for mono, c in b.items():
        s = out.get(mono)
        if s is None:
            out[mono] = c
        else:
            s += c
            if s:
                out[mono] = s
            else:
                del out[mono]
    return out


def neg(a: Poly) -> Poly:
    return {m: -c for m, c in a.items()}


def sub(a: Poly, b: Poly) -> Poly:
    if not b:
        return a
    return add(a, neg(b))


def scale(a: Poly, c) -> Poly:
    if not c:
        return {}
    if c == 1:
        return a
    return {m: v * c for m, v in a.items()}


def mul(a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return {}
    if len(a) < len(b):
        a, b = b, a
    if len(b) == 1:
        ((mb, cb),) = b.items()
        if not any(mb):
            return scale(a, cb)
        return {tuple(x + y for x, y in zip(ma, mb)): ca * cb for ma, ca in a.items()}
    out: Poly = {}
    get = out.get
    for mb, cb in b.items():
        for ma, ca in a.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = get(m, _ZERO) + ca * cb
    return {m: c for m, c in out.items() if c}


def power(a: Poly, n: int, nvars: int) -> Poly:
    result = one(nvars)
    base = a
    while n:
        if n & 1:
            result = mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def derivative(a: Poly, index: int) -> Poly:
    out: Poly = {}
    for mono, c in a.items():
        e = mono[index]
        if e:
            m = list(mono)
            m[index] = e - 1
            out[tuple(m)] = c * e
    return out


def _mono_divides(small: Monomial, big: Monomial) -> bool:
    return all(s <= b for s, b in zip(small, big))


def divide_exact(a: Poly, b: Poly) -> Optional[Poly]:
    """Return ``a / b`` when ``b`` divides ``a`` exactly, else ``None``.

    Single-divisor grlex division; bails out at the first leading term of
    the remainder that the leading monomial of ``b`` does not divide.
    """
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if not a:
        return {}
    lm_b, lc_b = leading(b)
    if len(b) == 1:
        if not all(_mono_divides(lm_b, m) for m in a):
            return None
        return {tuple(x - y for x, y in zip(m, lm_b)): c / lc_b for m, c in a.items()}
    rem = dict(a)
    quot: Poly = {}
    while rem:
        lm_r, lc_r = leading(rem)
        if not _mono_divides(lm_b, lm_r):
            return None
        qm = tuple(x - y for x, y in zip(lm_r, lm_b))
        qc = lc_r / lc_b
        quot[qm] = qc
        for mb, cb in b.items():
            m = tuple(x + y for x, y in zip(mb, qm))
            v = rem.get(m, _ZERO) - qc * cb
            if v:
                rem[m] = v
            else:
                rem.pop(m, None)
    return quot


def monomial_content(p: Poly) -> Monomial:
    """Componentwise minimum exponent over the terms of ``p``."""
    it = iter(p)
    lo = list(next(it))
    for mono in it:
        for i, e in enumerate(mono):
            if e < lo[i]:
                lo[i] = e
    return tuple(lo)


def shift_down(p: Poly, mono: Monomial) -> Poly:
    return {tuple(x - y for x, y in zip(m, mono)): c for m, c in p.items()}


def evaluate(p: Poly, point) -> Fraction:
    """Evaluate at a point of exact rationals."""
    total = _ZERO
    for mono, c in p.items():
        term = c
        for x, e in zip(point, mono):
            if e:
                term *= Fraction(x) ** e
        total += term
    return total
