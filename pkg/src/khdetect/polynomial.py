"""Exact Laurent polynomials in ``q`` and bigraded polynomials in ``(q, t)``.

Both types are immutable and hashable.  Coefficients are Python integers so
state sums never overflow.

The canonical text form is shared by both types: terms sorted by
``(t exponent, q exponent)``, each rendered ``"<c> q^<a> t^<b>"`` and joined
by ``";"``.  The zero polynomial is ``"0"``.  One-variable polynomials always
write ``t^0``::

    >>> str(LaurentPoly({1: 1, -1: 1}).to_canonical())
    '1 q^-1 t^0;1 q^1 t^0'
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import NotDivisible, ParseError

__all__ = [
    "LaurentPoly",
    "BigradedPoly",
    "lp_add",
    "lp_mul",
    "lp_mirror",
    "lp_div_exact",
    "bp_mirror",
    "bp_eval_t_minus1",
    "poly_to_canonical_string",
    "poly_from_canonical_string",
]


def _pruned(terms):
    return {k: c for k, c in terms.items() if c}


class LaurentPoly:
    """Integer Laurent polynomial in one variable ``q``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = dict(terms)
        self._terms = {int(e): int(c) for e, c in terms.items() if c}
        self._hash = None

    @classmethod
    def monomial(cls, exponent=1, coeff=1):
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c):
        return cls({0: c})

    @classmethod
    def from_coefficients(cls, coeffs, low=0):
        """Build from a dense list, ``coeffs[i]`` being the coefficient of ``q^(low+i)``."""
        return cls({low + i: c for i, c in enumerate(coeffs)})

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, exponent):
        return self._terms.get(exponent, 0)

    def is_zero(self):
        return not self._terms

    def degree(self):
        """Largest exponent; raises ``ValueError`` on the zero polynomial."""
        if not self._terms:
            raise ValueError("zero polynomial has no degree")
        return max(self._terms)

    def valuation(self):
        if not self._terms:
            raise ValueError("zero polynomial has no valuation")
        return min(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = LaurentPoly.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k):
        """Multiply by ``q^k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def mirror(self):
        """Substitute ``q -> q^-1``."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def substitute_power(self, k):
        """Substitute ``q -> q^k``."""
        return LaurentPoly({e * k: c for e, c in self._terms.items()})

    def __call__(self, x):
        """Evaluate at a number; negative exponents use exact rationals for ints."""
        if isinstance(x, int):
            x = Fraction(x)
        return sum((c * x**e for e, c in self._terms.items()), 0)

    def divexact(self, divisor):
        """Return ``Q`` with ``Q * divisor == self``; raise NotDivisible otherwise."""
        if not divisor:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self:
            return LaurentPoly()
        dv, dd = divisor.valuation(), divisor.degree()
        d = [divisor.coeff(dv + i) for i in range(dd - dv + 1)]
        pv, pd = self.valuation(), self.degree()
        rem = [self.coeff(pv + i) for i in range(pd - pv + 1)]
        nd = len(d) - 1
        if len(rem) - 1 < nd:
            raise NotDivisible(f"{self} is not divisible by {divisor}")
        quot = [0] * (len(rem) - nd)
        lead = d[-1]
        for i in range(len(quot) - 1, -1, -1):
            top = rem[i + nd]
            if top % lead:
                raise NotDivisible(f"{self} is not divisible by {divisor}")
            f = top // lead
            quot[i] = f
            if f:
                for j in range(nd + 1):
                    rem[i + j] -= f * d[j]
        if any(rem):
            raise NotDivisible(f"{self} is not divisible by {divisor}")
        return LaurentPoly.from_coefficients(quot, low=pv - dv)

    def to_canonical(self):
        return poly_to_canonical_string(self)

    @classmethod
    def from_canonical(cls, s):
        return poly_from_canonical_string(s)

    def pretty(self, var="q"):
        """Human notation, highest degree first, e.g. ``-q^14+q^12+q^4``."""
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if e == 0:
                body = str(a)
            else:
                mono = var if e == 1 else f"{var}^{e}"
                body = mono if a == 1 else f"{a}{mono}"
            parts.append(sign + body)
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    def __repr__(self):
        return f"LaurentPoly({self.pretty()})"

    def __str__(self):
        return self.pretty()


class BigradedPoly:
    """Integer Laurent polynomial in ``q`` and ``t``; keys are ``(q_exp, t_exp)``."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        elif not isinstance(terms, dict):
            terms = dict(terms)
        self._terms = {(int(a), int(b)): int(c) for (a, b), c in terms.items() if c}
        self._hash = None

    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0]))

    def coeff(self, q_exp, t_exp):
        return self._terms.get((q_exp, t_exp), 0)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, BigradedPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, BigradedPoly):
            return NotImplemented
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return BigradedPoly(out)

    def __neg__(self):
        return BigradedPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def mirror(self):
        """Substitute ``(q, t) -> (q^-1, t^-1)``."""
        return BigradedPoly({(-a, -b): c for (a, b), c in self._terms.items()})

    def eval_t_minus1(self):
        """Graded Euler characteristic: set ``t = -1``."""
        out = {}
        for (a, b), c in self._terms.items():
            out[a] = out.get(a, 0) + (-c if b % 2 else c)
        return LaurentPoly(out)

    def q_range(self):
        qs = [a for a, _ in self._terms]
        return (min(qs), max(qs)) if qs else None

    def t_range(self):
        ts = [b for _, b in self._terms]
        return (min(ts), max(ts)) if ts else None

    def is_positive(self):
        return all(c > 0 for c in self._terms.values())

    def to_canonical(self):
        return poly_to_canonical_string(self)

    @classmethod
    def from_canonical(cls, s):
        return poly_from_canonical_string(s, bigraded=True)

    def __repr__(self):
        body = " + ".join(f"{c}*q^{a}*t^{b}" for (a, b), c in self.items())
        return f"BigradedPoly({body or '0'})"


def lp_add(a, b):
    return a + b


def lp_mul(a, b):
    return a * b


def lp_mirror(p):
    return p.mirror()


def lp_div_exact(p, d):
    return p.divexact(d)


def bp_mirror(p):
    return p.mirror()


def bp_eval_t_minus1(p):
    return p.eval_t_minus1()


def poly_to_canonical_string(p):
    if isinstance(p, LaurentPoly):
        items = [((e, 0), c) for e, c in p.items()]
    elif isinstance(p, BigradedPoly):
        items = p.items()
    else:
        raise TypeError(f"not a polynomial: {p!r}")
    if not items:
        return "0"
    return ";".join(f"{c} q^{a} t^{b}" for (a, b), c in items)


_TERM = re.compile(r"(-?[0-9]+) q\^(-?[0-9]+) t\^(-?[0-9]+)")


def poly_from_canonical_string(s, bigraded=False):
    """Parse the canonical form; the result type is chosen by ``bigraded``.

    Terms must appear in canonical order with no duplicates or zero
    coefficients, so that parsing is the exact inverse of rendering.
    """
    if not isinstance(s, str):
        raise ParseError("expected a string", 0)
    if s == "0":
        return BigradedPoly() if bigraded else LaurentPoly()
    if not s:
        raise ParseError("empty polynomial string", 0)
    terms = {}
    pos = 0
    prev = None
    while True:
        m = _TERM.match(s, pos)
        if m is None:
            raise ParseError("expected term '<c> q^<a> t^<b>'", pos)
        c, a, b = (int(g) for g in m.groups())
        for g in m.groups():
            digits = g.lstrip("-")
            if (len(digits) > 1 and digits[0] == "0") or g == "-0":
                raise ParseError("non-canonical integer", pos)
        if c == 0:
            raise ParseError("zero coefficient", pos)
        key = (b, a)
        if prev is not None and key <= prev:
            raise ParseError("terms out of canonical order", pos)
        prev = key
        if not bigraded and b != 0:
            raise ParseError("t exponent must be 0 for a one-variable polynomial", m.start(3))
        terms[(a, b)] = c
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] != ";":
            raise ParseError("expected ';'", pos)
        pos += 1
    if bigraded:
        return BigradedPoly(terms)
    return LaurentPoly({a: c for (a, _), c in terms.items()})
