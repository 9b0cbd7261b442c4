"""Exact rational-function arithmetic over Q in the variables s, u, C, T.

``s`` is beta/alpha, ``u`` is an auxiliary variable with u**2 = b**2 (so
half-integer powers of b**2 stay inside a genuine rational-function field),
and C, T are the formal conformal factors c and c-tilde.  Every value is kept
in canonical reduced form: numerator and denominator share no non-constant
factor and the denominator has a positive leading coefficient under the fixed
graded-lexicographic order s > u > C > T.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import ring

__all__ = [
    "RatExpr",
    "PoleError",
    "NonPolynomialError",
    "S",
    "U",
    "C",
    "T",
    "ZERO",
    "ONE",
    "arith",
]

RING, _S, _U, _C, _T = ring("s,u,C,T", QQ, order=grlex)
_GENS = (_S, _U, _C, _T)


class PoleError(ZeroDivisionError):
    """Evaluation point lies on the zero set of the denominator."""


class NonPolynomialError(ValueError):
    """Operation requires a denominator free of the given variable."""


def _to_poly(value):
    """Coerce ints/Fractions/QQ elements to a polynomial in RING."""
    if isinstance(value, type(_S)):
        return value
    if isinstance(value, (int, Fraction)):
        return RING.ground_new(QQ(value.numerator, value.denominator)
                               if isinstance(value, Fraction) else QQ(value))
    return RING.ground_new(QQ(value))


class RatExpr:
    """An exact rational function num/den in Q(s, u, C, T), always canonical."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _to_poly(num)
        den = _to_poly(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num:
            g = num.gcd(den)
            num = num.quo(g)
            den = den.quo(g)
        else:
            den = RING.one
        # make the denominator primitive with positive leading coefficient
        scale = _content(den)
        if den.LC < 0:
            scale = -scale
        if scale != 1:
            inv = _to_poly(1 / scale)
            num = num * inv
            den = den * inv
        self.num = num
        self.den = den

    # -- constructors -------------------------------------------------

    @classmethod
    def const(cls, value) -> "RatExpr":
        q = Fraction(value)
        return cls(_to_poly(q.numerator), _to_poly(q.denominator))

    # -- ring/field structure -----------------------------------------

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if not isinstance(other, RatExpr):
            try:
                other = RatExpr.const(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((tuple(self.num.terms()), tuple(self.den.terms())))

    def _coerce(self, other):
        if isinstance(other, RatExpr):
            return other
        return RatExpr.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RatExpr(self.num * o.den + o.num * self.den, self.den * o.den)

    def __sub__(self, other):
        o = self._coerce(other)
        return RatExpr(self.num * o.den - o.num * self.den, self.den * o.den)

    def __mul__(self, other):
        o = self._coerce(other)
        return RatExpr(self.num * o.num, self.den * o.den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if not o.num:
            raise ZeroDivisionError("division by zero RatExpr")
        return RatExpr(self.num * o.den, self.den * o.num)

    def __radd__(self, other):
        return self._coerce(other) + self

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __rmul__(self, other):
        return self._coerce(other) * self

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return RatExpr(-self.num, self.den)

    def __pow__(self, k: int):
        if isinstance(k, Fraction):
            if k.denominator != 1:
                raise NonPolynomialError("fractional powers are not rational")
            k = int(k)
        if k < 0:
            return RatExpr(self.den ** (-k), self.num ** (-k))
        return RatExpr(self.num ** k, self.den ** k)

    # -- calculus -----------------------------------------------------

    def d_ds(self) -> "RatExpr":
        """Partial derivative with respect to s (quotient rule, canonical)."""
        n, d = self.num, self.den
        return RatExpr(n.diff(_S) * d - n * d.diff(_S), d * d)

    def d_du(self) -> "RatExpr":
        n, d = self.num, self.den
        return RatExpr(n.diff(_U) * d - n * d.diff(_U), d * d)

    def d_db2(self) -> "RatExpr":
        """Partial derivative with respect to b**2, realized as (1/2u) d/du."""
        n, d = self.num, self.den
        return RatExpr(n.diff(_U) * d - n * d.diff(_U), 2 * _U * d * d)

    # -- structure queries --------------------------------------------

    def is_polynomial_in_s(self) -> bool:
        return self.den.degree(_S) <= 0

    def coeffs_in_s(self) -> list:
        """Coefficient list [v_0, ..., v_r] with self = sum v_i s**i, v_r != 0.

        Requires the denominator to be s-free.  Returns [] for the zero
        function.
        """
        if not self.is_polynomial_in_s():
            raise NonPolynomialError("denominator involves s: %s" % (self.den,))
        if not self.num:
            return []
        buckets = {}
        for monom, coef in self.num.terms():
            key = monom[0]
            rest = RING.term_new((0,) + monom[1:], coef)
            buckets[key] = buckets.get(key, RING.zero) + rest
        r = max(buckets)
        return [RatExpr(buckets.get(i, RING.zero), self.den) for i in range(r + 1)]

    def degree_in_s(self) -> int:
        """Degree of the numerator in s (-1 for the zero function)."""
        if not self.num:
            return -1
        return self.num.degree(_S)

    def numerator_normalized(self) -> "RatExpr":
        """Canonical numerator: primitive part, positive leading coefficient."""
        n = self.num
        if not n:
            return RatExpr(0)
        n = n.quo(_to_poly(_content(n)))
        if n.LC < 0:
            n = -n
        return RatExpr(n)

    # -- evaluation ---------------------------------------------------

    def eval_rational(self, s0, u0, C0=0, T0=0) -> Fraction:
        """Exact evaluation at rational arguments; raises PoleError on poles."""
        point = [(_S, _qq(s0)), (_U, _qq(u0)), (_C, _qq(C0)), (_T, _qq(T0))]
        dval = self.den.evaluate(point)
        if not dval:
            raise PoleError("denominator vanishes at (%s, %s, %s, %s)" % (s0, u0, C0, T0))
        nval = self.num.evaluate(point) if self.num else QQ(0)
        q = nval / dval
        return Fraction(int(QQ.numer(q)), int(QQ.denom(q)))

    def eval_float(self, s0: float, u0: float, C0: float = 0.0, T0: float = 0.0) -> float:
        """Floating-point evaluation (Horner-free, direct term summation)."""
        def poly_at(p):
            tot = 0.0
            for (a, b, c, d), coef in p.terms():
                tot += float(QQ.numer(coef)) / float(QQ.denom(coef)) * s0 ** a * u0 ** b * C0 ** c * T0 ** d
            return tot
        dv = poly_at(self.den)
        if dv == 0.0:
            raise PoleError("denominator vanishes (float) at the point")
        return poly_at(self.num) / dv

    # -- text form ----------------------------------------------------

    def to_text(self) -> str:
        """Plain-text serialization: `num: <monomials> / den: <monomials>`.

        Both sides are scaled to integer coefficients with joint content 1.
        """
        num, den = _integerize(self.num, self.den)
        return "num: %s / den: %s" % (_poly_text(num), _poly_text(den))

    @classmethod
    def from_text(cls, text: str) -> "RatExpr":
        if "/ den:" not in text or not text.strip().startswith("num:"):
            raise ValueError("malformed RatExpr text: %r" % text)
        num_part, den_part = text.split("/ den:")
        num_part = num_part.strip()[len("num:"):]
        return cls(_poly_parse(num_part), _poly_parse(den_part))

    def __repr__(self):
        if self.den == RING.one:
            return "RatExpr(%s)" % (self.num,)
        return "RatExpr((%s)/(%s))" % (self.num, self.den)

    def __str__(self):
        if self.den == RING.one:
            return str(self.num) if self.num else "0"
        return "(%s)/(%s)" % (self.num, self.den)


def _content(p) -> Fraction:
    """Positive rational content (gcd of coefficients) of a nonzero poly."""
    content = None
    for _, coef in p.terms():
        q = Fraction(int(QQ.numer(coef)), int(QQ.denom(coef)))
        content = abs(q) if content is None else _frac_gcd(content, abs(q))
    return content


def _qq(x):
    f = Fraction(x)
    return QQ(f.numerator, f.denominator)


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    from math import gcd, lcm
    return Fraction(gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator))


def _integerize(num, den):
    """Scale num, den by a single positive rational so both have integer
    coefficients and the joint integer content is 1."""
    from math import gcd, lcm
    denom_lcm = 1
    for p in (num, den):
        for _, coef in p.terms():
            denom_lcm = lcm(denom_lcm, int(QQ.denom(coef)))
    num = num * _to_poly(denom_lcm)
    den = den * _to_poly(denom_lcm)
    content = 0
    for p in (num, den):
        for _, coef in p.terms():
            content = gcd(content, int(QQ.numer(coef)))
    if content > 1:
        num = num.quo(_to_poly(content))
        den = den.quo(_to_poly(content))
    return num, den


_VAR_NAMES = ("s", "u", "C", "T")


def _poly_text(p) -> str:
    if not p:
        return "0"
    parts = []
    for monom, coef in sorted(p.terms(), key=lambda t: grlex(t[0]), reverse=True):
        factors = [str(int(QQ.numer(coef)))]
        for name, e in zip(_VAR_NAMES, monom):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append("%s^%d" % (name, e))
        parts.append("*".join(factors))
    return " + ".join(parts).replace("+ -", "- ")


def _poly_parse(text: str):
    text = text.strip().replace("- ", "+ -")
    if text == "0":
        return RING.zero
    total = RING.zero
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        term = RING.one
        if chunk.startswith("-"):
            term = -term
            chunk = chunk[1:]
        for factor in chunk.split("*"):
            factor = factor.strip()
            if not factor:
                continue
            if factor.isdigit():
                term = term * _to_poly(int(factor))
            else:
                if "^" in factor:
                    name, _, exp = factor.partition("^")
                    e = int(exp)
                else:
                    name, e = factor, 1
                try:
                    gen = _GENS[_VAR_NAMES.index(name)]
                except ValueError:
                    raise ValueError("unknown variable %r in %r" % (name, text))
                term = term * gen ** e
        total = total + term
    return total


S = RatExpr(_S)
U = RatExpr(_U)
C = RatExpr(_C)
T = RatExpr(_T)
ZERO = RatExpr(0)
ONE = RatExpr(1)


def arith(op: str, a: RatExpr, b: RatExpr) -> RatExpr:
    """Dispatch form of the four field operations."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError("unknown op %r" % op)
