"""Rational functions with a factored denominator, no gcd required.

The curvature-condition pipeline produces expressions whose denominators are
products of powers of a handful of small polynomials (phi, phi - s*phi2, the
convexity trinomial, u).  Keeping the denominator factored makes addition and
s-differentiation pure polynomial work; the only cancellation ever performed
is exact division by those known factors at numerator-extraction time.  This
sidesteps large multivariate gcds entirely.

Works over any sympy sparse polynomial ring with QQ coefficients.
"""

from __future__ import annotations

from fractions import Fraction

from sympy.polys.domains import QQ

__all__ = ["FacRat", "poly_content", "poly_primitive"]


def poly_content(p) -> Fraction:
    """Positive rational content of a nonzero polynomial."""
    from math import gcd, lcm
    num_gcd, den_lcm = 0, 1
    for _, coef in p.terms():
        num_gcd = gcd(num_gcd, abs(int(QQ.numer(coef))))
        den_lcm = lcm(den_lcm, int(QQ.denom(coef)))
    return Fraction(num_gcd, den_lcm)


def poly_primitive(p):
    """(content-with-sign, primitive part with positive leading coefficient)."""
    c = poly_content(p)
    if p.LC < 0:
        c = -c
    return c, p.mul_ground(QQ(c.denominator, c.numerator))


class FacRat:
    """num / prod(f**e for f, e in den.items()) with primitive factor keys."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        self.num = num
        self.den = dict(den) if den else {}
        if not num:
            self.den = {}

    @property
    def ring(self):
        return self.num.ring

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    def _coerce(self, other):
        if isinstance(other, FacRat):
            return other
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return FacRat(self.ring.ground_new(QQ(q.numerator, q.denominator)))
        return NotImplemented

    def __bool__(self):
        return bool(self.num)

    def __neg__(self):
        return FacRat(-self.num, self.den)

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        keys = set(self.den) | set(o.den)
        a, b = self.num, o.num
        den = {}
        for f in keys:
            ea, eb = self.den.get(f, 0), o.den.get(f, 0)
            e = max(ea, eb)
            den[f] = e
            if e > ea:
                a = a * f ** (e - ea)
            if e > eb:
                b = b * f ** (e - eb)
        return FacRat(a + b, den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        den = dict(self.den)
        for f, e in o.den.items():
            den[f] = den.get(f, 0) + e
        return FacRat(self.num * o.num, den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if not o.num:
            raise ZeroDivisionError("division by zero FacRat")
        num = self.num
        for f, e in o.den.items():
            num = num * f ** e
        den = dict(self.den)
        c, p = poly_primitive(o.num)
        num = num.mul_ground(QQ(c.denominator, c.numerator))
        if p != p.ring.one:
            den[p] = den.get(p, 0) + 1
        return FacRat(num, den)

    def __radd__(self, other):
        return self + other

    def __rsub__(self, other):
        return -(self - other)

    def __rmul__(self, other):
        return self * other

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return o / self

    def diff(self, x) -> "FacRat":
        """d/dx keeping the denominator factored (logarithmic-derivative rule)."""
        if not self.den:
            return FacRat(self.num.diff(x))
        factors = list(self.den.items())
        prod_all = self.ring.one
        for f, _ in factors:
            prod_all = prod_all * f
        total = self.num.diff(x) * prod_all
        for i, (f, e) in enumerate(factors):
            rest = self.ring.one
            for j, (g, _) in enumerate(factors):
                if j != i:
                    rest = rest * g
            total = total - self.num * (e * f.diff(x)) * rest
        den = {f: e + 1 for f, e in factors}
        return FacRat(total, den)

    def numerator(self):
        """Numerator after exact cancellation against the denominator factors,
        as a primitive polynomial with positive leading coefficient."""
        n = self.num
        if not n:
            return self.ring.zero
        for f, e in self.den.items():
            for _ in range(e):
                q, r = n.div(f)
                if r:
                    break
                n = q
        return poly_primitive(n)[1]

    def denominator_expanded(self):
        d = self.ring.one
        for f, e in self.den.items():
            d = d * f ** e
        return d

    def subs_eval(self, point):
        """Exact evaluation given [(gen, QQ value), ...]; raises on poles."""
        dv = QQ(1)
        for f, e in self.den.items():
            v = f.evaluate(point)
            if not v:
                raise ZeroDivisionError("denominator factor vanishes")
            dv *= v ** e
        nv = self.num.evaluate(point) if self.num else QQ(0)
        return nv / dv

    def __repr__(self):
        if not self.den:
            return "FacRat(%s)" % (self.num,)
        return "FacRat((%s) / %s)" % (self.num, " * ".join(
            "(%s)^%d" % (f, e) for f, e in self.den.items()))
