"""Truncated multivariate Taylor (jet) arithmetic on numpy coefficient arrays.

A ``JetSpace`` is a quotient of the power-series algebra in several groups of
variables, truncating each *group* at its own total degree.  The curvature
computations need third derivatives in a fiber direction, second derivatives
in an auxiliary fiber direction, and first derivatives in the base direction,
so one space with per-group caps (3, 2, 1) carries every mixed partial the
tensors require while keeping the monomial basis small.

Multiplication uses a precomputed index table (built once per space shape and
cached), so a product is one gather-multiply-scatter over a few thousand
entries.  Inversion, square roots, logs and real powers use the nilpotent-part
series, which terminates after ``sum(caps)`` terms exactly.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

__all__ = ["JetSpace", "Jet", "jsqrt", "jlog"]

_SPACE_CACHE: dict = {}


def _group_monomials(nvars: int, cap: int):
    """All exponent tuples with total degree <= cap, constant term first."""
    monos = [m for m in itertools.product(range(cap + 1), repeat=nvars)
             if sum(m) <= cap]
    monos.sort(key=lambda m: (sum(m), m))
    return monos, {m: i for i, m in enumerate(monos)}


def _group_table(monos, index, cap):
    ia, ib, ic = [], [], []
    for i, a in enumerate(monos):
        for j, b in enumerate(monos):
            c = tuple(x + y for x, y in zip(a, b))
            if sum(c) <= cap:
                ia.append(i)
                ib.append(j)
                ic.append(index[c])
    return (np.array(ia, dtype=np.int64), np.array(ib, dtype=np.int64),
            np.array(ic, dtype=np.int64))


class JetSpace:
    """Truncated polynomial algebra with named variable groups.

    ``groups`` is a sequence of (name, nvars, cap) triples.
    """

    def __new__(cls, groups):
        key = tuple((str(n), int(v), int(c)) for n, v, c in groups)
        if key in _SPACE_CACHE:
            return _SPACE_CACHE[key]
        self = super().__new__(cls)
        self._init(key)
        _SPACE_CACHE[key] = self
        return self

    def _init(self, groups):
        self.groups = groups
        self.group_names = [g[0] for g in groups]
        self.caps = [g[2] for g in groups]
        self.nilpotency = sum(self.caps)
        per_monos, per_index, per_sizes, tables = [], [], [], []
        for _, nv, cap in groups:
            monos, index = _group_monomials(nv, cap)
            per_monos.append(monos)
            per_index.append(index)
            per_sizes.append(len(monos))
            tables.append(_group_table(monos, index, cap))
        self._per_monos = per_monos
        self._per_index = per_index
        self._per_sizes = per_sizes
        self.size = int(np.prod(per_sizes))
        ia = np.zeros(1, dtype=np.int64)
        ib = np.zeros(1, dtype=np.int64)
        ic = np.zeros(1, dtype=np.int64)
        for (ta, tb, tc), M in zip(tables, per_sizes):
            ia = (ia[:, None] * M + ta[None, :]).ravel()
            ib = (ib[:, None] * M + tb[None, :]).ravel()
            ic = (ic[:, None] * M + tc[None, :]).ravel()
        self._ia, self._ib, self._ic = ia, ib, ic
        # flat index of the first-degree basis monomial of each variable
        self._var_index = {}
        for gi, (name, nv, cap) in enumerate(groups):
            for vi in range(nv):
                mono = tuple(1 if k == vi else 0 for k in range(nv))
                flat = 0
                for gj, M in enumerate(self._per_sizes):
                    local = self._per_index[gj][mono] if gj == gi else 0
                    flat = flat * M + local
                self._var_index[(name, vi)] = flat

    def basis_index(self, group: str, i: int) -> int:
        """Flat coefficient index of the degree-one monomial of a variable."""
        return self._var_index[(group, i)]

    # -- constructors --------------------------------------------------

    def const(self, value: float) -> "Jet":
        c = np.zeros(self.size)
        c[0] = float(value)
        return Jet(self, c)

    def var(self, group: str, i: int, value: float) -> "Jet":
        """value + (the i-th variable of the group), as a jet."""
        c = np.zeros(self.size)
        c[0] = float(value)
        c[self._var_index[(group, i)]] = 1.0
        return Jet(self, c)

    def flat_index(self, exponents: dict) -> int:
        """Flat coefficient index of a monomial given per-group exponent
        tuples, e.g. {"y": (2, 1, 0), "w": (0, 0, 1)}."""
        flat = 0
        for gi, (name, nv, cap) in enumerate(self.groups):
            mono = tuple(exponents.get(name, (0,) * nv))
            if len(mono) != nv or sum(mono) > cap:
                raise ValueError("bad exponents for group %r: %s" % (name, mono))
            flat = flat * self._per_sizes[gi] + self._per_index[gi][mono]
        return flat

    def derivative(self, jet: "Jet", exponents: dict) -> float:
        """Mixed partial derivative at the base point: coefficient times the
        factorial of every exponent."""
        coef = jet.c[self.flat_index(exponents)]
        fac = 1
        for mono in exponents.values():
            for e in mono:
                fac *= math.factorial(e)
        return float(coef) * fac


class Jet:
    __slots__ = ("space", "c")

    def __init__(self, space: JetSpace, c: np.ndarray):
        self.space = space
        self.c = c

    @property
    def value(self) -> float:
        return float(self.c[0])

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        if isinstance(other, (int, float, Fraction, np.floating, np.integer)):
            return self.space.const(float(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.space, self.c + o.c)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.space, -self.c)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.space, self.c - o.c)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Jet(self.space, o.c - self.c)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            if isinstance(other, (int, float, Fraction, np.floating, np.integer)):
                return Jet(self.space, self.c * float(other))
            return NotImplemented
        sp = self.space
        prod = self.c[sp._ia] * other.c[sp._ib]
        return Jet(sp, np.bincount(sp._ic, weights=prod, minlength=sp.size))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        if isinstance(other, (int, float, Fraction, np.floating, np.integer)):
            return Jet(self.space, self.c / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.reciprocal()

    def __pow__(self, p):
        if isinstance(p, int):
            if p < 0:
                return self.reciprocal() ** (-p)
            out = self.space.const(1.0)
            base = self
            k = p
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out
        return self._series_pow(float(p))

    # -- series operations --------------------------------------------

    def _split(self):
        a0 = float(self.c[0])
        nil = self.c.copy()
        nil[0] = 0.0
        return a0, Jet(self.space, nil)

    def reciprocal(self) -> "Jet":
        a0, x = self._split()
        if a0 == 0.0:
            raise ZeroDivisionError("jet with zero constant term is not invertible")
        y = x * (-1.0 / a0)
        out = self.space.const(1.0)
        term = self.space.const(1.0)
        for _ in range(self.space.nilpotency):
            term = term * y
            if not term.c.any():
                break
            out = out + term
        return out * (1.0 / a0)

    def _series_pow(self, p: float) -> "Jet":
        a0, x = self._split()
        if a0 <= 0.0:
            raise ValueError("real power needs a positive constant term")
        rel = x * (1.0 / a0)
        out = self.space.const(1.0)
        term = self.space.const(1.0)
        coef = 1.0
        for k in range(1, self.space.nilpotency + 1):
            coef *= (p - k + 1) / k
            term = term * rel
            if not term.c.any():
                break
            out = out + term * coef
        return out * (a0 ** p)

    def sqrt(self) -> "Jet":
        return self._series_pow(0.5)

    def log(self) -> "Jet":
        a0, x = self._split()
        if a0 <= 0.0:
            raise ValueError("log needs a positive constant term")
        rel = x * (1.0 / a0)
        out = self.space.const(math.log(a0))
        term = self.space.const(1.0)
        for k in range(1, self.space.nilpotency + 1):
            term = term * rel
            if not term.c.any():
                break
            out = out + term * ((-1.0) ** (k + 1) / k)
        return out

    def deriv(self, **exponents) -> float:
        """Mixed partial at the base point, e.g. jet.deriv(y=(1,0,2))."""
        return self.space.derivative(self, exponents)

    def __repr__(self):
        return "Jet(value=%r, %d coeffs)" % (self.value, self.space.size)


def jsqrt(x):
    return x.sqrt() if isinstance(x, Jet) else math.sqrt(x)


def jlog(x):
    return x.log() if isinstance(x, Jet) else math.log(x)
