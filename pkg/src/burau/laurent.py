"""Exact scalar rings: Laurent polynomials over Z and truncated series in s = t - 1.

Two rings live here.

* :class:`LaurentPoly` is an element of Z[t, t^-1] with arbitrary-precision
  integer coefficients, stored as a canonical exponent -> coefficient map.
  This is the coefficient ring of every exact matrix in the package.

* :class:`TruncSeries` is an element of Z[s]/(s^N).  Substituting t = 1 + s
  turns a Laurent polynomial into a power series in s; keeping only the
  first N coefficients is enough to measure congruence depth and is far
  cheaper than exact arithmetic on long products.

All arithmetic is exact; nothing in this module (or the package) touches
floating point.
"""

from __future__ import annotations

import math
from typing import Iterable, Mapping, Union

Scalar = Union[int, "LaurentPoly"]


class LaurentPoly:
    """A Laurent polynomial in one variable t over Z.

    >>> p = LaurentPoly({1: 1, 0: -1})          # t - 1
    >>> print(p * p)
    t^2 - 2t + 1
    >>> print(p.bar())                          # t -> t^-1
    -1 + t^-1
    >>> (p * p).s_valuation()
    2
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, int] | int = 0):
        if isinstance(coeffs, int):
            self._c = {0: coeffs} if coeffs else {}
        else:
            self._c = {e: c for e, c in coeffs.items() if c}

    # -- constructors ------------------------------------------------------

    @staticmethod
    def monomial(coeff: int, exp: int) -> "LaurentPoly":
        return LaurentPoly({exp: coeff})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: 1}

    def coeff(self, exp: int) -> int:
        return self._c.get(exp, 0)

    def exponents(self) -> list[int]:
        return sorted(self._c)

    def min_exp(self) -> int:
        """Lowest exponent with nonzero coefficient.  Undefined for 0."""
        return min(self._c)

    def max_exp(self) -> int:
        return max(self._c)

    def at_one(self) -> int:
        """Evaluate at t = 1, i.e. reduce modulo s."""
        return sum(self._c.values())

    def as_unit(self) -> tuple[int, int] | None:
        """Return (sign, exp) if this is a unit +-t^a of Z[t,t^-1], else None."""
        if len(self._c) != 1:
            return None
        (exp, coeff), = self._c.items()
        if coeff in (1, -1):
            return coeff, exp
        return None

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other: Scalar) -> "LaurentPoly | None":
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, int):
            return LaurentPoly(other)
        return None

    def __add__(self, other: Scalar) -> "LaurentPoly":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        c = dict(self._c)
        for e, v in q._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            elif e in c:
                del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {e: -v for e, v in self._c.items()}
        return out

    def __sub__(self, other: Scalar) -> "LaurentPoly":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other: Scalar) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other: Scalar) -> "LaurentPoly":
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        a, b = self._c, q._c
        if len(a) > len(b):
            a, b = b, a
        c: dict[int, int] = {}
        for e1, v1 in a.items():
            for e2, v2 in b.items():
                e = e1 + e2
                w = c.get(e, 0) + v1 * v2
                if w:
                    c[e] = w
                elif e in c:
                    del c[e]
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = c
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "LaurentPoly":
        if k < 0:
            unit = self.as_unit()
            if unit is None:
                raise ValueError("negative powers only defined for units +-t^a")
            sign, exp = unit
            return LaurentPoly({exp * k: sign if k % 2 else 1})
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "LaurentPoly":
        """Inverse of a unit +-t^a.  Raises ValueError otherwise."""
        unit = self.as_unit()
        if unit is None:
            raise ValueError("not a unit of Z[t,t^-1]")
        sign, exp = unit
        return LaurentPoly({-exp: sign})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LaurentPoly):
            return self._c == other._c
        if isinstance(other, int):
            return self._c == ({0: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._c.items()))

    # -- the bar involution and s-adic structure ----------------------------

    def bar(self) -> "LaurentPoly":
        """The ring involution t -> t^-1."""
        out = LaurentPoly.__new__(LaurentPoly)
        out._c = {-e: v for e, v in self._c.items()}
        return out

    def div_t_minus_one(self) -> "LaurentPoly | None":
        """Exact quotient by (t - 1), or None if not divisible.

        Divisibility in Z[t,t^-1] is insensitive to the unit t^m, so the
        polynomial is shifted to ordinary form and divided synthetically.
        """
        if not self._c:
            return ZERO
        if self.at_one() != 0:
            return None
        m = self.min_exp()
        top = self.max_exp() - m
        dense = [0] * (top + 1)
        for e, v in self._c.items():
            dense[e - m] = v
        # synthetic division of sum dense[i] x^i by (x - 1), highest term first
        quot = [0] * top
        carry = 0
        for i in range(top, 0, -1):
            carry += dense[i]
            quot[i - 1] = carry
        return LaurentPoly({i + m: v for i, v in enumerate(quot) if v})

    def s_valuation(self) -> int | float:
        """Largest k with (t-1)^k dividing self; math.inf for the zero polynomial."""
        if not self._c:
            return math.inf
        val = 0
        p = self
        while True:
            q = p.div_t_minus_one()
            if q is None:
                return val
            val += 1
            p = q

    def to_series(self, precision: int) -> "TruncSeries":
        """Image in Z[s]/(s^precision) under t = 1 + s.

        Negative powers use the alternating geometric expansion of t^-1;
        both signs are covered by the generalized binomial coefficients
        C(e, k), which are integers for every integer e.

        >>> print(LaurentPoly({-1: 1}).to_series(4))
        1 - s + s^2 - s^3 + O(s^4)
        """
        if precision < 1:
            raise ValueError("precision must be >= 1")
        out = [0] * precision
        for e, v in self._c.items():
            binom = 1  # C(e, k), updated iteratively
            for k in range(precision):
                out[k] += v * binom
                binom = binom * (e - k) // (k + 1)
        return TruncSeries(precision, out)

    # -- presentation -------------------------------------------------------

    def __str__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c, reverse=True):
            v = self._c[e]
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if e == 0:
                body = str(mag)
            else:
                var = "t" if e == 1 else f"t^{e}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append((sign, body))
        first_sign, first_body = parts[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"LaurentPoly({self._c!r})"

    # -- JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        """Encode as {"t": {"<exp>": "<decimal coefficient>"}}."""
        return {"t": {str(e): str(v) for e, v in sorted(self._c.items())}}

    @staticmethod
    def from_json(obj: dict) -> "LaurentPoly":
        table = obj["t"]
        return LaurentPoly({int(e): int(v) for e, v in table.items()})


ZERO = LaurentPoly(0)
ONE = LaurentPoly(1)
T = LaurentPoly({1: 1})
T_INV = LaurentPoly({-1: 1})
S = LaurentPoly({1: 1, 0: -1})  # s = t - 1


class TruncSeries:
    """An element of Z[s]/(s^N), stored as the coefficient list of s^0..s^{N-1}.

    Arithmetic between series of different precision is refused rather than
    silently coerced; every matrix in a truncated computation shares one N.

    >>> a = TruncSeries(3, [1, 1])        # 1 + s
    >>> print(a * a)
    1 + 2s + s^2 + O(s^3)
    """

    __slots__ = ("precision", "_c")

    def __init__(self, precision: int, coeffs: Iterable[int] = ()):
        if precision < 1:
            raise ValueError("precision must be >= 1")
        c = list(coeffs)
        if len(c) > precision:
            c = c[:precision]
        else:
            c += [0] * (precision - len(c))
        self.precision = precision
        self._c = c

    @staticmethod
    def zero(precision: int) -> "TruncSeries":
        return TruncSeries(precision)

    @staticmethod
    def one(precision: int) -> "TruncSeries":
        return TruncSeries(precision, [1])

    def coeff(self, k: int) -> int:
        return self._c[k]

    def coeffs(self) -> list[int]:
        return list(self._c)

    def is_zero(self) -> bool:
        return not any(self._c)

    def _check(self, other: "TruncSeries") -> None:
        if self.precision != other.precision:
            raise ValueError("precision mismatch")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.precision,
                           [a + b for a, b in zip(self._c, other._c)])

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        return TruncSeries(self.precision,
                           [a - b for a, b in zip(self._c, other._c)])

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.precision, [-a for a in self._c])

    def __mul__(self, other: "TruncSeries | int") -> "TruncSeries":
        if isinstance(other, int):
            return TruncSeries(self.precision, [a * other for a in self._c])
        self._check(other)
        n = self.precision
        a, b = self._c, other._c
        out = [0] * n
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncSeries(n, out)

    def __rmul__(self, other: int) -> "TruncSeries":
        return self.__mul__(other)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, TruncSeries):
            return self.precision == other.precision and self._c == other._c
        if isinstance(other, int):
            return self._c[0] == other and not any(self._c[1:])
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.precision, tuple(self._c)))

    def valuation_bound(self) -> int:
        """Smallest k with nonzero s^k coefficient, or N when zero to precision."""
        for k, v in enumerate(self._c):
            if v:
                return k
        return self.precision

    def __str__(self) -> str:
        parts = []
        for k, v in enumerate(self._c):
            if not v:
                continue
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if k == 0:
                body = str(mag)
            else:
                var = "s" if k == 1 else f"s^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            parts.append((sign, body))
        if not parts:
            text = "0"
        else:
            first_sign, first_body = parts[0]
            text = ("-" if first_sign == "-" else "") + first_body
            for sign, body in parts[1:]:
                text += f" {sign} {body}"
        return f"{text} + O(s^{self.precision})"

    def __repr__(self) -> str:
        return f"TruncSeries({self.precision}, {self._c!r})"
