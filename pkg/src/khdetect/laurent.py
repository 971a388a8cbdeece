"""
Integer Laurent polynomials in one variable with half-integer exponents.

Exponents are stored doubled, so ``t^(1/2)`` is the key ``1`` and ``t``
is the key ``2``.  Instances are immutable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

__all__ = ["LaurentPoly", "NotDivisible", "T_HALF", "ONE", "ZERO"]


class NotDivisible(ArithmeticError):
    """Raised by :meth:`LaurentPoly.divide_exact` when the quotient is not exact."""


class LaurentPoly:
    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        for e, c in (terms or {}).items():
            c = int(c)
            if c:
                clean[int(e)] = c
        self._terms = dict(sorted(clean.items()))
        self._hash = None

    # -- construction ---------------------------------------------------------

    @classmethod
    def monomial(cls, exponent, coeff: int = 1) -> "LaurentPoly":
        """``coeff * t^exponent``; ``exponent`` may be an int, a Fraction or a half-integer float."""
        e2 = Fraction(exponent) * 2
        if e2.denominator != 1:
            raise ValueError(f"exponent {exponent} is not a half-integer")
        return cls({int(e2): coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_exponents(cls, terms: Mapping) -> "LaurentPoly":
        """Build from ``{exponent: coeff}`` with ordinary (not doubled) exponents."""
        out = cls()
        for e, c in terms.items():
            out = out + cls.monomial(e, c)
        return out

    # -- inspection -----------------------------------------------------------

    @property
    def terms(self) -> dict[int, int]:
        """Copy of the ``{doubled exponent: coeff}`` mapping."""
        return dict(self._terms)

    def coeff(self, doubled_exponent: int) -> int:
        return self._terms.get(doubled_exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def min_exp2(self) -> int:
        return min(self._terms)

    @property
    def max_exp2(self) -> int:
        return max(self._terms)

    def items(self):
        return self._terms.items()

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, int):
            return LaurentPoly.constant(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("only unit monomials have Laurent inverses")
            return LaurentPoly({e * n: c ** -n})
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, doubled: int) -> "LaurentPoly":
        """Multiply by ``t^(doubled/2)``."""
        return LaurentPoly({e + doubled: c for e, c in self._terms.items()})

    def divmod_exact(self, other: "LaurentPoly"):
        """Long division from the top; returns (quotient, remainder)."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        top_e, top_c = other.max_exp2, other._terms[other.max_exp2]
        span = other.max_exp2 - other.min_exp2
        rem = dict(self._terms)
        quot: dict[int, int] = {}
        if not rem:
            return LaurentPoly(), LaurentPoly()
        low = min(rem)
        # sweep the leading exponent downwards; each step clears it or stops
        for e in range(max(rem), low + span - 1, -1):
            c = rem.get(e)
            if not c:
                continue
            if c % top_c:
                break
            k = c // top_c
            de = e - top_e
            quot[de] = k
            for oe, oc in other._terms.items():
                v = rem.get(oe + de, 0) - k * oc
                if v:
                    rem[oe + de] = v
                else:
                    rem.pop(oe + de, None)
        return LaurentPoly(quot), LaurentPoly(rem)

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact quotient ``self / other``; raises :class:`NotDivisible` otherwise."""
        q, r = self.divmod_exact(other)
        if not r.is_zero():
            raise NotDivisible(f"{other} does not divide {self}")
        return q

    def divides(self, other: "LaurentPoly") -> bool:
        """True iff ``self`` divides ``other`` in the Laurent ring."""
        try:
            other.divide_exact(self)
        except NotDivisible:
            return False
        return True

    # -- evaluation -----------------------------------------------------------

    def evaluate_at_1(self) -> int:
        return sum(self._terms.values())

    def derivative_at_1(self) -> Fraction:
        return Fraction(sum(c * e for e, c in self._terms.items()), 2)

    def second_derivative_at_1(self) -> Fraction:
        """``p''(1)`` = sum of ``c * e * (e - 1)`` over true exponents ``e``."""
        return Fraction(sum(c * e * (e - 2) for e, c in self._terms.items()), 4)

    def evaluate_sqrt(self, s):
        """Value at ``t = s**2``, for any ``s`` supporting ``**`` with negative powers."""
        return sum(c * s ** e for e, c in self._terms.items())

    def at_minus_one(self) -> tuple[int, int]:
        """Exact value at ``t = -1`` with ``t^(1/2) = i``, as (real, imag)."""
        re = im = 0
        for e, c in self._terms.items():
            r = e % 4
            if r == 0:
                re += c
            elif r == 1:
                im += c
            elif r == 2:
                re -= c
            else:
                im -= c
        return re, im

    def substitute_inverse(self) -> "LaurentPoly":
        """``p(t^-1)``."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    def is_symmetric(self) -> bool:
        return self == self.substitute_inverse()

    # -- normalization --------------------------------------------------------

    def symmetrized(self) -> "LaurentPoly":
        """Unit multiple ``+-t^k p`` that is invariant under ``t -> t^-1``.

        The sign is chosen so the value at ``t = 1`` is positive, or the
        leading coefficient when that value is zero.  Raises ValueError if
        no unit multiple is symmetric.
        """
        if self.is_zero():
            return self
        p = self.shift(-(self.max_exp2 + self.min_exp2) // 2) \
            if (self.max_exp2 + self.min_exp2) % 2 == 0 else None
        if p is None or not (p.is_symmetric() or (-p).substitute_inverse() == p):
            raise ValueError(f"{self} has no symmetric unit multiple")
        v = p.evaluate_at_1()
        if v < 0 or (v == 0 and p._terms[p.max_exp2] < 0):
            p = -p
        return p

    # -- formatting -----------------------------------------------------------

    def to_json(self) -> list[list[int]]:
        return [[e, c] for e, c in self._terms.items()]

    @classmethod
    def from_json(cls, pairs) -> "LaurentPoly":
        return cls({int(e): int(c) for e, c in pairs})

    def format(self, var: str = "t") -> str:
        if not self._terms:
            return "0"
        pieces = []
        for e, c in sorted(self._terms.items(), reverse=True):
            if e == 0:
                mono = ""
            elif e == 2:
                mono = var
            elif e % 2 == 0:
                mono = f"{var}^{e // 2}"
            else:
                mono = f"{var}^({e}/2)"
            mag = abs(c)
            body = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"LaurentPoly({self._terms})"


ONE = LaurentPoly({0: 1})
ZERO = LaurentPoly()
T_HALF = LaurentPoly({1: 1})
