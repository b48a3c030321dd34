"""Exact Laurent polynomials in one formal variable t over the rationals.

Every closed-form state value handled by the workbench is a Laurent
polynomial in t with rational coefficients, so this is the only scalar
type the package needs.  Degree-0 polynomials double as plain rationals.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .errors import ParseError

RationalLike = Union[int, Fraction]


class Scalar:
    """Laurent polynomial in t, coefficients stored in lowest terms.

    Zero coefficients are never stored, so two Scalars are equal exactly
    when their coefficient maps coincide.  Instances are immutable.
    """

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Mapping[int, RationalLike] | None = None):
        clean: dict[int, Fraction] = {}
        if coeffs:
            for exp, c in coeffs.items():
                c = Fraction(c)
                if c:
                    clean[int(exp)] = c
        object.__setattr__(self, "_coeffs", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Scalar is immutable")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls({0: 1})

    @classmethod
    def rational(cls, value: RationalLike) -> "Scalar":
        return cls({0: Fraction(value)})

    @classmethod
    def t_power(cls, exp: int, coeff: RationalLike = 1) -> "Scalar":
        return cls({exp: Fraction(coeff)})

    @classmethod
    def coerce(cls, value: "Scalar | RationalLike") -> "Scalar":
        if isinstance(value, Scalar):
            return value
        return cls.rational(value)

    # -- inspection -------------------------------------------------------

    def items(self) -> Iterator[tuple[int, Fraction]]:
        return iter(sorted(self._coeffs.items()))

    def coefficient(self, exp: int) -> Fraction:
        return self._coeffs.get(exp, Fraction(0))

    def is_zero(self) -> bool:
        return not self._coeffs

    def is_rational(self) -> bool:
        return set(self._coeffs) <= {0}

    def as_fraction(self) -> Fraction:
        """The value as a plain rational; raises if t actually occurs."""
        if not self.is_rational():
            raise ValueError(f"not a rational: {self}")
        return self._coeffs.get(0, Fraction(0))

    def substitute(self, value: RationalLike) -> Fraction:
        """Exact evaluation at t = value (value != 0 if negative powers occur)."""
        value = Fraction(value)
        total = Fraction(0)
        for exp, c in self._coeffs.items():
            total += c * value**exp
        return total

    def subs_scalar(self, value: RationalLike) -> "Scalar":
        return Scalar.rational(self.substitute(value))

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        coeffs = dict(self._coeffs)
        for exp, c in other._coeffs.items():
            coeffs[exp] = coeffs.get(exp, Fraction(0)) + c
        return Scalar(coeffs)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        return Scalar({exp: -c for exp, c in self._coeffs.items()})

    def __sub__(self, other) -> "Scalar":
        return self + (-Scalar.coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return Scalar.coerce(other) - self

    def __mul__(self, other) -> "Scalar":
        other = Scalar.coerce(other)
        coeffs: dict[int, Fraction] = {}
        for e1, c1 in self._coeffs.items():
            for e2, c2 in other._coeffs.items():
                exp = e1 + e2
                coeffs[exp] = coeffs.get(exp, Fraction(0)) + c1 * c2
        return Scalar(coeffs)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            raise ValueError("negative powers of general Scalars are not defined")
        out = Scalar.one()
        for _ in range(k):
            out = out * self
        return out

    def shift(self, k: int) -> "Scalar":
        """Multiply by t^k."""
        return Scalar({exp + k: c for exp, c in self._coeffs.items()})

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self._coeffs == other._coeffs

    def __hash__(self) -> int:
        return hash(frozenset(self._coeffs.items()))

    def __bool__(self) -> bool:
        return bool(self._coeffs)

    # -- formatting ---------------------------------------------------------

    def __str__(self) -> str:
        if not self._coeffs:
            return "0"
        parts: list[str] = []
        for exp, c in sorted(self._coeffs.items()):
            if exp == 0:
                body = str(c)
                sign = ""
                if body.startswith("-"):
                    sign, body = "-", body[1:]
            else:
                tpart = "t" if exp == 1 else f"t^{exp}"
                sign = "-" if c < 0 else ""
                mag = abs(c)
                body = tpart if mag == 1 else f"{mag}{tpart}"
            if not parts:
                parts.append(sign + body)
            else:
                parts.append(("-" if sign == "-" else "+") + body)
        return "".join(parts)

    def __repr__(self) -> str:
        return f"Scalar({self})"

    # -- parsing ------------------------------------------------------------

    # a '*' after the rational is consumed only when a t-power follows, so the
    # star separating a coefficient from a set or table is left alone
    _TERM_RE = re.compile(
        r"\s*(?P<sign>[+-])?\s*"
        r"(?:(?P<rat>\d+(?:/\d+)?)\s*(?:\*(?=\s*t))?\s*)?"
        r"(?P<t>t(?:\^(?P<exp>-?\d+))?)?"
    )

    @classmethod
    def parse(cls, text: str, offset: int = 0) -> "Scalar":
        """Parse strings like "3/2", "t^2", "1-2t", "t^-1 + 2t".

        offset only adjusts reported error positions.
        """
        value, pos = cls.parse_prefix(text, 0, offset)
        if text[pos:].strip():
            raise ParseError("trailing input after scalar", offset + pos)
        return value

    @classmethod
    def parse_prefix(cls, text: str, pos: int, offset: int = 0) -> tuple["Scalar", int]:
        """Parse the longest scalar sum starting at pos; returns (value, new pos)."""
        total = cls.zero()
        first = True
        while True:
            m = cls._TERM_RE.match(text, pos)
            if m is None or (m.group("rat") is None and m.group("t") is None):
                if first:
                    raise ParseError("expected a Laurent term", offset + pos, "rational or t")
                break
            if not first and m.group("sign") is None:
                break  # next summand must be explicitly signed
            coeff = Fraction(m.group("rat")) if m.group("rat") else Fraction(1)
            if m.group("sign") == "-":
                coeff = -coeff
            if m.group("t"):
                exp = int(m.group("exp")) if m.group("exp") else 1
            else:
                exp = 0
            total = total + Scalar.t_power(exp, coeff)
            pos = m.end()
            first = False
        return total, pos


ZERO = Scalar.zero()
ONE = Scalar.one()
T = Scalar.t_power(1)
