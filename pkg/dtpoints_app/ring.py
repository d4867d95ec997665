"""
Exact arithmetic in the motivic coefficient ring.

Everything motivic in dtpoints lives in the field of rational functions in a
single variable ``T``, the square root of the Lefschetz motive (``L = T**2``).
Half-integer powers of ``L`` therefore become integer powers of ``T``.

Two value types are provided:

- ``TPoly``: a Laurent polynomial ``sum c_e T**e`` with arbitrary-precision
  integer coefficients. Stored as a sparse exponent -> coefficient map.
- ``TRat``: a quotient ``num / den`` in canonical form. The denominator has
  only nonnegative exponents, a nonzero constant term and a positive leading
  coefficient; numerator and denominator share no nonconstant factor and no
  integer content. Canonical forms are unique, so equality is structural.

Polynomial gcds are delegated to sympy's dense ``ZZ[T]`` ring. Both types are
immutable after construction and safe to share between worker processes.
"""

from collections.abc import Iterable, Mapping
from fractions import Fraction
from functools import reduce
from math import gcd
from types import MappingProxyType
from typing import Any, Union

from sympy.polys.domains import ZZ
from sympy.polys.rings import ring

from dtpoints_app.errors import InvalidConstructionError, PoleError

_ZZ_T, _T_GEN = ring("T", ZZ)

Number = Union[int, Fraction, float]


class TPoly:
    """Laurent polynomial in ``T`` with integer coefficients."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean: dict[int, int] = {}
        if terms:
            for exponent, coeff in terms.items():
                if not isinstance(exponent, int) or not isinstance(coeff, int):
                    raise InvalidConstructionError(
                        f"TPoly needs integer exponents and coefficients, got "
                        f"{exponent!r}: {coeff!r}"
                    )
                if coeff:
                    clean[exponent] = coeff
        self._terms = clean
        self._hash: int | None = None

    @classmethod
    def _trusted(cls, terms: dict[int, int]) -> "TPoly":
        """Wrap a dict already free of zero coefficients."""
        poly = cls.__new__(cls)
        poly._terms = terms
        poly._hash = None
        return poly

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "TPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, value: int) -> "TPoly":
        return cls({0: value})

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], start: int = 0) -> "TPoly":
        """Build ``sum coeffs[i] T**(start+i)``."""
        return cls({start + i: c for i, c in enumerate(coeffs)})

    @property
    def terms(self) -> Mapping[int, int]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {0}

    @property
    def min_exp(self) -> int:
        if not self._terms:
            raise InvalidConstructionError("the zero polynomial has no exponents")
        return min(self._terms)

    @property
    def max_exp(self) -> int:
        if not self._terms:
            raise InvalidConstructionError("the zero polynomial has no exponents")
        return max(self._terms)

    @property
    def leading_coeff(self) -> int:
        return self._terms[self.max_exp] if self._terms else 0

    @property
    def content(self) -> int:
        return reduce(gcd, self._terms.values(), 0)

    def coefficient(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def items(self) -> list[tuple[int, int]]:
        """Terms sorted by exponent."""
        return sorted(self._terms.items())

    def shift(self, k: int) -> "TPoly":
        """Multiply by ``T**k``."""
        if k == 0:
            return self
        return TPoly._trusted({e + k: c for e, c in self._terms.items()})

    def scale(self, factor: int) -> "TPoly":
        if factor == 0:
            return TPoly()
        return TPoly._trusted({e: c * factor for e, c in self._terms.items()})

    def exact_div_int(self, divisor: int) -> "TPoly":
        return TPoly._trusted({e: c // divisor for e, c in self._terms.items()})

    def substitute_power(self, k: int, sign: int = 1) -> "TPoly":
        """Substitute ``T -> sign * T**k``."""
        if sign == 1:
            return TPoly._trusted({e * k: c for e, c in self._terms.items()})
        return TPoly._trusted(
            {e * k: (c if e % 2 == 0 else -c) for e, c in self._terms.items()}
        )

    def __add__(self, other: Any) -> "TPoly":
        other = _as_tpoly(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            total = out.get(e, 0) + c
            if total:
                out[e] = total
            else:
                out.pop(e, None)
        return TPoly._trusted(out)

    __radd__ = __add__

    def __neg__(self) -> "TPoly":
        return TPoly._trusted({e: -c for e, c in self._terms.items()})

    def __sub__(self, other: Any) -> "TPoly":
        other = _as_tpoly(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "TPoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "TPoly":
        if isinstance(other, int) and not isinstance(other, bool):
            return self.scale(other)
        other = _as_tpoly(other)
        if other is None:
            return NotImplemented
        if not self._terms or not other._terms:
            return TPoly()
        out: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = e1 + e2
                out[e] = out.get(e, 0) + c1 * c2
        return TPoly._trusted({e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TPoly":
        if k < 0:
            raise InvalidConstructionError("negative powers need TRat")
        result = ONE_POLY
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = TPoly.constant(other)
        if isinstance(other, TRat):
            return other == self
        if not isinstance(other, TPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"TPoly({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            if e == 0:
                parts.append(str(c))
            else:
                mono = "T" if e == 1 else f"T^{e}"
                parts.append(mono if c == 1 else f"-{mono}" if c == -1 else f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def eval_at(self, t: Number) -> Number:
        """Evaluate at ``T = t``; exact for int/Fraction input."""
        if t == 0 and any(e < 0 for e in self._terms):
            raise PoleError(f"{self} has a pole at T = 0")
        if isinstance(t, float):
            return sum((c * t**e for e, c in self._terms.items()), 0.0)
        t = Fraction(t)
        return sum((c * t**e for e, c in self._terms.items()), Fraction(0))

    def to_json(self) -> dict[str, str]:
        return {str(e): str(c) for e, c in self.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "TPoly":
        try:
            return cls({int(e): int(c) for e, c in data.items()})
        except (TypeError, ValueError) as e:
            raise InvalidConstructionError(f"malformed TPoly JSON: {data!r}") from e

    def _to_ring(self):
        """Convert a polynomial with nonnegative exponents to a sympy ring element."""
        return _ZZ_T.from_dict({(e,): c for e, c in self._terms.items()})

    @classmethod
    def _from_ring(cls, element) -> "TPoly":
        return cls._trusted({m[0]: int(c) for m, c in element.items() if c})


ZERO_POLY = TPoly()
ONE_POLY = TPoly.constant(1)


def _as_tpoly(value: Any) -> TPoly | None:
    if isinstance(value, TPoly):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return TPoly.constant(value)
    return None


class TRat:
    """Canonical rational function ``num / den`` in ``T``.

    Build values with ``canonicalize`` (or the ``TRat(num, den)`` shorthand);
    the constructor always normalises.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Any = 0, den: Any = 1):
        canon = canonicalize(_coerce_poly(num), _coerce_poly(den))
        self.num = canon.num
        self.den = canon.den
        self._hash = None

    @classmethod
    def _make(cls, num: TPoly, den: TPoly) -> "TRat":
        """Wrap an already canonical pair."""
        value = cls.__new__(cls)
        value.num = num
        value.den = den
        value._hash = None
        return value

    @classmethod
    def from_poly(cls, poly: TPoly) -> "TRat":
        return cls._make(poly, ONE_POLY)

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "TRat":
        return cls._make(TPoly.monomial(exponent, coeff), ONE_POLY)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_laurent(self) -> bool:
        """True when the denominator is 1."""
        return self.den == ONE_POLY

    def as_laurent(self) -> TPoly:
        if not self.is_laurent():
            raise InvalidConstructionError(f"{self} is not a Laurent polynomial")
        return self.num

    def __add__(self, other: Any) -> "TRat":
        other = _as_trat(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            total = self.num + other.num
            if self.den == ONE_POLY:
                return TRat._make(total, ONE_POLY)
            return canonicalize(total, self.den)
        return canonicalize(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "TRat":
        return TRat._make(-self.num, self.den)

    def __sub__(self, other: Any) -> "TRat":
        other = _as_trat(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> "TRat":
        return (-self) + other

    def __mul__(self, other: Any) -> "TRat":
        other = _as_trat(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return ZERO
        if self.den == ONE_POLY and other.den == ONE_POLY:
            return TRat._make(self.num * other.num, ONE_POLY)
        return canonicalize(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "TRat":
        other = _as_trat(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise PoleError(f"division of {self} by zero")
        return canonicalize(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other: Any) -> "TRat":
        other = _as_trat(other)
        if other is None:
            return NotImplemented
        return other / self

    def __pow__(self, k: int) -> "TRat":
        if k < 0:
            return ONE / (self ** (-k))
        if self.den == ONE_POLY:
            return TRat._make(self.num**k, ONE_POLY)
        return TRat._make(self.num**k, self.den**k)

    def substitute_power(self, k: int, sign: int = 1) -> "TRat":
        """Substitute ``T -> sign * T**k`` in numerator and denominator."""
        num = self.num.substitute_power(k, sign)
        den = self.den.substitute_power(k, sign)
        if den == ONE_POLY:
            return TRat._make(num, ONE_POLY)
        return canonicalize(num, den)

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, TPoly):
            return self.den == ONE_POLY and self.num == other
        other = _as_trat(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"TRat({self})"

    def __str__(self) -> str:
        if self.den == ONE_POLY:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> dict[str, dict[str, str]]:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "TRat":
        try:
            return canonicalize(TPoly.from_json(data["num"]), TPoly.from_json(data["den"]))
        except KeyError as e:
            raise InvalidConstructionError(f"malformed TRat JSON: {data!r}") from e


def _coerce_poly(value: Any) -> TPoly:
    if isinstance(value, TPoly):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return TPoly.constant(value)
    raise InvalidConstructionError(f"cannot build a TPoly from {value!r}")


def _as_trat(value: Any) -> TRat | None:
    if isinstance(value, TRat):
        return value
    if isinstance(value, TPoly):
        return TRat.from_poly(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return TRat._make(TPoly.constant(value), ONE_POLY)
    return None


def canonicalize(num: TPoly, den: TPoly) -> TRat:
    """Return the canonical representative of ``num / den``."""
    if den.is_zero():
        raise InvalidConstructionError(f"zero denominator for numerator {num}")
    if num.is_zero():
        return ZERO

    # powers of T in the denominator move to the numerator
    shift = den.min_exp
    den = den.shift(-shift)
    num = num.shift(-shift)

    if not den.is_constant():
        low = num.min_exp
        _, num_red, den_red = num.shift(-low)._to_ring().cofactors(den._to_ring())
        num = TPoly._from_ring(num_red).shift(low)
        den = TPoly._from_ring(den_red)

    common = gcd(num.content, den.content)
    if common > 1:
        num = num.exact_div_int(common)
        den = den.exact_div_int(common)
    if den.leading_coeff < 0:
        num = -num
        den = -den
    return TRat._make(num, den)


def add(a: TRat, b: TRat) -> TRat:
    return a + b


def mul(a: TRat, b: TRat) -> TRat:
    return a * b


def div(a: TRat, b: TRat) -> TRat:
    return a / b


def gl_class(n: int) -> TPoly:
    """Class of ``GL_n`` as a polynomial in ``T``: ``prod_{i<n} (T**2n - T**2i)``."""
    if n < 0:
        raise InvalidConstructionError(f"gl_class needs n >= 0, got {n}")
    result = ONE_POLY
    for i in range(n):
        result = result * TPoly({2 * n: 1, 2 * i: -1})
    return result


def gl_class_virtual(n: int) -> TPoly:
    """Virtual class ``L**(-n**2/2) [GL_n]``."""
    return gl_class(n).shift(-n * n)


def eval_at(x: TRat | TPoly, t: Number) -> Number:
    """Evaluate at ``T = t``: a Fraction for exact input, a float otherwise."""
    if isinstance(x, TPoly):
        x = TRat.from_poly(x)
    den_value = x.den.eval_at(t)
    if den_value == 0:
        raise PoleError(f"denominator {x.den} vanishes at T = {t}")
    return x.num.eval_at(t) / den_value


def eval_at_lefschetz(x: TRat | TPoly, l_value: int | Fraction) -> Fraction:
    """Evaluate a function of ``L = T**2`` exactly at ``L = l_value``.

    Needed for finite-field point counts, where ``T = sqrt(q)`` is irrational
    but every exponent is even.
    """
    if isinstance(x, TPoly):
        x = TRat.from_poly(x)
    for part in (x.num, x.den):
        if any(e % 2 for e in part.terms):
            raise InvalidConstructionError(f"{x} is not a function of L = T^2")

    def halve(poly: TPoly) -> TPoly:
        return TPoly._trusted({e // 2: c for e, c in poly.terms.items()})

    return eval_at(canonicalize(halve(x.num), halve(x.den)), Fraction(l_value))


ZERO = TRat._make(ZERO_POLY, ONE_POLY)
ONE = TRat._make(ONE_POLY, ONE_POLY)
T = TRat.monomial(1)
L = TRat.monomial(2)
