"""
Truncated power series in ``q`` over the coefficient ring.

A ``QSeries`` holds the coefficients of ``q**0 .. q**N`` as ``TRat`` values.
Binary operations truncate at the smaller of the two orders.

Besides the generic series arithmetic this module builds every generating
function the rest of the package compares:

- ``expand_dt``: the closed product for the rank-r DT partition function
- ``expand_dt_factored``: the same series as r shifted rank-1 copies
- ``feit_fine`` / ``wall_cross_dt``: the commuting-variety series and the
  quotient that wall-crossing produces from it
- ``plethystic_exp`` / ``plethystic_dt``: the plethystic route
- ``macmahon`` / ``macmahon_pow`` / ``specialize_euler``: the Euler number
  specialisation

Series whose n-th coefficient is ``e_n / D_n`` with
``D_n = prod_{i=1..n} (T**(2i) - 1)`` are handled in "Eulerian form": the
numerators ``e_n`` are Laurent polynomials and products or quotients are
q-binomial convolutions, so no rational-function gcd is needed until the very
end.
"""

from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

from sympy import divisor_sigma, divisors

from dtpoints_app.errors import (
    BudgetExceededError,
    InvalidConstructionError,
    PoleError,
    VerificationError,
)
from dtpoints_app.logger import get_logger
from dtpoints_app.ring import (
    ONE,
    ONE_POLY,
    ZERO,
    ZERO_POLY,
    TPoly,
    TRat,
    canonicalize,
    eval_at,
)
from dtpoints_app.utils import require_nonnegative, require_positive

logger = get_logger(__name__)


def _to_trat(value: Any) -> TRat:
    if isinstance(value, TRat):
        return value
    if isinstance(value, TPoly):
        return TRat.from_poly(value)
    if isinstance(value, int) and not isinstance(value, bool):
        return TRat.from_poly(TPoly.constant(value))
    raise InvalidConstructionError(f"cannot use {value!r} as a series coefficient")


@dataclass(frozen=True)
class QSeries:
    """Power series ``sum_{n<=trunc} coeffs[n] q**n``."""

    trunc: int
    coeffs: tuple[TRat, ...]

    def __post_init__(self) -> None:
        require_nonnegative("trunc", self.trunc)
        coeffs = tuple(_to_trat(c) for c in self.coeffs)
        if len(coeffs) != self.trunc + 1:
            raise InvalidConstructionError(
                f"a series truncated at {self.trunc} needs {self.trunc + 1} "
                f"coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[Any], trunc: int | None = None) -> "QSeries":
        """Build a series, padding with zeros (or cutting) to ``trunc``."""
        values = list(coeffs)
        if trunc is None:
            trunc = len(values) - 1
        values = values[: trunc + 1] + [ZERO] * (trunc + 1 - len(values))
        return cls(trunc, tuple(values))

    @classmethod
    def one(cls, trunc: int) -> "QSeries":
        return cls.from_coeffs([ONE], trunc)

    @classmethod
    def monomial(cls, degree: int, coeff: Any, trunc: int) -> "QSeries":
        values = [ZERO] * (trunc + 1)
        if degree <= trunc:
            values[degree] = _to_trat(coeff)
        return cls(trunc, tuple(values))

    def __getitem__(self, n: int) -> TRat:
        return self.coeffs[n]

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, trunc: int) -> "QSeries":
        if trunc >= self.trunc:
            return self
        return QSeries(trunc, self.coeffs[: trunc + 1])

    def _align(self, other: "QSeries") -> tuple["QSeries", "QSeries", int]:
        trunc = min(self.trunc, other.trunc)
        return self.truncate(trunc), other.truncate(trunc), trunc

    def __add__(self, other: Any) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.monomial(0, other, self.trunc)
        a, b, trunc = self._align(other)
        return QSeries(trunc, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries(self.trunc, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.monomial(0, other, self.trunc)
        return self + (-other)

    def __rsub__(self, other: Any) -> "QSeries":
        return (-self) + other

    def __mul__(self, other: Any) -> "QSeries":
        if not isinstance(other, QSeries):
            factor = _to_trat(other)
            return QSeries(self.trunc, tuple(c * factor for c in self.coeffs))
        a, b, trunc = self._align(other)
        out = [ZERO] * (trunc + 1)
        for i, ai in enumerate(a.coeffs):
            if ai.is_zero():
                continue
            for j in range(trunc + 1 - i):
                bj = b.coeffs[j]
                if not bj.is_zero():
                    out[i + j] = out[i + j] + ai * bj
        return QSeries(trunc, tuple(out))

    __rmul__ = __mul__

    def inv(self) -> "QSeries":
        """Formal inverse; the constant term must be a nonzero TRat."""
        c0 = self.coeffs[0]
        if c0.is_zero():
            raise PoleError("series with zero constant term is not invertible")
        inv_c0 = ONE / c0
        out = [inv_c0]
        for n in range(1, self.trunc + 1):
            acc = ZERO
            for j in range(1, n + 1):
                cj = self.coeffs[j]
                if not cj.is_zero():
                    acc = acc + cj * out[n - j]
            out.append(-(acc * inv_c0))
        return QSeries(self.trunc, tuple(out))

    def __truediv__(self, other: Any) -> "QSeries":
        if not isinstance(other, QSeries):
            return self * (ONE / _to_trat(other))
        a, b, _ = self._align(other)
        return a * b.inv()

    def is_laurent(self) -> bool:
        return all(c.is_laurent() for c in self.coeffs)

    def laurent_coeffs(self) -> list[TPoly]:
        return [c.as_laurent() for c in self.coeffs]

    def to_json(self, r: int | None = None) -> dict[str, Any]:
        return {
            "r": r,
            "trunc": self.trunc,
            "coeffs": [c.to_json() for c in self.coeffs],
        }

    def csv_rows(self) -> list[tuple[int, int, int]]:
        """(n, T-exponent, coefficient) triples of a Laurent series."""
        rows = []
        for n, coeff in enumerate(self.coeffs):
            for exponent, value in coeff.as_laurent().items():
                rows.append((n, exponent, value))
        return rows


def mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def inv(a: QSeries) -> QSeries:
    return a.inv()


def div(a: QSeries, b: QSeries) -> QSeries:
    return a / b


def q_scale(f: QSeries, a: int) -> QSeries:
    """Substitute ``q -> T**a q``."""
    return QSeries(
        f.trunc,
        tuple(TRat._make(c.num.shift(a * n), c.den) for n, c in enumerate(f.coeffs)),
    )


def q_negate(f: QSeries) -> QSeries:
    """Substitute ``q -> -q``."""
    return QSeries(f.trunc, tuple(c if n % 2 == 0 else -c for n, c in enumerate(f.coeffs)))


def _divide_by_binomial(coeffs: list[TPoly], exponent: int, m: int) -> None:
    """Multiply a Laurent series in place by ``(1 - T**exponent q**m)**-1``."""
    for n in range(m, len(coeffs)):
        previous = coeffs[n - m]
        if not previous.is_zero():
            coeffs[n] = coeffs[n] + previous.shift(exponent)


def _laurent_series(coeffs: list[TPoly]) -> QSeries:
    return QSeries(len(coeffs) - 1, tuple(TRat.from_poly(c) for c in coeffs))


def laurent_product(factors: Iterable[tuple[int, int]], trunc: int) -> QSeries:
    """``prod (1 - T**e q**m)**-1`` over ``(e, m)`` pairs, ``m >= 1``.

    Factors with ``m > trunc`` do not contribute and may be omitted.
    """
    require_nonnegative("trunc", trunc)
    coeffs = [ONE_POLY] + [ZERO_POLY] * trunc
    for exponent, m in factors:
        require_positive("m", m)
        if m <= trunc:
            _divide_by_binomial(coeffs, exponent, m)
    return _laurent_series(coeffs)


def expand_dt(r: int, trunc: int) -> QSeries:
    """Closed product ``prod_m prod_{k<rm} (1 - L**(2+k-rm/2) q**m)**-1``."""
    require_positive("r", r)
    factors = ((4 + 2 * k - r * m, m) for m in range(1, trunc + 1) for k in range(r * m))
    series = laurent_product(factors, trunc)
    logger.debug("Expanded DT_%d to order %d", r, trunc)
    return series


def expand_dt_factored(r: int, trunc: int) -> QSeries:
    """Product of r rank-1 series with ``q`` rescaled by ``T**(2i-r-1)``."""
    require_positive("r", r)
    base = expand_dt(1, trunc)
    result = QSeries.one(trunc)
    for i in range(1, r + 1):
        result = result * q_scale(base, -r - 1 + 2 * i)
    return result


@lru_cache(maxsize=None)
def macmahon_ints(r: int, sign: int, trunc: int) -> tuple[int, ...]:
    """Integer coefficients of ``M(sign*q)**r`` up to ``q**trunc``.

    Uses ``n a_n = r sum_k sigma_2(k) a_{n-k}``, the logarithmic derivative
    of the MacMahon product.
    """
    require_positive("r", r)
    if sign not in (1, -1):
        raise InvalidConstructionError(f"sign must be +1 or -1, got {sign}")
    values = [1]
    sigma = [0] + [int(divisor_sigma(k, 2)) for k in range(1, trunc + 1)]
    for n in range(1, trunc + 1):
        total = sum(sigma[k] * values[n - k] for k in range(1, n + 1))
        values.append(r * total // n)
    return tuple(v if sign == 1 or n % 2 == 0 else -v for n, v in enumerate(values))


def macmahon_pow(r: int, sign: int, trunc: int) -> QSeries:
    """``M(sign*q)**r`` as a series with constant coefficients."""
    return QSeries(trunc, tuple(TRat.from_poly(TPoly.constant(v)) for v in macmahon_ints(r, sign, trunc)))


def macmahon(trunc: int) -> QSeries:
    """The MacMahon function, generating function of plane partitions."""
    return macmahon_pow(1, 1, trunc)


def specialize_euler(f: QSeries) -> list[int | Fraction]:
    """Evaluate every coefficient at ``T = -1``."""
    values: list[int | Fraction] = []
    for n, coeff in enumerate(f.coeffs):
        try:
            value = eval_at(coeff, -1)
        except PoleError as e:
            raise PoleError(f"coefficient of q^{n} has a pole at T = -1: {e}") from e
        values.append(int(value) if value.denominator == 1 else value)
    return values


# Eulerian form ------------------------------------------------------------


@lru_cache(maxsize=None)
def _d_poly(n: int) -> TPoly:
    """``D_n = prod_{i=1..n} (T**(2i) - 1)``."""
    if n == 0:
        return ONE_POLY
    return _d_poly(n - 1) * TPoly({2 * n: 1, 0: -1})


@lru_cache(maxsize=None)
def _partial_d_poly(low: int, high: int) -> TPoly:
    """``D_high / D_low``."""
    result = ONE_POLY
    for i in range(low + 1, high + 1):
        result = result * TPoly({2 * i: 1, 0: -1})
    return result


@lru_cache(maxsize=None)
def _q_binomial(n: int, j: int) -> TPoly:
    """Gaussian binomial ``[n choose j]`` in ``L = T**2``."""
    if j < 0 or j > n:
        return ZERO_POLY
    if j == 0 or j == n:
        return ONE_POLY
    return _q_binomial(n - 1, j - 1) + _q_binomial(n - 1, j).shift(2 * j)


def _eulerian_mul(a: Sequence[TPoly], b: Sequence[TPoly]) -> list[TPoly]:
    trunc = min(len(a), len(b)) - 1
    out = [ZERO_POLY] * (trunc + 1)
    for j in range(trunc + 1):
        if a[j].is_zero():
            continue
        for k in range(trunc + 1 - j):
            if b[k].is_zero():
                continue
            out[j + k] = out[j + k] + _q_binomial(j + k, j) * a[j] * b[k]
    return out


def _eulerian_div(a: Sequence[TPoly], b: Sequence[TPoly]) -> list[TPoly]:
    """Quotient of Eulerian series; ``b`` must start with 1."""
    if b[0] != ONE_POLY:
        raise PoleError("Eulerian division needs a divisor with constant term 1")
    trunc = min(len(a), len(b)) - 1
    out: list[TPoly] = []
    for n in range(trunc + 1):
        acc = a[n]
        for j in range(1, n + 1):
            if not b[j].is_zero() and not out[n - j].is_zero():
                acc = acc - _q_binomial(n, j) * b[j] * out[n - j]
        out.append(acc)
    return out


def _eulerian_scale(e: Sequence[TPoly], a: int) -> list[TPoly]:
    return [c.shift(a * n) for n, c in enumerate(e)]


def _feit_fine_eulerian(trunc: int) -> list[TPoly]:
    """Eulerian numerators of ``A_U``.

    For fixed m, ``prod_{k>=1} (1 - L**(2-k) y**m)**-1`` equals
    ``sum_j L**j y**(mj) / prod_{i<=j} (1 - L**-i)``, whose y**(mj)
    coefficient is ``T**(j(j+3)) / D_j``.
    """
    result = [ONE_POLY] + [ZERO_POLY] * trunc
    for m in range(1, trunc + 1):
        factor = [ZERO_POLY] * (trunc + 1)
        for j in range(trunc // m + 1):
            factor[m * j] = _partial_d_poly(j, m * j).shift(j * (j + 3))
        result = _eulerian_mul(result, factor)
    return result


def _from_eulerian(e: Sequence[TPoly]) -> QSeries:
    return QSeries(len(e) - 1, tuple(canonicalize(c, _d_poly(n)) for n, c in enumerate(e)))


def feit_fine(trunc: int) -> QSeries:
    """``A_U(y) = prod_{m>=1} prod_{k>=1} (1 - L**(2-k) y**m)**-1`` to order trunc."""
    require_nonnegative("trunc", trunc)
    series = _from_eulerian(_feit_fine_eulerian(trunc))
    logger.debug("Expanded Feit-Fine series to order %d", trunc)
    return series


def wall_cross_dt(r: int, trunc: int, method: str = "eulerian") -> QSeries:
    """``A_U(L**(r/2) q) / A_U(L**(-r/2) q)``, which must be the DT series.

    ``method="generic"`` divides TRat series directly; it is slower and
    exists as a cross-check of the Eulerian route.
    """
    require_positive("r", r)
    require_nonnegative("trunc", trunc)
    if method == "generic":
        ff = feit_fine(trunc)
        quotient = div(q_scale(ff, r), q_scale(ff, -r))
    elif method == "eulerian":
        e = _feit_fine_eulerian(trunc)
        quotient = _from_eulerian(_eulerian_div(_eulerian_scale(e, r), _eulerian_scale(e, -r)))
    else:
        raise InvalidConstructionError(f"unknown wall-crossing method {method!r}")
    for n, coeff in enumerate(quotient.coeffs):
        if not coeff.is_laurent():
            raise VerificationError(
                f"coefficient of q^{n} keeps denominator {coeff.den}", where=n
            )
    logger.debug("Wall-crossing quotient for r=%d to order %d is polynomial", r, trunc)
    return quotient


# Plethystic route ---------------------------------------------------------


def psi(x: TRat, k: int, signed: bool = True) -> TRat:
    """Adams operation on a coefficient.

    With ``signed`` the operation acts through ``-T``: ``T -> -(-T)**k``;
    otherwise it is the naive ``T -> T**k``.
    """
    sign = -1 if signed and k % 2 == 0 else 1
    return x.substitute_power(k, sign)


def plethystic_exp(f: QSeries, trunc: int | None = None, signed: bool = True) -> QSeries:
    """``Exp(f) = exp(sum_k psi_k(f) / k)`` truncated at ``trunc``."""
    if not f.coeffs[0].is_zero():
        raise InvalidConstructionError("plethystic exponential needs zero constant term")
    if trunc is None or trunc > f.trunc:
        trunc = f.trunc

    # h_j = sum_{k | j} (j/k) psi_k(f_{j/k}), the log-derivative coefficients
    h = [ZERO]
    for j in range(1, trunc + 1):
        acc = ZERO
        for k in divisors(j):
            inner = f.coeffs[j // k]
            if not inner.is_zero():
                acc = acc + psi(inner, int(k), signed) * (j // k)
        h.append(acc)

    out = [ONE]
    for n in range(1, trunc + 1):
        acc = ZERO
        for j in range(1, n + 1):
            if not h[j].is_zero():
                acc = acc + h[j] * out[n - j]
        out.append(acc / n)
    return QSeries(trunc, tuple(out))


def plethystic_argument(r: int, trunc: int) -> QSeries:
    """The series ``(-1)^r q L^(3/2) [r]_T / ((1-(-T^-1)^r q)(1-(-T)^r q))``.

    ``[r]_T = (T**-r - T**r) / (T**-1 - T)`` is the symmetric quantum integer.
    """
    require_positive("r", r)
    sign = -1 if r % 2 else 1
    quantum_r = TPoly({-(r - 1) + 2 * i: 1 for i in range(r)})
    prefactor = quantum_r.shift(3).scale(sign)
    a = TPoly.monomial(-r, sign)
    b = TPoly.monomial(r, sign)
    coeffs = [ZERO_POLY]
    for n in range(1, trunc + 1):
        geometric = ZERO_POLY
        for i in range(n):
            geometric = geometric + a**i * b ** (n - 1 - i)
        coeffs.append(prefactor * geometric)
    return _laurent_series(coeffs)


def plethystic_dt(r: int, trunc: int, signed: bool = True) -> QSeries:
    """DT series recovered from its plethystic expression."""
    series = plethystic_exp(plethystic_argument(r, trunc), trunc, signed)
    # the expression computes DT((-1)^r q)
    return q_negate(series) if r % 2 else series


def telescope_check(r: int, m: int, window: int | None = None) -> bool:
    """Check the telescoping of the wall-crossing quotient at fixed m.

    Exponents are in T-units: the numerator contributes ``2 - 2j + rm`` and
    the denominator ``2 - 2j - rm`` for ``0 <= j < window``. What survives in
    the numerator must be exactly ``j < rm``, which reindexes to the product range
    ``4 + 2k - rm`` for ``0 <= k < rm``.
    """
    require_positive("r", r)
    require_positive("m", m)
    if window is None:
        window = 2 * r * m
    if window < 2 * r * m:
        raise BudgetExceededError(
            f"telescoping window must be >= 2rm = {2 * r * m}, got {window}"
        )
    numerator = Counter(2 - 2 * j + r * m for j in range(window))
    denominator = Counter(2 - 2 * j - r * m for j in range(window))
    survivors = numerator - denominator
    expected = Counter(2 - 2 * j + r * m for j in range(r * m))
    reindexed = Counter(4 + 2 * k - r * m for k in range(r * m))
    return survivors == expected == reindexed
