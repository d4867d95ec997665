"""
Plane partitions, r-colored tuples and their trace statistics.

A plane partition is stored row by row; rows and columns weakly decrease and
every stored entry is positive. For an r-tuple ``(pi_1, .., pi_r)`` of total
size n the statistics are

- ``X = sum_l (Delta(pi_l) + Delta_plus(pi_l))``
- ``Y = sum_l l |pi_l|``
- ``Z = sum_l Delta(pi_l)``
- ``S = 4Z - 2X - 2Y + (r + 2) n``

and ``M_{n,r}(T) = sum T**S`` is the q**n coefficient of the rank-r DT
series. Everything here is exact integer arithmetic.
"""

from collections import Counter
from collections.abc import Iterator, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Any

from dtpoints_app.constants import DistributionSources
from dtpoints_app.errors import InvalidConstructionError, VerificationError
from dtpoints_app.logger import get_logger
from dtpoints_app.qseries import QSeries, expand_dt, laurent_product, macmahon_ints
from dtpoints_app.ring import TPoly
from dtpoints_app.utils import compositions, require_nonnegative, require_positive

logger = get_logger(__name__)


@dataclass(frozen=True)
class PPStats:
    """Size and trace statistics of one plane partition."""

    size: int
    diag: int
    upper: int
    lower: int


@dataclass(frozen=True)
class PlanePartition:
    """Plane partition given by its rows."""

    rows: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        rows = tuple(tuple(row) for row in self.rows)
        for i, row in enumerate(rows):
            if not row:
                raise InvalidConstructionError(f"row {i} of a plane partition is empty")
            if any(not isinstance(x, int) or x < 1 for x in row):
                raise InvalidConstructionError(f"row {i} has non-positive entries: {row}")
            if any(a < b for a, b in zip(row, row[1:])):
                raise InvalidConstructionError(f"row {i} is not weakly decreasing: {row}")
            if i and (len(row) > len(rows[i - 1]) or any(a > b for a, b in zip(row, rows[i - 1]))):
                raise InvalidConstructionError(f"row {i} is not dominated by the row above")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return sum(sum(row) for row in self.rows)

    def transpose(self) -> "PlanePartition":
        if not self.rows:
            return self
        width = len(self.rows[0])
        return PlanePartition(
            tuple(
                tuple(row[j] for row in self.rows if len(row) > j) for j in range(width)
            )
        )

    def stats(self) -> PPStats:
        diag = upper = lower = 0
        for i, row in enumerate(self.rows):
            for j, value in enumerate(row):
                if i == j:
                    diag += value
                elif j > i:
                    upper += value
                else:
                    lower += value
        return PPStats(diag + upper + lower, diag, upper, lower)

    def __str__(self) -> str:
        return " / ".join(" ".join(str(x) for x in row) for row in self.rows) or "()"


def stats(pi: PlanePartition) -> PPStats:
    return pi.stats()


@dataclass(frozen=True)
class ColoredStats:
    """The X, Y, Z and S statistics of a colored tuple."""

    x: int
    y: int
    z: int
    s: int


@dataclass(frozen=True)
class ColoredPP:
    """An r-tuple of plane partitions; empty components are allowed."""

    parts: tuple[PlanePartition, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise InvalidConstructionError("a colored plane partition needs r >= 1 parts")
        object.__setattr__(self, "parts", tuple(self.parts))

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(p.size for p in self.parts)


def colored_stats(r: int, colored: ColoredPP) -> ColoredStats:
    if colored.r != r:
        raise InvalidConstructionError(f"expected {r} parts, got {colored.r}")
    x = y = z = n = 0
    for color, part in enumerate(colored.parts, start=1):
        st = part.stats()
        x += st.diag + st.upper
        y += color * st.size
        z += st.diag
        n += st.size
    return ColoredStats(x, y, z, 4 * z - 2 * x - 2 * y + (r + 2) * n)


# Enumeration --------------------------------------------------------------


def _rows_under(bound: tuple[int, ...], max_sum: int) -> Iterator[tuple[int, ...]]:
    """Nonempty weakly decreasing rows with ``row[j] <= bound[j]`` and sum <= max_sum."""

    def extend(prefix: tuple[int, ...], remaining: int) -> Iterator[tuple[int, ...]]:
        j = len(prefix)
        if prefix:
            yield prefix
        if j == len(bound):
            return
        top = min(bound[j], remaining, prefix[-1] if prefix else bound[j])
        for value in range(1, top + 1):
            yield from extend(prefix + (value,), remaining - value)

    yield from extend((), max_sum)


@lru_cache(maxsize=None)
def _stacks(total: int, bound: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All row stacks of the given total whose first row lies under ``bound``."""
    if total == 0:
        return ((),)
    out = []
    for row in _rows_under(bound, total):
        for rest in _stacks(total - sum(row), row):
            out.append((row,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _enumerate_pp(n: int) -> tuple[PlanePartition, ...]:
    rows = sorted(_stacks(n, (n,) * n))
    return tuple(PlanePartition(r) for r in rows)


def enumerate_pp(n: int) -> list[PlanePartition]:
    """Every plane partition of size n, in lexicographic order of rows."""
    require_nonnegative("n", n)
    return list(_enumerate_pp(n))


def enumerate_colored(r: int, n: int) -> Iterator[ColoredPP]:
    """Every r-tuple of plane partitions of total size n."""
    require_positive("r", r)
    require_nonnegative("n", n)
    for sizes in compositions(n, r):
        for parts in product(*(_enumerate_pp(k) for k in sizes)):
            yield ColoredPP(parts)


def _histogram_for_sizes(r: int, sizes: tuple[int, ...]) -> Counter:
    histogram: Counter = Counter()
    for parts in product(*(_enumerate_pp(k) for k in sizes)):
        histogram[colored_stats(r, ColoredPP(parts)).s] += 1
    return histogram


def s_histogram(r: int, n: int, jobs: int = 1) -> dict[int, int]:
    """Counts of each S value over all r-colored tuples of size n.

    With ``jobs > 1`` the compositions of n are spread over worker processes;
    the merged histogram does not depend on the worker count.
    """
    require_positive("r", r)
    require_nonnegative("n", n)
    require_positive("jobs", jobs)
    parts = list(compositions(n, r))
    total: Counter = Counter()
    if jobs == 1 or len(parts) == 1:
        for sizes in parts:
            total.update(_histogram_for_sizes(r, sizes))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for histogram in pool.map(_histogram_for_sizes, [r] * len(parts), parts):
                total.update(histogram)
    logger.debug("Enumerated %d colored tuples for r=%d, n=%d", sum(total.values()), r, n)
    return dict(sorted(total.items()))


def m_poly_enum(r: int, n: int, jobs: int = 1) -> TPoly:
    """``M_{n,r}(T) = sum T**S`` by enumeration."""
    return TPoly(s_histogram(r, n, jobs))


def count_colored(r: int, n: int) -> int:
    """Number of r-colored plane partitions of total size n."""
    require_positive("r", r)
    require_nonnegative("n", n)
    return macmahon_ints(r, 1, n)[n]


# Trivariate polynomials ---------------------------------------------------


Exponent3 = tuple[int, int, int]


class TriPoly:
    """Polynomial in ``u, v, w`` with integer coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Exponent3, int] | None = None):
        clean: dict[Exponent3, int] = {}
        for exponent, coeff in (terms or {}).items():
            exponent = tuple(exponent)
            if len(exponent) != 3 or any(e < 0 for e in exponent):
                raise InvalidConstructionError(f"bad TriPoly exponent {exponent!r}")
            if coeff:
                clean[exponent] = clean.get(exponent, 0) + coeff
        self._terms = {e: c for e, c in sorted(clean.items()) if c}

    @property
    def terms(self) -> dict[Exponent3, int]:
        return dict(self._terms)

    def __add__(self, other: "TriPoly") -> "TriPoly":
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return TriPoly(out)

    def shift(self, exponent: Exponent3) -> "TriPoly":
        """Multiply by the monomial ``u**a v**b w**c``."""
        a, b, c = exponent
        return TriPoly({(x + a, y + b, z + c): k for (x, y, z), k in self._terms.items()})

    def evaluate(self, u: Any, v: Any, w: Any) -> Any:
        return sum(
            (k * Fraction(u) ** x * Fraction(v) ** y * Fraction(w) ** z
             for (x, y, z), k in self._terms.items()),
            Fraction(0),
        )

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TriPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __repr__(self) -> str:
        return f"TriPoly({self._terms})"

    def to_json(self) -> dict[str, str]:
        return {",".join(map(str, e)): str(c) for e, c in self._terms.items()}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "TriPoly":
        try:
            return cls({tuple(int(x) for x in k.split(",")): int(c) for k, c in data.items()})
        except (AttributeError, ValueError) as e:
            raise InvalidConstructionError(f"malformed TriPoly JSON: {data!r}") from e


def q_poly_enum(r: int, n: int) -> TriPoly:
    """``Q_n(u, v, w) = sum u**X v**Y w**Z`` by enumeration."""
    counts: Counter = Counter()
    for colored in enumerate_colored(r, n):
        st = colored_stats(r, colored)
        counts[(st.x, st.y, st.z)] += 1
    return TriPoly(counts)


def q_poly_series(r: int, n: int) -> TriPoly:
    """z**n coefficient of ``prod_l prod_m prod_{k<=m} (1 - w u**k v**(ml) z**m)**-1``."""
    require_positive("r", r)
    require_nonnegative("n", n)
    coeffs = [TriPoly({(0, 0, 0): 1})] + [TriPoly() for _ in range(n)]
    for l in range(1, r + 1):
        for m in range(1, n + 1):
            for k in range(1, m + 1):
                monomial = (k, m * l, 1)
                for d in range(m, n + 1):
                    coeffs[d] = coeffs[d] + coeffs[d - m].shift(monomial)
    return coeffs[n]


def m_from_q(r: int, n: int, q_poly: TriPoly) -> TPoly:
    """``T**((r+2)n) Q(T**-2, T**-2, T**4)``; coefficients must stay nonnegative."""
    terms: dict[int, int] = {}
    for (x, y, z), coeff in q_poly.terms.items():
        exponent = (r + 2) * n - 2 * x - 2 * y + 4 * z
        terms[exponent] = terms.get(exponent, 0) + coeff
    result = TPoly(terms)
    negative = [e for e, c in result.items() if c < 0]
    if negative:
        raise VerificationError(f"M_{{{n},{r}}} has negative coefficients", where=negative[0])
    return result


# Distributions ------------------------------------------------------------


@dataclass(frozen=True)
class Distribution:
    """Exact law of ``S_{n,r}`` under the uniform measure on colored tuples."""

    r: int
    n: int
    histogram: dict[int, int]

    @property
    def total(self) -> int:
        return sum(self.histogram.values())

    @property
    def mean(self) -> Fraction:
        return Fraction(sum(s * c for s, c in self.histogram.items()), self.total)

    @property
    def variance(self) -> Fraction:
        second = Fraction(sum(s * s * c for s, c in self.histogram.items()), self.total)
        return second - self.mean**2

    def csv_rows(self) -> list[tuple[int, int, int, int]]:
        return [(self.r, self.n, s, c) for s, c in sorted(self.histogram.items())]

    def to_json(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "n": self.n,
            "total": str(self.total),
            "mean": str(self.mean),
            "variance": str(self.variance),
            "histogram": {str(s): str(c) for s, c in sorted(self.histogram.items())},
        }


def distribution(
    r: int, n: int, source: str = DistributionSources.ENUM, jobs: int = 1
) -> Distribution:
    """Histogram of S with exact mean and variance.

    ``source="enum"`` enumerates tuples; ``source="mpoly"`` reads the q**n
    coefficient of the closed product, which reaches much larger n.
    """
    require_positive("r", r)
    require_nonnegative("n", n)
    if source == DistributionSources.ENUM:
        histogram = s_histogram(r, n, jobs)
    elif source == DistributionSources.MPOLY:
        histogram = dict(expand_dt(r, n)[n].as_laurent().items())
    else:
        raise InvalidConstructionError(f"unknown distribution source {source!r}")
    return Distribution(r, n, histogram)


# Trace refinements --------------------------------------------------------


def trace_series(trunc: int) -> QSeries:
    """``prod_m (1 - T z**m)**-m``: plane partitions by size and trace.

    The coefficient of ``z**n`` is ``sum_pi T**Delta(pi)``.
    """
    factors = ((1, m) for m in range(1, trunc + 1) for _ in range(m))
    return laurent_product(factors, trunc)


def morrison_series(trunc: int) -> QSeries:
    """``prod_m prod_{k<=m} (1 - T**(2k-m) z**m)**-1``.

    The coefficient of ``z**n`` is ``sum_pi T**(Delta + Delta_plus - Delta_minus)``.
    """
    factors = ((2 * k - m, m) for m in range(1, trunc + 1) for k in range(1, m + 1))
    return laurent_product(factors, trunc)


def trace_enum(n: int) -> TPoly:
    return TPoly(Counter(pi.stats().diag for pi in enumerate_pp(n)))


def morrison_enum(n: int) -> TPoly:
    counts: Counter = Counter()
    for pi in enumerate_pp(n):
        st = pi.stats()
        counts[st.diag + st.upper - st.lower] += 1
    return TPoly(counts)
