"""
Saddle-point asymptotics for the S statistic of r-colored plane partitions.

With ``x`` dual to the size and ``y`` dual to the linear statistic
``alpha X + beta Y + gamma Z``, the log generating function is

    g(x, y) = -sum_l sum_m sum_{k<=m} log(1 - exp(-x m + y w(k, l, m)))
    w(k, l, m) = gamma + alpha k + m beta l

and the saddle ``rho`` solves ``n = -f_x(rho)``. Every infinite sum over m
is cut off once a geometric tail bound drops below ``tol`` times the partial
sum; ``max_terms`` caps the work.

All numbers are double precision.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect
from scipy.special import zeta
from scipy.stats import norm

from dtpoints_app.constants import (
    DEFAULT_MAX_TERMS,
    DEFAULT_SADDLE_RTOL,
    DEFAULT_SANDWICH_SLACK,
    DEFAULT_SUM_TOL,
    SADDLE_BRACKET,
    DistributionSources,
)
from dtpoints_app.errors import BudgetExceededError, InvalidConstructionError, SaddleError
from dtpoints_app.logger import get_logger
from dtpoints_app.planepart import Distribution, count_colored, distribution
from dtpoints_app.utils import require_positive

logger = get_logger(__name__)

ZETA2 = math.pi**2 / 6
ZETA3 = float(zeta(3))

_CHUNK = 256
_NEGLIGIBLE = 1e-300
_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class SaddleProblem:
    """Saddle equation ``n = -f_x(rho)`` with tilt weights ``(a, b, c)``."""

    r: int
    n: float
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0

    def __post_init__(self) -> None:
        require_positive("r", self.r)
        if not self.n > 0:
            raise InvalidConstructionError(f"target size must be positive, got {self.n}")
        if self.eps >= 1:
            raise InvalidConstructionError(
                f"|c| + |a| + r|b| must be below 1, got {self.eps}"
            )

    @property
    def eps(self) -> float:
        return abs(self.c) + abs(self.a) + self.r * abs(self.b)


@dataclass(frozen=True)
class SaddleResult:
    rho: float
    residual: float
    iterations: int


@dataclass(frozen=True)
class MomentEstimates:
    mu_n: float
    sigma2_n: float
    rho0: float


@dataclass(frozen=True)
class Partials:
    """Second-order data of ``g`` at ``(rho, 0)``."""

    g_y: float
    g_xx: float
    g_xy: float
    g_yy: float


def _tail_bound(coeff: float, power: int, last_m: int, x: float) -> float:
    """Bound on ``sum_{m>M} coeff m**power x**m``.

    Uses ``(M + 1 + j)**p <= (M + 1)**p (j + 1) .. (j + p)``.
    """
    m1 = last_m + 1
    return coeff * m1**power * x**m1 * math.factorial(power) / (1 - x) ** (power + 1)


def _summed(
    chunk_fn,
    decay: float,
    coeff: float,
    power: int,
    tol: float,
    max_terms: int,
    denominator: int = 1,
) -> float:
    """Sum ``chunk_fn(ms)`` over m = 1, 2, ... until the tail is negligible.

    The m-th term must be bounded by
    ``coeff m**power x**m / (1 - x)**denominator`` with ``x = exp(-decay)``.
    Besides the relative test the loop stops once the tail is below rounding
    noise of the whole sum, so sums that vanish identically terminate.
    """
    x = math.exp(-decay)
    scale = coeff / (1 - x) ** denominator
    floor = max(_EPS * _tail_bound(scale, power, 0, x), _NEGLIGIBLE)
    total = 0.0
    start = 1
    while True:
        stop = start + _CHUNK
        total += float(chunk_fn(np.arange(start, stop, dtype=float)))
        bound = _tail_bound(scale, power, stop - 1, x)
        if bound <= tol * abs(total) or bound <= floor:
            return total
        if stop > max_terms:
            raise BudgetExceededError(
                f"sum did not converge within {max_terms} terms (decay rate {decay:g})"
            )
        start = stop


def f_x(
    rho: float,
    r: int,
    a: float = 0.0,
    b: float = 0.0,
    c: float = 0.0,
    tol: float = DEFAULT_SUM_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> float:
    """``f_x(rho, rho)``; negative, with ``-f_x`` the expected size."""
    if rho <= 0:
        raise InvalidConstructionError(f"rho must be positive, got {rho}")
    eps = abs(c) + abs(a) + r * abs(b)
    if eps >= 1:
        raise InvalidConstructionError(f"|c| + |a| + r|b| must be below 1, got {eps}")

    def chunk(ms: np.ndarray) -> float:
        total = 0.0
        for l in range(1, r + 1):
            if a == 0:
                t = rho * (ms + c + ms * b * l)
                total += np.sum(ms * ms / np.expm1(t))
            else:
                ks = np.arange(1, ms[-1] + 1)
                t = rho * (ms[:, None] + c + a * ks[None, :] + ms[:, None] * b * l)
                t = np.where(ks[None, :] <= ms[:, None], t, np.inf)
                total += np.sum(ms[:, None] / np.expm1(t))
        return total

    return -_summed(chunk, rho * (1 - eps), r, 2, tol, max_terms)


def rho0_asymptotic(n: float, r: int) -> float:
    """Leading-order saddle ``(2 r zeta(3) / n) ** (1/3)``."""
    return (2 * r * ZETA3 / n) ** (1 / 3)


def n_from_rho(rho: float, r: int) -> float:
    """Two-term expansion ``2 r zeta(3) rho**-3 - r rho**-1 / 12`` of ``-f_x``."""
    return 2 * r * ZETA3 * rho**-3 - r / (12 * rho)


def solve_saddle(
    problem: SaddleProblem,
    rtol: float = DEFAULT_SADDLE_RTOL,
    slack: float = DEFAULT_SANDWICH_SLACK,
    tol: float = DEFAULT_SUM_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> SaddleResult:
    """Bisection for ``n = -f_x(rho)`` around the leading-order seed.

    The root is checked against the untilted sandwich
    ``-f_x((1+eps) rho) <= n <= -f_x((1-eps) rho)``.
    """
    r, n = problem.r, problem.n

    def excess(rho: float) -> float:
        return -f_x(rho, r, problem.a, problem.b, problem.c, tol, max_terms) - n

    seed = rho0_asymptotic(n, r)
    low, high = seed * SADDLE_BRACKET[0], seed * SADDLE_BRACKET[1]
    try:
        rho, info = bisect(excess, low, high, xtol=rtol * low, rtol=rtol, full_output=True)
    except ValueError as e:
        raise SaddleError(f"no sign change of the saddle equation in [{low:g}, {high:g}]") from e

    residual = abs(excess(rho))
    eps = problem.eps
    upper = -f_x((1 - eps) * rho, r, tol=tol, max_terms=max_terms)
    lower = -f_x((1 + eps) * rho, r, tol=tol, max_terms=max_terms)
    if not lower * (1 - slack) <= n <= upper * (1 + slack):
        raise SaddleError(
            f"saddle rho={rho:.15g} violates the sandwich {lower:.15g} <= {n} <= {upper:.15g}"
        )
    logger.debug("Saddle for r=%d, n=%s: rho=%.15g after %d steps", r, n, rho, info.iterations)
    return SaddleResult(rho, residual, info.iterations)


def _phi2(t: np.ndarray) -> np.ndarray:
    """``e**t / (e**t - 1)**2``."""
    return 0.25 / np.sinh(t / 2) ** 2


def yy_weight(m, r: int, alpha: float, beta: float, gamma: float):
    """``sum_{l<=r} sum_{k<=m} (gamma + alpha k + m beta l)**2`` in closed form."""
    return (
        gamma**2 * r * m
        + alpha**2 * r * m * (m + 1) * (2 * m + 1) / 6
        + beta**2 * m**3 * r * (r + 1) * (2 * r + 1) / 6
        + gamma * alpha * r * m * (m + 1)
        + gamma * beta * r * (r + 1) * m**2
        + alpha * beta * m**2 * (m + 1) * r * (r + 1) / 2
    )


def g_partials(
    rho: float,
    r: int,
    alpha: float,
    beta: float,
    gamma: float,
    tol: float = DEFAULT_SUM_TOL,
    max_terms: int = DEFAULT_MAX_TERMS,
) -> Partials:
    """``g_y, g_xx, g_xy, g_yy`` at ``(rho, 0)``."""
    if rho <= 0:
        raise InvalidConstructionError(f"rho must be positive, got {rho}")
    lin2 = alpha + (r + 1) * beta
    lin1 = alpha + 2 * gamma

    linear = r / 2 * (abs(lin2) + abs(lin1))
    square = r * (abs(gamma) + abs(alpha) + r * abs(beta)) ** 2

    def run(fn, coeff: float, power: int, denominator: int) -> float:
        return _summed(fn, rho, coeff, power, tol, max_terms, denominator)

    g_y = run(
        lambda ms: r / 2 * np.sum((lin2 * ms**2 + lin1 * ms) / np.expm1(rho * ms)),
        linear, 2, 1,
    )
    g_xx = run(lambda ms: r * np.sum(ms**3 * _phi2(rho * ms)), r, 3, 2)
    g_xy = run(
        lambda ms: -r / 2 * np.sum((lin2 * ms**3 + lin1 * ms**2) * _phi2(rho * ms)),
        linear, 3, 2,
    )
    g_yy = run(
        lambda ms: np.sum(yy_weight(ms, r, alpha, beta, gamma) * _phi2(rho * ms)),
        square, 3, 2,
    )
    return Partials(g_y, g_xx, g_xy, g_yy)


def mu_sigma(
    n: float,
    r: int,
    alpha: float,
    beta: float,
    gamma: float,
    tol: float = DEFAULT_SUM_TOL,
    rtol: float = DEFAULT_SADDLE_RTOL,
    rho0: float | None = None,
) -> MomentEstimates:
    """Saddle estimates of the mean and variance of ``alpha X + beta Y + gamma Z``.

    ``rho0`` skips the solve when the untilted saddle is already known.
    """
    if alpha == beta == gamma == 0:
        raise InvalidConstructionError("at least one of alpha, beta, gamma must be nonzero")
    if rho0 is None:
        rho0 = solve_saddle(SaddleProblem(r, n), rtol=rtol, tol=tol).rho
    p = g_partials(rho0, r, alpha, beta, gamma, tol)
    sigma2 = (p.g_yy * p.g_xx - p.g_xy**2) / p.g_xx
    return MomentEstimates(p.g_y, sigma2, rho0)


def prop_asymptotics(
    n: float, r: int, alpha: float, beta: float, gamma: float
) -> tuple[float, float]:
    """Leading asymptotics ``(mu_n, sigma_n**2)``.

    When ``alpha = beta = 0`` the variance grows like ``n**(2/3) log n``.
    """
    mu = (alpha / 2 + (r + 1) * beta / 2) * n + (
        r ** (1 / 3) * ZETA2 * (alpha + 2 * gamma) / (2 ** (5 / 3) * ZETA3 ** (2 / 3))
    ) * n ** (2 / 3)
    if alpha == 0 and beta == 0:
        rho0 = rho0_asymptotic(n, r)
        sigma2 = r * gamma**2 * rho0**-2 * math.log(1 / rho0)
    else:
        sigma2 = (
            (alpha**2 + (r * r - 1) * beta**2)
            / (2 ** (7 / 3) * (r * ZETA3) ** (1 / 3))
            * n ** (4 / 3)
        )
    return mu, sigma2


def theorem_constants(r: int) -> tuple[float, float]:
    """Limit mean and variance of ``S_{n,r} / n**(2/3)``."""
    require_positive("r", r)
    mu = r ** (1 / 3) * math.pi**2 / (2 ** (5 / 3) * ZETA3 ** (2 / 3))
    sigma2 = r ** (5 / 3) / (2 * ZETA3) ** (1 / 3)
    return mu, sigma2


def theorem_consistency(r: int) -> float:
    """Largest relative gap between the theorem constants and the weights (-2, -2, 4).

    The linear part of the mean cancels the ``(r + 2) n`` shift, so only the
    ``n**(2/3)`` coefficient of the mean and the ``n**(4/3)`` coefficient of
    the variance remain; evaluating at ``n = 1`` reads them off.
    """
    mu, sigma2 = theorem_constants(r)
    mu_1, sigma2_1 = prop_asymptotics(1.0, r, -2.0, -2.0, 4.0)
    mu_coeff = mu_1 + (r + 2)
    return max(abs(mu_coeff - mu) / mu, abs(sigma2_1 - sigma2) / sigma2)


def log_qn_exact(n: int, r: int) -> float:
    return math.log(count_colored(r, n))


def qn_saddle_approx(
    n: int,
    r: int,
    tol: float = DEFAULT_SUM_TOL,
    rtol: float = DEFAULT_SADDLE_RTOL,
    rho0: float | None = None,
) -> float:
    """``log Q_n(1, 1, 1) ~ g(rho0, 0) + n rho0 - log(2 pi g_xx) / 2``."""
    if rho0 is None:
        rho0 = solve_saddle(SaddleProblem(r, n), rtol=rtol, tol=tol).rho
    g = _summed(
        lambda ms: -r * np.sum(ms * np.log1p(-np.exp(-rho0 * ms))),
        rho0, r, 1, tol, DEFAULT_MAX_TERMS,
    )
    g_xx = g_partials(rho0, r, 0.0, 0.0, 1.0, tol).g_xx
    return g + n * rho0 - 0.5 * math.log(2 * math.pi * g_xx)


def gaussian_distance(r: int, n: int, dist: Distribution | None = None) -> float:
    """Kolmogorov distance between ``S_{n,r} / n**(2/3)`` and its normal limit."""
    require_positive("n", n)
    if dist is None:
        dist = distribution(r, n, DistributionSources.MPOLY)
    mu, sigma2 = theorem_constants(r)
    total = dist.total
    scale = n ** (2 / 3)
    ordered = sorted(dist.histogram.items())
    points = np.array([s / scale for s, _ in ordered], dtype=float)
    cdf_after = np.cumsum([c / total for _, c in ordered])
    cdf_before = np.concatenate(([0.0], cdf_after[:-1]))
    limit = norm.cdf(points, loc=mu, scale=math.sqrt(sigma2))
    distance = max(np.max(np.abs(cdf_after - limit)), np.max(np.abs(cdf_before - limit)))
    return float(min(1.0, distance))
