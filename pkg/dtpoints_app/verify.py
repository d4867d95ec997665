"""
Identity suites run by ``dtpoints verify``.

Each suite compares two independent routes to the same object and raises
``VerificationError`` at the first disagreement; ``where`` carries the
q-degree, dimension vector or field point that failed.
"""

from collections.abc import Callable
from dataclasses import dataclass

from dtpoints_app.constants import (
    DEFAULT_ORACLE_BUDGET,
    FEIT_FINE_POINTS,
    VerifySuites,
)
from dtpoints_app.errors import InvalidConstructionError, VerificationError
from dtpoints_app.logger import get_logger
from dtpoints_app.oracles import feit_fine_point_check
from dtpoints_app.planepart import m_from_q, m_poly_enum, q_poly_enum, q_poly_series
from dtpoints_app.qseries import (
    QSeries,
    expand_dt,
    expand_dt_factored,
    macmahon_ints,
    plethystic_dt,
    specialize_euler,
    telescope_check,
    wall_cross_dt,
)
from dtpoints_app.quiver import Quiver, cut_twist, require_wall_crossing
from dtpoints_app.utils import require_nonnegative, require_positive

logger = get_logger(__name__)

# The quantum-torus comparison grows quickly; larger orders are checked only
# through the quotient of Feit-Fine series.
TORUS_TRUNC_LIMIT = 8

# Edge index of the cut in the 3-loop quiver with the trace potential.
THREE_LOOP_CUT = (2,)


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    r: int
    trunc: int
    checked: int

    def to_json(self) -> dict[str, object]:
        return {
            "suite": self.suite,
            "r": self.r,
            "trunc": self.trunc,
            "ok": True,
            "checked": self.checked,
        }


def compare_series(label: str, got: QSeries, expected: QSeries) -> int:
    """Raise at the first q-degree where the two series differ."""
    trunc = min(got.trunc, expected.trunc)
    for n in range(trunc + 1):
        if got[n] != expected[n]:
            raise VerificationError(
                f"{label}: coefficient of q^{n} is {got[n]}, expected {expected[n]}", where=n
            )
    return trunc + 1


def check_factorization(r: int, trunc: int, **_options) -> int:
    return compare_series(
        "factorized product", expand_dt_factored(r, trunc), expand_dt(r, trunc)
    )


def check_wallcross(r: int, trunc: int, **_options) -> int:
    checked = compare_series("wall-crossing quotient", wall_cross_dt(r, trunc), expand_dt(r, trunc))
    require_wall_crossing(r, min(trunc, TORUS_TRUNC_LIMIT))
    return checked + min(trunc, TORUS_TRUNC_LIMIT) + 1


def check_plethystic(r: int, trunc: int, **_options) -> int:
    return compare_series("plethystic exponential", plethystic_dt(r, trunc), expand_dt(r, trunc))


def check_euler(r: int, trunc: int, **_options) -> int:
    values = specialize_euler(expand_dt(r, trunc))
    expected = macmahon_ints(r, (-1) ** r, trunc)
    for n, (got, want) in enumerate(zip(values, expected)):
        if got != want:
            raise VerificationError(
                f"Euler specialisation: q^{n} gives {got}, expected {want}", where=n
            )
    return len(values)


def check_enumeration(r: int, trunc: int, jobs: int = 1, **_options) -> int:
    series = expand_dt(r, trunc)
    for n in range(trunc + 1):
        counted = m_poly_enum(r, n, jobs)
        if counted != series[n].as_laurent():
            raise VerificationError(
                f"enumeration: M_({n},{r}) is {counted}, product gives {series[n]}", where=n
            )
        logger.debug("Enumeration agrees for r=%d, n=%d", r, n)
    return trunc + 1


def check_qpoly(r: int, trunc: int, **_options) -> int:
    series = expand_dt(r, trunc)
    for n in range(trunc + 1):
        enumerated = q_poly_enum(r, n)
        if enumerated != q_poly_series(r, n):
            raise VerificationError(f"trivariate polynomials differ at n={n}", where=n)
        if m_from_q(r, n, enumerated) != series[n].as_laurent():
            raise VerificationError(f"trivariate substitution fails at n={n}", where=n)
    return trunc + 1


def check_feitfine(
    r: int, trunc: int, budget: int = DEFAULT_ORACLE_BUDGET, **_options
) -> int:
    """Cut twist vanishes on the 3-loop quiver, then the finite-field points."""
    quiver = Quiver.three_loop()
    for n in range(trunc + 1):
        twist = cut_twist(quiver, (n,), THREE_LOOP_CUT)
        if twist != 0:
            raise VerificationError(f"cut twist at dimension {n} is {twist}", where=(n,))
    for n, q in FEIT_FINE_POINTS:
        if not feit_fine_point_check(n, q, budget):
            raise VerificationError(f"Feit-Fine count fails at n={n}, q={q}", where=(n, q))
    return trunc + 1 + len(FEIT_FINE_POINTS)


def check_telescoping(r: int, trunc: int, **_options) -> int:
    for m in range(1, trunc + 1):
        if not telescope_check(r, m):
            raise VerificationError(f"telescoping fails for m={m}", where=m)
    return trunc


SUITES: dict[str, Callable[..., int]] = {
    VerifySuites.FACTORIZATION: check_factorization,
    VerifySuites.WALLCROSS: check_wallcross,
    VerifySuites.PLETHYSTIC: check_plethystic,
    VerifySuites.EULER: check_euler,
    VerifySuites.ENUMERATION: check_enumeration,
    VerifySuites.QPOLY: check_qpoly,
    VerifySuites.FEITFINE: check_feitfine,
    VerifySuites.TELESCOPING: check_telescoping,
}


def run_suite(
    suite: str,
    r: int,
    trunc: int,
    jobs: int = 1,
    budget: int = DEFAULT_ORACLE_BUDGET,
) -> SuiteResult:
    """Run one named suite; raises ``VerificationError`` on the first mismatch."""
    if suite not in SUITES:
        raise InvalidConstructionError(f"unknown verification suite {suite!r}")
    require_positive("r", r)
    require_nonnegative("trunc", trunc)
    checked = SUITES[suite](r, trunc, jobs=jobs, budget=budget)
    logger.info("Suite %s passed for r=%d up to %d (%d checks)", suite, r, trunc, checked)
    return SuiteResult(suite, r, trunc, checked)
