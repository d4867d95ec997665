"""
Brute-force counts over small finite fields.

Nothing here uses centralizer or orbit theory: every matrix of M_n(F_q) is
listed and checked directly, so these counts stay independent of the
generating-function code they are compared with.
"""

from fractions import Fraction
from functools import lru_cache
from itertools import product

import numpy as np

from dtpoints_app.constants import DEFAULT_ORACLE_BUDGET
from dtpoints_app.errors import BudgetExceededError, InvalidConstructionError
from dtpoints_app.logger import get_logger
from dtpoints_app.qseries import feit_fine
from dtpoints_app.ring import eval_at_lefschetz
from dtpoints_app.utils import require_positive

logger = get_logger(__name__)

FIELD_ORDERS = (2, 3)


def _check_field(n: int, q: int) -> None:
    require_positive("n", n)
    if q not in FIELD_ORDERS:
        raise InvalidConstructionError(f"field order must be one of {FIELD_ORDERS}, got {q}")


@lru_cache(maxsize=None)
def all_matrices(n: int, q: int) -> np.ndarray:
    """Every n x n matrix over F_q, stacked as an array of shape (q**(n*n), n, n)."""
    _check_field(n, q)
    entries = np.array(list(product(range(q), repeat=n * n)), dtype=np.int64)
    return entries.reshape(-1, n, n)


def commuting_pairs_count(n: int, q: int, budget: int = DEFAULT_ORACLE_BUDGET) -> int:
    """Number of pairs ``(A, B)`` in M_n(F_q) with ``AB = BA``."""
    _check_field(n, q)
    pairs = q ** (2 * n * n)
    if pairs > budget:
        raise BudgetExceededError(
            f"{pairs} matrix pairs for n={n}, q={q} exceed the budget of {budget}"
        )
    mats = all_matrices(n, q)
    count = 0
    # One A at a time keeps the product array at q**(n*n) * n * n.
    for a in mats:
        ab = np.einsum("ij,bjk->bik", a, mats) % q
        ba = np.einsum("bij,jk->bik", mats, a) % q
        count += int(np.all(ab == ba, axis=(1, 2)).sum())
    logger.debug("Commuting pairs for n=%d, q=%d: %d", n, q, count)
    return count


def gl_count(n: int, q: int) -> int:
    """Number of invertible n x n matrices over F_q."""
    _check_field(n, q)
    if n > 3:
        raise BudgetExceededError(f"gl_count only enumerates n <= 3, got {n}")
    dets = np.rint(np.linalg.det(all_matrices(n, q))).astype(np.int64)
    return int(np.count_nonzero(dets % q))


def commuting_ratio(n: int, q: int, budget: int = DEFAULT_ORACLE_BUDGET) -> Fraction:
    return Fraction(commuting_pairs_count(n, q, budget), gl_count(n, q))


def feit_fine_point_check(n: int, q: int, budget: int = DEFAULT_ORACLE_BUDGET) -> bool:
    """Compare the y**n coefficient of the Feit-Fine series at L = q with the count."""
    expected = commuting_ratio(n, q, budget)
    value = eval_at_lefschetz(feit_fine(n)[n], q)
    if value != expected:
        logger.debug("Feit-Fine mismatch at n=%d, q=%d: %s != %s", n, q, value, expected)
    return value == expected
