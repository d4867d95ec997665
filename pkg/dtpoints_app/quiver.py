"""
Quivers, their bilinear forms and the framed 3-loop quiver.

Dimension vectors are plain tuples of nonnegative ints indexed like the
quiver's vertices. Framing puts the new vertex ``infinity`` at index 0 and
shifts the existing vertices up by one, so a framed 3-loop dimension vector
reads ``(dim at infinity, dim at 0)``.

Representations of the framed quiver are stored with exact sympy rationals so
rank decisions never depend on rounding.
"""

import json
import math
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from sympy import ImmutableMatrix, Rational, zeros

from dtpoints_app.errors import InvalidConstructionError, VerificationError
from dtpoints_app.logger import get_logger
from dtpoints_app.qseries import QSeries, expand_dt, feit_fine
from dtpoints_app.ring import ONE, TRat
from dtpoints_app.utils import require_nonnegative, require_positive

logger = get_logger(__name__)

DimVector = tuple[int, ...]


@dataclass(frozen=True)
class Quiver:
    """Finite quiver given by its vertex count and (tail, head) edges."""

    vertex_count: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.vertex_count, int) or self.vertex_count < 1:
            raise InvalidConstructionError(
                f"a quiver needs at least one vertex, got {self.vertex_count!r}"
            )
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        for tail, head in edges:
            if not (0 <= tail < self.vertex_count and 0 <= head < self.vertex_count):
                raise InvalidConstructionError(
                    f"edge {tail}->{head} leaves the vertex range 0..{self.vertex_count - 1}"
                )
        object.__setattr__(self, "edges", edges)

    @classmethod
    def loops(cls, count: int) -> "Quiver":
        """One vertex with ``count`` loops."""
        return cls(1, tuple((0, 0) for _ in range(count)))

    @classmethod
    def three_loop(cls) -> "Quiver":
        return cls.loops(3)

    @classmethod
    def from_json(cls, data: Mapping[str, Any] | str) -> "Quiver":
        """Read ``{"vertices": int, "edges": [[t, h], ...]}``."""
        if isinstance(data, str):
            data = json.loads(data)
        try:
            return cls(int(data["vertices"]), tuple(tuple(e) for e in data.get("edges", [])))
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidConstructionError(f"malformed quiver JSON: {data!r}") from e

    def to_json(self) -> dict[str, Any]:
        return {"vertices": self.vertex_count, "edges": [list(e) for e in self.edges]}

    def check_dims(self, alpha: Sequence[int]) -> DimVector:
        """Validate ``alpha`` against this quiver and return it as a tuple."""
        alpha = tuple(alpha)
        if len(alpha) != self.vertex_count:
            raise InvalidConstructionError(
                f"dimension vector {alpha} has {len(alpha)} entries, "
                f"quiver has {self.vertex_count} vertices"
            )
        if any(not isinstance(a, int) or a < 0 for a in alpha):
            raise InvalidConstructionError(f"dimension vector {alpha} must be nonnegative ints")
        return alpha


def euler_form(quiver: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    """Euler-Ringel form ``sum a_i b_i - sum_{edges} a_tail b_head``."""
    alpha = quiver.check_dims(alpha)
    beta = quiver.check_dims(beta)
    diagonal = sum(a * b for a, b in zip(alpha, beta))
    return diagonal - sum(alpha[t] * beta[h] for t, h in quiver.edges)


def skew_form(quiver: Quiver, alpha: Sequence[int], beta: Sequence[int]) -> int:
    return euler_form(quiver, alpha, beta) - euler_form(quiver, beta, alpha)


def rep_dimension(
    quiver: Quiver, alpha: Sequence[int], edges: Iterable[int] | None = None
) -> int:
    """Dimension ``sum a_tail a_head`` of the representation space.

    With ``edges`` (a list of edge indices) only those arrows count, which
    gives the cut dimension ``d_I`` for a cut ``I``.
    """
    alpha = quiver.check_dims(alpha)
    chosen = range(len(quiver.edges)) if edges is None else edges
    return sum(alpha[quiver.edges[i][0]] * alpha[quiver.edges[i][1]] for i in chosen)


def cut_twist(quiver: Quiver, alpha: Sequence[int], cut: Iterable[int]) -> int:
    """T-exponent ``chi(a, a) + 2 d_I(a)`` weighting ``y**a`` in the cut formula."""
    return euler_form(quiver, alpha, alpha) + 2 * rep_dimension(quiver, alpha, cut)


def r_framing(quiver: Quiver, vertex0: int, r: int) -> Quiver:
    """Add a vertex ``infinity`` (index 0) with r arrows into ``vertex0``."""
    require_positive("r", r)
    if not 0 <= vertex0 < quiver.vertex_count:
        raise InvalidConstructionError(f"vertex {vertex0} is not in the quiver")
    shifted = tuple((t + 1, h + 1) for t, h in quiver.edges)
    framing = tuple((0, vertex0 + 1) for _ in range(r))
    return Quiver(quiver.vertex_count + 1, shifted + framing)


def framed_three_loop(r: int) -> Quiver:
    return r_framing(Quiver.three_loop(), 0, r)


@dataclass(frozen=True, eq=False)
class TorusElement:
    """Element of the quantum torus truncated at total dimension ``trunc``."""

    quiver: Quiver
    trunc: int
    coeffs: Mapping[DimVector, TRat] = field(default_factory=dict)

    def __post_init__(self) -> None:
        require_nonnegative("trunc", self.trunc)
        clean: dict[DimVector, TRat] = {}
        for alpha, coeff in self.coeffs.items():
            alpha = self.quiver.check_dims(alpha)
            if not isinstance(coeff, TRat):
                coeff = TRat(coeff)
            if sum(alpha) <= self.trunc and not coeff.is_zero():
                clean[alpha] = coeff
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def monomial(
        cls, quiver: Quiver, alpha: Sequence[int], trunc: int, coeff: Any = ONE
    ) -> "TorusElement":
        return cls(quiver, trunc, {tuple(alpha): coeff})

    @classmethod
    def one(cls, quiver: Quiver, trunc: int) -> "TorusElement":
        return cls.monomial(quiver, (0,) * quiver.vertex_count, trunc)

    def coefficient(self, alpha: Sequence[int]) -> TRat:
        return self.coeffs.get(tuple(alpha), TRat())

    def _check_compatible(self, other: "TorusElement") -> None:
        if self.quiver != other.quiver:
            raise InvalidConstructionError("torus elements live on different quivers")

    def __add__(self, other: "TorusElement") -> "TorusElement":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for alpha, coeff in other.coeffs.items():
            out[alpha] = out[alpha] + coeff if alpha in out else coeff
        return TorusElement(self.quiver, min(self.trunc, other.trunc), out)

    def __mul__(self, other: "TorusElement") -> "TorusElement":
        return torus_mul(self, other)

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, TorusElement):
            return NotImplemented
        return (
            self.quiver == other.quiver
            and self.trunc == other.trunc
            and self.coeffs == other.coeffs
        )

    def __repr__(self) -> str:
        terms = ", ".join(f"{alpha}: {coeff}" for alpha, coeff in self.coeffs.items())
        return f"TorusElement(trunc={self.trunc}, {{{terms}}})"


def torus_mul(a: TorusElement, b: TorusElement) -> TorusElement:
    """Twisted product ``y^a y^b = T**<a,b> y^(a+b)``."""
    a._check_compatible(b)
    trunc = min(a.trunc, b.trunc)
    out: dict[DimVector, TRat] = {}
    for alpha, ca in a.coeffs.items():
        for beta, cb in b.coeffs.items():
            gamma = tuple(x + y for x, y in zip(alpha, beta))
            if sum(gamma) > trunc:
                continue
            term = (ca * cb) * TRat.monomial(skew_form(a.quiver, alpha, beta))
            out[gamma] = out[gamma] + term if gamma in out else term
    return TorusElement(a.quiver, trunc, out)


@dataclass(frozen=True)
class WallCrossingReport:
    """Outcome of comparing both sides of the framed wall-crossing identity."""

    r: int
    trunc: int
    ok: bool
    first_mismatch: DimVector | None = None

    def __bool__(self) -> bool:
        return self.ok


def _vertex_series(quiver: Quiver, series: QSeries, trunc: int, scale: int = 0) -> TorusElement:
    """``sum_n series[n] T**(scale n) y^(0, n)``."""
    coeffs = {
        (0, n): series[n] * TRat.monomial(scale * n) for n in range(min(series.trunc, trunc) + 1)
    }
    return TorusElement(quiver, trunc, coeffs)


def wall_crossing_check(r: int, trunc: int, a_u: QSeries | None = None) -> WallCrossingReport:
    """Compare ``Z_plus * A_U`` with ``A_U * Z_minus`` in the framed torus.

    ``Z_minus = y_inf`` and ``Z_plus = DT_r(L**(-r/2) y^(0,1)) * y_inf``. Only
    the gradings ``(1, n)`` with ``n <= trunc`` are compared. ``a_u`` replaces
    the Feit-Fine series, which lets tests feed a corrupted copy.
    """
    require_positive("r", r)
    require_nonnegative("trunc", trunc)
    quiver = framed_three_loop(r)
    limit = trunc + 1
    if a_u is None:
        a_u = feit_fine(trunc)
    y_inf = TorusElement.monomial(quiver, (1, 0), limit)
    commuting = _vertex_series(quiver, a_u, limit)
    z_plus = _vertex_series(quiver, expand_dt(r, trunc), limit, scale=-r) * y_inf

    lhs = z_plus * commuting
    rhs = commuting * y_inf
    for n in range(trunc + 1):
        alpha = (1, n)
        if lhs.coefficient(alpha) != rhs.coefficient(alpha):
            logger.debug("Wall-crossing mismatch for r=%d at %s", r, alpha)
            return WallCrossingReport(r, trunc, False, alpha)
    logger.debug("Wall-crossing identity holds for r=%d up to %d", r, trunc)
    return WallCrossingReport(r, trunc, True)


def require_wall_crossing(r: int, trunc: int) -> None:
    """Raise VerificationError unless ``wall_crossing_check`` passes."""
    report = wall_crossing_check(r, trunc)
    if not report:
        raise VerificationError(
            f"framed wall-crossing fails for r={r} at {report.first_mismatch}",
            where=report.first_mismatch,
        )


def phase(zeta: Sequence[float], alpha: Sequence[int]) -> float:
    """Phase of ``Z(a) = -zeta.a + |a| i`` as a number in (0, 1)."""
    if len(zeta) != len(alpha):
        raise InvalidConstructionError("zeta and alpha have different lengths")
    size = sum(alpha)
    if size <= 0:
        raise InvalidConstructionError("the phase of the zero vector is undefined")
    real = -sum(z * a for z, a in zip(zeta, alpha))
    return math.atan2(size, real) / math.pi


def framed_zeta(n: int, zeta: float) -> tuple[float, float]:
    """Framed stability ``(-n zeta, zeta)`` that makes ``(1, n)`` phase 1/2."""
    return (-n * zeta, zeta)


def _as_matrix(values: Any, rows: int, cols: int, name: str) -> ImmutableMatrix:
    try:
        matrix = ImmutableMatrix(values).applyfunc(Rational)
    except (TypeError, ValueError) as e:
        raise InvalidConstructionError(f"{name} is not a rational matrix: {values!r}") from e
    if rows == 0:
        return ImmutableMatrix(zeros(0, cols))
    if matrix.shape != (rows, cols):
        raise InvalidConstructionError(f"{name} has shape {matrix.shape}, expected {(rows, cols)}")
    return matrix


@dataclass(frozen=True)
class FramedRep:
    """Representation of the r-framed 3-loop quiver with ``C`` at infinity.

    ``u`` holds the images of the basis vector at infinity under the r
    framing arrows.
    """

    n: int
    a1: ImmutableMatrix
    a2: ImmutableMatrix
    a3: ImmutableMatrix
    u: tuple[ImmutableMatrix, ...]

    def __post_init__(self) -> None:
        require_nonnegative("n", self.n)
        for name in ("a1", "a2", "a3"):
            object.__setattr__(self, name, _as_matrix(getattr(self, name), self.n, self.n, name))
        if not self.u:
            raise InvalidConstructionError("a framed representation needs r >= 1 vectors")
        vectors = tuple(_as_matrix(v, self.n, 1, "u") for v in self.u)
        object.__setattr__(self, "u", vectors)

    @property
    def r(self) -> int:
        return len(self.u)

    @property
    def arrows(self) -> tuple[ImmutableMatrix, ImmutableMatrix, ImmutableMatrix]:
        return (self.a1, self.a2, self.a3)

    @classmethod
    def from_json(cls, data: Mapping[str, Any] | str) -> "FramedRep":
        """Read ``{"n": .., "A1": [[..]], "A2": .., "A3": .., "u": [[..], ..]}``.

        Entries may be ints or strings such as ``"3/4"``.
        """
        if isinstance(data, str):
            data = json.loads(data)
        try:
            n = int(data["n"])
            a1, a2, a3 = (
                [[Rational(x) for x in row] for row in data[key]] for key in ("A1", "A2", "A3")
            )
            u = tuple([Rational(x) for x in vec] for vec in data["u"])
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidConstructionError(f"malformed framed representation: {data!r}") from e
        return cls(n, a1, a2, a3, u)

    def change_basis(self, g: Any) -> "FramedRep":
        """Isomorphic representation ``(g A g^-1, g u)``."""
        g = _as_matrix(g, self.n, self.n, "g")
        if self.n and g.det() == 0:
            raise InvalidConstructionError("basis change must be invertible")
        g_inv = g.inv() if self.n else g
        return FramedRep(
            self.n,
            g * self.a1 * g_inv,
            g * self.a2 * g_inv,
            g * self.a3 * g_inv,
            tuple(g * v for v in self.u),
        )


def _reduce(vector: ImmutableMatrix, basis: list[tuple[int, ImmutableMatrix]]) -> ImmutableMatrix:
    for pivot, row in basis:
        if vector[pivot] != 0:
            vector = vector - (vector[pivot] / row[pivot]) * row
    return vector


def framed_span_basis(rep: FramedRep) -> list[ImmutableMatrix]:
    """Basis of the smallest subrepresentation containing every ``u``.

    Breadth-first closure under the three arrows with exact elimination; the
    pivot of each new vector is its first nonzero entry.
    """
    basis: list[tuple[int, ImmutableMatrix]] = []
    spanning: list[ImmutableMatrix] = []
    queue = list(rep.u)
    while queue and len(basis) < rep.n:
        candidate = queue.pop(0)
        reduced = _reduce(candidate, basis)
        if all(x == 0 for x in reduced):
            continue
        pivot = next(i for i, x in enumerate(reduced) if x != 0)
        basis.append((pivot, reduced))
        spanning.append(candidate)
        queue.extend(arrow * candidate for arrow in rep.arrows)
    return spanning


def framed_span(rep: FramedRep) -> int:
    return len(framed_span_basis(rep))


def is_stable_neg(rep: FramedRep) -> bool:
    """Stability for ``zeta < 0``: the framing vectors generate everything."""
    return framed_span(rep) == rep.n


def is_stable_pos(rep: FramedRep) -> bool:
    """Stability for ``zeta > 0``: only the zero representation survives."""
    return rep.n == 0


def _square_triple(*matrices: Any) -> tuple[ImmutableMatrix, ...]:
    converted = tuple(ImmutableMatrix(m) for m in matrices)
    shape = converted[0].shape
    if shape[0] != shape[1] or any(m.shape != shape for m in converted):
        raise InvalidConstructionError(
            f"expected square matrices of one size, got {[m.shape for m in converted]}"
        )
    return converted


def trace_potential(a1: Any, a2: Any, a3: Any) -> Any:
    """``Tr(A3 (A1 A2 - A2 A1))``."""
    a1, a2, a3 = _square_triple(a1, a2, a3)
    return (a3 * (a1 * a2 - a2 * a1)).trace()


def is_critical(a1: Any, a2: Any, a3: Any) -> bool:
    """True iff all three pairwise commutators vanish."""
    a1, a2, a3 = _square_triple(a1, a2, a3)
    return all(
        (x * y - y * x).is_zero_matrix for x, y in ((a1, a2), (a2, a3), (a3, a1))
    )
