"""Tests for the coefficient ring."""

import random
import unittest
from fractions import Fraction

from dtpoints_app.errors import InvalidConstructionError, PoleError
from dtpoints_app.ring import (
    ONE,
    ONE_POLY,
    ZERO,
    TPoly,
    TRat,
    canonicalize,
    eval_at,
    eval_at_lefschetz,
    gl_class,
    gl_class_virtual,
)


def _random_poly(rng: random.Random, low: int = -3, high: int = 3) -> TPoly:
    return TPoly({e: rng.randint(-3, 3) for e in range(low, high + 1) if rng.random() < 0.5})


def _random_den(rng: random.Random) -> TPoly:
    while True:
        den = TPoly({e: rng.randint(-2, 2) for e in range(0, 3)})
        if not den.is_zero():
            return den


def _random_rat(rng: random.Random) -> TRat:
    return TRat(_random_poly(rng), _random_den(rng))


class TestTPoly(unittest.TestCase):
    """Tests for Laurent polynomials."""

    def test_zero_coefficients_dropped(self):
        """Zero coefficients never appear in the term map."""
        poly = TPoly({0: 1, 2: 0, -1: 3})
        self.assertEqual(dict(poly.terms), {0: 1, -1: 3})

    def test_non_integer_rejected(self):
        """Only integer coefficients are accepted."""
        with self.assertRaises(InvalidConstructionError):
            TPoly({0: 1.5})

    def test_multiplication(self):
        """(1 + T)(1 - T) = 1 - T^2."""
        self.assertEqual(TPoly({0: 1, 1: 1}) * TPoly({0: 1, 1: -1}), TPoly({0: 1, 2: -1}))

    def test_substitute_power_signed(self):
        """T -> -T^2 flips odd exponents."""
        poly = TPoly({1: 1, 2: 1})
        self.assertEqual(poly.substitute_power(2, -1), TPoly({2: -1, 4: 1}))

    def test_str(self):
        """Human-readable rendering."""
        self.assertEqual(str(TPoly({0: 1, 2: -1, 3: 2})), "1 - T^2 + 2*T^3")

    def test_pole_at_zero(self):
        """Negative exponents cannot be evaluated at zero."""
        with self.assertRaises(PoleError):
            TPoly({-1: 1}).eval_at(0)

    def test_json_round_trip(self):
        """JSON keeps exponents and big coefficients exact."""
        poly = TPoly({-5: 10**30, 7: -1})
        self.assertEqual(TPoly.from_json(poly.to_json()), poly)

    def test_malformed_json(self):
        """Bad JSON is a construction error."""
        with self.assertRaises(InvalidConstructionError):
            TPoly.from_json({"a": "1"})


class TestCanonicalize(unittest.TestCase):
    """Tests for the canonical form of rational functions."""

    def test_common_factor_removed(self):
        """(T^2 - 1)/(T - 1) reduces to T + 1."""
        value = canonicalize(TPoly({2: 1, 0: -1}), TPoly({1: 1, 0: -1}))
        self.assertEqual(value.num, TPoly({0: 1, 1: 1}))
        self.assertEqual(value.den, ONE_POLY)

    def test_monomial_denominator_moves(self):
        """T / T^3 becomes T^-2 over 1."""
        value = canonicalize(TPoly({1: 1}), TPoly({3: 1}))
        self.assertTrue(value.is_laurent())
        self.assertEqual(value.num, TPoly({-2: 1}))

    def test_integer_content_and_sign(self):
        """2 / -4 becomes -1 / 2."""
        value = canonicalize(TPoly.constant(2), TPoly.constant(-4))
        self.assertEqual(value.num, TPoly.constant(-1))
        self.assertEqual(value.den, TPoly.constant(2))

    def test_leading_coefficient_positive(self):
        """1 / (1 - T) is stored as -1 / (T - 1)."""
        value = TRat(1, TPoly({0: 1, 1: -1}))
        self.assertEqual(value.num, TPoly.constant(-1))
        self.assertEqual(value.den, TPoly({1: 1, 0: -1}))

    def test_sign_and_shift(self):
        """1 / (-2T) becomes -T^-1 / 2."""
        value = canonicalize(ONE_POLY, TPoly({1: -2}))
        self.assertEqual(value.num, TPoly({-1: -1}))
        self.assertEqual(value.den, TPoly.constant(2))

    def test_monomial_shift(self):
        """(T^4 - T^2) / T^3 is T - T^-1."""
        value = canonicalize(TPoly({4: 1, 2: -1}), TPoly({3: 1}))
        self.assertEqual(value, TRat(TPoly({1: 1, -1: -1})))

    def test_inverse_of_one_minus_l_inverse(self):
        """1 / (1 - T^-2) = T^2 / (T^2 - 1)."""
        value = ONE / TRat(TPoly({0: 1, -2: -1}))
        self.assertEqual(value, TRat(TPoly({2: 1}), TPoly({2: 1, 0: -1})))
        self.assertEqual(value * TRat(TPoly({0: 1, -2: -1})), ONE)

    def test_zero_denominator(self):
        """A zero denominator is rejected."""
        with self.assertRaises(InvalidConstructionError):
            canonicalize(ONE_POLY, TPoly())

    def test_zero_numerator(self):
        """Zero has the unique form 0 / 1."""
        self.assertEqual(canonicalize(TPoly(), TPoly({1: 1, 0: 3})), ZERO)

    def test_canonical_forms_are_unique(self):
        """Equal fractions built differently compare equal."""
        rng = random.Random(7)
        for _ in range(1000):
            a = _random_rat(rng)
            factor = _random_den(rng)
            if a.is_zero():
                continue
            rebuilt = canonicalize(a.num * factor, a.den * factor)
            self.assertEqual(rebuilt, a)
            self.assertEqual(hash(rebuilt), hash(a))

    def test_invariants_hold(self):
        """Canonical denominators have a constant term and positive leading coefficient."""
        rng = random.Random(11)
        for _ in range(1000):
            value = _random_rat(rng)
            if value.is_zero():
                continue
            self.assertGreaterEqual(value.den.min_exp, 0)
            self.assertNotEqual(value.den.coefficient(0), 0)
            self.assertGreater(value.den.leading_coeff, 0)


class TestTRatArithmetic(unittest.TestCase):
    """Field axioms on random rational functions."""

    def test_field_axioms(self):
        """Commutativity, associativity and distributivity on 1000 seeded cases."""
        rng = random.Random(2024)
        for _ in range(1000):
            a, b, c = _random_rat(rng), _random_rat(rng), _random_rat(rng)
            self.assertEqual(a + b, b + a)
            self.assertEqual(a * b, b * a)
            self.assertEqual((a + b) + c, a + (b + c))
            self.assertEqual(a * (b + c), a * b + a * c)
            self.assertEqual(a - a, ZERO)

    def test_division_inverts_multiplication(self):
        """(a * b) / b == a for nonzero b."""
        rng = random.Random(99)
        for _ in range(1000):
            a, b = _random_rat(rng), _random_rat(rng)
            if b.is_zero():
                continue
            self.assertEqual((a * b) / b, a)

    def test_division_by_zero(self):
        """Dividing by zero raises PoleError."""
        with self.assertRaises(PoleError):
            ONE / ZERO

    def test_negative_power(self):
        """T^-2 times T^2 is one."""
        t = TRat.monomial(1)
        self.assertEqual(t**-2 * t**2, ONE)

    def test_json_round_trip(self):
        """TRat JSON round-trips."""
        value = TRat(TPoly({0: 3, 2: -1}), TPoly({0: 1, 3: 2}))
        self.assertEqual(TRat.from_json(value.to_json()), value)


class TestEvaluation(unittest.TestCase):
    """Tests for evaluating ring elements."""

    def test_exact_evaluation(self):
        """(T + 1)/(T - 2) at T = 3 is 4."""
        value = TRat(TPoly({1: 1, 0: 1}), TPoly({1: 1, 0: -2}))
        self.assertEqual(eval_at(value, 3), Fraction(4))

    def test_pole(self):
        """1/(T - 1) has a pole at 1."""
        with self.assertRaises(PoleError):
            eval_at(TRat(1, TPoly({1: 1, 0: -1})), 1)

    def test_small_examples(self):
        """T^3 at -1 and L^2/(L - 1) at L = 2."""
        self.assertEqual(eval_at(TPoly({3: 1}), -1), -1)
        value = TRat(TPoly({4: 1}), TPoly({2: 1, 0: -1}))
        self.assertEqual(eval_at_lefschetz(value, 2), 4)

    def test_float_evaluation(self):
        """Float input gives a float."""
        self.assertAlmostEqual(eval_at(TPoly({2: 1, 0: 1}), 0.5), 1.25)

    def test_lefschetz_needs_even_exponents(self):
        """Odd powers of T have no value at a given L."""
        with self.assertRaises(InvalidConstructionError):
            eval_at_lefschetz(TPoly({1: 1}), 2)


class TestGLClass(unittest.TestCase):
    """Tests for the class of GL_n."""

    def test_matches_group_orders(self):
        """|GL_n(F_q)| for small n and q."""
        expected = {(1, 2): 1, (1, 3): 2, (2, 2): 6, (2, 3): 48, (3, 2): 168}
        for (n, q), order in expected.items():
            self.assertEqual(eval_at_lefschetz(gl_class(n), q), order)

    def test_trivial_group(self):
        """GL_0 has class one."""
        self.assertEqual(gl_class(0), ONE_POLY)

    def test_virtual_class(self):
        """L^(-n^2/2)[GL_n] shifts by -n^2 in T."""
        self.assertEqual(gl_class_virtual(2), gl_class(2).shift(-4))
        self.assertEqual(gl_class_virtual(2).max_exp, 4)


if __name__ == "__main__":
    unittest.main()
