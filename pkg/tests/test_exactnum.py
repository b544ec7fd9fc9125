import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kakeya.errors import DomainError, ParseError
from kakeya.exactnum import (
    PHI,
    SQRT5,
    Interval,
    IntervalOrder,
    QuadRat,
    format_scalar,
    interval_cmp,
    parse_rational,
    parse_scalar,
    quad_sign,
    quad_to_interval,
    sqrt5_enclosure,
)

fractions = st.fractions(
    min_value=Fraction(-50), max_value=Fraction(50), max_denominator=40
)
quadrats = st.builds(QuadRat, fractions, fractions)


# 20 correct digits of phi from integer square roots, independent of the
# library's own sqrt5 machinery.
PHI_20DP = Fraction(10 ** 20 + math.isqrt(5 * 10 ** 40), 2 * 10 ** 20)


class TestQuadSign:
    def test_zero(self):
        assert quad_sign(QuadRat(Fraction(0), Fraction(0))) == 0

    def test_one_minus_sqrt5_negative(self):
        assert quad_sign(QuadRat(Fraction(1), Fraction(-1))) == -1

    def test_phi_minus_one_positive(self):
        assert quad_sign(QuadRat(Fraction(-1, 2), Fraction(1, 2))) == 1

    def test_pure_parts(self):
        assert quad_sign(QuadRat(Fraction(-3), Fraction(0))) == -1
        assert quad_sign(QuadRat(Fraction(0), Fraction(2))) == 1
        assert quad_sign(QuadRat(Fraction(0), Fraction(-2))) == -1

    @given(quadrats, quadrats)
    def test_multiplicative(self, x, y):
        assert quad_sign(x * y) == quad_sign(x) * quad_sign(y)


class TestQuadRatField:
    def test_phi_defining_identity(self):
        assert PHI ** 2 == PHI + 1

    def test_sqrt5_squares_to_five(self):
        assert SQRT5 * SQRT5 == QuadRat(Fraction(5))

    def test_inverse_of_phi(self):
        assert PHI.inverse() == PHI - 1

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            PHI / QuadRat(Fraction(0))

    def test_negative_powers(self):
        assert PHI ** -2 == (PHI ** 2).inverse()
        assert PHI ** 0 == QuadRat(Fraction(1))

    def test_ordering_through_signs(self):
        assert PHI > 1 and PHI < 2
        assert QuadRat(Fraction(8, 5)) < PHI < QuadRat(Fraction(13, 8))

    @given(fractions, fractions)
    def test_rational_embedding_add_mul(self, p, q):
        # b = 0 elements behave exactly like plain fractions
        assert (QuadRat(p) + QuadRat(q)).rational_value == p + q
        assert (QuadRat(p) * QuadRat(q)).rational_value == p * q
        assert (QuadRat(p) - QuadRat(q)).rational_value == p - q

    @given(fractions, fractions)
    def test_rational_embedding_div(self, p, q):
        if q != 0:
            assert (QuadRat(p) / QuadRat(q)).rational_value == p / q

    @given(quadrats)
    def test_conjugation_norm(self, x):
        assert (x * x.conjugate()).rational_value == x.norm()


class TestInterval:
    def test_orientation_enforced(self):
        with pytest.raises(DomainError):
            Interval(Fraction(1), Fraction(0))

    def test_cmp_trivial(self):
        assert interval_cmp(Interval(0, 1), Interval(2, 3)) is IntervalOrder.LT
        assert interval_cmp(Interval(0, 2), Interval(1, 3)) is IntervalOrder.OVERLAP
        assert interval_cmp(Interval(5, 6), Interval(1, 2)) is IntervalOrder.GT

    def test_arithmetic_is_outward(self):
        a, b = Interval(0, 1), Interval(Fraction(1, 2), 2)
        assert (a + b) == Interval(Fraction(1, 2), 3)
        assert (a - b) == Interval(-2, Fraction(1, 2))
        assert b.scale(-2) == Interval(-4, -1)

    def test_intersect_disjoint_raises(self):
        with pytest.raises(DomainError):
            Interval(0, 1).intersect(Interval(2, 3))


class TestEnclosures:
    def test_sqrt5_bracket(self):
        iv = sqrt5_enclosure(Fraction(1, 10 ** 12))
        assert iv.width <= Fraction(1, 10 ** 12)
        assert iv.lo ** 2 < 5 < iv.hi ** 2

    def test_phi_enclosure_contains_reference(self):
        iv = quad_to_interval(PHI, Fraction(1, 100))
        assert iv.width <= Fraction(1, 100)
        assert iv.lo <= PHI_20DP <= iv.hi

    def test_rational_embeds_exactly(self):
        assert quad_to_interval(QuadRat(Fraction(0)), Fraction(1)) == Interval(0, 0)
        assert quad_to_interval(QuadRat(Fraction(1)), Fraction(1, 7)) == Interval(1, 1)

    def test_negative_b_orientation(self):
        x = QuadRat(Fraction(0), Fraction(-1))  # -sqrt5
        iv = quad_to_interval(x, Fraction(1, 1000))
        assert iv.lo <= -PHI_20DP * 2 + 1 <= iv.hi  # -sqrt5 == 1 - 2*phi

    def test_width_must_be_positive(self):
        with pytest.raises(DomainError):
            quad_to_interval(PHI, Fraction(0))

    @given(quadrats, st.integers(min_value=1, max_value=12))
    def test_nesting_under_halving(self, x, k):
        wide = quad_to_interval(x, Fraction(1, 2 ** k))
        narrow = quad_to_interval(x, Fraction(1, 2 ** (k + 1)))
        merged = wide.intersect(narrow)
        assert merged.lo >= wide.lo and merged.hi <= wide.hi
        assert wide.width <= Fraction(1, 2 ** k)
        assert narrow.width <= Fraction(1, 2 ** (k + 1))


class TestTextSyntax:
    @pytest.mark.parametrize("text", ["17", "-3", "3/7", "-3/7", "0"])
    def test_rational_round_trip(self, text):
        assert format_scalar(parse_rational(text)) == text

    @pytest.mark.parametrize(
        "text,value",
        [
            ("1/2+1/2*sqrt5", PHI),
            ("1/2-1/2*sqrt5", PHI.conjugate()),
            ("0+1*sqrt5", SQRT5),
            ("-2+3/4*sqrt5", QuadRat(Fraction(-2), Fraction(3, 4))),
            ("5", QuadRat(Fraction(5))),
        ],
    )
    def test_scalar_parse(self, text, value):
        assert parse_scalar(text) == value

    @given(quadrats)
    def test_scalar_round_trip(self, x):
        assert parse_scalar(format_scalar(x)) == x

    @pytest.mark.parametrize("bad", ["", "x", "1/0", "sqrt5", "1.5", "1+2sqrt5", "1/2+*sqrt5"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(ParseError):
            parse_scalar(bad)
