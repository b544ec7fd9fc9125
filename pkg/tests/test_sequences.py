from fractions import Fraction

import pytest

from kakeya.errors import DomainError, ParseError, UndecidedAtCapError
from kakeya.exactnum import PHI, Interval, QuadRat, quad_sign
from kakeya.fibonacci import fib
from kakeya.sequences import (
    GOLDEN_BINET,
    CheckReport,
    CustomFinite,
    FibonacciReciprocal,
    Geometric,
    PerturbedGeometric,
    Verdict,
    kakeya_check,
    parse_descriptor,
    perturbation_check,
    ratio_condition_check,
    rho_check,
    special_indices,
)

FIB = FibonacciReciprocal()
GEO32 = Geometric(QuadRat(Fraction(3, 2)))
GEO2 = Geometric(QuadRat(Fraction(2)))


def fib_tail_oracle(n, terms=60):
    """Independent bracket: partial sum plus the doubling-bound envelope."""
    partial = sum(Fraction(1, fib(i)) for i in range(n + 1, n + terms + 1))
    last = Fraction(1, fib(n + terms + 1))
    return partial + 2 * last, partial + 3 * last


class TestTerms:
    def test_geometric(self):
        assert GEO2.term(3).rational_value == Fraction(1, 8)
        assert GEO32.term(2).rational_value == Fraction(4, 9)

    def test_fibonacci(self):
        assert FIB.term(5).rational_value == Fraction(1, 5)
        assert FIB.term(1).rational_value == 1

    def test_perturbed_golden_simplifies(self):
        pg = PerturbedGeometric(PHI, GOLDEN_BINET)
        assert pg.term(2) == QuadRat(Fraction(1))

    def test_perturbed_golden_equals_fibonacci_reciprocals(self):
        pg = PerturbedGeometric(PHI, GOLDEN_BINET)
        for i in range(1, 51):
            assert pg.term(i).rational_value == Fraction(1, fib(i))

    def test_golden_binet_bound_values(self):
        # bounds attained at i = 2 and i = 1
        assert GOLDEN_BINET.eps_inf == GOLDEN_BINET.eps(2)
        assert GOLDEN_BINET.eps_sup == GOLDEN_BINET.eps(1)
        assert GOLDEN_BINET.eps_inf == PHI ** -2 - 1
        assert GOLDEN_BINET.eps_sup == PHI ** -1 - 1

    def test_custom_range_checked(self):
        c = CustomFinite((Fraction(1, 2), Fraction(1, 4)), (Fraction(1, 2), Fraction(1, 2)))
        assert c.term(2).rational_value == Fraction(1, 4)
        with pytest.raises(DomainError):
            c.term(3)

    def test_index_must_be_positive(self):
        with pytest.raises(DomainError):
            FIB.term(0)

    def test_geometric_base_must_exceed_one(self):
        with pytest.raises(DomainError):
            Geometric(QuadRat(Fraction(1)))


class TestTails:
    def test_geometric_two_is_exact_one(self):
        iv = GEO2.tail_enclosure(0, Fraction(1, 10))
        assert iv == Interval(1, 1)

    def test_geometric_closed_form(self):
        # T_n == q**(-n) / (q-1), exactly
        for n in (0, 1, 5):
            assert GEO32.tail_exact(n) == GEO32.q ** (-n) / (GEO32.q - 1)

    def test_fibonacci_s_three_decimals(self):
        iv = FIB.tail_enclosure(0, Fraction(1, 1000))
        assert iv.width <= Fraction(1, 1000)
        assert round(float(iv.midpoint), 3) == 3.360

    def test_fibonacci_tail_three(self):
        iv = FIB.tail_enclosure(3, Fraction(1, 1000))
        lo, hi = fib_tail_oracle(3)
        assert iv.lo <= hi and lo <= iv.hi  # overlaps the independent bracket
        assert iv.width <= Fraction(1, 1000)
        assert round(float(iv.midpoint), 3) == 0.860

    def test_nesting(self):
        wide = FIB.tail_enclosure(4, Fraction(1, 100))
        narrow = FIB.tail_enclosure(4, Fraction(1, 10 ** 9))
        assert wide.lo <= narrow.lo and narrow.hi <= wide.hi

    def test_partial_sums_converge_from_below(self):
        iv = FIB.tail_enclosure(2, Fraction(1, 10 ** 12))
        for m in (5, 10, 30, 60):
            partial = sum(Fraction(1, fib(i)) for i in range(3, m + 1))
            assert partial <= iv.hi

    def test_perturbed_golden_tail_matches_fibonacci(self):
        pg = PerturbedGeometric(PHI, GOLDEN_BINET)
        a = pg.tail_enclosure(2, Fraction(1, 10 ** 6))
        b = FIB.tail_enclosure(2, Fraction(1, 10 ** 6))
        assert a.lo <= b.hi and b.lo <= a.hi  # same underlying value
        assert a.width <= Fraction(1, 10 ** 6)

    def test_custom_exact_when_ratio_pinned(self):
        c = CustomFinite(
            (Fraction(1, 2), Fraction(1, 4), Fraction(1, 8)),
            (Fraction(1, 2), Fraction(1, 2)),
        )
        iv = c.tail_enclosure(3, Fraction(1, 10 ** 9))
        assert iv == Interval(Fraction(1, 8), Fraction(1, 8))
        iv0 = c.tail_enclosure(0, Fraction(1, 10 ** 9))
        assert iv0 == Interval(1, 1)

    def test_custom_unreachable_width(self):
        c = CustomFinite(
            (Fraction(1, 2), Fraction(1, 4)), (Fraction(1, 3), Fraction(2, 3))
        )
        with pytest.raises(UndecidedAtCapError) as info:
            c.tail_enclosure(1, Fraction(1, 10 ** 6))
        assert info.value.best is not None
        assert info.value.best.lo <= info.value.best.hi


class TestKakeyaCheck:
    def test_geometric_three_halves_strict(self):
        assert kakeya_check(GEO32, 50, strict=True).all_hold

    def test_fibonacci_strict(self):
        assert kakeya_check(FIB, 100, strict=True).all_hold

    def test_geometric_two_equality_case(self):
        strict = kakeya_check(GEO2, 10, strict=True)
        assert strict.indices(Verdict.FAILS) == tuple(range(1, 11))
        assert all(n in strict.witnesses for n in range(1, 11))
        assert kakeya_check(GEO2, 10, strict=False).all_hold

    def test_geometric_past_two_fails(self):
        report = kakeya_check(Geometric(QuadRat(Fraction(21, 10))), 5, strict=False)
        assert report.indices(Verdict.FAILS) == tuple(range(1, 6))


class TestSpecialIndices:
    def test_fibonacci_small(self):
        members, report = special_indices(FIB, 10)
        assert members == {2, 4, 6, 8, 10}
        assert report.all_hold is False  # odd indices fail (they are not special)
        assert "finite-range" in report.note

    def test_fibonacci_even_odd_split_to_100(self):
        members, _ = special_indices(FIB, 100)
        assert members == set(range(2, 101, 2))

    def test_geometric_three_halves_all(self):
        members, _ = special_indices(GEO32, 10)
        assert members == set(range(2, 11))

    def test_geometric_two_none(self):
        members, _ = special_indices(GEO2, 10)
        assert members == set()

    def test_consistency_with_strict_kakeya(self):
        # if n is special then strict tail dominance holds at n-1
        members, _ = special_indices(FIB, 30)
        strict = kakeya_check(FIB, 30, strict=True)
        for n in members:
            assert strict.verdict(n - 1) is Verdict.HOLDS


class TestRatioCondition:
    def test_fibonacci(self):
        assert ratio_condition_check(FIB, 100).all_hold
        # equality exactly at n = 2: 1/F_2 == 2/F_3
        assert 2 * FIB.term(3) - FIB.term(2) == QuadRat(Fraction(0))
        assert all(
            quad_sign(2 * FIB.term(n + 1) - FIB.term(n)) > 0
            for n in range(1, 101)
            if n != 2
        )

    def test_geometric_nine_fifths(self):
        assert ratio_condition_check(Geometric(QuadRat(Fraction(9, 5))), 50).all_hold

    def test_geometric_past_two_fails_everywhere(self):
        report = ratio_condition_check(Geometric(QuadRat(Fraction(21, 10))), 5)
        assert report.indices(Verdict.FAILS) == tuple(range(1, 6))


class TestRho:
    def test_geometric_three_halves(self):
        result = rho_check(GEO32, 20)
        assert result.holds and result.rho == QuadRat(Fraction(2, 3))

    def test_geometric_seventeen_tenths(self):
        result = rho_check(Geometric(QuadRat(Fraction(17, 10))), 20)
        assert not result.holds and result.rho == QuadRat(Fraction(10, 17))

    def test_geometric_eight_fifths_barely_passes(self):
        # 5/8 > phi - 1 because 81/16 > 5
        result = rho_check(Geometric(QuadRat(Fraction(8, 5))), 20)
        assert result.holds and result.rho == QuadRat(Fraction(5, 8))

    def test_fibonacci_min_ratio_half(self):
        result = rho_check(FIB, 50)
        assert not result.holds and result.rho == QuadRat(Fraction(1, 2))


class TestPerturbationCheck:
    def test_golden_example_exact_equality(self):
        # eps_inf = -1/phi^4 = (3*sqrt5 - 7)/2, eps_sup = 1/phi^2 = (3 - sqrt5)/2
        eps_inf = QuadRat(Fraction(-7, 2), Fraction(3, 2))
        eps_sup = QuadRat(Fraction(3, 2), Fraction(-1, 2))
        assert eps_inf == -(PHI ** -4) and eps_sup == PHI ** -2
        result = perturbation_check(eps_inf, eps_sup, PHI)
        assert result.holds and result.equality
        assert result.ratio == PHI - 1

    def test_golden_binet_bounds_same_ratio(self):
        result = perturbation_check(GOLDEN_BINET.eps_inf, GOLDEN_BINET.eps_sup, PHI)
        assert result.holds and result.equality and result.ratio == PHI - 1

    def test_unperturbed(self):
        zero = QuadRat(Fraction(0))
        result = perturbation_check(zero, zero, QuadRat(Fraction(3, 2)))
        assert result.holds and not result.equality and result.ratio == QuadRat(Fraction(1))

    def test_failing_case(self):
        result = perturbation_check(
            QuadRat(Fraction(-1, 2)), QuadRat(Fraction(1)), QuadRat(Fraction(19, 10))
        )
        assert not result.holds and result.ratio == QuadRat(Fraction(1, 4))

    def test_preconditions(self):
        zero = QuadRat(Fraction(0))
        with pytest.raises(DomainError):
            perturbation_check(QuadRat(Fraction(-1)), zero, QuadRat(Fraction(3, 2)))
        with pytest.raises(DomainError):
            perturbation_check(QuadRat(Fraction(1)), zero, QuadRat(Fraction(3, 2)))
        with pytest.raises(DomainError):
            perturbation_check(zero, zero, QuadRat(Fraction(5, 2)))


class TestCheckReport:
    def test_witness_required_for_failures(self):
        with pytest.raises(DomainError):
            CheckReport("x", 1, 2, (Verdict.HOLDS, Verdict.FAILS), {})

    def test_verdict_lookup(self):
        report = kakeya_check(GEO2, 4, strict=True)
        assert report.verdict(1) is Verdict.FAILS
        with pytest.raises(DomainError):
            report.verdict(7)


class TestDescriptorSyntax:
    def test_named_families(self):
        assert parse_descriptor("fibonacci") == FIB
        assert parse_descriptor("geometric:3/2") == GEO32
        pg = parse_descriptor("perturbed-golden")
        assert isinstance(pg, PerturbedGeometric) and pg.q == PHI

    def test_labels_round_trip(self):
        for text in ("fibonacci", "geometric:3/2", "perturbed-golden", "geometric:1/2+1/2*sqrt5"):
            assert parse_descriptor(text).label() == text

    def test_custom_file(self, tmp_path):
        path = tmp_path / "seq.txt"
        path.write_text("1/2\n1/4\n1/8\ntail_ratio:1/2,1/2\n", encoding="utf-8")
        desc = parse_descriptor(f"custom:{path}")
        assert isinstance(desc, CustomFinite)
        assert desc.term(3).rational_value == Fraction(1, 8)
        assert desc.tail_ratio == (Fraction(1, 2), Fraction(1, 2))

    def test_custom_file_missing_ratio(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("1/2\n1/4\n", encoding="utf-8")
        with pytest.raises(ParseError):
            parse_descriptor(f"custom:{path}")

    def test_custom_rejects_nonpositive_terms(self):
        with pytest.raises(DomainError):
            CustomFinite((Fraction(0),), (Fraction(1, 2), Fraction(1, 2)))

    def test_custom_rejects_bad_ratio(self):
        with pytest.raises(DomainError):
            CustomFinite((Fraction(1),), (Fraction(1, 2), Fraction(3, 2)))

    def test_unknown_descriptor(self):
        with pytest.raises(ParseError):
            parse_descriptor("mystery")
