import random
from fractions import Fraction as F

import pytest
from mpmath import mp

from hypeuler.euler_char import (
    ArithmeticDatum,
    C_of_r,
    ClassNumberPreconditionError,
    EulerCharError,
    build_euler_char,
    chi_principal_exact,
    chi_principal_from_values,
    chi_principal_numeric,
    index_divisor,
    reciprocal_integer_obstruction,
    smallest_odd_prime_factor,
)
from hypeuler.exact_arith import two_adic_valuation
from hypeuler.field_tables import load_table
from hypeuler.local_factors import Kind, LocalFactor, ParahoricType, enumerate_maximal_types


@pytest.fixture(scope="module")
def table():
    return load_table()


def datum(table, D, r, degree=2, factors=()):
    return ArithmeticDatum(field=table.by_disc(degree, D), r=r, local_factors=tuple(factors))


class TestRankConstant:
    def test_symbolic_pairs(self):
        c1 = C_of_r(1)
        assert (c1.factorial_product, c1.two_pi_exponent) == (1, 2)
        c2 = C_of_r(2)
        assert (c2.factorial_product, c2.two_pi_exponent) == (6, 6)
        c3 = C_of_r(3)
        assert (c3.factorial_product, c3.two_pi_exponent) == (720, 12)

    def test_enclosure_against_mpmath(self):
        mp.dps = 50
        for r in range(1, 9):
            # round outward to short dyadics so the mpf conversion is exact
            iv = C_of_r(r).interval.outward_round(120)
            true = mp.mpf(1)
            for j in range(1, r + 1):
                true *= mp.factorial(2 * j - 1) / (2 * mp.pi) ** (2 * j)
            lo = mp.mpf(iv.lo.numerator) / iv.lo.denominator
            hi = mp.mpf(iv.hi.numerator) / iv.hi.denominator
            assert lo <= true <= hi

    def test_r1_is_inverse_four_pi_squared(self):
        # 1/(4 pi^2) = 0.0253302...
        c = C_of_r(1)
        assert c.interval.lo > F(2533, 100000) and c.interval.hi < F(2534, 100000)


class TestChiExact:
    def test_dimension_four_value(self, table):
        assert chi_principal_exact(datum(table, 5, 2)) == F(1, 14400)

    def test_rank_three_value(self, table):
        assert chi_principal_exact(datum(table, 5, 3)) == F(67, 36288000)

    def test_local_factor_multiplicativity(self, table):
        lf = LocalFactor.at(ParahoricType("split", Kind.TOP_D), 3, 2)  # value 9
        base = chi_principal_exact(datum(table, 5, 3))
        assert chi_principal_exact(datum(table, 5, 3, factors=[lf])) == 9 * base

    def test_multiplicativity_random(self, table):
        rng = random.Random(5)
        base = chi_principal_exact(datum(table, 8, 3))
        types = enumerate_maximal_types(3)
        for _ in range(10):
            chosen = rng.sample(types, rng.randint(1, 3))
            lfs = [LocalFactor.at(t, 3, rng.choice([2, 3, 4, 5])) for t in chosen]
            expect = base
            for lf in lfs:
                expect *= lf.value
            assert chi_principal_exact(datum(table, 8, 3, factors=lfs)) == expect

    def test_closed_form_takes_no_discriminant(self):
        # structural: the exact path is a function of (r, degree, zetas, lambdas) only
        import inspect

        params = inspect.signature(chi_principal_from_values).parameters
        assert "disc" not in params and "field" not in params

    def test_wrong_zeta_count_rejected(self):
        with pytest.raises(EulerCharError):
            chi_principal_from_values(3, 2, [F(1, 30)], [])


class TestChiNumeric:
    def test_contains_exact_dimension_four(self, table):
        d = datum(table, 5, 2)
        enc = chi_principal_numeric(d, precision_bits=128)
        assert chi_principal_exact(d) in enc
        assert F(1, 14400) in enc

    def test_contains_exact_rank_three_cubic(self, table):
        d = datum(table, 49, 3, degree=3)
        enc = chi_principal_numeric(d, precision_bits=128)
        assert chi_principal_exact(d) in enc

    def test_width_contract(self, table):
        d = datum(table, 5, 3)
        enc = chi_principal_numeric(d, precision_bits=192)
        exact = chi_principal_exact(d)
        assert enc.width / exact < F(1, 10**8)


class TestIndexDivisor:
    def test_examples(self):
        assert index_divisor(1, 2, 0) == 4
        assert index_divisor(1, 3, 2) == 128
        assert index_divisor(3, 2, 1) == 48

    def test_invalid(self):
        with pytest.raises(EulerCharError):
            index_divisor(0, 2, 0)


class TestEulerCharRecord:
    def test_two_exponent(self, table):
        e = build_euler_char(datum(table, 5, 3))
        assert e.chi_lambda == F(67, 36288000)
        assert e.index_divisor == 4
        assert e.chi_gamma_lower == F(67, 145152000)
        assert e.two_exponent == -two_adic_valuation(e.chi_gamma_lower)
        # odd part of the numerator is stable under any power of 2
        from hypeuler.exact_arith import odd_part_of_numerator

        assert odd_part_of_numerator(e.chi_lambda) == odd_part_of_numerator(e.chi_lambda / 1024)


class TestObstruction:
    def test_rank3_d5(self, table):
        v = reciprocal_integer_obstruction(datum(table, 5, 3))
        assert v.obstructed and v.witness == 67

    def test_rank4_d8_smallest_witness(self, table):
        v = reciprocal_integer_obstruction(datum(table, 8, 4))
        # numerator carries 11, 19^2 and 24611; the smallest prime wins
        assert v.witness == 11
        assert v.odd_numerator % 361 == 0 and v.odd_numerator % 24611 == 0

    def test_rank2_d5_unobstructed(self, table):
        v = reciprocal_integer_obstruction(datum(table, 5, 2))
        assert not v.obstructed
        assert v.product == F(1, 1800) and v.odd_numerator == 1

    def test_class_number_precondition(self, table):
        with pytest.raises(ClassNumberPreconditionError):
            reciprocal_integer_obstruction(datum(table, 40, 3))  # h = 2

    def test_smallest_odd_prime_factor(self):
        assert smallest_odd_prime_factor(1) is None
        assert smallest_odd_prime_factor(361) == 19
        assert smallest_odd_prime_factor(67 * 19 * 19) == 19

    def test_obstruction_soundness_property(self, table):
        """If a field is obstructed with witness p, then chi(Lambda)/m has
        numerator divisible by p for every local-factor multiset and every
        divisor m of the index bound."""
        rng = random.Random(17)
        v = reciprocal_integer_obstruction(datum(table, 5, 3))
        p = v.witness
        types = enumerate_maximal_types(3)
        for _ in range(60):
            lfs = [
                LocalFactor.at(t, 3, rng.choice([2, 3, 4, 5, 7, 8, 9]))
                for t in rng.sample(types, rng.randint(0, 3))
            ]
            d = datum(table, 5, 3, factors=lfs)
            chi = chi_principal_exact(d)
            bound = index_divisor(1, 2, len(lfs))
            divisors = [m for m in range(1, bound + 1) if bound % m == 0]
            m = rng.choice(divisors)
            assert (chi / m).numerator % p == 0
