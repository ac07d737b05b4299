from fractions import Fraction as F

import pytest
from mpmath import mp

from hypeuler.field_tables import load_table, parse_table_text
from hypeuler.search_bounds import (
    VERDICT_CERTIFIED,
    VERDICT_INCONCLUSIVE,
    BoundsMode,
    PassOneClassNumberError,
    certify_section,
    class_number_bound,
    compute_bounds_pass,
    disc_upper_bound,
    enumerate_candidates,
    field_verdict,
    high_degree_exclusion,
)


@pytest.fixture(scope="module")
def table():
    return load_table()


def bound_oracle(r, d, mode):
    """Independent high-precision oracle for the discriminant cutoffs."""
    mp.dps = 60
    C = mp.mpf(1)
    for j in range(1, r + 1):
        C *= mp.factorial(2 * j - 1) / (2 * mp.pi) ** (2 * j)
    if mode is BoundsMode.CLASS_NUMBER_BOUNDED:
        rhs = 8 * (mp.pi / (6 * C)) ** d
        e = mp.mpf(r * r) + mp.mpf(r) / 2 - 1
    else:
        rhs = mp.mpf(1) / 2 * (2 / C) ** d
        e = mp.mpf(r * r) + mp.mpf(r) / 2
    return int(mp.floor(mp.exp(mp.log(rhs) / e)))


class TestClassNumberBound:
    def test_d2_disc5(self):
        iv = class_number_bound(2, 5)
        assert iv.lo > F(547, 100) and iv.hi < F(549, 100)
        assert iv.hi.__floor__() == 5  # h <= 5 for Q(sqrt 5)

    def test_scaling_in_disc(self):
        unit = class_number_bound(2, 1)
        scaled = class_number_bound(2, 7)
        assert scaled.lo == unit.lo * 7 and scaled.hi == unit.hi * 7

    def test_d3_disc49(self):
        iv = class_number_bound(3, 49).outward_round(120)
        mp.dps = 40
        true = 16 * (mp.pi / 12) ** 3 * 49
        assert mp.mpf(iv.lo.numerator) / iv.lo.denominator <= true
        assert mp.mpf(iv.hi.numerator) / iv.hi.denominator >= true


class TestDiscUpperBounds:
    def test_published_rank3_bounds(self):
        assert disc_upper_bound(3, 2) == 28
        assert disc_upper_bound(3, 3) == 134
        assert disc_upper_bound(3, 4) == 640

    def test_refined_bounds(self):
        one = BoundsMode.CLASS_NUMBER_ONE
        assert disc_upper_bound(3, 2, one) == 20
        assert disc_upper_bound(4, 2, one) == 11
        assert disc_upper_bound(5, 2, one) == 7

    @pytest.mark.parametrize("r", range(3, 9))
    @pytest.mark.parametrize("d", (2, 3, 4))
    @pytest.mark.parametrize("mode", list(BoundsMode))
    def test_against_oracle(self, r, d, mode):
        assert disc_upper_bound(r, d, mode) == bound_oracle(r, d, mode)

    @pytest.mark.parametrize("d", (2, 3, 4))
    def test_nonincreasing_in_rank(self, d):
        values = [disc_upper_bound(r, d) for r in range(3, 13)]
        assert values == sorted(values, reverse=True)

    @pytest.mark.parametrize("r", (3, 4, 5, 6))
    @pytest.mark.parametrize("d", (2, 3, 4))
    def test_cutoff_tight_and_decisive(self, r, d):
        for mode in BoundsMode:
            p = compute_bounds_pass(r, d, mode)
            X, e2 = p.disc_upper, p.doubled_exponent
            # at X the bound stays admissible, at X+1 it rigorously exceeds 1
            assert F(X) ** e2 <= p.threshold_squared.hi
            assert F(X + 1) ** e2 > p.threshold_squared.hi
            # the enclosure is tight enough that both endpoints agree
            assert p.enclosure_decisive


class TestHighDegreeExclusion:
    @pytest.mark.parametrize("r", (3, 4, 5))
    def test_degree_five_floor(self, r):
        hd = high_degree_exclusion(r)
        assert hd.growth_factor.strictly_greater_than(1)
        assert hd.value_at_degree_five.strictly_greater_than(1)

    def test_growth_factor_rank3_magnitude(self):
        hd = high_degree_exclusion(3)
        mp.dps = 40
        C3 = mp.mpf(1)
        for j in (1, 2, 3):
            C3 *= mp.factorial(2 * j - 1) / (2 * mp.pi) ** (2 * j)
        true = (6 * C3 / mp.pi) * mp.mpf(6.5) ** mp.mpf(9.5)
        lo = mp.mpf(hd.growth_factor.lo.numerator) / hd.growth_factor.lo.denominator
        hi = mp.mpf(hd.growth_factor.hi.numerator) / hd.growth_factor.hi.denominator
        assert lo <= true <= hi

    def test_rank6_low_degree_rows(self, table):
        hd = high_degree_exclusion(6, table=table)
        rows = {row.degree: row for row in hd.low_degree}
        assert rows[2].disc_upper == 5 and rows[2].minimal_disc == 5 and not rows[2].excluded
        assert rows[3].excluded and rows[4].excluded
        assert not hd.low_degrees_excluded

    @pytest.mark.parametrize("r", range(7, 13))
    def test_rank7_and_up_fully_excluded(self, r, table):
        assert high_degree_exclusion(r, table=table).low_degrees_excluded


class TestEnumeration:
    def test_rank3_candidates(self, table):
        e = enumerate_candidates(3, table)
        assert [(rec.degree, rec.disc) for rec in e.records] == [
            (2, 5), (2, 8), (2, 12), (2, 13), (2, 17), (3, 49), (3, 81),
        ]
        assert all(rec.h == 1 for rec in e.records)

    def test_rank4_candidates(self, table):
        e = enumerate_candidates(4, table)
        assert [(rec.degree, rec.disc) for rec in e.records] == [(2, 5), (2, 8)]
        # the cubic possibility dies in pass one already
        d3 = next(a for a in e.audits if a.degree == 3)
        assert d3.pass_one.disc_upper < 49 and d3.pass_one_discs == ()

    def test_rank5_candidates(self, table):
        e = enumerate_candidates(5, table)
        assert [(rec.degree, rec.disc) for rec in e.records] == [(2, 5)]

    def test_pass_two_subset_of_pass_one(self, table):
        for r in (3, 4, 5):
            for audit in enumerate_candidates(r, table).audits:
                assert set(audit.pass_two_discs) <= set(audit.pass_one_discs)
                assert audit.pass_two.disc_upper <= audit.pass_one.disc_upper

    def test_pass_one_class_number_guard(self):
        doctored = """hypeuler-fields v1
# completeness: 2 1000
# completeness: 3 1000
# completeness: 4 1000
2.2.5.1|2|5|2|1|1|5|-
"""
        t = parse_table_text(doctored)
        with pytest.raises(PassOneClassNumberError, match="2.2.5.1"):
            enumerate_candidates(3, t)


class TestFieldVerdicts:
    def test_rank3_field_verdict(self, table):
        v = field_verdict(table.by_disc(2, 5), 3, precision_bits=128)
        assert v.conclusion == "obstructed"
        assert v.obstruction.witness == 67
        assert v.dual_path.contains

    def test_witness_divides_odd_numerator(self, table):
        for D in (8, 12, 13, 17):
            v = field_verdict(table.by_disc(2, D), 3, dual_path=False)
            assert v.obstruction.odd_numerator % v.obstruction.witness == 0


EXPECTED_WITNESSES = {
    3: {5: 67, 8: 11, 12: 23, 13: 29, 17: 41, 49: 79, 81: 43},
    4: {5: 19, 8: 11},
    5: {5: 19},
}


class TestCertifySections:
    @pytest.mark.parametrize("r", (3, 4, 5))
    def test_low_rank_sections(self, r, table):
        s = certify_section(r, table, precision_bits=128)
        assert s.verdict == VERDICT_CERTIFIED
        assert s.kind == "field-verdicts"
        got = {v.record.disc: v.obstruction.witness for v in s.verdicts}
        assert got == EXPECTED_WITNESSES[r]
        assert s.local_factor_proof is not None and s.calibration is not None

    def test_rank2_failure_demo(self, table):
        s = certify_section(2, table, precision_bits=128)
        assert s.verdict == VERDICT_INCONCLUSIVE
        assert s.kind == "failure-demo"
        assert s.verdicts[-1].record.disc == 5
        assert not s.verdicts[-1].obstruction.obstructed
        assert any("trivial odd" in note for note in s.notes)

    def test_rank6_obstruction_fallback(self, table):
        s = certify_section(6, table, precision_bits=128)
        assert s.kind == "bound-exclusion"
        assert s.verdict == VERDICT_CERTIFIED
        assert not s.high_degree.low_degrees_excluded  # D = 5 survives the bounds
        got = {v.record.disc: v.obstruction.witness for v in s.verdicts}
        assert got == {5: 19}
        assert s.local_factor_proof is not None  # integrality re-proved at rank 6

    @pytest.mark.parametrize("r", (7, 9, 12))
    def test_high_rank_bound_only(self, r, table):
        s = certify_section(r, table, precision_bits=128)
        assert s.kind == "bound-exclusion"
        assert s.verdict == VERDICT_CERTIFIED
        assert s.verdicts == ()
        assert s.high_degree.low_degrees_excluded
