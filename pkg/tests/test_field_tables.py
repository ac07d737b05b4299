from pathlib import Path

import pytest

from hypeuler.field_tables import (
    HEADER,
    ChecksumError,
    CompletenessError,
    TableFormatError,
    TableInvariantError,
    checksum_of_text,
    fundamental_unit,
    is_fundamental_discriminant,
    load_table,
    parse_table_text,
    quadratic_class_number,
    query,
    validate_table,
)


@pytest.fixture(scope="module")
def table():
    return load_table()


def write_with_checksum(tmp_path: Path, text: str, name: str = "fields.txt") -> Path:
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    (tmp_path / (name + ".sha256")).write_text(checksum_of_text(text) + "\n", encoding="utf-8")
    return p


MINI_TABLE = """hypeuler-fields v1
# completeness: 2 1000
# completeness: 3 1000
# completeness: 4 1000
# source: test fixture
2.2.5.1|2|5|1|1|1|5|-
2.2.8.1|2|8|1|1|1|8|-
3.3.49.1|3|49|1|1|1|7|3:1:3
4.4.725.1|4|725|1|1|0|-|-
"""


class TestLoading:
    def test_bundled_table_loads(self, table):
        assert table.by_disc(2, 5).h == 1
        rec49 = table.by_disc(3, 49)
        assert rec49.h == 1 and rec49.conductor == 7 and rec49.abelian
        assert table.by_disc(4, 725) is not None
        assert table.completeness == {2: 1000, 3: 1000, 4: 1000}
        assert table.source

    def test_bundled_has_all_small_quadratics(self, table):
        discs = [r.disc for r in table.records if r.degree == 2]
        assert discs[:8] == [5, 8, 12, 13, 17, 21, 24, 28]
        assert len(discs) == 302

    def test_minimal_quartic_is_725(self, table):
        assert table.minimal_disc(4) == 725

    def test_duplicate_detection(self, tmp_path):
        text = MINI_TABLE + "2.2.5.2|2|5|1|1|1|5|-\n"
        with pytest.raises(TableInvariantError, match="duplicate"):
            parse_table_text(text)

    def test_header_required(self):
        with pytest.raises(TableFormatError, match="header"):
            parse_table_text("wrong header v9\n")

    def test_field_count_enforced(self):
        with pytest.raises(TableFormatError, match="8 fields"):
            parse_table_text(HEADER + "\n# completeness: 2 1000\n# completeness: 3 1000\n# completeness: 4 1000\n2.2.5.1|2|5|1\n")

    def test_completeness_floor_enforced(self):
        text = MINI_TABLE.replace("# completeness: 3 1000\n", "")
        with pytest.raises(TableInvariantError, match="completeness"):
            parse_table_text(text)

    def test_checksum_mismatch(self, tmp_path):
        p = write_with_checksum(tmp_path, MINI_TABLE)
        (tmp_path / "fields.txt.sha256").write_text("0" * 64 + "\n")
        with pytest.raises(ChecksumError, match="mismatch"):
            load_table(p)

    def test_checksum_missing(self, tmp_path):
        p = tmp_path / "fields.txt"
        p.write_text(MINI_TABLE, encoding="utf-8")
        with pytest.raises(ChecksumError, match="missing"):
            load_table(p)

    def test_round_trip_via_file(self, tmp_path):
        p = write_with_checksum(tmp_path, MINI_TABLE)
        t = load_table(p)
        assert len(t.records) == 4
        assert t.checksum == checksum_of_text(MINI_TABLE)


class TestQuery:
    def test_quadratic_up_to_20(self, table):
        assert [r.disc for r in query(table, 2, 20)] == [5, 8, 12, 13, 17]

    def test_cubic_up_to_134(self, table):
        assert [r.disc for r in query(table, 3, 134)] == [49, 81]

    def test_quartic_up_to_640_empty(self, table):
        assert query(table, 4, 640) == []

    def test_sorted_by_disc(self, table):
        discs = [r.disc for r in query(table, 3, 1000)]
        assert discs == sorted(discs) and discs[0] == 49

    def test_beyond_completeness_refused(self, table):
        with pytest.raises(CompletenessError):
            query(table, 2, 1001)
        with pytest.raises(CompletenessError):
            query(table, 5, 10)


class TestValidation:
    def test_bundled_passes(self, table):
        report = validate_table(table, oracle_disc_limit=100)
        assert report.ok, report.issues

    def test_wrong_class_number_caught(self):
        text = MINI_TABLE.replace("2.2.5.1|2|5|1|1|1|5|-", "2.2.5.1|2|5|2|1|1|5|-")
        t = parse_table_text(text)
        report = validate_table(t)
        assert not report.ok
        assert any("2.2.5.1" in issue and "h=2" in issue for issue in report.issues)

    def test_impossible_cubic_discriminant_caught(self):
        # 50 = 2 mod 4 violates the discriminant congruence
        text = MINI_TABLE + "3.3.50.1|3|50|1|1|0|-|-\n"
        with pytest.raises(TableInvariantError, match="congruence"):
            parse_table_text(text)

    def test_non_fundamental_quadratic_caught(self):
        text = MINI_TABLE + "2.2.45.1|2|45|1|1|1|45|-\n"
        with pytest.raises(TableInvariantError, match="fundamental"):
            parse_table_text(text)

    def test_cubic_conductor_relation_enforced(self):
        text = MINI_TABLE.replace("3.3.49.1|3|49|1|1|1|7|3:1:3", "3.3.49.1|3|49|1|1|1|8|3:1:3")
        with pytest.raises(TableInvariantError, match="conductor"):
            parse_table_text(text)

    def test_below_minimal_disc_caught(self):
        text = MINI_TABLE + "3.3.21.1|3|21|1|1|0|-|-\n"
        with pytest.raises(TableInvariantError, match="minimal"):
            parse_table_text(text)


class TestClassNumberOracle:
    def test_fundamental_discriminants(self):
        assert is_fundamental_discriminant(5)
        assert is_fundamental_discriminant(8)
        assert not is_fundamental_discriminant(9)
        assert not is_fundamental_discriminant(20)
        assert not is_fundamental_discriminant(1)

    def test_fundamental_units(self):
        # (t + u sqrt(D))/2 with t^2 - D u^2 = +-4
        assert fundamental_unit(5) == (1, 1)
        assert fundamental_unit(13) == (3, 1)
        assert fundamental_unit(17) == (8, 2)  # 4 + sqrt(17)
        assert fundamental_unit(8) == (2, 1)  # 1 + sqrt(2)
        for D in (5, 8, 13, 17, 61, 97, 397):
            t, u = fundamental_unit(D)
            assert t * t - D * u * u in (4, -4)

    def test_known_class_numbers(self):
        assert quadratic_class_number(5) == 1
        assert quadratic_class_number(40) == 2
        assert quadratic_class_number(65) == 2
        assert quadratic_class_number(145) == 4
        assert quadratic_class_number(229) == 3

    def test_oracle_agrees_with_bundle_to_100(self, table):
        for rec in table.records:
            if rec.degree == 2 and rec.disc <= 100:
                assert quadratic_class_number(rec.disc) == rec.h, f"D={rec.disc}"
