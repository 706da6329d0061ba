import csv
from fractions import Fraction

from waringcount.report import write_estimate_report


def test_write_estimate_report(tmp_path):
    samples = [Fraction(3), Fraction(5, 2), Fraction(4), Fraction(7, 2)]
    csv_path, png_path = write_estimate_report(
        tmp_path / "out", samples, value=Fraction(13, 4), true_value=Fraction(3)
    )
    assert csv_path.exists() and png_path.exists()
    with csv_path.open() as handle:
        rows = list(csv.reader(handle))
    assert rows[0] == ["index", "estimate", "estimate_float"]
    assert len(rows) == 1 + len(samples)
    assert rows[1][1] == "3"
    assert float(rows[2][2]) == 2.5
    assert png_path.stat().st_size > 1000


def test_report_deterministic_csv(tmp_path):
    samples = [Fraction(1), Fraction(2)]
    first, _ = write_estimate_report(tmp_path / "a", samples, value=Fraction(3, 2))
    second, _ = write_estimate_report(tmp_path / "b", samples, value=Fraction(3, 2))
    assert first.read_text() == second.read_text()
