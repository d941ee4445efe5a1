from datetime import date, datetime

import pytest

from cataverify.utils import alignedTable, datesToStrings, fmtMs


@pytest.mark.parametrize(
    "ms, sep, out",
    [(27790.4, " ", "27 790"), (0.4, " ", "0"), (1234567, "", "1234567"), (999.5, " ", "1 000")],
)
def test_fmt_ms(ms, sep, out):
    assert fmtMs(ms, sep) == out


def test_aligned_table():
    text = alignedTable(["name", "n"], [["a", 10], ["long", 2]], right={1})
    assert text.splitlines() == [
        "name   n",
        "----  --",
        "a     10",
        "long   2",
    ]


def test_dates_to_strings():
    row = {"created": datetime(2024, 3, 1, 12, 5, 9), "day": date(2024, 3, 1), "n": 3}
    assert datesToStrings(row) == {"created": "2024-03-01 12:05:09", "day": "2024-03-01", "n": 3}
    assert datesToStrings((date(2020, 1, 2), "x")) == ("2020-01-02", "x")
