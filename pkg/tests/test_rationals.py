import pytest

from nearfeas.rationals import (
    Rat,
    as_rat,
    format_rat,
    is_integral,
    parse_rat,
    rat_ceil,
    rat_floor,
)


def test_parse_basic():
    assert parse_rat("3/4") == Rat(3, 4)
    assert parse_rat("-3/4") == Rat(-3, 4)
    assert parse_rat("+5") == Rat(5)
    assert parse_rat("0") == Rat(0)


def test_parse_sign_only_on_numerator():
    with pytest.raises(ValueError):
        parse_rat("3/-4")
    with pytest.raises(ValueError):
        parse_rat("3/+4")
    with pytest.raises(ValueError):
        parse_rat("1.5")
    with pytest.raises(ValueError):
        parse_rat("3/0")


def test_format_lowest_terms():
    assert format_rat(Rat(6, 4)) == "3/2"
    assert format_rat(Rat(8, 4)) == "2"
    assert format_rat(Rat(-1, 2)) == "-1/2"


def test_roundtrip():
    for text in ["3/2", "-7/5", "0", "12"]:
        assert format_rat(parse_rat(text)) == text


def test_as_rat_rejects_floats():
    with pytest.raises(TypeError):
        as_rat(0.5)


def test_floor_ceil_are_ints():
    assert rat_floor(Rat(7, 2)) == 3
    assert rat_ceil(Rat(7, 2)) == 4
    assert rat_floor(Rat(-7, 2)) == -4
    assert rat_ceil(Rat(-7, 2)) == -3
    assert isinstance(rat_floor(Rat(7, 2)), int)
    assert isinstance(rat_ceil(Rat(-7, 2)), int)


def test_is_integral():
    assert is_integral(Rat(4, 2))
    assert not is_integral(Rat(1, 3))
