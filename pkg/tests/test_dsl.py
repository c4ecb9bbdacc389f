"""DSL parser and printer: round trips, error codes, positions."""

import pytest

from quiveralg.dsl import (
    ParseError,
    format_file,
    format_ncpoly,
    format_presentation,
    format_superpotential,
    parse_text,
)

CANONICAL_FILES = [
    "beilinson.quiver",
    "commutative_xy.quiver",
    "cubic_loop.quiver",
    "free_two.quiver",
    "p2_completed.quiver",
]


@pytest.mark.parametrize("name", CANONICAL_FILES)
def test_round_trip_on_golden_files(name, data_dir):
    text = (data_dir / name).read_text(encoding="utf-8")
    parsed = parse_text(text)
    printed = format_file(parsed.quiver, parsed.relations, parsed.supers)
    assert printed == text


def test_parse_beilinson_shape(data_dir):
    parsed = parse_text(
        (data_dir / "beilinson.quiver").read_text(encoding="utf-8")
    )
    assert parsed.quiver.node_count == 3
    assert len(parsed.quiver.arrows) == 6
    assert len(parsed.relations) == 3


def test_comments_and_blank_lines():
    parsed = parse_text(
        "# a comment\n"
        "nodes: 1\n"
        "\n"
        "arrow x: 0 -> 0 deg 2   # trailing comment\n"
    )
    assert parsed.quiver.arrows[0].degree == 2


def test_coefficient_syntax():
    parsed = parse_text(
        "nodes: 1\n"
        "arrow x: 0 -> 0 deg 1\n"
        "arrow y: 0 -> 0 deg 1\n"
        "rel r: 2*x*y - 1/3*y*x + x*x\n"
    )
    poly = parsed.relations[0][1]
    text = format_ncpoly(parsed.quiver, poly)
    assert text == "x*x + 2*x*y - 1/3*y*x"
    # reparse the printed form and compare
    again = parse_text(
        "nodes: 1\narrow x: 0 -> 0 deg 1\narrow y: 0 -> 0 deg 1\n"
        f"rel r: {text}\n"
    )
    assert again.relations[0][1] == poly


def _err(text):
    with pytest.raises(ParseError) as info:
        parse_text(text)
    return info.value


def test_unknown_arrow_position():
    err = _err("nodes: 1\narrow x: 0 -> 0 deg 1\nrel bad: x*q\n")
    assert err.code == "unknown-arrow"
    assert (err.line, err.col) == (3, 12)


def test_incomposable_error():
    err = _err(
        "nodes: 3\narrow x0: 0 -> 1 deg 1\nrel bad: x0*x0\n"
    )
    assert err.code == "incomposable"
    assert err.line == 3


def test_inhomogeneous_error():
    err = _err(
        "nodes: 1\narrow x: 0 -> 0 deg 1\narrow y: 0 -> 0 deg 1\n"
        "rel bad2: x*y - x\n"
    )
    assert err.code == "inhomogeneous"


def test_non_closed_superpotential_word():
    err = _err(
        "nodes: 2\narrow a: 0 -> 1 deg 1\nsuper W: a\n"
    )
    assert err.code == "non-closed"


def test_node_range_error():
    err = _err("nodes: 2\narrow a: 0 -> 5 deg 1\n")
    assert err.code == "range"
    assert err.line == 2


def test_syntax_error_position():
    err = _err("nodes: 1\narrow x 0 -> 0 deg 1\n")
    assert err.line == 2


def test_duplicate_name_error():
    err = _err(
        "nodes: 1\narrow x: 0 -> 0 deg 1\narrow x: 0 -> 0 deg 1\n"
    )
    assert err.code == "duplicate"


def test_format_presentation_round_trip(beilinson):
    text = format_presentation(beilinson)
    again = parse_text(text).presentation()
    assert format_presentation(again) == text


def test_superpotential_round_trip(p2):
    quiver, w = p2
    text = format_file(quiver, (), [("W", w)])
    again = parse_text(text)
    w2 = again.superpotential("W")
    assert format_superpotential(again.quiver, w2) == \
        format_superpotential(quiver, w)
