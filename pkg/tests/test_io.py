import os

import click
import pytest

from vset import (
    ATOM,
    ATOM_TERM,
    ONE,
    ZERO,
    ConstLeaf,
    EquationSystem,
    HFSetType,
    IndexSet,
    SubTerm,
    SystemSyntaxError,
    TupleNode,
    TupleTerm,
    VarLeaf,
    atom,
    build,
    construct,
    format_set,
    parse_hfset,
    parse_system,
    random_system,
    read_system,
    render_system,
    solve,
    zero,
)

I2 = IndexSet(2)


def _data(root_directory, name):
    return os.path.join(root_directory, "tests", "data", name)


def test_parse_stream():
    sys = parse_system("index 2\nx = [1, $x]")
    assert sys.index == I2
    assert sys.equations == {"x": TupleTerm((SubTerm(ATOM_TERM), VarLeaf("x")))}


def test_pair_sugar():
    assert parse_system("index 2\nx = <1 ; $x>") == parse_system("index 2\nx = [1, $x]")
    assert parse_system("index 3\nx = <1;$x>") == parse_system("index 3\nx = [1, $x, 0]")


def test_literals():
    sys = parse_system("index 3\na = 1\nz = 0\nt = [0, 1, [1, 1, 1]]")
    assert sys.equations["a"] == ATOM_TERM
    assert sys.equations["z"] == TupleTerm((ConstLeaf(zero(IndexSet(3))),) * 3)
    f = solve(sys)
    assert f["z"] == zero(IndexSet(3))
    assert f["a"] == atom(IndexSet(3))


def test_comments_and_blank_lines():
    text = """
    # header comment
    index 2   # trailing comment

    x = [1, $x]  # the stream
    """
    assert parse_system(text) == parse_system("index 2\nx = [1, $x]")


@pytest.mark.parametrize(
    ["text", "line", "column", "fragment"],
    [
        ("", 1, 1, "index N"),
        ("x = 1", 1, 1, "index N"),
        ("index 0\nx = 1", 1, 7, "must not be empty"),
        ("index 2\nx = [$y, 1]", 2, 6, "'y'"),
        ("index 2\nx = 1\nx = 0", 3, 1, "duplicate"),
        ("index 2\nx = $x", 2, 5, "bare variable"),
        ("index 1\nx = <1 ; 1>", 2, 5, "variant pairs"),
        ("index 2\nx = [1]", 2, 5, "1 component"),
        ("index 2\nx = 2", 2, 5, "only 0 and 1"),
        ("index 2\nx = [1, ?]", 2, 9, "unexpected character"),
        ("index 2\nx = [1, $x", 2, 11, "end of input"),
        ("index 2\nx [1, $x]", 2, 3, "'='"),
    ],
)
def test_parse_errors(text, line, column, fragment):
    with pytest.raises(SystemSyntaxError) as exc_info:
        parse_system(text)
    assert exc_info.value.line == line
    assert exc_info.value.column == column
    assert fragment in str(exc_info.value)
    assert str(exc_info.value).startswith(f"line {line}, column {column}: ")


def test_syntax_error_is_value_error():
    with pytest.raises(ValueError):
        parse_system("index 2\nx = ]")


def test_read_system(root_directory):
    sys = read_system(_data(root_directory, "stream.vsys"))
    f = solve(sys)
    assert f["x"] == f["y"]

    sys = read_system(_data(root_directory, "index3.vsys"))
    assert sys.index == IndexSet(3)
    f = solve(sys)
    assert f["z"] == f["w"] == zero(IndexSet(3))


def test_read_system_errors(root_directory):
    with pytest.raises(SystemSyntaxError, match="'y'"):
        read_system(_data(root_directory, "unbound.vsys"))
    with pytest.raises(SystemSyntaxError):
        read_system(_data(root_directory, "syntax_error.vsys"))


def test_render_system():
    sys = parse_system("index 2\nx = <1 ; $x>\nz = 0\ny = [$x, [0, 1]]")
    assert render_system(sys) == "index 2\nx = [1, $x]\nz = 0\ny = [$x, [0, 1]]\n"


def test_render_cyclic_constant():
    stream = build(I2, {"s": TupleNode(("a", "s")), "a": ATOM}, "s")
    sys = EquationSystem(I2, {"x": TupleTerm((ConstLeaf(stream), VarLeaf("x")))})
    text = render_system(sys)
    assert text.startswith("index 2\nx = [$_c0s0, $x]\n")
    assert solve(parse_system(text))["x"] == solve(sys)["x"]


def test_render_rejects_bad_names():
    with pytest.raises(ValueError):
        render_system(EquationSystem(I2, {"not a name": ATOM_TERM}))
    with pytest.raises(ValueError):
        render_system(EquationSystem(I2, {("x", 1): ATOM_TERM}))


def test_render_round_trip(rng):
    for _ in range(100):
        sys = random_system(rng, I2)
        reparsed = parse_system(render_system(sys))
        f, g = solve(sys), solve(reparsed)
        assert all(f[x] == g[x] for x in sys.equations)


def test_render_round_trip_index_3(rng):
    i3 = IndexSet(3)
    for _ in range(20):
        sys = random_system(rng, i3, max_vars=3)
        f, g = solve(sys), solve(parse_system(render_system(sys)))
        assert all(f[x] == g[x] for x in sys.equations)


def test_format_set():
    h = parse_hfset("{{{0}}}")
    assert format_set(h) == "{{{0}}}"
    assert format_set(h, "json") == "[[[[]]]]"
    assert format_set(ZERO, "json") == "[]"
    assert format_set(construct([ZERO, ONE]), "json") == "[[],[[]]]"
    with pytest.raises(ValueError):
        format_set(h, "xml")


def test_hfset_type():
    param_type = HFSetType()
    assert param_type.convert("1", None, None) == ONE
    assert param_type.convert("{0, {0}}", None, None) == construct([ZERO, ONE])
    assert param_type.convert(ONE, None, None) is ONE
    with pytest.raises(click.BadParameter):
        param_type.convert("{2}", None, None)
