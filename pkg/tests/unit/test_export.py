import pytest

from squarekit.hwsim.trace import SimTrace, TraceEvent
from squarekit.models.files import MatrixFile
from squarekit.models.matrix import CMatrix, Matrix
from squarekit.utils.errors import ValidationError
from squarekit.utils.export import (
    parse_matrix_file,
    read_matrix_file,
    render_complex,
    render_operand,
    serialize_matrix_file,
    write_text,
    write_trace_csv,
)


def test_serialize_is_canonical():
    text = serialize_matrix_file(MatrixFile.from_operand(Matrix.from_rows([[1, 2], [3, 4]])))
    assert text == '{"rows":2,"cols":2,"domain":"int","complex":false,"values":[1,2,3,4]}\n'


def test_serialize_complex_float():
    Z = CMatrix.from_pairs([[[0.5, -1.0]]])
    text = serialize_matrix_file(MatrixFile.from_operand(Z))
    assert text == '{"rows":1,"cols":1,"domain":"float","complex":true,"values":[[0.5,-1.0]]}\n'


def test_parse_serialized_text():
    M = Matrix.from_rows([[7, -8, 2**65]])
    parsed = parse_matrix_file(serialize_matrix_file(MatrixFile.from_operand(M)))
    assert parsed.to_operand().equals(M)


def test_parse_accepts_any_key_order():
    parsed = parse_matrix_file('{"values":[1.5],"domain":"float","cols":1,"rows":1}')
    assert parsed.to_operand().tolist() == [[1.5]]


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        '{"rows":1,"cols":1,"domain":"int"}',
        '{"rows":1,"cols":2,"domain":"int","values":[1]}',
    ],
)
def test_parse_errors_are_validation_errors(text):
    with pytest.raises(ValidationError):
        parse_matrix_file(text, "m.json")


def test_read_and_write(tmp_path):
    path = tmp_path / "m.json"
    mf = MatrixFile.from_operand(Matrix.from_rows([[1, 2]]))
    write_text(path, serialize_matrix_file(mf))
    assert read_matrix_file(path) == mf
    assert b"\r\n" not in path.read_bytes()


def test_read_missing_file(tmp_path):
    with pytest.raises(ValidationError):
        read_matrix_file(tmp_path / "missing.json")


def test_write_trace_csv(tmp_path):
    trace = SimTrace(
        events=[
            TraceEvent(cycle=0, unit="acc", signal="ACC", value=12),
            TraceEvent(cycle=1, unit="acc", signal="O", value=(-10, 20)),
        ],
        cycles_total=1,
    )
    path = tmp_path / "trace.csv"
    write_trace_csv(trace, path)
    assert path.read_text() == "cycle,unit,signal,value\n0,acc,ACC,12\n1,acc,O,-10+20i\n"


def test_render_helpers():
    assert render_complex(-5, 10) == "-5+10j"
    assert render_complex(1.5, -0.5) == "1.5-0.5j"
    assert render_operand(Matrix.from_rows([[1, 2], [3, 4]])) == "[[1, 2], [3, 4]]"
    assert render_operand(CMatrix.from_pairs([[[-5, 10]]])) == "[[-5+10j]]"
