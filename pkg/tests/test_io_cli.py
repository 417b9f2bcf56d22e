import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sublocal import channels, cli, io
from sublocal.errors import FormatError
from sublocal.sl import make_class, random_member
from sublocal.spaces import ChannelShape

from conftest import seeded_shape

finite = st.floats(allow_nan=False, allow_infinity=False)


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, (json.loads(out.out) if out.out.strip() else None), out.err


@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=12))
def test_vector_round_trip_bit_exact(pairs):
    v = np.array([complex(a, b) for a, b in pairs])
    back = io.decode_vector(io.loads(io.dumps(io.encode_vector(v))))
    assert np.array_equal(back.view(np.float64), v.view(np.float64))


@given(st.integers(0, 2**32 - 1))
def test_channel_round_trip_bit_exact(seed):
    shape = seeded_shape(seed)
    ch = channels.random_channel(shape, 3, seed)
    back, meta = io.channel_from_dict(io.loads(io.dumps(io.channel_to_dict(ch, {"seed": seed}))))
    assert meta == {"seed": seed}
    assert back.shape == ch.shape
    assert all(np.array_equal(a, b) for a, b in zip(ch.kraus, back.kraus))
    assert channels.channel_distance(ch, back) == 0


def test_choi_representation(tmp_path):
    ch, _ = random_member("C2", ChannelShape.from_dims(2, 1, 1, 2), 3)
    path = tmp_path / "c.json"
    io.write_channel(ch, path, representation="choi")
    back, _ = io.read_channel(path)
    assert channels.channel_distance(ch, back) <= 1e-12


@pytest.mark.parametrize("text", [
    "not json",
    "[1, 2]",
    '{"shape": {"source": [1, 1], "target": [1, 1]}, "representation": "kraus", "data": [[[[1, 0], [0, 0]], [[0, 0]]]]}',
    '{"shape": {"source": [1, 1], "target": [1, 1]}, "representation": "kraus", "data": [[[[NaN, 0], [0, 0]], [[0, 0], [1, 0]]]]}',
    '{"shape": {"source": [1, 1], "target": [1, 1]}, "representation": "kraus", "data": [[[[1, 0]]]]}',
    '{"shape": {"source": [0, 1], "target": [1, 1]}, "representation": "kraus", "data": []}',
    '{"shape": {"source": [1, 1], "target": [1, 1]}, "representation": "other", "data": []}',
    '{"shape": {"source": [1, 1]}, "representation": "kraus", "data": []}',
])
def test_parse_rejects(tmp_path, text):
    path = tmp_path / "bad.json"
    path.write_text(text)
    with pytest.raises(FormatError):
        io.read_channel(path)


def test_params_round_trip():
    shape = ChannelShape.from_dims(2, 2, 2, 2)
    for tag in ("C1", "C2", "C3", "C4"):
        ch, p = random_member(tag, shape, 1)
        back = io.params_from_dict(tag, io.loads(io.dumps(io.params_to_dict(tag, p))))
        assert channels.channel_distance(make_class(tag, back, shape), ch) == 0


def test_cli_gen_classify(tmp_path, capsys):
    f = tmp_path / "c1.json"
    code, out, _ = run(capsys, "gen", "--class", "c1", "--dims", "2,2,2,2", "--seed", 7, "--out", f)
    assert code == 0 and out["class"] == "C1"
    code, rep, _ = run(capsys, "classify", f)
    assert code == 0 and rep["class"]["tag"] == "C1"
    assert rep["tp"]["ok"] and rep["cp"]["ok"] and rep["sp"]["ok"]
    assert rep["tp"]["residual"] >= 0 and rep["sp"]["residual"] >= 0
    assert np.allclose(rep["signature"], [[1, 0], [0, 1]])


def test_cli_random_is_not_sl(tmp_path, capsys):
    f = tmp_path / "r.json"
    run(capsys, "gen", "--class", "random", "--dims", "2,2,2,2", "--seed", 1, "--out", f)
    code, rep, _ = run(capsys, "classify", f)
    assert code == 3 and rep["class"]["tag"] == "NotSL"
    code, rep, _ = run(capsys, "verify", f)
    assert code == 0 and rep["tp"]["ok"]


def test_cli_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for f in (a, b):
        run(capsys, "gen", "--class", "c2", "--dims", "1,2,2,1", "--seed", 5, "--out", f)
    assert a.read_text() == b.read_text()
    for f in (a, b):
        run(capsys, "demo", "--seed", 2, "--time", 0.3, "--out", f)
    assert a.read_text() == b.read_text()


def test_cli_lift_restrict_verify(tmp_path, capsys):
    f, pair, back = tmp_path / "c.json", tmp_path / "pair.json", tmp_path / "back.json"
    for cls in ("c1", "c2", "c3", "c4"):
        run(capsys, "gen", "--class", cls, "--dims", "2,1,1,2", "--seed", 3, "--out", f)
        assert run(capsys, "lift", f, "--out", pair)[0] == 0
        code, out, _ = run(capsys, "restrict", pair, "--out", back)
        assert code == 0 and out["respects_1_states"]
        code, rep, _ = run(capsys, "verify", back, "--against", f)
        assert code == 0 and rep["against"]["distance"] <= 1e-9


def test_cli_verify_failure(tmp_path, capsys):
    f = tmp_path / "c.json"
    ch = channels.KrausChannel((0.5 * np.eye(2),), ChannelShape.from_dims(1, 1, 1, 1))
    io.write_channel(ch, f)
    code, rep, err = run(capsys, "verify", f)
    assert code == 4 and not rep["tp"]["ok"] and err
    code, _, err = run(capsys, "classify", f)
    assert code == 4 and "error" in err


def test_cli_compose(tmp_path, capsys):
    a, b, out = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "ab.json"
    run(capsys, "gen", "--class", "c3", "--dims", "1,2,2,1", "--seed", 1, "--out", a)
    run(capsys, "gen", "--class", "c2", "--dims", "2,1,1,2", "--seed", 2, "--out", b)
    assert run(capsys, "compose", a, b, "--out", out)[0] == 0
    code, rep, _ = run(capsys, "classify", out)
    assert code == 0 and rep["class"]["tag"] == "C4"
    assert run(capsys, "compose", b, b, "--out", out)[0] == 4


def test_cli_dilate(tmp_path, capsys):
    f, out = tmp_path / "c.json", tmp_path / "d.json"
    run(capsys, "gen", "--class", "c1", "--dims", "2,3,2,3", "--seed", 4, "--out", f)
    code, rep, _ = run(capsys, "dilate", f, "--out", out)
    assert code == 0 and rep["reproduction_distance"] <= 1e-9
    bundle = io.load_json(out)
    assert bundle["kind"] == "dilation"
    assert {"U", "a1", "a2", "V1", "V2"} <= set(bundle)
    run(capsys, "gen", "--class", "c2", "--dims", "2,3,2,3", "--seed", 4, "--out", f)
    assert run(capsys, "dilate", f, "--out", out)[0] == 4
    run(capsys, "gen", "--class", "c1", "--dims", "2,3,3,2", "--seed", 4, "--out", f)
    assert run(capsys, "dilate", f, "--out", out)[0] == 4


def test_cli_demo(tmp_path, capsys):
    f = tmp_path / "d.json"
    code, out, _ = run(capsys, "demo", "--dims", "2,2,2,2", "--seed", 3, "--time", 1.7, "--out", f)
    assert code == 0 and out["class"] == "C4"


def test_cli_io_errors(tmp_path, capsys):
    missing = tmp_path / "missing.json"
    assert run(capsys, "classify", missing)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(capsys, "verify", bad)[0] == 2
    assert run(capsys, "restrict", bad, "--out", tmp_path / "x.json")[0] == 2
    f = tmp_path / "c.json"
    run(capsys, "gen", "--class", "c1", "--dims", "1,1,1,1", "--out", f)
    assert run(capsys, "restrict", f, "--out", tmp_path / "x.json")[0] == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["gen", "--class", "c9", "--dims", "1,1,1,1", "--out", str(f)])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["gen", "--class", "c1", "--dims", "1,1", "--out", str(f)])
    assert exc.value.code == 2
    assert run(capsys, "verify", f, "--tol", -1)[0] == 4
