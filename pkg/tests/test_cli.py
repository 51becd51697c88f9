import json

import pytest

from carnotreach.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_word(tmp_path, letters, durations, name="word.json"):
    path = tmp_path / name
    path.write_text(json.dumps({"letters": letters, "durations": durations}))
    return str(path)


def test_endpoint_empty_word(tmp_path, capsys):
    path = write_word(tmp_path, [], [])
    code, out, _ = run(capsys, "endpoint", path)
    assert code == 0
    assert json.loads(out) == {"x": [0, 0, 0], "y": [0, 0, 0]}


def test_pqr_vertex_word(tmp_path, capsys):
    path = write_word(tmp_path, [1, 2, 3], [1, 1, 1])
    code, out, _ = run(capsys, "pqr", path)
    assert code == 0
    assert json.loads(out) == {"p": 1.0, "q": 1.0, "r": 0.0}


def test_member_not_found(capsys):
    code, out, _ = run(capsys, "member", "--p", "0.7", "--q", "0.7", "--r", "0.7")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "not-found"
    assert "witness" not in data


def test_member_attained_witness_reproduces(capsys):
    code, out, _ = run(capsys, "member", "--p", "0.5", "--q", "0.5", "--r", "0.5")
    assert code == 0
    data = json.loads(out)
    assert data["status"] == "attained"
    assert data["residual"] <= 1e-7
    assert set(data["witness"]) == {"letters", "durations"}


def test_member_byte_identical_reruns(capsys):
    args = ("member", "--p", "0.41", "--q", "0.52", "--r", "0.63", "--seed", "5")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2


def test_simulate_adjoint(tmp_path, capsys):
    csv_path = str(tmp_path / "switches.csv")
    code, out, _ = run(
        capsys,
        "simulate-adjoint",
        "--h", "0.5,0.8,1.0",
        "--skew", "1.0,-1.0,1.0",
        "--horizon", "10",
        "--out-csv", csv_path,
    )
    assert code == 0
    data = json.loads(out)
    assert data["regime"] == "bang-bang"
    assert data["word"]["letters"][0] == 3
    header = open(csv_path).readline().strip()
    assert header == "t,h1,h2,h3"


def test_second_order_subcommand(tmp_path, capsys):
    # symmetric cycle: covector with h12 = h23 = h31 = 1 synthesizes unit arcs
    code, out, _ = run(
        capsys,
        "simulate-adjoint", "--h", "0,1,1", "--skew", "1.0,-1.0,1.0", "--horizon", "5.5",
    )
    assert code == 0
    word = json.loads(out)["word"]
    path = write_word(tmp_path, word["letters"], word["durations"])
    code, out, _ = run(
        capsys, "second-order", "--word", path, "--h", "0,1,1", "--skew", "1.0,-1.0,1.0"
    )
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "not-optimal"
    assert data["W_dim"] == 1


def test_dice_subcommand(tmp_path, capsys):
    spec = [[[1.0, 1.0]], [[2.0, 1.0]], [[3.0, 1.0]]]
    path = tmp_path / "dice.json"
    path.write_text(json.dumps(spec))
    code, out, _ = run(capsys, "dice", str(path))
    assert code == 0
    assert json.loads(out) == {"p": 1.0, "q": 1.0, "r": 0.0}


def test_dice_error_is_machine_readable(tmp_path, capsys):
    spec = [[[1.0, 1.0]], [[1.0, 1.0]], [[3.0, 1.0]]]
    path = tmp_path / "dice.json"
    path.write_text(json.dumps(spec))
    code, out, err = run(capsys, "dice", str(path))
    assert code == 1
    assert out == ""
    assert json.loads(err)["error"] == "tie-mass"


def test_mc_verify(tmp_path, capsys):
    csv_path = str(tmp_path / "mc.csv")
    code, out, _ = run(
        capsys, "mc-verify", "--n", "5", "--seed", "1", "--out-csv", csv_path
    )
    assert code == 0
    data = json.loads(out)
    assert data["roundtrip_recovered"] == 5
    assert data["dice_attained"] == 5
    assert data["dice_failures"] == []
    assert len(open(csv_path).read().strip().splitlines()) == 6


def test_atlas_subcommand(tmp_path, capsys):
    obj_path = str(tmp_path / "mesh.obj")
    csv_path = str(tmp_path / "strata.csv")
    code, out, _ = run(
        capsys,
        "atlas",
        "--resolution", "4",
        "--out-obj", obj_path,
        "--out-csv", csv_path,
        "--probe-starts", "4",
    )
    assert code == 0
    data = json.loads(out)
    assert data["vertices"] > 0
    assert data["prober_failures"] == 0
    assert open(obj_path).readline().startswith("v ")
    assert open(csv_path).readline().strip() == "label,params,p,q,r,witness"


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_invalid_word_json_exit_code(tmp_path, capsys):
    path = tmp_path / "word.json"
    path.write_text(json.dumps({"letters": [1, 2]}))
    code, out, err = run(capsys, "pqr", str(path))
    assert code == 1
    assert json.loads(err)["error"] == "word-json"
