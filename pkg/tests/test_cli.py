import json

import pytest

from tamespace.cli import CONFIG_ENV, main, parse_equation

TRIPODE = 'elem 2 "x1"; perm [2,1]'


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip(), err.strip()


def test_val_equal_tripode(capsys):
    code, out, _ = run(capsys, "val", "equal", "--w1", "1,2", "--frame2", TRIPODE, "--w2", "2,1")
    assert (code, out) == (0, "true")


def test_val_tripode_all_equal(capsys):
    code, out, _ = run(capsys, "val", "tripode")
    assert code == 0 and out.count("true") == 3


def test_adm_mult(capsys):
    assert run(capsys, "adm", "mult", "-w", "3,2,1")[:2] == (0, "3")
    code, out, _ = run(capsys, "adm", "through", "-w", "6,3,2")
    assert set(out.splitlines()) == {"a1 = 2*a2", "a1 = 3*a3"}


def test_link_octangle(capsys):
    code, out, _ = run(capsys, "link", "octangle", "-p", "1", "-q", "3")
    assert code == 0
    assert "8.377580409" in out  # 8π/3


def test_tame_commands(capsys):
    assert run(capsys, "tame", "components", TRIPODE)[1] == "(x2, x1 + x2)"
    assert run(capsys, "tame", "compose", TRIPODE, TRIPODE)[1] == "(x1 + x2, x1 + 2*x2)"
    assert run(capsys, "tame", "diff", TRIPODE)[1].splitlines() == ["0 1", "1 1"]
    assert run(capsys, "tame", "bruhat", TRIPODE)[1] == "perm [2,1]"
    code, out, _ = run(capsys, "tame", "invert", 'elem 1 "x2^3"')
    assert out.splitlines()[-1] == "(-x2^3 + x1, x2)"


def test_val_commands(capsys):
    assert run(capsys, "val", "eval", "--frame", TRIPODE, "-w", "2,1", "x1")[1] == "-1"
    assert run(capsys, "val", "fix", 'elem 1 "x2*x3"', "-w", "3,2,2")[1] == "false"
    code, out, _ = run(capsys, "val", "witness", "aff [[1,0,0],[0,1,0],[0,0,1]] [0,1,0]")
    assert code == 0 and "weight 1,2,1" in out


def test_stab_and_dist(capsys):
    code, out, _ = run(capsys, "stab", "sector", "id", 'elem 1 "5*x2*x3"', "-w", "3,2,1")
    assert code == 0 and "case 1 (a=1, b=1)" in out
    code, out, _ = run(capsys, "dist", "upper", "--w1", "2,1", "--frame2", TRIPODE, "--w2", "2,1", "--mesh", "2")
    assert code == 0 and "0.98025814346" in out


def test_tree_ball(capsys):
    code, out, _ = run(capsys, "tree", "ball", "--depth", "2")
    assert code == 0 and "acyclic true" in out


def test_linearize_from_file(tmp_path, capsys):
    group = tmp_path / "g.txt"
    group.write_text('aff [[-1,0,0],[0,1,0],[0,0,1]]\nelem 1 "-2*x2^2"\n')
    code, out, _ = run(capsys, "linearize", "--generators", "--group", str(group))
    assert code == 0
    assert "order 2" in out


def test_exit_codes(capsys):
    assert run(capsys, "val", "eval", "-w", "2,1", "x1 + * x2")[0] == 2
    assert run(capsys, "stab", "decompose", 'elem 1 "x3^3"', "-w", "2,1,1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "witness", "id", )[0] == 2
    code, _, err = run(capsys, "--degree-cap", "3", "tame", "compose", 'elem 1 "x2^2"', 'elem 2 "x1^2"')
    assert code == 3 and "budget" in err


def test_config_file_and_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"field": "2"}))
    code, out, _ = run(capsys, "--config", str(cfg), "tame", "compose", TRIPODE, TRIPODE)
    assert out == "(x1 + x2, x1)"
    monkeypatch.setenv(CONFIG_ENV, str(cfg))
    assert run(capsys, "tame", "compose", TRIPODE, TRIPODE)[1] == "(x1 + x2, x1)"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": 1}))
    assert run(capsys, "--config", str(bad), "info")[0] == 2


def test_parse_equation():
    h = parse_equation("a1 = 2*a2 + 1*a3", 3)
    assert (h.i, h.m) == (0, (0, 2, 1))
    with pytest.raises(Exception):
        parse_equation("a1 = a1", 3)
