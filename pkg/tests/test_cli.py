import json

import pytest

from braidprob.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out else None), err


def test_trivial(capsys):
    code, out, _ = run(capsys, "trivial", "sigma: 1 2 1 -2 -1 -2")
    assert code == 0 and out == {"trivial": True}
    code, out, _ = run(capsys, "trivial", "sigma: 1 2")
    assert out == {"trivial": False}


def test_equal_and_tw(capsys):
    assert run(capsys, "equal", "sigma: 1 2 1", "sigma: 2 1 2")[1] == {"equal": True}
    code, out, _ = run(capsys, "tw", "sigma: 1 2 1")
    assert code == 0 and isinstance(out["tw"], int)


def test_reduce_and_convert(capsys):
    _, out, _ = run(capsys, "reduce", "sigma: 1 -1 2")
    assert out["free"] == out["handle"]
    _, g, _ = run(capsys, "convert", "sigma: 1 2", "--to", "gamma")
    _, back, _ = run(capsys, "convert", g["word"], "--to", "sigma")
    assert run(capsys, "equal", back["word"], "sigma: 1 2")[1]["equal"]


def test_bad_word(capsys):
    code, out, err = run(capsys, "trivial", "sigma: 1 q7")
    assert code == 2 and out is None
    assert "error" in json.loads(err)


def test_kesten(capsys):
    code, out, _ = run(capsys, "kesten", "--max-n", "6")
    assert out == {"coefficients": [1, 0, 4, 0, 28, 0, 232]}


def test_walk_raw_oracle(capsys):
    code, out, _ = run(capsys, "walk", "--group", "b3", "--max-n", "6", "--raw-oracle")
    assert code == 0 and out["agree"]
    assert out["counts"]["6"] == 244


def test_relcheck(capsys):
    code, out, _ = run(capsys, "relcheck", "--n", "4")
    assert code == 0 and out["pass"] and out["instances"] > 0


def test_rep_gaussian_verify(capsys):
    code, out, _ = run(capsys, "rep", "gaussian", "--p", "3", "--strands", "3", "--verify")
    assert code == 0 and out["pass"] and out["dim"] == 27


def test_rep_budget(capsys, monkeypatch):
    monkeypatch.setenv("BRAIDPROB_MAX_DIM", "16")
    code, _, err = run(capsys, "rep", "gaussian", "--p", "3", "--strands", "5")
    assert code == 2 and "error" in json.loads(err)


def test_rep_ybe_matrix_file(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"matrix": [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, [0, 1]]]}))
    code, out, _ = run(capsys, "rep", "ybe", "--matrix", str(good))
    assert code == 0 and out["ybe"]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([[1, 0.5, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]))
    code, out, _ = run(capsys, "rep", "ybe", "--matrix", str(bad))
    assert code == 1 and not out["ybe"]
    odd = tmp_path / "odd.json"
    odd.write_text(json.dumps([[1, 0], [0, 1]]))
    assert run(capsys, "rep", "ybe", "--matrix", str(odd))[0] == 2


def test_rep_hecke_and_perturb(capsys):
    code, out, _ = run(capsys, "rep", "hecke", "--n", "3")
    assert code == 0 and out["pass"]
    _, out, _ = run(capsys, "rep", "perturb")
    assert out["flag"] and out["ad_flag"] and out["period"] == 2
    _, out, _ = run(capsys, "rep", "perturb", "--scalar")
    assert out["flag"] and not out["ad_flag"]


def test_moment(capsys):
    code, out, _ = run(capsys, "moment", "--spec", "artin-alpha", "--tuple", "1,2",
                       "--arg", "sigma: 1", "--arg", "sigma: -1")
    assert code == 0 and "moment" in out
    assert run(capsys, "moment", "--spec", "artin-alpha", "--tuple", "1,2", "--arg", "sigma: 1")[0] == 2


def test_ncp_commutant(capsys):
    code, out, _ = run(capsys, "ncp", "commutant", "--strands", "5", "--n", "1", "--K", "5")
    assert code == 0 and out["verdict"] == "pass"


def test_byte_stable(capsys):
    argv = ["nf", "sigma: 1 -2 3 1"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_verify_paper_subset(capsys):
    code, out, _ = run(capsys, "verify-paper", "--only", "2,5")
    assert code == 0 and out["pass"] and len(out["criteria"]) == 2


def test_symmetry_exit_codes(capsys):
    code, out, _ = run(capsys, "symmetry", "--spec", "artin-alpha", "--rel", "order",
                       "--max-order", "4", "--bound", "3")
    assert code == 1 and not out["pass"]
    assert out["witnesses"][0]["left"] == [0, 1, 0, 1]
    code, out, _ = run(capsys, "symmetry", "--spec", "gamma-beta", "--rel", "order",
                       "--max-order", "4", "--bound", "2")
    assert code == 0 and out["pass"]


def test_missing_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_verify_flag(capsys, monkeypatch):
    import braidprob.acceptance as acc

    monkeypatch.setattr(acc, "run_all", lambda only, seed, jobs: [acc.run_criterion(5)])
    code, out, _ = run(capsys, "--verify-paper")
    assert code == 0 and out["criteria"][0]["criterion"] == 5
