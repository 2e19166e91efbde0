import json

import pytest

from posetsat.cli import main
from posetsat.family import family_from_json
from posetsat.poset import make_named


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct_wedge(capsys, tmp_path):
    path = tmp_path / "wd.json"
    code, _, _ = run(capsys, "construct", "wedge_diamond", "--n", "6", "--k", "2", "--out", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert len(doc["sets"]) == 5
    assert doc["provenance"]["construction"] == "wedge_diamond"
    # the written file parses back to the same family
    fam = family_from_json(doc)
    again = tmp_path / "again.json"
    run(capsys, "construct", "wedge_diamond", "--n", "6", "--k", "2", "--out", str(again))
    assert again.read_bytes() == path.read_bytes()
    assert fam.n == 6


def test_construct_floor_violation(capsys):
    code, _, err = run(capsys, "construct", "two_c2", "--n", "3")
    assert code == 2
    assert "collision: {2,3} {2,3,4}" in err


def test_construct_vee_stdout(capsys):
    code, out, _ = run(capsys, "construct", "vee", "--n", "2")
    assert code == 0 and len(json.loads(out)["sets"]) == 3


def test_construct_missing_parameter(capsys):
    code, _, err = run(capsys, "construct", "wedge_diamond", "--n", "6")
    assert code == 2 and "--k" in err


def write_family(capsys, tmp_path, name, *args):
    path = tmp_path / f"{name}.json"
    assert run(capsys, "construct", name, *args, "--out", str(path))[0] == 0
    return str(path)


def test_verify_exit_codes(capsys, tmp_path):
    wd = write_family(capsys, tmp_path, "wedge_diamond", "--n", "6", "--k", "2")
    code, out, _ = run(capsys, "verify", "--mode", "projective", "--poset", "W_2", "--family", wd)
    assert code == 0 and json.loads(out)["verdict"] == "holds"

    v5 = write_family(capsys, tmp_path, "vee", "--n", "5")
    code, out, _ = run(capsys, "verify", "--mode", "ordinary", "--poset", "V_3", "--family", v5)
    report = json.loads(out)
    assert code == 1 and report["witness"]["set"] == [1, 2, 3]

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "verify", "--mode", "ordinary", "--poset", "V_3", "--family", str(bad))
    assert code == 2 and "not valid JSON" in err


def test_verify_other_modes(capsys, tmp_path):
    lv = write_family(capsys, tmp_path, "kst_levels", "--n", "4", "--s", "2", "--t", "2")
    assert run(capsys, "verify", "--mode", "almost", "--poset", "K_2_2", "--family", lv)[0] == 0
    ke = write_family(capsys, tmp_path, "kst_external", "--n", "4", "--s", "2", "--t", "2")
    assert run(capsys, "verify", "--mode", "external", "--poset", "K_2_2", "--family", ke)[0] == 0
    code, out, _ = run(capsys, "verify", "--mode", "external", "--rule", "strict",
                       "--poset", "K_2_2", "--family", ke)
    assert code == 1 and json.loads(out)["violated"] == "projection"
    code, _, _ = run(capsys, "verify", "--mode", "almost", "--poset", "K_2_2", "--family", ke)
    assert code == 2  # no level tags


def test_verify_poset_file(capsys, tmp_path):
    pfile = tmp_path / "p.json"
    pfile.write_text(json.dumps(make_named("W_2").to_json()))
    wd = write_family(capsys, tmp_path, "wedge_diamond", "--n", "6", "--k", "2")
    assert run(capsys, "verify", "--mode", "projective", "--poset", str(pfile), "--family", wd)[0] == 0
    assert run(capsys, "verify", "--mode", "projective", "--poset", "Q_9", "--family", wd)[0] == 2


def test_search_and_cache_hit(capsys, tmp_path):
    cache = str(tmp_path / "c.jsonl")
    code, out, err = run(capsys, "search", "--mode", "sat-star", "--poset", "V_2", "--n", "3", "--cache", cache)
    first = json.loads(out)
    assert code == 0 and first["value"] == 4 and not first["cache_hit"] and "cache hit" not in err
    code, out, err = run(capsys, "search", "--mode", "sat-star", "--poset", "V_2", "--n", "3", "--cache", cache)
    second = json.loads(out)
    assert second["cache_hit"] and "cache hit" in err
    first.pop("cache_hit"), second.pop("cache_hit")
    assert first == second


def test_search_replays_byte_identically(capsys, tmp_path):
    cache = str(tmp_path / "c.jsonl")
    run(capsys, "search", "--mode", "external", "--poset", "A_3", "--n", "2", "--cache", cache)
    a = run(capsys, "search", "--mode", "external", "--poset", "A_3", "--n", "2", "--cache", cache)[1]
    b = run(capsys, "search", "--mode", "external", "--poset", "A_3", "--n", "2", "--cache", cache)[1]
    assert a == b


def test_search_refuses_large_n(capsys):
    code, _, err = run(capsys, "search", "--mode", "sat-star", "--poset", "V_2", "--n", "25", "--no-cache")
    assert code == 2 and "refused" in err and "<= 6" in err


def test_tabulate_csv(capsys, tmp_path):
    code, out, _ = run(capsys, "tabulate", "--posets", "V_2,union:[A_1,C_2]", "--n", "1-2",
                       "--modes", "sat-star", "--no-cache")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == "poset,n,mode,value,witness_hash,nodes,millis"
    assert len(lines) == 5
    assert lines[2].startswith("V_2,2,sat-star,3,")
    assert run(capsys, "tabulate", "--posets", "V_2", "--n", "2", "--modes", "bogus")[0] == 2


def test_paper_check_subset(capsys):
    code, out, _ = run(capsys, "paper-check", "--only", "1,2,10")
    assert code == 0
    assert out.count("PASS") == 3 and "3/3 passed" in out


def test_paper_check_reports_failures(capsys, monkeypatch):
    from posetsat import paper_check

    broken = list(paper_check.CHECKS)
    broken[0] = (1, "broken", lambda scale: (False, "forced"))
    monkeypatch.setattr(paper_check, "CHECKS", broken)
    code, out, _ = run(capsys, "paper-check", "--only", "1")
    assert code == 1 and "FAIL" in out


def test_bad_threads(capsys):
    with pytest.raises(SystemExit):
        main(["search", "--mode", "sat", "--poset", "V_2", "--n", "2", "--threads", "0"])
