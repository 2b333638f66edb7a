import json
import subprocess
import sys

import pytest

from ballotworks.cli import run
from ballotworks.io import format_blt, parse_blt, parse_result

from cases import ABORIGINAL, CZESTOCHOWA, E1, E2, ELECTION1_BLT, GAUTENG


@pytest.fixture
def files(tmp_path):
    (tmp_path / "e1.blt").write_text(ELECTION1_BLT)
    (tmp_path / "e2.blt").write_text(format_blt(E2))
    (tmp_path / "council.blt").write_text(format_blt(ABORIGINAL, 2, "Council"))
    (tmp_path / "tie.blt").write_text('2 1\n1 1 0\n1 2 0\n0\n"A"\n"B"\n')
    (tmp_path / "cz.csv").write_text("party,share\n" + "".join(f"{p},{v}\n" for p, v in CZESTOCHOWA.items()))
    (tmp_path / "gp.csv").write_text("".join(f"{p},{v}\n" for p, v in GAUTENG.items()))
    (tmp_path / "mixed.csv").write_text("party,votes,seats\nP,50,6\nQ,30,0\nR,20,0\n")
    return tmp_path


def out(capsys, argv, code=0):
    assert run(argv) == code
    return capsys.readouterr()


def test_stv_table(files, capsys):
    text = out(capsys, ["tally", "--method", "stv", "--in", str(files / "council.blt")]).out
    assert "+1.63" in text and "+4.09" in text and "+3.27" in text
    assert "24.27" in text
    assert "S elected" in text and "N elected" in text and "K excluded" in text
    assert "Count 3" in text
    assert text.rstrip().endswith("Elected: S, N")


def test_irv_and_fptp(files, capsys):
    assert out(capsys, ["tally", "--method", "fptp", "--in", str(files / "e1.blt")]).out.endswith("Elected: A\n")
    assert out(capsys, ["tally", "--method", "irv", "--in", str(files / "e2.blt")]).out.endswith("Elected: A\n")
    assert out(capsys, ["tally", "--method", "schulze", "--in", str(files / "e1.blt")]).out.endswith("Elected: B\n")


def test_approval_depth(files, capsys):
    text = out(capsys, ["tally", "--method", "approval", "--depth", "1", "--in", str(files / "e1.blt")]).out
    assert text.endswith("Elected: A\n")


def test_dhondt(files, capsys):
    text = out(capsys, ["apportion", "--method", "dhondt", "--seats", "7", "--in", str(files / "cz.csv")]).out
    seats = {line.split()[0]: int(line.split()[-1]) for line in text.splitlines()[2:10]}
    assert seats == {"PO": 3, "PiS": 2, "RP": 1, "SLD": 1, "PSL": 0, "PJN": 0, "NP": 0, "PPP": 0}
    assert "34.97*" in text and "11.65*" in text
    assert text.endswith("Total seats: 7\n")


def test_lr_droop_json(files, capsys):
    text = out(capsys, ["apportion", "--method", "lr", "--quota", "droop", "--seats", "73",
                        "--total-votes", "4382163", "--format", "json", "--in", str(files / "gp.csv")]).out
    a = parse_result(text)
    assert a.quota == 59219
    assert list(a.seats.values()) == [40, 23, 8, 1, 1, 0, 0, 0]
    assert json.loads(text)["wasted"]["display"].startswith("0.0")


def test_mixed(files, capsys):
    text = out(capsys, ["mixed", "--mode", "mmp", "--seats", "10", "--in", str(files / "mixed.csv")]).out
    assert "Total seats: 11" in text


def test_audit_witness(files, capsys, tmp_path):
    wit = tmp_path / "w.json"
    text = out(capsys, ["audit", "--criterion", "monotonicity", "--method", "irv", "--bounds", "2",
                        "--in", str(files / "e2.blt"), "--witness", str(wit)]).out
    assert "violated" in text
    doc = json.loads(wit.read_text())
    assert (doc["winner_before"], doc["winner_after"]) == ("A", "C")
    assert run(["tally", "--method", "irv", "--in", str(tmp_path / "after.blt")]) == 1
    (tmp_path / "after.blt").write_text(doc["after"])
    capsys.readouterr()
    assert out(capsys, ["tally", "--method", "irv", "--in", str(tmp_path / "after.blt")]).out.endswith("Elected: C\n")


def test_audit_not_refuted(files, capsys):
    text = out(capsys, ["audit", "--criterion", "monotonicity", "--method", "fptp", "--in", str(files / "e1.blt")]).out
    assert "not refuted within bounds" in text


def test_audit_may(capsys):
    text = out(capsys, ["audit", "--criterion", "may", "--method", "supermajority", "--max-voters", "5"]).out
    assert "nearly_decisive: violated" in text


def test_exit_codes(files, capsys):
    r = out(capsys, ["tally", "--method", "fptp", "--tie", "error", "--in", str(files / "tie.blt")], 2)
    assert "error:" in r.err
    r = out(capsys, ["tally", "--method", "fptp", "--in", str(files / "missing.blt")], 1)
    assert r.err.startswith("error:")
    bad = files / "bad.blt"
    bad.write_text('2 1\n1 1 3 0\n0\n"A"\n"B"\n')
    assert "line 2" in out(capsys, ["tally", "--method", "irv", "--in", str(bad)], 1).err
    assert out(capsys, ["tally", "--method", "limited", "--in", str(files / "e1.blt")], 1).err


def test_tie_policy_flags(files, capsys):
    text = out(capsys, ["tally", "--method", "fptp", "--tie", "first_listed", "--in", str(files / "tie.blt")]).out
    assert text.endswith("Elected: A\n") and "Tie in round" in text
    one = out(capsys, ["tally", "--method", "fptp", "--tie", "seeded_random", "--seed", "7",
                       "--in", str(files / "tie.blt")]).out
    two = out(capsys, ["tally", "--method", "fptp", "--tie", "seeded_random", "--seed", "7",
                       "--in", str(files / "tie.blt")]).out
    assert one == two


def test_seed_from_environment(files, capsys, monkeypatch):
    argv = ["tally", "--method", "fptp", "--tie", "seeded_random", "--in", str(files / "tie.blt")]
    monkeypatch.setenv("BALLOTWORKS_SEED", "7")
    from_env = out(capsys, argv).out
    assert from_env == out(capsys, argv[:-2] + ["--seed", "7"] + argv[-2:]).out


def test_output_is_byte_stable(files, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert run(["tally", "--method", "stv", "--format", "json", "--in", str(files / "council.blt"),
                    "--out", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_convert(files, capsys, tmp_path):
    blt = out(capsys, ["convert", "--from", "blt", "--to", "blt", "--in", str(files / "e1.blt")]).out
    assert parse_blt(blt).profile == E1
    saved = tmp_path / "r.json"
    run(["tally", "--method", "stv", "--format", "json", "--in", str(files / "council.blt"), "--out", str(saved)])
    table = out(capsys, ["convert", "--from", "json", "--to", "table", "--in", str(saved)]).out
    assert table == out(capsys, ["tally", "--method", "stv", "--in", str(files / "council.blt")]).out
    assert out(capsys, ["convert", "--from", "json", "--to", "json", "--in", str(saved)]).out == saved.read_text()


def test_stdin_and_module_entry(files):
    proc = subprocess.run([sys.executable, "-m", "ballotworks.cli", "tally", "--method", "irv", "--in", "-"],
                          input=ELECTION1_BLT, capture_output=True, text=True, check=True)
    assert proc.stdout.endswith("Elected: C\n")
