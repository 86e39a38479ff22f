"""CLI subcommand matrix: file passing, verdict lines, exit codes."""

import csv
import io
import json

import pytest

from ringadapt.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


@pytest.fixture
def workspace(tmp_path, capsys):
    """Keys, ring, statement and message files for a 4-ring on the toy group."""
    paths = {
        "ring": tmp_path / "ring.bin",
        "statement": tmp_path / "statement.bin",
        "witness": tmp_path / "witness.bin",
        "message": tmp_path / "message.bin",
        "presig": tmp_path / "presig.bin",
        "sig": tmp_path / "sig.bin",
    }
    keys = []
    # Seeds picked to give four distinct toy-group keys.
    for i, seed in enumerate((100, 101, 103, 104)):
        key_path = tmp_path / f"key{i}.json"
        code = main(["keygen", "--group", "toy", "--seed", str(seed),
                     "--out", str(key_path)])
        assert code == 0
        keys.append(key_path)
    args = ["ring-build", "--group", "toy", "--out", str(paths["ring"])]
    for key in keys:
        args += ["--key", str(key)]
    assert main(args) == 0
    assert main(["genr", "--group", "toy", "--seed", "55",
                 "--out", str(paths["statement"]),
                 "--witness-out", str(paths["witness"])]) == 0
    paths["message"].write_bytes(b"pay bob 5 units")
    capsys.readouterr()
    paths["keys"] = keys
    return paths


def _presign(workspace, capsys, out=None):
    return run(capsys, "presign", "--group", "toy", "--seed", "9",
               "--ring", str(workspace["ring"]), "--window", "1,2",
               "--key", str(workspace["keys"][1]),
               "--key", str(workspace["keys"][2]),
               "--message", str(workspace["message"]),
               "--statement", str(workspace["statement"]),
               "--out", str(out or workspace["presig"]))


def test_presign_preverify_adapt_verify_ext(workspace, capsys):
    code, _ = _presign(workspace, capsys)
    assert code == 0

    code, out = run(capsys, "preverify", "--group", "toy",
                    "--ring", str(workspace["ring"]), "--threshold", "2",
                    "--message", str(workspace["message"]),
                    "--statement", str(workspace["statement"]),
                    "--presig", str(workspace["presig"]))
    assert (code, out.strip()) == (0, "1")

    code, _ = run(capsys, "adapt", "--group", "toy",
                  "--ring", str(workspace["ring"]), "--threshold", "2",
                  "--presig", str(workspace["presig"]),
                  "--witness", str(workspace["witness"]),
                  "--out", str(workspace["sig"]))
    assert code == 0

    code, out = run(capsys, "verify", "--group", "toy",
                    "--ring", str(workspace["ring"]), "--threshold", "2",
                    "--message", str(workspace["message"]),
                    "--sig", str(workspace["sig"]))
    assert (code, out.strip()) == (0, "1")

    code, out = run(capsys, "ext", "--group", "toy",
                    "--ring", str(workspace["ring"]), "--threshold", "2",
                    "--statement", str(workspace["statement"]),
                    "--presig", str(workspace["presig"]),
                    "--sig", str(workspace["sig"]))
    assert code == 0
    witness_hex = workspace["witness"].read_bytes().hex()
    assert out.strip() == witness_hex


def test_verify_rejects_wrong_message(workspace, capsys, tmp_path):
    _presign(workspace, capsys)
    run(capsys, "adapt", "--group", "toy", "--ring", str(workspace["ring"]),
        "--threshold", "2", "--presig", str(workspace["presig"]),
        "--witness", str(workspace["witness"]), "--out", str(workspace["sig"]))
    other = tmp_path / "other.bin"
    other.write_bytes(b"pay mallory everything")
    code, out = run(capsys, "verify", "--group", "toy",
                    "--ring", str(workspace["ring"]), "--threshold", "2",
                    "--message", str(other), "--sig", str(workspace["sig"]))
    assert (code, out.strip()) == (1, "0")


def test_ext_mismatch_prints_failure_mark(workspace, capsys, tmp_path):
    _presign(workspace, capsys)
    other_presig = tmp_path / "presig2.bin"
    code, _ = run(capsys, "presign", "--group", "toy", "--seed", "10",
                  "--ring", str(workspace["ring"]), "--window", "1,2",
                  "--key", str(workspace["keys"][1]),
                  "--key", str(workspace["keys"][2]),
                  "--message", str(workspace["message"]),
                  "--statement", str(workspace["statement"]),
                  "--out", str(other_presig))
    assert code == 0
    run(capsys, "adapt", "--group", "toy", "--ring", str(workspace["ring"]),
        "--threshold", "2", "--presig", str(workspace["presig"]),
        "--witness", str(workspace["witness"]), "--out", str(workspace["sig"]))
    code, out = run(capsys, "ext", "--group", "toy",
                    "--ring", str(workspace["ring"]), "--threshold", "2",
                    "--statement", str(workspace["statement"]),
                    "--presig", str(other_presig),
                    "--sig", str(workspace["sig"]))
    assert code == 1
    assert out.strip() == "⊥"


def test_link_subcommand(workspace, capsys, tmp_path):
    _presign(workspace, capsys)
    run(capsys, "adapt", "--group", "toy", "--ring", str(workspace["ring"]),
        "--threshold", "2", "--presig", str(workspace["presig"]),
        "--witness", str(workspace["witness"]), "--out", str(workspace["sig"]))
    # overlapping window (1,2) vs (2,2): share key 2
    presig_b = tmp_path / "presig_b.bin"
    sig_b = tmp_path / "sig_b.bin"
    code, _ = run(capsys, "presign", "--group", "toy", "--seed", "11",
                  "--ring", str(workspace["ring"]), "--window", "2,2",
                  "--key", str(workspace["keys"][2]),
                  "--key", str(workspace["keys"][3]),
                  "--message", str(workspace["message"]),
                  "--statement", str(workspace["statement"]),
                  "--out", str(presig_b))
    assert code == 0
    run(capsys, "adapt", "--group", "toy", "--ring", str(workspace["ring"]),
        "--threshold", "2", "--presig", str(presig_b),
        "--witness", str(workspace["witness"]), "--out", str(sig_b))
    code, out = run(capsys, "link", "--group", "toy",
                    "--ring", str(workspace["ring"]), "--threshold", "2",
                    "--sig-a", str(workspace["sig"]), "--sig-b", str(sig_b))
    assert (code, out.strip()) == (0, "1")
    # disjoint window (0,1) vs window (2,2)
    presig_c = tmp_path / "presig_c.bin"
    sig_c = tmp_path / "sig_c.bin"
    run(capsys, "presign", "--group", "toy", "--seed", "12",
        "--ring", str(workspace["ring"]), "--window", "0,1",
        "--key", str(workspace["keys"][0]),
        "--message", str(workspace["message"]),
        "--statement", str(workspace["statement"]),
        "--out", str(presig_c))
    run(capsys, "adapt", "--group", "toy", "--ring", str(workspace["ring"]),
        "--threshold", "1", "--presig", str(presig_c),
        "--witness", str(workspace["witness"]), "--out", str(sig_c))
    code, out = run(capsys, "link", "--group", "toy",
                    "--ring", str(workspace["ring"]), "--threshold", "2",
                    "--sig-a", str(sig_b), "--sig-b", str(sig_c),
                    "--threshold-b", "1")
    assert (code, out.strip()) == (1, "0")


def test_decode_failure_exits_2(workspace, capsys, tmp_path):
    garbage = tmp_path / "garbage.bin"
    garbage.write_bytes(b"\xff\xff\xff")
    code = main(["preverify", "--group", "toy",
                 "--ring", str(garbage), "--threshold", "2",
                 "--message", str(workspace["message"]),
                 "--statement", str(workspace["statement"]),
                 "--presig", str(workspace["presig"])])
    capsys.readouterr()
    assert code == 2


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["presign", "--group", "toy"])  # missing required flags
    assert exc.value.code == 2
    capsys.readouterr()


def test_wrong_group_key_file_exits_2(workspace, capsys, tmp_path):
    key = tmp_path / "prodkey.json"
    assert main(["keygen", "--group", "prod", "--seed", "1",
                 "--out", str(key)]) == 0
    capsys.readouterr()
    code = main(["ring-build", "--group", "toy", "--key", str(key),
                 "--out", str(tmp_path / "r.bin")])
    capsys.readouterr()
    assert code == 2


def test_keygen_stdout_and_pubkey_ring(capsys, tmp_path):
    code, out = run(capsys, "keygen", "--group", "toy", "--seed", "42")
    assert code == 0
    doc = json.loads(out)
    assert doc["group"] == "toy-607"
    code = main(["ring-build", "--group", "toy", "--pubkey", doc["pk"],
                 "--out", str(tmp_path / "ring.bin")])
    capsys.readouterr()
    assert code == 0


def test_swap_demo_happy_and_faulty(capsys, tmp_path):
    code, out = run(capsys, "swap-demo", "--group", "toy", "--seed", "5",
                    "--ring-size", "4", "--threshold", "2")
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert lines[-1]["event"] == "outcome"
    assert lines[-1]["outcome"] == "both-confirmed"

    out_file = tmp_path / "transcript.jsonl"
    code = main(["swap-demo", "--group", "toy", "--seed", "5",
                 "--fault", "abort3", "--out", str(out_file)])
    capsys.readouterr()
    assert code == 0
    records = [json.loads(line)
               for line in out_file.read_text().strip().splitlines()]
    assert records[-1]["outcome"] == "neither-confirmed"
    assert records[-1]["phase"] == "aborted"


def test_bench_csv_schema(capsys):
    code, out = run(capsys, "bench", "--group", "toy", "--min-n", "10",
                    "--max-n", "20", "--step", "10", "--reps", "10",
                    "--seed", "0")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["algorithm", "n", "t", "mean_ns", "reps", "bytes",
                       "comm_ours", "comm_baseline"]
    body = rows[1:]
    assert len(body) == 18  # 9 algorithms x 2 ring sizes
    presign_rows = [r for r in body if r[0] == "presign"]
    # toy sizes: S_z = S_g = 2, so n=10,t=5 gives 11*2 + 5*2 = 32
    assert presign_rows[0][1:3] == ["10", "5"]
    assert presign_rows[0][5] == "32"
    assert all(int(r[4]) >= 10 for r in body)
