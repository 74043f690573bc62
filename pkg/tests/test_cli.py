import json
import subprocess
import sys

import pytest

from divcert import cli


def run_cli(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def parse_jsonl(out):
    return [json.loads(line) for line in out.strip().splitlines()]


class TestFab:
    def test_found(self, capsys):
        code, out, err = run_cli(["fab", "7", "36"], capsys)
        assert code == 0
        records = parse_jsonl(out)
        assert records[0]["verdict"] == "found" and records[0]["n"] == 279
        assert records[0]["bound"]["bound"] == 2736
        assert records[-1]["record"] == "summary"
        assert "elapsed" in err

    def test_proven_zero(self, capsys):
        code, out, _ = run_cli(["fab", "1", "1"], capsys)
        assert code == 0
        assert parse_jsonl(out)[0]["verdict"] == "proven_zero"

    def test_inconclusive_exit_2(self, capsys):
        code, out, _ = run_cli(["fab", "7", "36", "--n-cap", "5"], capsys)
        assert code == 2
        assert parse_jsonl(out)[0]["verdict"] == "inconclusive"

    def test_cache_roundtrip(self, tmp_path, capsys):
        cache = str(tmp_path / "fab.cache")
        code, out1, _ = run_cli(["fab", "2", "3", "--cache", cache], capsys)
        assert code == 0
        code, out2, _ = run_cli(["fab", "2", "3", "--cache", cache], capsys)
        assert code == 0
        assert parse_jsonl(out1)[0] == parse_jsonl(out2)[0]
        lines = (tmp_path / "fab.cache").read_text().splitlines()
        assert json.loads(lines[0])["kind"] == "fab-cache"
        assert len(lines) == 2  # header + one result, no duplicate append

    def test_cache_corrupt_tail_dropped(self, tmp_path, capsys):
        cache = tmp_path / "fab.cache"
        run_cli(["fab", "2", "3", "--cache", str(cache)], capsys)
        with open(cache, "a") as fh:
            fh.write('{"a": 9, "b":')  # torn write
        code, out, err = run_cli(["fab", "2", "3", "--cache", str(cache)], capsys)
        assert code == 0
        assert "corrupt" in err
        lines = cache.read_text().splitlines()
        assert len(lines) == 2
        for line in lines:
            json.loads(line)

    def test_cache_version_mismatch(self, tmp_path, capsys):
        cache = tmp_path / "fab.cache"
        cache.write_text('{"engine_version": "0.0.0", "kind": "fab-cache"}\n')
        with pytest.raises(SystemExit) as exc:
            run_cli(["fab", "2", "3", "--cache", str(cache)], capsys)
        assert exc.value.code == 64


class TestVerify:
    def test_thm3(self, capsys):
        code, out, _ = run_cli(["verify", "thm3", "--n-max", "4"], capsys)
        assert code == 0
        records = parse_jsonl(out)
        assert [r["n"] for r in records[:-1]] == [1, 2, 3, 4]
        assert records[-1]["all_ok"] is True

    def test_thm0(self, capsys):
        code, out, _ = run_cli(
            ["verify", "thm0", "--a-max", "3", "--b-max", "3", "--n-max", "3"],
            capsys)
        assert code == 0
        assert parse_jsonl(out)[-1]["record_count"] == 27

    def test_thm4_without_expand(self, capsys):
        code, out, _ = run_cli(["verify", "thm4", "--n-max", "1"], capsys)
        assert code == 0
        rec = parse_jsonl(out)[0]
        assert len(rec["families"]) == 7
        assert all(f["polynomial"] for f in rec["families"])

    def test_thm4_expand_partial_exit_3(self, capsys, monkeypatch):
        monkeypatch.setenv("DIVCERT_BUDGET_DEGREE", "50")
        code, out, _ = run_cli(
            ["verify", "thm4", "--n-max", "1", "--expand"], capsys)
        assert code == 3
        assert parse_jsonl(out)[-1]["partial"] is True

    def test_table_output(self, capsys):
        code, out, _ = run_cli(
            ["verify", "thm3", "--n-max", "2", "--table"], capsys)
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0].split("\t") == ["checks", "n", "ok"]
        assert lines[-1].startswith("summary:")

    def test_output_file(self, tmp_path, capsys):
        path = tmp_path / "report.jsonl"
        code, out, _ = run_cli(
            ["verify", "thm3", "--n-max", "2", "--output", str(path)], capsys)
        assert code == 0
        assert out == ""
        records = parse_jsonl(path.read_text())
        assert records[-1]["record"] == "summary"


class TestCheckpoint:
    ARGS = ["verify", "thm0", "--a-max", "2", "--b-max", "2", "--n-max", "3"]

    def test_resume_byte_identical(self, tmp_path, capsys, monkeypatch):
        baseline_code, baseline_out, _ = run_cli(self.ARGS, capsys)
        assert baseline_code == 0

        ckpt = str(tmp_path / "run.ckpt")
        calls = {"n": 0}
        real = cli._w_thm0

        def flaky(point):
            calls["n"] += 1
            if calls["n"] > 5:
                raise KeyboardInterrupt
            return real(point)

        monkeypatch.setattr(cli, "_w_thm0", flaky)
        with pytest.raises(KeyboardInterrupt):
            run_cli(self.ARGS + ["--checkpoint", ckpt], capsys)
        capsys.readouterr()
        monkeypatch.setattr(cli, "_w_thm0", real)

        code, out, _ = run_cli(self.ARGS + ["--checkpoint", ckpt], capsys)
        assert code == 0
        assert out == baseline_out  # byte-identical records after resume

    def test_resume_skips_done_points(self, tmp_path, capsys, monkeypatch):
        ckpt = str(tmp_path / "run.ckpt")
        code, _, _ = run_cli(self.ARGS + ["--checkpoint", ckpt], capsys)
        assert code == 0
        done = len(open(ckpt).read().splitlines())

        def boom(point):  # pragma: no cover - must never run
            raise AssertionError("resumed run recomputed a finished point")

        monkeypatch.setattr(cli, "_w_thm0", boom)
        code, out, _ = run_cli(self.ARGS + ["--checkpoint", ckpt], capsys)
        assert code == 0
        assert len(open(ckpt).read().splitlines()) == done

    def test_corrupt_tail_dropped(self, tmp_path, capsys):
        ckpt = tmp_path / "run.ckpt"
        run_cli(self.ARGS + ["--checkpoint", str(ckpt)], capsys)
        good = ckpt.read_text()
        ckpt.write_text(good + '{"truncated')
        code, out, err = run_cli(self.ARGS + ["--checkpoint", str(ckpt)], capsys)
        assert code == 0
        assert "corrupt" in err

    def test_fingerprint_mismatch_rejected(self, tmp_path, capsys):
        ckpt = str(tmp_path / "run.ckpt")
        run_cli(self.ARGS + ["--checkpoint", ckpt], capsys)
        other = ["verify", "thm0", "--a-max", "2", "--b-max", "2",
                 "--n-max", "4", "--checkpoint", ckpt]
        with pytest.raises(SystemExit) as exc:
            run_cli(other, capsys)
        assert exc.value.code == 64


class TestConj:
    def test_conj2witness(self, capsys):
        code, out, _ = run_cli(
            ["conj", "conj2witness", "--a-max", "2", "--b-max", "2"], capsys)
        assert code == 0
        records = parse_jsonl(out)
        assert records[-1]["all_found"] is True
        first = records[0]
        assert (first["a"], first["b"], first["p"], first["n"]) == (1, 1, 5, 2)

    def test_c330n88n(self, capsys):
        code, out, _ = run_cli(["conj", "c330n88n", "--n", "1"], capsys)
        assert code == 0
        rec = parse_jsonl(out)[0]
        assert rec["degree"] == 104
        assert rec["negatives"] == [[1, -1], [103, -1]]
        assert rec["matches_pattern"] is True

    def test_oddp2(self, capsys):
        code, out, _ = run_cli(
            ["conj", "oddp2", "--m", "1", "--a-max", "4", "--b-max", "4",
             "--n-max", "20"], capsys)
        records = parse_jsonl(out)
        assert "survivors" in records[-1]
        assert code in (0, 2)


class TestPrimes:
    def test_window(self, capsys):
        code, out, _ = run_cli(["primes", "--lo", "530", "--hi", "532"], capsys)
        assert code == 0
        records = parse_jsonl(out)
        assert records[0] == {"x": 530, "witness_prime": 557}
        assert records[-1]["failures"] == []

    def test_failures_exit_2(self, capsys):
        code, out, _ = run_cli(["primes", "--lo", "2", "--hi", "5"], capsys)
        assert code == 2


class TestQbinomTheta:
    def test_qbinom(self, capsys):
        code, out, _ = run_cli(["qbinom", "4", "2"], capsys)
        assert code == 0
        assert parse_jsonl(out)[0]["coeffs"] == [1, 1, 2, 1, 1]

    def test_qbinom_exponents(self, capsys):
        code, out, _ = run_cli(["qbinom", "6", "3", "--exponents"], capsys)
        assert code == 0
        assert parse_jsonl(out)[0]["exponents"] == {
            "2": 1, "4": 1, "5": 1, "6": 1}

    def test_theta(self, capsys):
        code, out, _ = run_cli(["theta", "10"], capsys)
        assert code == 0
        rec = parse_jsonl(out)[0]
        assert rec["prime_count"] == 2
        assert abs(rec["theta"] - 2.302585092994046) < 1e-12


class TestUsageErrors:
    def test_unknown_theorem(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli(["verify", "thm99"], capsys)
        assert exc.value.code == 64

    def test_bad_value(self, capsys):
        code, _, err = run_cli(["fab", "0", "1"], capsys)
        assert code == 64
        assert "error" in err

    def test_missing_subcommand(self, capsys):
        with pytest.raises(SystemExit) as exc:
            run_cli([], capsys)
        assert exc.value.code == 64


class TestParallel:
    def test_par_matches_serial(self, capsys):
        args = ["verify", "thm3", "--n-max", "6"]
        _, serial, _ = run_cli(args, capsys)
        code, par, _ = run_cli(args + ["--par", "2"], capsys)
        assert code == 0
        assert par == serial


class TestEntryPoint:
    def test_console_script(self):
        proc = subprocess.run(
            [sys.executable, "-m", "divcert.cli", "fab", "1", "1"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert json.loads(proc.stdout.splitlines()[0])["verdict"] == "proven_zero"
