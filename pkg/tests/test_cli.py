"""End-to-end exercises of the argparse front end, run in process."""

import json

import pytest

from shiu import cli
from shiu.construction import (
    ConstructionParams,
    as_ktuple,
    build,
    construction_to_dict,
    construction_to_json,
    scan_windows,
    window_reports_to_jsonl,
)
from shiu.errors import InternalConsistencyError
from shiu.sieve import load_segments
from shiu.tuples import format_tuple_text


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_json_matches_library(capsys):
    code, out, err = run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5")
    assert code == 0 and err == ""
    c = build(ConstructionParams(q=3, a=1, k=5))
    assert json.loads(out) == construction_to_dict(c)
    assert out == construction_to_json(c)


def test_construct_text_matches_library(capsys):
    code, out, _ = run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
                       "--format", "text")
    assert code == 0
    c = build(ConstructionParams(q=3, a=1, k=5))
    assert out == format_tuple_text(as_ktuple(c))
    assert out.splitlines()[0] == "11225610*x+7"


def test_construct_with_g(capsys):
    code, out, _ = run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
                       "--with-g")
    assert code == 0
    assert json.loads(out)["g_decimal"] == "3741870"


def test_repeat_runs_are_byte_identical(capsys):
    argv = ("bounds", "--q-min", "3", "--q-max", "5",
            "--k-min", "2", "--k-max", "4")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_output_file_equals_stdout(capsys, tmp_path):
    out_path = tmp_path / "cert.json"
    _, streamed, _ = run(capsys, "construct", "--q", "5", "--a", "2", "--k", "3")
    code, out, _ = run(capsys, "construct", "--q", "5", "--a", "2", "--k", "3",
                       "--output", str(out_path))
    assert code == 0 and out == ""
    assert out_path.read_text() == streamed


def test_gcd_violation_is_a_domain_error(capsys):
    code, out, err = run(capsys, "construct", "--q", "9", "--a", "3", "--k", "4")
    assert code == 1 and out == ""
    assert err.startswith("error: domain:")
    assert "gcd" in err


def test_usage_error_exits_one(capsys):
    code, _, err = run(capsys, "construct", "--q", "3", "--a", "1")
    assert code == 1
    assert err.startswith("error: domain:")


def test_missing_subcommand_exits_one(capsys):
    code, _, err = run(capsys)
    assert code == 1
    assert "subcommand" in err


def test_unsupported_format_exits_one(capsys):
    code, _, err = run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
                       "--format", "csv")
    assert code == 1
    assert "not available" in err


class TestVerify:
    def make_cert(self, capsys, tmp_path, *extra):
        path = tmp_path / "cert.json"
        run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
            "--output", str(path), *extra)
        return path

    def test_round_trip(self, capsys, tmp_path):
        path = self.make_cert(capsys, tmp_path)
        code, out, err = run(capsys, "verify", "--cert", str(path))
        assert code == 0 and err == ""
        assert out == ("ok: certificate re-derived and checked "
                       "(q=3 a=1 k=5 t=0 B=30)\n")

    def test_tampered_cert_rejected(self, capsys, tmp_path):
        path = self.make_cert(capsys, tmp_path)
        data = json.loads(path.read_text())
        data["offsets"] = [7, 13, 19, 31, 43]
        path.write_text(json.dumps(data))
        code, _, err = run(capsys, "verify", "--cert", str(path))
        assert code == 1
        assert err.startswith("error: domain:")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--cert", str(tmp_path / "no.json"))
        assert code == 1
        assert "cannot read certificate" in err

    def test_malformed_json(self, capsys, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        code, _, err = run(capsys, "verify", "--cert", str(path))
        assert code == 1
        assert "malformed certificate JSON" in err


class TestScan:
    def test_jsonl_matches_library(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
            "--output", str(path))
        code, out, _ = run(capsys, "scan", "--cert", str(path),
                           "--n-lo", "1", "--n-hi", "20")
        assert code == 0
        c = build(ConstructionParams(q=3, a=1, k=5))
        assert out == window_reports_to_jsonl(scan_windows(c, 1, 20))

    def test_threads_do_not_change_output(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
            "--output", str(path))
        base = ("scan", "--cert", str(path), "--n-lo", "0", "--n-hi", "30")
        _, serial, _ = run(capsys, *base)
        _, threaded, _ = run(capsys, *base, "--threads", "4")
        assert serial == threaded

    def test_text_lines(self, capsys, tmp_path):
        path = tmp_path / "cert.json"
        run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
            "--output", str(path))
        _, out, _ = run(capsys, "scan", "--cert", str(path),
                        "--n-lo", "3", "--n-hi", "3", "--format", "text")
        assert out == "n=3 primes=3 offsets=[7,13,31]\n"


def test_bounds_csv_shape(capsys):
    code, out, _ = run(capsys, "bounds", "--q-min", "3", "--q-max", "4",
                       "--k-min", "2", "--k-max", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "q,a,k,t,B,window_cap,t_in_window"
    # q in {3, 4} each has two coprime residues, crossed with two k values
    assert len(lines) == 1 + 8
    assert lines[1].startswith("3,1,2,")


def test_search_first_string_json(capsys):
    code, out, _ = run(capsys, "search", "--q", "4", "--a", "1", "--m", "2",
                       "--cap", "100")
    assert code == 0
    assert json.loads(out) == {"q": 4, "a": 1, "m": 2, "start_prime": 13,
                               "primes": [13, 17], "diameter": 4}


def test_search_text_line(capsys):
    _, out, _ = run(capsys, "search", "--q", "3", "--a", "1", "--m", "2",
                    "--cap", "100", "--format", "text")
    assert out == "q=3 a=1 m=2 start_index=10 diameter=6 primes=31,37\n"


def test_search_all_stats_csv(capsys):
    code, out, _ = run(capsys, "search", "--q", "3", "--a", "1", "--m", "2",
                       "--cap", "1000", "--all", "--format", "csv",
                       "--reference-b", "30")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "field,value"
    assert "count,23" in lines
    assert "median_diameter,6" in lines
    assert "at_or_below_reference,23" in lines


def test_search_not_found(capsys):
    code, out, err = run(capsys, "search", "--q", "3", "--a", "1", "--m", "2",
                         "--cap", "30")
    assert code == 1 and out == ""
    assert err.startswith("error: not-found:")


def test_sieve_cache_round_trip(capsys, tmp_path):
    path = tmp_path / "segments.bin"
    code, out, _ = run(capsys, "sieve-cache", "--height", "100000",
                       "--path", str(path))
    assert code == 0
    assert out == f"wrote 2 segments covering [2, 100000] to {path}\n"
    cache = load_segments(str(path))
    flags = cache.flags_for(99991, 99992)
    assert flags == bytearray([1])  # largest prime below 10^5
    # and the cache is accepted as a preload by another subcommand
    code, out, _ = run(capsys, "construct", "--q", "3", "--a", "1", "--k", "5",
                       "--sieve-cache", str(path))
    assert code == 0
    assert json.loads(out)["B"] == 30


def test_budget_env_stops_big_dumps(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("SHIU_SIEVE_BUDGET_MB", "1")
    code, _, err = run(capsys, "sieve-cache", "--height", "900000000",
                       "--path", str(tmp_path / "huge.bin"))
    assert code == 2
    assert err.startswith("error: resource:")
    assert not (tmp_path / "huge.bin").exists()


def test_internal_error_emits_repro_bundle(capsys, monkeypatch):
    def boom(args):
        raise InternalConsistencyError("fabricated disagreement",
                                       context={"q": 3, "detail": "test"})

    monkeypatch.setitem(cli._HANDLERS, "construct", boom)
    argv = ["construct", "--q", "3", "--a", "1", "--k", "5"]
    code = cli.main(argv)
    err = capsys.readouterr().err
    assert code == 3
    first, bundle = err.splitlines()
    assert first == "error: internal: fabricated disagreement"
    payload = json.loads(bundle)
    assert payload["argv"] == argv
    assert payload["context"] == {"q": 3, "detail": "test"}


def test_seed_doc_walkthrough(capsys):
    code, out, err = run(capsys, "--seed-doc")
    assert code == 0 and err == ""
    assert "3741870" in out
    assert "11225610" in out
    assert "B = 30" in out
    assert "7, 13, 19, 31, 37" in out
