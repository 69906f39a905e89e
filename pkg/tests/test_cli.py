import json

import pytest

from wittmod.cli import main

ALPHA = ["1/2", "1/3"]


def run(capsys, tmp_path, command, config=None, flags=(), cache=None, out=None):
    """Invoke the CLI in-process; returns (exit code, parsed report or None)."""
    argv = [command]
    if config is not None:
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        argv += ["--config", str(path)]
    argv += ["--cache-dir", str(cache if cache is not None else tmp_path / "cache")]
    if out is not None:
        argv += ["--out", str(out)]
    argv += list(flags)
    code = main(argv)
    captured = capsys.readouterr()
    if out is not None:
        text = out.read_text() if out.exists() else ""
    else:
        text = captured.out
    report = json.loads(text) if text.strip() else None
    return code, report, captured.err


EXT_REP = {
    "d": 2,
    "alpha": ALPHA,
    "module": {"variant": "exterior", "k": 1, "b": "1"},
    "radius": 1,
    "degree_radius": 1,
}


def test_verify_rep_pass(capsys, tmp_path):
    code, report, _ = run(capsys, tmp_path, "verify-rep", EXT_REP)
    assert code == 0
    assert report["schema"] == "witt-report/1"
    assert report["outcome"] == "pass"
    assert report["details"]["counterexample"] is None
    assert report["config"]["module"]["b"] == "1"
    assert "timing_seconds" in report


def test_unknown_subcommand_exits_2(capsys, tmp_path):
    assert main(["frobnicate"]) == 2


def test_config_error_reports_field_path(capsys, tmp_path):
    bad = dict(EXT_REP)
    bad["alpha"] = ["1/2"]
    code, report, err = run(capsys, tmp_path, "verify-rep", bad)
    assert code == 2
    assert report is None
    assert "alpha" in err


def test_float_in_config_rejected(capsys, tmp_path):
    bad = {
        "d": 2,
        "alpha": [0.5, "1/3"],
        "module": {"variant": "exterior", "k": 1, "b": "1"},
    }
    code, _, err = run(capsys, tmp_path, "verify-rep", bad)
    assert code == 2
    assert "alpha" in err


def test_verify_rep_via_flags(capsys, tmp_path):
    code, report, _ = run(
        capsys,
        tmp_path,
        "verify-rep",
        None,
        flags=[
            "--d", "2", "--alpha", "1/2,1/3", "--variant", "exterior",
            "--k", "1", "--b", "0", "--radius", "1", "--degree-radius", "1",
        ],
    )
    assert code == 0
    assert report["outcome"] == "pass"
    assert report["config"]["module"]["k"] == 1


def test_verify_gl_mutation_fixture_fails(capsys, tmp_path):
    config = {
        "d": 2,
        "module": {
            "variant": "explicit",
            "b": "1",
            "matrices": {
                "1,1": [[1, 0], [0, 0]],
                "1,2": [[0, -1], [0, 0]],
                "2,1": [[0, 0], [1, 0]],
                "2,2": [[0, 0], [0, 1]],
            },
        },
    }
    code, report, _ = run(capsys, tmp_path, "verify-gl", config)
    assert code == 1
    assert report["outcome"] == "fail"
    assert report["details"]["counterexample"] is not None


def test_classify_with_expectation(capsys, tmp_path):
    config = {
        "d": 2,
        "module": {"variant": "exterior", "k": 1, "b": "1"},
        "expect": "nilpotent",
    }
    code, report, _ = run(capsys, tmp_path, "classify", config)
    assert code == 0
    assert report["outcome"] == "pass"
    assert report["details"]["classifications"]["1,2"] == {
        "kind": "nilpotent",
        "index": 2,
    }
    config["expect"] = "injective"
    code, report, _ = run(capsys, tmp_path, "classify", config)
    assert code == 1


def test_classify_nilsson_requires_truncation(capsys, tmp_path):
    config = {"d": 2, "module": {"variant": "nilsson", "beta": "1/2", "b": "0"}}
    code, _, err = run(capsys, tmp_path, "classify", config)
    assert code == 2
    assert "truncation" in err


def test_closure_report(capsys, tmp_path):
    config = {
        "d": 2,
        "alpha": ALPHA,
        "module": {"variant": "exterior", "k": 1, "b": "0"},
        "generator": {"n": [0, 0], "key": [1]},
        "budget": {"R": 1, "T": 2},
        "window": {"N": 1},
    }
    code, report, _ = run(capsys, tmp_path, "closure", config)
    assert code == 0
    assert report["outcome"] == "report"
    assert report["details"]["dims"]["0,0"] == 2


def test_cyclic_covered(capsys, tmp_path):
    config = {
        "d": 2,
        "alpha": ALPHA,
        "module": {"variant": "nilsson", "beta": "1/2", "b": "0"},
        "generator": {"n": [0, 0], "key": [0]},
        "window": {"N": 1, "D": 2},
        "budget": {"R": 2, "T": 8},
    }
    code, report, _ = run(capsys, tmp_path, "cyclic", config)
    assert code == 0
    assert report["outcome"] == "covered"
    assert report["details"]["sufficient"] is not None
    assert report["details"]["sufficient"][0] == 1


def test_certify_reducible(capsys, tmp_path):
    config = {
        "d": 2, "k": 1, "b": "1", "alpha": ALPHA,
        "window": {"N": 2}, "radius": 1,
    }
    code, report, _ = run(capsys, tmp_path, "certify-reducible", config)
    assert code == 0
    assert report["outcome"] == "certificate"
    assert set(report["details"]["image_ranks"].values()) == {1}
    assert report["details"]["intertwiner_check"] == "pass"
    config["b"] = "0"
    code, report, _ = run(capsys, tmp_path, "certify-reducible", config)
    assert code == 1
    assert report["outcome"] == "no_certificate"
    assert report["details"]["failing_site"] is not None


def test_iso_check(capsys, tmp_path):
    config = {
        "left": {"d": 2, "alpha": ["1/2", "0"], "module": {"variant": "exterior", "k": 1, "b": "1"}},
        "right": {"d": 2, "alpha": ["3/2", "-1"], "module": {"variant": "exterior", "k": 1, "b": "1"}},
    }
    code, report, _ = run(capsys, tmp_path, "iso-check", config)
    assert code == 0
    assert report["outcome"] == "isomorphic"
    config["right"]["alpha"] = ["1/3", "0"]
    code, report, _ = run(capsys, tmp_path, "iso-check", config)
    assert code == 1
    assert report["details"]["alpha_shift_integral"] is False


def test_replay_claims(capsys, tmp_path):
    config = {
        "d": 2,
        "alpha": ALPHA,
        "module": {"variant": "exterior", "k": 1, "b": "1"},
        "m_radius": 1,
    }
    code, report, _ = run(capsys, tmp_path, "replay-claims", config)
    assert code == 0
    assert report["outcome"] == "pass"
    assert report["details"]["claim1_sites"] > 0
    assert report["details"]["failing_site"] is None


def test_cache_hit_reproduces_report_verbatim(capsys, tmp_path):
    cache = tmp_path / "shared-cache"
    code1, _, _ = run(capsys, tmp_path, "verify-rep", EXT_REP, cache=cache)
    files = list(cache.glob("*.json"))
    assert code1 == 0 and len(files) == 1
    stored = files[0].read_bytes()
    argv_config = tmp_path / "config.json"
    code2 = main(["verify-rep", "--config", str(argv_config), "--cache-dir", str(cache)])
    out2 = capsys.readouterr().out
    assert code2 == 0
    assert out2.encode() == stored  # verbatim, timing included


def test_equivalent_rational_spellings_share_cache_key(capsys, tmp_path):
    cache = tmp_path / "norm-cache"
    cfg_a = dict(EXT_REP, alpha=["1/2", "1/3"])
    cfg_b = dict(EXT_REP, alpha=["2/4", "2/6"])
    run(capsys, tmp_path, "verify-rep", cfg_a, cache=cache)
    run(capsys, tmp_path, "verify-rep", cfg_b, cache=cache)
    assert len(list(cache.glob("*.json"))) == 1


def test_threads_do_not_change_report(capsys, tmp_path):
    reports = []
    for threads, cache_name in (("1", "c1"), ("8", "c8")):
        code, report, _ = run(
            capsys,
            tmp_path,
            "verify-rep",
            EXT_REP,
            flags=["--threads", threads],
            cache=tmp_path / cache_name,
        )
        assert code == 0
        report.pop("timing_seconds")
        reports.append(json.dumps(report, sort_keys=True))
    assert reports[0] == reports[1]


def test_out_flag_writes_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, report, _ = run(capsys, tmp_path, "verify-rep", EXT_REP, out=target)
    assert code == 0
    assert target.is_file()
    assert report["outcome"] == "pass"


def test_cyclic_via_flags(capsys, tmp_path):
    code, report, _ = run(
        capsys,
        tmp_path,
        "cyclic",
        None,
        flags=[
            "--d", "2", "--alpha", "1/2,1/3", "--variant", "exterior",
            "--k", "1", "--b", "0", "--generator-n", "0,0",
            "--generator-key", "2", "--N", "1", "--R", "1", "--T", "6",
        ],
    )
    assert code == 0
    assert report["outcome"] == "covered"
