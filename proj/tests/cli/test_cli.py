import json
import os
import subprocess
from pathlib import Path

import pytest

CLI = os.environ["NEDET_CLI"]
DATA = Path(os.environ["NEDET_DATA_DIR"])
PATTERNS = str(DATA / "digits.txt")
CONFIG = str(DATA / "experiment.json")


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def test_train_writes_trace_and_checkpoint(tmp_path):
    trace = tmp_path / "t.jsonl"
    ckpt = tmp_path / "c.json"
    r = run("train", "--config", CONFIG, "--patterns", PATTERNS, "--trace", str(trace),
            "--checkpoint", str(ckpt))
    assert r.returncode == 0, r.stderr
    report = json.loads(r.stdout)
    assert report["recall_correct"] == 10
    assert len(trace.read_text().splitlines()) == 60

    rebuilt = run("trace", "--trace", str(trace))
    assert rebuilt.returncode == 0
    assert json.loads(rebuilt.stdout) == report

    recall = run("recall", "--checkpoint", str(ckpt), "--patterns", PATTERNS)
    assert recall.returncode == 0
    assert json.loads(recall.stdout)["recall_correct"] == 10

    inspect = run("inspect", "--checkpoint", str(ckpt))
    assert inspect.returncode == 0
    assert len(json.loads(inspect.stdout)["modules"][0]["detectors"]) == 10


def test_same_seed_same_trace(tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        assert run("train", "--config", CONFIG, "--patterns", PATTERNS, "--trace", str(path),
                   "--seed", "5").returncode == 0
    assert a.read_bytes() == b.read_bytes()


def test_stop_and_resume(tmp_path):
    full, part = tmp_path / "full.jsonl", tmp_path / "part.jsonl"
    ckpt = tmp_path / "mid.json"
    args = ["--config", CONFIG, "--patterns", PATTERNS]
    assert run("train", *args, "--trace", str(full)).returncode == 0
    stopped = run("train", *args, "--stop-after", "17", "--checkpoint", str(ckpt))
    assert stopped.returncode == 0
    resumed = run("train", "--patterns", PATTERNS, "--resume", str(ckpt), "--trace", str(part))
    assert resumed.returncode == 0, resumed.stderr
    assert part.read_bytes() == full.read_bytes()


def test_recall_untrained():
    r = run("recall", "--patterns", PATTERNS)
    assert r.returncode == 0
    report = json.loads(r.stdout)
    assert report["recall_winners"] == 0
    assert report["captures"] == 0


def test_strict_gt_flag(tmp_path):
    r = run("inspect", "--config", CONFIG, "--strict-gt")
    assert r.returncode == 0
    assert json.loads(r.stdout)["config"]["strict_gt"] is True


@pytest.mark.parametrize(
    "args",
    [
        ["train"],
        ["train", "--patterns", PATTERNS, "--seed", "x"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_1(args):
    assert run(*args).returncode == 1


def test_validation_errors_exit_1(tmp_path):
    bad_config = tmp_path / "bad.json"
    bad_config.write_text('{"theta": 3}')
    assert run("train", "--config", str(bad_config), "--patterns", PATTERNS).returncode == 1
    ragged = tmp_path / "ragged.txt"
    ragged.write_text("pattern A\n..#\n.#\nend\n")
    r = run("train", "--patterns", str(ragged))
    assert r.returncode == 1
    assert "DimensionMismatch" in r.stderr


def test_runtime_errors_exit_2(tmp_path):
    assert run("train", "--patterns", str(tmp_path / "missing.txt")).returncode == 2
    small = tmp_path / "small.json"
    small.write_text('{"module_sizes": [2]}')
    r = run("train", "--config", str(small), "--patterns", PATTERNS)
    assert r.returncode == 2
    assert "NoFreeDetector" in r.stderr


def test_selftest_single_criterion():
    r = run("selftest", "--criterion", "9")
    assert r.returncode == 0
    assert r.stdout.startswith("PASS")
