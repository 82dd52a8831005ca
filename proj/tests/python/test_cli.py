"""Exit-code and stream contract of the trustcat command-line tool.

0 = success/clean, 1 = error-grade findings, 2 = verdict not trustworthy,
3 = input/IO/schema error. Diagnostics on stderr, payload on stdout.
"""

import json
import os
import subprocess

import pytest

ROOT = os.environ.get("TRUSTCAT_SOURCE_DIR", os.path.join(os.path.dirname(__file__), "..", ".."))
BIN = os.environ.get("TRUSTCAT_BIN", os.path.join(ROOT, "build", "tools", "trustcat"))
CORPUS = os.path.join(ROOT, "corpus")
BASE = os.path.join(CORPUS, "credit-scoring.assessment.json")
DATA_ARGS = [
    "--data", "eval=" + os.path.join(CORPUS, "data", "eval.csv"),
    "--data", "train=" + os.path.join(CORPUS, "data", "train.csv"),
]


def run(*args, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    return subprocess.run([BIN, *args], capture_output=True, text=True, env=full_env)


def mutation(name):
    return os.path.join(CORPUS, "mutations", name + ".json")


def test_catalog_validate():
    r = run("catalog", "validate")
    assert r.returncode == 0
    assert "0 defect(s)" in r.stdout

    r = run("catalog", "validate", "/nonexistent/catalog.json")
    assert r.returncode == 3
    assert r.stderr


def test_catalog_validate_defective(tmp_path):
    catalog = json.load(open(os.path.join(ROOT, "data", "catalog.json")))
    items = catalog["dimensions"][0]["risk_areas"][0]["items"]
    items.append(items[0])  # duplicate id
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(catalog))
    r = run("catalog", "validate", str(bad))
    assert r.returncode == 1
    assert "defect" in r.stderr


def test_catalog_show():
    r = run("catalog", "show", "S-R-FS-ME-12")
    assert r.returncode == 0
    assert "Option for human intervention" in r.stdout

    assert run("catalog", "show", "RE-R-XX-CR-01").returncode == 3
    assert run("catalog", "show", "FN-R-FN-ME-99").returncode == 3


def test_catalog_env_override(tmp_path):
    # a syntactically valid but wrong file must be picked up via the env var
    empty = tmp_path / "cat.json"
    empty.write_text("{}")
    r = run("catalog", "validate", env={"TRUSTCAT_CATALOG": str(empty)})
    assert r.returncode == 3

    # a real alternate catalog takes effect
    alt = json.load(open(os.path.join(ROOT, "data", "catalog.json")))
    alt["version"] = "override-test"
    alt_path = tmp_path / "alt.json"
    alt_path.write_text(json.dumps(alt))
    r = run("catalog", "validate", env={"TRUSTCAT_CATALOG": str(alt_path)})
    assert r.returncode == 0
    assert "override-test" in r.stdout


def test_catalog_show_normalizes_input():
    r = run("catalog", "show", "[s-r-fs-me-12]")
    assert r.returncode == 0
    assert r.stdout.startswith("S-R-FS-ME-12 ")


def test_assess_init(tmp_path):
    out = tmp_path / "doc.json"
    r = run("assess", "init", "--levels",
            "FN=high,AC=medium,TR=medium,RE=high,S=medium,DP=high", "-o", str(out))
    assert r.returncode == 0
    doc = json.loads(out.read_text())
    assert set(doc["protection"]) == {"FN", "AC", "TR", "RE", "S", "DP"}
    assert len(doc["responses"]) + len(doc["profile"]) == 242

    assert run("assess", "init", "--levels",
               "FN=low,AC=low,TR=low,RE=low,S=low,DP=low").returncode == 3
    assert run("assess", "init", "--levels", "FN=high").returncode == 3


def test_assess_lint():
    assert run("assess", "lint", BASE).returncode == 0
    r = run("assess", "lint", mutation("01-required-item-missing"))
    assert r.returncode == 1
    assert "RequiredItemMissing" in r.stderr
    # warnings alone do not fail the lint
    assert run("assess", "lint", mutation("03-conditional-evidence-absent")).returncode == 0
    assert run("assess", "lint", "/nonexistent.json").returncode == 3


def test_assess_metrics(tmp_path):
    out = tmp_path / "evaluated.json"
    r = run("assess", "metrics", BASE, *DATA_ARGS, "-o", str(out))
    assert r.returncode == 0
    doc = json.loads(out.read_text())
    measured = [b["measured"] for resp in doc["responses"]
                for b in resp.get("bindings", [])]
    assert len(measured) == 9 and all(m is not None for m in measured)

    # unresolved dataset reference
    assert run("assess", "metrics", BASE).returncode == 3


def test_assess_verdict():
    assert run("assess", "verdict", BASE).returncode == 0
    r = run("assess", "verdict", BASE)
    assert "trustworthy_with_residuals" in r.stdout

    assert run("assess", "verdict", mutation("11-verdict-unacceptable-residual")).returncode == 2
    assert run("assess", "verdict", mutation("12-verdict-uncovered-residual")).returncode == 2
    # lint errors take precedence: not assessable
    r = run("assess", "verdict", mutation("01-required-item-missing"))
    assert r.returncode == 1
    assert "not_assessable" in r.stdout


def test_assess_report(tmp_path):
    r = run("assess", "report", BASE, *DATA_ARGS, "--format", "json")
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    assert payload["verdict"]["outcome"] == "trustworthy_with_residuals"
    assert "report_date" not in payload

    r = run("assess", "report", BASE, *DATA_ARGS, "--format", "json", "--date", "2024-06-01")
    assert json.loads(r.stdout)["report_date"] == "2024-06-01"

    # markdown to a file, byte-identical with the golden
    out = tmp_path / "report.md"
    r = run("assess", "report", BASE, *DATA_ARGS, "-o", str(out))
    assert r.returncode == 0
    golden = open(os.path.join(CORPUS, "golden", "credit-scoring.report.md"), "rb").read()
    assert out.read_bytes() == golden

    assert run("assess", "report", mutation("11-verdict-unacceptable-residual"),
               *DATA_ARGS).returncode == 2
    assert run("assess", "report", mutation("01-required-item-missing"),
               *DATA_ARGS).returncode == 1
    assert run("assess", "report", "/nonexistent.json").returncode == 3


def test_diagnostics_do_not_pollute_stdout():
    r = run("assess", "report", mutation("01-required-item-missing"), *DATA_ARGS,
            "--format", "json")
    # the payload must still parse even when findings are reported
    payload = json.loads(r.stdout)
    assert payload["verdict"]["outcome"] == "not_assessable"
    assert "RequiredItemMissing" in r.stderr
