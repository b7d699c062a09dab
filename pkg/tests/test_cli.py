import json
import subprocess
import sys

import pytest
from sympy import primerange

from governext.cli import main
from governext.fields import factor_rational_prime, make_field
from governext.governing import power_residue_symbol

# smallest split prime 1 mod 3 where (3+sqrt(-23))/2 is a cube
MINUS23_TRIVIAL_PRIME = 151


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_intro_example(capsys):
    code, out, _ = run(capsys, "analyze", "--field", "Q", "--prime", "2", "--places", "3,7")
    doc = json.loads(out)
    assert code == 0
    assert doc["exists"] is True and doc["counts"]["relations"] == 1
    assert doc["v"] == 1
    assert set(doc) == {"v", "field", "p", "places", "basis", "relations", "counts", "ledger", "exists"}
    assert doc["field"] == {"kind": "rational", "d": None, "disc": 1, "r1": 1, "r2": 0, "delta": 1}


def test_archimedean_needs_p2(capsys):
    code, out, err = run(capsys, "analyze", "--field", "Q", "--prime", "3", "--places", "inf")
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "ArchimedeanRequiresP2"


def test_minus_23_example(capsys):
    code, out, _ = run(capsys, "analyze", "--field", "d=-23", "--prime", "3",
                       "--places", f"{MINUS23_TRIVIAL_PRIME}.1", "--verify", "--subsets", "--emit-matrix")
    doc = json.loads(out)
    assert code == 0 and doc["exists"] is True
    assert doc["matrix"]["columns"] == [[0]]
    assert doc["counts"] == {"relations": 2, "cohomology": 2, "oracle": 2}
    assert [row["dim"] for row in doc["koch"]] == [1, 2]
    assert doc["basis"]["entries"][0]["value"] == "(3+sqrt(-23))/2"


def test_smaller_split_primes_have_nonzero_symbol():
    F = make_field(-23)
    alpha = F.element(1, 1)
    for ell in primerange(5, MINUS23_TRIVIAL_PRIME):
        places = factor_rational_prime(F, ell)
        if ell % 3 == 1 and len(places) == 2:
            assert all(power_residue_symbol(v, alpha, 3) for v in places)


@pytest.mark.parametrize(
    "argv, code, err",
    [(["--field", "12", "--prime", "2", "--places", "3"], 2, "NonSquarefree"),
     (["--field", "Q", "--prime", "3", "--places", "5"], 2, "DeltaZero"),
     (["--field", "Q", "--prime", "3", "--places", "3"], 2, "WildPlace"),
     (["--field", "Q", "--prime", "4", "--places", "5"], 2, "MalformedToken"),
     (["--field", "-23", "--prime", "3", "--places", "13"], 2, "AmbiguousPlace"),
     (["--field", "Q", "--prime", "2", "--places", "3,3"], 2, "DuplicatePlace")],
)
def test_validation_errors(capsys, argv, code, err):
    got, out, stderr = run(capsys, "analyze", *argv)
    assert got == code and json.loads(stderr.strip().splitlines()[-1])["error"] == err


def test_output_is_deterministic(capsys):
    argv = ["analyze", "--field", "-161", "--prime", "2", "--places", "3.1,5.2", "--subsets", "--verify"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b and json.loads(a)["verdict"] == "pass"


def test_cache_cold_and_warm_identical(capsys, tmp_path):
    argv = ["analyze", "--field", "79", "--prime", "3", "--places", "7.1,19", "--verify",
            "--cache", str(tmp_path)]
    _, cold, _ = run(capsys, *argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    _, warm, _ = run(capsys, *argv)
    assert cold == warm
    # a subset of the cached avoidance set is a hit and the file is left alone
    stamp = files[0].stat().st_mtime_ns
    run(capsys, "analyze", "--field", "79", "--prime", "3", "--places", "19", "--cache", str(tmp_path))
    assert files[0].stat().st_mtime_ns == stamp


def test_cache_miss_rewrites_entry(capsys, tmp_path):
    base = ["analyze", "--field", "-23", "--prime", "3", "--cache", str(tmp_path)]
    run(capsys, *base, "--places", "13.1")
    (entry,) = tmp_path.iterdir()
    assert json.loads(entry.read_text())["basis"]["avoid"] == ["13.1"]
    run(capsys, *base, "--places", "31.2")
    assert json.loads(entry.read_text())["basis"]["avoid"] == ["31.2"]


def test_corrupt_cache_entry_is_discarded(capsys, tmp_path):
    argv = ["analyze", "--field", "-23", "--prime", "3", "--places", "151.1", "--cache", str(tmp_path)]
    _, cold, _ = run(capsys, *argv)
    (entry,) = tmp_path.iterdir()
    entry.write_text("{not json")
    code, warm, _ = run(capsys, *argv)
    assert code == 0 and warm == cold
    assert json.loads(entry.read_text())["p"] == 3


def test_cache_env_var(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("GOVERNING_CACHE", str(tmp_path))
    run(capsys, "analyze", "--field", "10", "--prime", "2", "--places", "3.1")
    assert [f.name for f in tmp_path.iterdir()] == ["disc40_p2.json"]


def test_verify_rational_sweep(capsys):
    code, out, _ = run(capsys, "verify", "--field", "Q", "--prime", "2", "--dmax", "300")
    doc = json.loads(out)
    assert code == 0 and doc["failures"] == [] and doc["cases"] > 100


def test_verify_drange_with_negative_bound(capsys):
    code, out, _ = run(capsys, "verify", "--drange", "-12..-5", "--primes", "2,3", "--max-places", "2",
                       "--cases", "5", "--norm-bound", "200")
    doc = json.loads(out)
    assert code == 0 and doc["fields"] == 5 and doc["cases"] == 50 and doc["failures"] == []


def test_verify_empty_corpus(capsys):
    code, out, _ = run(capsys, "verify", "--drange", "0..1")
    doc = json.loads(out)
    assert code == 0 and doc["cases"] == 0


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "governext", "analyze", "--field", "Q", "--prime", "2",
                          "--places", "3,5,inf"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["exists"] is True


def test_cached_basis_from_larger_set_gives_same_counts(capsys, tmp_path):
    base = ["analyze", "--field", "-161", "--prime", "2", "--subsets"]
    run(capsys, *base, "--places", "3.1,5.2,7,11.1", "--cache", str(tmp_path))
    _, warm, _ = run(capsys, *base, "--places", "5.2,11.1", "--cache", str(tmp_path))
    _, fresh, _ = run(capsys, *base, "--places", "5.2,11.1")
    warm, fresh = json.loads(warm), json.loads(fresh)
    for key in ("counts", "koch", "ledger", "exists"):
        assert warm[key] == fresh[key]
    assert warm["relations"]["s"] == fresh["relations"]["s"]
