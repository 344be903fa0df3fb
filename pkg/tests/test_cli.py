"""End-to-end command-line checks: JSON payload shapes and exit codes."""

import contextlib
import io
import json

import pytest

from distnav.cli import main
from distnav.gcring import presentation_to_dict
from distnav.presentations import complex_projective, config_space


def run(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = main(list(argv))
    text = out.getvalue()
    return code, (json.loads(text) if text.strip() else None)


def write_measure(path, atoms):
    path.write_text(json.dumps([{"point": p, "weight": w} for p, w in atoms]))
    return str(path)


# === ring group ===


def test_normal_form_square_vanishes():
    code, out = run("ring", "normal-form", "--ring", "conf:d=2,k=4", "--word", "w_1_2,w_1_2")
    assert code == 0
    assert out["schema_version"] == 1
    assert out["zero"] is True
    assert out["normal_form"] == []


def test_normal_form_straightening():
    code, out = run(
        "ring", "normal-form", "--ring", "conf:d=2,k=4",
        "--word", "w_1_4,w_2_4", "--coeff", "3/2",
    )
    assert code == 0
    assert out["zero"] is False
    coeffs = sorted(t["coefficient"] for t in out["normal_form"])
    assert coeffs == ["-3/2", "3/2"]


def test_normal_form_unknown_generator_exits_2():
    code, out = run("ring", "normal-form", "--ring", "cp2", "--word", "nope")
    assert code == 2
    assert "error" in out and out["schema_version"] == 1


def test_poincare_cp2():
    code, out = run("ring", "poincare", "--ring", "cp2", "--max-degree", "6")
    assert code == 0
    assert out["series"] == [1, 0, 1, 0, 1, 0, 0]


def test_unknown_ring_exits_2():
    code, out = run("ring", "poincare", "--ring", "mystery")
    assert code == 2
    assert "unknown presentation" in out["error"]


def test_confluence_pass_and_fail(tmp_path):
    code, out = run("ring", "confluence", "--ring", "conf:d=2,k=4")
    assert code == 0
    assert out["passed"] is True
    assert out["failures"] == []

    data = presentation_to_dict(config_space(2, 4))
    flips = 0
    for rule in data["rules"]:
        if rule["lhs"] == ["w_1_4", "w_2_4"]:
            for term in rule["rhs"]:
                if term["monomial"] == ["w_1_2", "w_1_4"]:
                    term["coeff"] = "1"
                    flips += 1
    assert flips == 1
    bad = tmp_path / "broken.json"
    bad.write_text(json.dumps(data))
    # file-loaded presentations are gated at load time, before any command runs
    code, out = run("ring", "confluence", "--ring", str(bad))
    assert code == 3
    assert "confluence" in out["error"]


def test_env_directory_resolution(tmp_path, monkeypatch):
    ring_file = tmp_path / "tiny.json"
    ring_file.write_text(json.dumps(presentation_to_dict(complex_projective(1))))
    monkeypatch.delenv("DISTNAV_PRESENTATIONS", raising=False)
    code, _ = run("ring", "poincare", "--ring", "tiny")
    assert code == 2
    monkeypatch.setenv("DISTNAV_PRESENTATIONS", str(tmp_path))
    code, out = run("ring", "poincare", "--ring", "tiny", "--max-degree", "2")
    assert code == 0
    assert out["series"] == [1, 0, 1]


def test_missing_presentation_file_exits_2(tmp_path):
    code, out = run("ring", "poincare", "--ring", str(tmp_path / "gone.json"))
    assert code == 2


# === bound group ===


def test_bound_fn_with_citation():
    code, out = run("bound", "fn", "--d", "3", "--m", "2", "--n", "1", "--r", "2", "--cite")
    assert code == 0
    assert out["bound"] == 3
    assert out["certificate"]["provenance"] == "fiber-product-diagonal-kernel-witness"
    tags = [c["tag"] for c in out["citations"]]
    assert tags == ["fiber-product-diagonal-kernel-witness"]
    assert out["citations"][0]["statement"]


def test_bound_fn_bad_parameters_exit_3():
    code, out = run("bound", "fn", "--d", "1", "--m", "2", "--n", "1", "--r", "2")
    assert code == 3
    assert "error" in out


def test_bound_sphere_bundle():
    code, out = run("bound", "sphere-bundle", "--n", "2", "--r", "2")
    assert code == 0
    assert out["height"] == 3
    assert out["bound"] == 4
    code, same = run("bound", "sphere-bundle", "--n", "2", "--r", "2", "--partition", "3")
    assert code == 0
    assert same["bound"] == 4


def test_bound_sphere_bundle_bad_partition_exits_3():
    code, out = run("bound", "sphere-bundle", "--n", "2", "--r", "2", "--partition", "1,1")
    assert code == 3
    assert "partition" in out["error"]


def test_bound_cup_length():
    code, out = run("bound", "cup-length", "--d", "2", "--m", "2", "--n", "1", "--r", "2")
    assert code == 0
    assert out["cup_length"] == 2
    assert out["kernel_elements"]


# === value group ===


def test_value_fn_payload():
    code, out = run("value", "fn", "--d", "2", "--m", "3", "--n", "2", "--r", "3")
    assert code == 0
    assert out["exact"] == 7
    assert out["provenance"][0]["kind"] == "certificate"


def test_value_so3_cite_lists_both_sources():
    code, out = run("value", "so3", "--r", "4", "--cite")
    assert code == 0
    assert (out["lower"], out["upper"]) == (3, 7)
    assert out["exact"] is None
    assert out["extras"]["classical_sequential_value"] == 9
    tags = {c["tag"] for c in out["citations"]}
    assert tags == {"rotation-bundle-value", "nontrivial-fiber-lower"}


def test_value_spheres():
    code, out = run("value", "spheres", "--dims", "2,3", "--r", "2", "--flips", "2,2")
    assert code == 0
    assert (out["lower"], out["upper"], out["exact"]) == (3, 4, None)
    code, out = run("value", "spheres", "--dims", "2,4", "--r", "2")
    assert code == 0
    assert out["exact"] == 4
    code, out = run("value", "spheres", "--dims", "2,3", "--r", "2", "--flips", "1,2")
    assert code == 2


def test_value_scalars():
    code, out = run("value", "associate", "--dtc", "1")
    assert (code, out["upper"]) == (0, 3)
    code, out = run("value", "threshold", "--r", "3")
    assert code == 0
    assert out["threshold"] == "15/2"
    assert out["threshold_float"] == 7.5
    assert (out["numerator"], out["denominator"]) == (15, 2)
    code, out = run("value", "hopf", "--r", "5")
    assert (code, out["exact"]) == (0, 4)


# === nav group ===


def test_nav_rpn_payload():
    code, out = run("nav", "rpn", "--x", "1,0,0", "--y", "0,1,0")
    assert code == 0
    assert out["r"] == 2
    assert out["support"] == 2
    assert abs(out["weight_sum"] - 1.0) <= 1e-12
    assert out["atoms"][0]["weight"] >= out["atoms"][1]["weight"]
    assert len(out["atoms"][0]["trace"]) == 9


def test_nav_rpn_rejects_bad_input():
    code, out = run("nav", "rpn", "--x", "2,0,0", "--y", "0,1,0")
    assert code == 2  # not a unit representative
    code, out = run("nav", "rpn", "--x", "1,0", "--y", "0,1,0")
    assert code == 2  # dimension mismatch
    code, out = run("nav", "rpn", "--x", "1,zz", "--y", "0,1")
    assert code == 2  # unparseable number


def test_nav_circle_payload():
    code, out = run("nav", "circle", "--points", "1,0;0,1")
    assert code == 0
    weights = sorted(a["weight"] for a in out["atoms"])
    assert weights == [0.25, 0.75]
    code, _ = run("nav", "circle", "--points", "1,0;0,1", "--r", "3")
    assert code == 2  # r disagrees with the checkpoint count


def test_nav_hopf_payload():
    code, out = run("nav", "hopf", "--points", "1,0,0,0;0,1,0,0")
    assert code == 0
    assert sorted(a["weight"] for a in out["atoms"]) == [0.25, 0.75]
    code, out = run("nav", "hopf", "--points", "1,0,0,0;0,0,1,0")
    assert code == 2
    assert "fiber" in out["error"]


def test_nav_equivariance_passes():
    code, out = run("nav", "equivariance", "--n", "2", "--pairs", "4", "--elements", "2")
    assert code == 0
    assert out["samples"] == 8
    assert out["failures"] == []
    assert out["max_discrepancy"] <= 1e-9


def test_nav_continuity_reports():
    code, out = run("nav", "continuity", "--n", "2", "--pairs", "2", "--samples", "3")
    assert code == 0
    assert out["samples"] == 6
    assert "max_discrepancy" in out


# === measure group ===


def test_measure_lp_and_product(tmp_path):
    mu = write_measure(tmp_path / "mu.json", [([0.0, 0.0], "1/2"), ([1.0, 0.0], "1/2")])
    nu = write_measure(tmp_path / "nu.json", [([0.0, 0.0], "1/2"), ([1.0, 0.0], "1/2")])
    code, out = run("measure", "lp", "--mu", mu, "--nu", nu)
    assert code == 0
    assert out["distance"] == 0.0

    far = write_measure(tmp_path / "far.json", [([0.25, 0.0], 1)])
    near = write_measure(tmp_path / "near.json", [([0.0, 0.0], 1)])
    code, out = run("measure", "lp", "--mu", far, "--nu", near, "--precision", "1e-9")
    assert code == 0
    assert abs(out["distance"] - 0.25) <= 1e-8

    code, out = run("measure", "product", "--mu", mu, "--nu", far)
    assert code == 0
    assert out["mode"] == "exact"
    assert out["support"] == 2
    assert sorted(a["weight"] for a in out["atoms"]) == ["1/2", "1/2"]


def test_measure_errors(tmp_path):
    code, out = run("measure", "lp", "--mu", str(tmp_path / "absent.json"), "--nu", str(tmp_path / "absent.json"))
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, out = run("measure", "lp", "--mu", str(bad), "--nu", str(bad))
    assert code == 2
    unbalanced = write_measure(tmp_path / "u.json", [([0.0], "1/3")])
    code, out = run("measure", "lp", "--mu", unbalanced, "--nu", unbalanced)
    assert code == 2


# === shared flags ===


def test_json_flag_is_noop():
    _, plain = run("value", "hopf", "--r", "2")
    _, flagged = run("value", "hopf", "--r", "2", "--json")
    assert plain == flagged


def test_cite_absent_without_flag():
    _, out = run("value", "so3", "--r", "2")
    assert "citations" not in out


def test_argparse_failures_exit_2():
    code, _ = run("no-such-group")
    assert code == 2
    code, _ = run("ring", "poincare")  # missing --ring
    assert code == 2
    code, _ = run()
    assert code == 2
