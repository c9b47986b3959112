import json
import os
from pathlib import Path

import numpy as np
import pytest

import norden

CORPUS = Path(os.environ.get("NORDEN_CORPUS", Path(__file__).resolve().parents[2] / "corpus"))


def test_load_and_validate():
    m = norden.load_model(CORPUS / "QK4.json")
    assert m.name == "QK4" and m.dim == 4
    v = norden.validate(m)
    assert v["ok"]
    assert v["metric_signature"] == (2, 2)
    J = m.J
    assert np.allclose(J @ J, -np.eye(4), atol=1e-9)
    g = m.metric
    assert np.allclose(J.T @ g @ J, -g, atol=1e-9)


def test_verify_report_shape():
    r = norden.verify(norden.load_model(CORPUS / "RN4.json"))
    assert set(r) >= {"instance_name", "toolkit_version", "checks", "summary", "measurements"}
    s = r["summary"]
    assert s["pass"] + s["fail"] + s["not_applicable"] == s["total"] == len(norden.check_catalog())
    assert s["fail"] == 0


def test_selected_checks_and_known_failure():
    m = norden.load_model(CORPUS / "QK6.json")
    r = norden.verify(m, ["thm_4_2", "thm_4_4"])
    assert [c["check_id"] for c in r["checks"]] == ["thm_4_2", "thm_4_4"]
    assert norden.failing_checks(r) == ["thm_4_4"]
    assert r["measurements"]["scalar_gap_coefficient"] == pytest.approx(-0.125, rel=1e-7)


def test_generate_is_deterministic():
    a = norden.generate("random_norden", 6, 3)
    b = norden.generate("random_norden", 6, 3)
    assert a.to_json() == b.to_json()
    assert norden.validate(a)["ok"]
    assert norden.parse_model(a.to_json()).to_json() == a.to_json()


def test_canonical_connection_is_metric():
    m = norden.load_model(CORPUS / "QK4.json")
    c = norden.canonical_connection(m)
    Q = c["Q"]
    assert Q.shape == (4, 4, 4)
    assert np.abs(Q + Q.transpose(0, 2, 1)).max() < 1e-9
    F = norden.fundamental_tensor(m)
    assert np.abs(F - F.transpose(0, 2, 1)).max() < 1e-9
    assert abs(norden.square_norm(m)) > 1e-6


def test_errors_are_typed():
    with pytest.raises(norden.ModelFormatError):
        norden.parse_model("{ not json")
    text = json.loads((CORPUS / "F4.json").read_text())
    text["metric"] = np.eye(4).tolist()
    broken = norden.parse_model(json.dumps(text))
    assert not norden.validate(broken)["ok"]
    with pytest.raises(norden.ValidationError, match=r"signature must be \(n,n\)"):
        norden.verify(broken)
    with pytest.raises(norden.NordenError, match="unknown instance kind"):
        norden.generate("torus", 4, 1)


def test_corpus_run_surfaces_missing_instance():
    c = norden.run_corpus(CORPUS)
    assert [m["name"] for m in c["not_found"]] == ["PT4"]
    assert c["summary"]["instances"] == len(c["instances"])
