import json

import pytest

import divlab.tolerances as tol_mod
from divlab.tolerances import Tolerances, get_tolerances, load_tolerances


@pytest.fixture
def fresh_tolerances(monkeypatch):
    # reset the process-wide singleton around each test
    monkeypatch.setattr(tol_mod, "_active", None)
    yield
    monkeypatch.setattr(tol_mod, "_active", None)


def test_defaults():
    t = Tolerances()
    assert t.psd_floor == 1e-10
    assert t.probe_violation_rel == 1e-8
    assert t.jacobi_sweep_cap == 100


def test_env_override(tmp_path, monkeypatch, fresh_tolerances):
    path = tmp_path / "tol.json"
    path.write_text(json.dumps({"psd_floor": 1e-8}))
    monkeypatch.setenv("DIVLAB_TOLERANCE_FILE", str(path))
    t = get_tolerances()
    assert t.psd_floor == 1e-8
    assert t.probe_violation_rel == 1e-8  # untouched fields keep defaults
    assert get_tolerances() is t  # read-only singleton after startup


def test_unknown_field_rejected(tmp_path):
    path = tmp_path / "tol.json"
    path.write_text(json.dumps({"not_a_tolerance": 1.0}))
    with pytest.raises(ValueError, match="unknown tolerance fields"):
        load_tolerances(str(path))


def test_non_object_rejected(tmp_path):
    path = tmp_path / "tol.json"
    path.write_text("[1, 2, 3]")
    with pytest.raises(ValueError, match="JSON object"):
        load_tolerances(str(path))


def test_frozen():
    t = Tolerances()
    with pytest.raises(AttributeError):
        t.psd_floor = 1.0
