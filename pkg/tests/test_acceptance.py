"""Acceptance gate: one test per criterion, plus the determinism re-run.

The whole battery executes twice with the same master seed (once per artifact
directory); criterion 9 compares the two artifact trees byte for byte.
"""

import filecmp
import os

import pytest

from acceptance_runner import CRITERIA, MASTER_SEED, run_all


@pytest.fixture(scope="module")
def battery(tmp_path_factory):
    first_dir = tmp_path_factory.mktemp("acceptance-run1")
    second_dir = tmp_path_factory.mktemp("acceptance-run2")
    outcomes = run_all(str(first_dir), MASTER_SEED)
    rerun = run_all(str(second_dir), MASTER_SEED)
    for outcome in outcomes:
        status = "PASS" if outcome.passed else "FAIL"
        print(f"[criterion {outcome.number}] {status} - {outcome.name}: {outcome.detail}")
    return {
        "outcomes": {o.number: o for o in outcomes},
        "rerun": {o.number: o for o in rerun},
        "dirs": (str(first_dir), str(second_dir)),
    }


@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(battery, number):
    outcome = battery["outcomes"][number]
    print(f"[criterion {number}] {'PASS' if outcome.passed else 'FAIL'} - {outcome.detail}")
    assert outcome.passed, f"criterion {number} ({outcome.name}): {outcome.detail}"


def test_criterion_9_determinism(battery):
    first_dir, second_dir = battery["dirs"]
    names = sorted(os.listdir(first_dir))
    assert names == sorted(os.listdir(second_dir))
    mismatched = [
        name
        for name in names
        if not filecmp.cmp(
            os.path.join(first_dir, name), os.path.join(second_dir, name), shallow=False
        )
    ]
    print(
        f"[criterion 9] {'PASS' if not mismatched else 'FAIL'} - determinism: "
        f"{len(names)} artifacts compared, mismatches: {mismatched}"
    )
    assert not mismatched, f"artifacts differ between identical runs: {mismatched}"
    for number, outcome in battery["outcomes"].items():
        assert outcome.passed == battery["rerun"][number].passed
