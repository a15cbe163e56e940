import json

import pytest

import divlab.sweep as sweep_mod
from divlab.regions import RegionKind, RegionLabel
from divlab.sweep import (
    SweepContradiction,
    axis_values,
    grid_points_alpha_z,
    grid_points_psi,
    rows_to_csv,
    run_sweep,
    witness_filename,
    write_witness,
)


class TestGrids:
    def test_axis_range(self):
        assert axis_values({"start": 0.0, "stop": 1.0, "steps": 3}) == [0.0, 0.5, 1.0]
        assert axis_values({"start": 2.0, "stop": 9.0, "steps": 1}) == [2.0]
        assert axis_values([0.3, 0.7]) == [0.3, 0.7]

    def test_psi_grid_order(self):
        points = grid_points_psi([0.0, 1.0], [0.5], [1.0, 2.0])
        assert points == [(0.0, 0.5, 1.0), (0.0, 0.5, 2.0), (1.0, 0.5, 1.0), (1.0, 0.5, 2.0)]

    def test_alpha_z_grid_lands_on_slice(self):
        points = grid_points_alpha_z([2.0], [1.0, 2.0])
        assert points[0] == (2.0, -1.0, 1.0)
        assert points[1] == (1.0, -0.5, 2.0)


class TestRunSweep:
    def test_concave_square_grid_clean(self):
        # a 5 x 5 x 3 grid strictly inside the concavity square
        points = grid_points_psi(
            {"start": 0.1, "stop": 0.9, "steps": 5},
            {"start": 0.1, "stop": 0.9, "steps": 5},
            {"start": 0.1, "stop": 0.5, "steps": 3},
        )
        assert len(points) == 75
        result = run_sweep(points, [2], 25, 11)
        assert len(result.rows) == len(points)
        for row in result.rows:
            assert row.label.kind is RegionKind.CONCAVE_KNOWN
            assert row.report.violations == 0
        assert result.witnesses == []

    def test_conjectured_band_reports_without_contradiction(self):
        # labels in the open band cannot abort by construction; outcomes are
        # simply recorded
        result = run_sweep([(1.5, -0.5, 1.2), (1.5, -0.5, 1.5)], [2], 60, 14)
        for row in result.rows:
            assert row.label.kind is RegionKind.CONJECTURED_CONVEX
            assert row.report.violations == 0  # no violation observed at desk scale

    def test_p_two_boundary_row(self):
        points = [(2.0, q, 1.0 / (2.0 + q)) for q in (-1.0, -0.5, 0.0)]
        result = run_sweep(points, [2], 25, 12)
        for row in result.rows:
            assert row.label.kind is RegionKind.CONVEX_KNOWN
            assert row.report.violations == 0

    def test_unruled_points_collect_witnesses_without_abort(self):
        result = run_sweep([(1.2, 0.5, 1.0)], [2], 150, 13)
        row = result.rows[0]
        assert row.label.kind is RegionKind.NOT_CONVEX_NOT_CONCAVE
        assert row.report.violations > 0
        assert len(result.witnesses) == 1

    def test_contradiction_aborts_with_witness(self, monkeypatch):
        # force a wrong Known label onto a genuinely violating point
        def wrong_classify(p, q, s):
            return RegionLabel(RegionKind.CONVEX_KNOWN, "forged")

        monkeypatch.setattr(sweep_mod, "classify", wrong_classify)
        with pytest.raises(SweepContradiction) as excinfo:
            run_sweep([(1.2, 0.5, 1.0)], [2], 150, 13)
        assert excinfo.value.witness is not None

    def test_csv_byte_identical_across_runs(self):
        points = grid_points_psi([0.4, 0.8], [0.3], [1.0])
        a = run_sweep(points, [2, 3], 20, 21).to_csv()
        b = run_sweep(points, [2, 3], 20, 21).to_csv()
        assert a == b
        assert a.startswith("p,q,s,label,citation,dim,samples,worst_margin,violations\n")

    def test_k_modes(self):
        points = [(0.5, 0.4, 1.0)]
        for k_mode in ("identity", "haar", "ginibre"):
            result = run_sweep(points, [2], 30, 5, k_mode=k_mode)
            assert result.rows[0].report.violations == 0


class TestWitnessFiles:
    def test_filename_is_content_hash(self):
        w = {"kind": "x", "margin": 0.25}
        assert witness_filename(w) == witness_filename(dict(w))
        assert witness_filename(w) != witness_filename({"kind": "x", "margin": 0.5})
        assert witness_filename(w).startswith("witness-")

    def test_write_witness_roundtrip(self, tmp_path):
        w = {"kind": "joint_midpoint", "margin": 1.5, "nested": {"a": [1, 2]}}
        path = write_witness(w, str(tmp_path))
        with open(path) as fh:
            assert json.load(fh) == w

    def test_rows_csv_has_trailing_newline(self):
        assert rows_to_csv([]).endswith("\n")
