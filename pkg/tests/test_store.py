import json

import numpy as np
import pytest

from percodetect import (
    CdfEstimate,
    Topology,
    build_lattice,
    estimate_cdf,
    estimate_cdf_inhomogeneous,
    load_cdf,
    rect_subgrid,
    save_cdf,
)


def test_round_trip_exact(tmp_path):
    lat = build_lattice(3, 4, Topology.SIX)
    est = estimate_cdf(lat, 0.37, runs=25, seed=9)
    path = tmp_path / "cdf.csv"
    save_cdf(est, path)
    back = load_cdf(path)
    assert np.array_equal(back.values, est.values)
    assert (back.rows, back.cols, back.topology) == (3, 4, Topology.SIX)
    assert (back.p, back.runs, back.seed) == (0.37, 25, 9)


def test_csv_format(tmp_path):
    lat = build_lattice(2, 2, Topology.FOUR)
    est = estimate_cdf(lat, 0.5, runs=5, seed=0)
    path = tmp_path / "cdf.csv"
    save_cdf(est, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "k,cdf"
    assert len(lines) == 6
    assert lines[1].startswith("0,")
    assert lines[-1] == f"4,{float(est.values[-1])!r}"

    meta = json.loads((tmp_path / "cdf.json").read_text())
    assert meta == {"rows": 2, "cols": 2, "topology": 4, "p": 0.5, "runs": 5, "seed": 0}


def test_inhomogeneous_metadata_round_trip(tmp_path):
    lat = build_lattice(4, 4, Topology.SIX)
    sub = rect_subgrid(lat, 1, 2, 2, 2)
    est = estimate_cdf_inhomogeneous(lat, sub, 0.6, 0.4, runs=10, seed=3)
    path = tmp_path / "cdf_inhom.csv"
    save_cdf(est, path)
    meta = json.loads((tmp_path / "cdf_inhom.json").read_text())
    assert meta["p"] is None
    assert (meta["p_in"], meta["p_out"]) == (0.6, 0.4)
    assert (meta["subgrid_top"], meta["subgrid_left"]) == (1, 2)
    assert (meta["subgrid_height"], meta["subgrid_width"]) == (2, 2)
    back = load_cdf(path)
    assert np.array_equal(back.values, est.values)
    assert back.subgrid_rect == (1, 2, 2, 2)
    assert back.p is None


def test_missing_provenance_rejected(tmp_path):
    est = CdfEstimate(values=np.array([0.5, 1.0]))
    with pytest.raises(ValueError, match="provenance"):
        save_cdf(est, tmp_path / "x.csv")


def test_missing_sidecar_rejected(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("k,cdf\n0,1.0\n")
    with pytest.raises(ValueError, match="sidecar"):
        load_cdf(path)


def test_malformed_csv_rejected(tmp_path):
    lat = build_lattice(2, 2, Topology.FOUR)
    est = estimate_cdf(lat, 0.5, runs=5, seed=0)
    path = tmp_path / "cdf.csv"
    save_cdf(est, path)
    path.write_text("wrong,header\n0,1.0\n")
    with pytest.raises(ValueError, match="header"):
        load_cdf(path)


def test_row_count_must_match_metadata(tmp_path):
    lat = build_lattice(2, 2, Topology.FOUR)
    est = estimate_cdf(lat, 0.5, runs=5, seed=0)
    path = tmp_path / "cdf.csv"
    save_cdf(est, path)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(ValueError, match="metadata"):
        load_cdf(path)
