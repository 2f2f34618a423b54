"""CSV/JSON persistence of estimated cdfs.

A distribution is stored as a CSV with header ``k,cdf`` and rows
k = 0..S, plus a JSON sidecar with the same stem holding the provenance
metadata {rows, cols, topology, p, runs, seed}; two-region estimates
extend it with {subgrid_top, subgrid_left, subgrid_height, subgrid_width,
p_in, p_out}. Floats are written with full round-trip precision, so a
save/load cycle is exact.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .lattice import Topology
from .newman_ziff import CdfEstimate


def sidecar_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".json")


def save_cdf(estimate: CdfEstimate, csv_path) -> None:
    """Write the cdf CSV and its JSON metadata sidecar."""
    if (
        estimate.rows is None
        or estimate.cols is None
        or estimate.topology is None
        or estimate.runs is None
        or estimate.seed is None
    ):
        raise ValueError("cannot persist a cdf estimate without full provenance")

    csv_path = Path(csv_path)
    lines = ["k,cdf"]
    for k, value in enumerate(estimate.values.tolist()):
        lines.append(f"{k},{value!r}")
    csv_path.write_text("\n".join(lines) + "\n")

    meta: dict = {
        "rows": estimate.rows,
        "cols": estimate.cols,
        "topology": estimate.topology.value,
        "p": estimate.p,
        "runs": estimate.runs,
        "seed": estimate.seed,
    }
    if estimate.p_in is not None:
        if estimate.subgrid_rect is None:
            raise ValueError("two-region estimate needs a rectangular subgrid to persist")
        top, left, height, width = estimate.subgrid_rect
        meta.update(
            {
                "p_in": estimate.p_in,
                "p_out": estimate.p_out,
                "subgrid_top": top,
                "subgrid_left": left,
                "subgrid_height": height,
                "subgrid_width": width,
            }
        )
    sidecar_path(csv_path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def load_cdf(csv_path) -> CdfEstimate:
    """Read a cdf CSV plus sidecar back into a CdfEstimate."""
    csv_path = Path(csv_path)
    meta_path = sidecar_path(csv_path)
    if not meta_path.exists():
        raise ValueError(f"metadata sidecar {meta_path} not found")
    meta = json.loads(meta_path.read_text())

    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["k", "cdf"]:
            raise ValueError(f"{csv_path}: expected header 'k,cdf', got {header}")
        values = []
        for i, row in enumerate(reader):
            if len(row) != 2 or int(row[0]) != i:
                raise ValueError(f"{csv_path}: malformed row {i + 1}: {row}")
            values.append(float(row[1]))
    if not values:
        raise ValueError(f"{csv_path}: no cdf rows")

    expected = meta["rows"] * meta["cols"] + 1
    if len(values) != expected:
        raise ValueError(
            f"{csv_path}: {len(values)} rows but metadata implies {expected}"
        )
    subgrid_rect = None
    if "subgrid_top" in meta:
        subgrid_rect = (
            meta["subgrid_top"],
            meta["subgrid_left"],
            meta["subgrid_height"],
            meta["subgrid_width"],
        )
    return CdfEstimate(
        values=np.array(values),
        rows=meta["rows"],
        cols=meta["cols"],
        topology=Topology(meta["topology"]),
        runs=meta["runs"],
        seed=meta["seed"],
        p=meta.get("p"),
        p_in=meta.get("p_in"),
        p_out=meta.get("p_out"),
        subgrid_rect=subgrid_rect,
    )
