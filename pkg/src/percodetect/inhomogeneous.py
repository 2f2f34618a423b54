"""Two-region percolation: elevated occupation probability on a subgrid.

The occupation probability is p_in on a proper subgrid and p_out on its
complement, so the active-site counts of the two regions are independent
binomials. A run draws one visiting order for the subgrid and one for the
complement and records the largest-cluster size for every pair (inner
prefix, outer prefix); convolving that table with the two binomial laws
gives a single-run cdf estimate of the maximum cluster size. With
p_in == p_out the construction reduces to the homogeneous law.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._parallel import ordered_map
from .lattice import Lattice
from .newman_ziff import BinomialPmf, CdfEstimate, _check_probability, binomial_pmf
from .rng import RngStream


@dataclass(frozen=True)
class Subgrid:
    """A proper, nonempty subset of lattice sites, strictly increasing.

    ``rect`` records (top, left, height, width) when the subgrid came from
    an axis-aligned rectangle; arbitrary site lists leave it None.
    """

    sites: np.ndarray
    rect: tuple[int, int, int, int] | None = None

    def __post_init__(self):
        arr = np.asarray(self.sites, dtype=np.int64)
        object.__setattr__(self, "sites", arr)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("subgrid needs at least one site")
        if arr[0] < 0:
            raise ValueError("subgrid sites must be non-negative")
        if arr.size > 1 and np.any(np.diff(arr) <= 0):
            raise ValueError("subgrid sites must be strictly increasing")

    def __len__(self) -> int:
        return len(self.sites)


@dataclass(frozen=True)
class JointMaxSizeTable:
    """entries[a, b] = largest cluster with the first a inner and b outer
    visits occupied; shape (|subgrid|+1, |complement|+1), nondecreasing
    along rows and columns."""

    entries: np.ndarray

    @property
    def site_count(self) -> int:
        return self.entries.shape[0] - 1 + self.entries.shape[1] - 1


def rect_subgrid(lattice: Lattice, top: int, left: int, height: int, width: int) -> Subgrid:
    """Axis-aligned rectangular subgrid; (top, left) is the 0-based corner."""
    if height < 1 or width < 1:
        raise ValueError(f"subgrid dimensions must be positive, got {height}x{width}")
    if top < 0 or left < 0 or top + height > lattice.rows or left + width > lattice.cols:
        raise ValueError(
            f"{height}x{width} rectangle at ({top}, {left}) does not fit a "
            f"{lattice.rows}x{lattice.cols} lattice"
        )
    if height * width >= lattice.site_count:
        raise ValueError("subgrid must be a proper subset of the lattice")
    rows_idx = np.arange(top, top + height, dtype=np.int64)
    cols_idx = np.arange(left, left + width, dtype=np.int64)
    sites = (rows_idx[:, None] * lattice.cols + cols_idx[None, :]).ravel()
    return Subgrid(sites, rect=(top, left, height, width))


def _check_subgrid(lattice: Lattice, subgrid: Subgrid) -> None:
    if subgrid.sites[-1] >= lattice.site_count:
        raise ValueError(
            f"subgrid site {int(subgrid.sites[-1])} out of range for "
            f"{lattice.site_count} sites"
        )
    if len(subgrid) >= lattice.site_count:
        raise ValueError("subgrid must be a proper subset of the lattice")


def _complement(lattice: Lattice, subgrid: Subgrid) -> np.ndarray:
    return np.setdiff1d(
        np.arange(lattice.site_count, dtype=np.int64), subgrid.sites, assume_unique=True
    )


def nz_run_modified(lattice: Lattice, subgrid: Subgrid, rng: RngStream) -> JointMaxSizeTable:
    """One run of the two-region scheme.

    Draws the inner visiting order first, then the outer one, from the
    stream's generator; the same outer order is replayed on top of every
    inner prefix.
    """
    _check_subgrid(lattice, subgrid)
    comp = _complement(lattice, subgrid)
    gen = rng.generator()
    inner_order = gen.permutation(len(subgrid)).astype(np.int64, copy=False)
    outer_order = gen.permutation(len(comp)).astype(np.int64, copy=False)
    entries = kernels.joint_max_cluster_table(
        lattice.nbr_indices, lattice.nbr_starts, subgrid.sites, inner_order, comp, outer_order
    )
    return JointMaxSizeTable(entries)


def _convolve_joint_values(
    entries: np.ndarray, pmf_in: BinomialPmf, pmf_out: BinomialPmf
) -> np.ndarray:
    site_count = entries.shape[0] - 1 + entries.shape[1] - 1
    ks = np.arange(site_count + 1)
    cum_out = np.concatenate(([0.0], np.cumsum(pmf_out.weights)))
    acc = np.zeros(site_count + 1)
    for a in range(entries.shape[0]):
        # each table row is a running max, hence sorted
        idx = np.searchsorted(entries[a], ks, side="right")
        acc += pmf_in.weights[a] * cum_out[idx]
    return acc / (pmf_in.weights.sum() * cum_out[-1])


def convolve_cdf_joint(table: JointMaxSizeTable, p_in: float, p_out: float) -> CdfEstimate:
    """Single-run cdf estimate under the two independent binomial laws."""
    p_in = _check_probability(p_in, "p_in")
    p_out = _check_probability(p_out, "p_out")
    n_inner = table.entries.shape[0] - 1
    n_outer = table.entries.shape[1] - 1
    pmf_in = binomial_pmf(n_inner, p_in)
    pmf_out = binomial_pmf(n_outer, p_out)
    values = _convolve_joint_values(table.entries, pmf_in, pmf_out)
    return CdfEstimate(values=values, runs=1, p_in=p_in, p_out=p_out)


def _joint_worker(payload, stream_id: int) -> np.ndarray:
    lattice, subgrid, seed, pmf_in, pmf_out = payload
    table = nz_run_modified(lattice, subgrid, RngStream(seed, stream_id))
    return _convolve_joint_values(table.entries, pmf_in, pmf_out)


def estimate_cdf_inhomogeneous(
    lattice: Lattice,
    subgrid: Subgrid,
    p_in: float,
    p_out: float,
    runs: int,
    seed: int,
    threads: int = 1,
) -> CdfEstimate:
    """Average the per-run joint convolutions over ``runs`` independent runs.

    Run i draws from the stream (seed, i); deterministic given
    (seed, runs) for any ``threads``.
    """
    if runs < 1:
        raise ValueError(f"runs must be positive, got {runs}")
    p_in = _check_probability(p_in, "p_in")
    p_out = _check_probability(p_out, "p_out")
    _check_subgrid(lattice, subgrid)

    n_inner = len(subgrid)
    pmf_in = binomial_pmf(n_inner, p_in)
    pmf_out = binomial_pmf(lattice.site_count - n_inner, p_out)
    payload = (lattice, subgrid, seed, pmf_in, pmf_out)
    acc = np.zeros(lattice.site_count + 1)
    for values in ordered_map(_joint_worker, payload, list(range(runs)), threads):
        acc += values
    return CdfEstimate(
        values=acc / runs,
        rows=lattice.rows,
        cols=lattice.cols,
        topology=lattice.topology,
        runs=runs,
        seed=seed,
        p_in=p_in,
        p_out=p_out,
        subgrid_rect=subgrid.rect,
    )
