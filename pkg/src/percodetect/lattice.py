"""Rectangular grids with 4-, 6-, or 8-neighborhood topology.

Sites are indexed row-major and 0-based: ``site = row * cols + col``. Each
topology is a symmetric set of (row, col) offsets applied to every site;
offsets falling off the grid are discarded, which handles boundaries and
degenerate 1- or 2-wide grids uniformly. The six-neighborhood is the
triangular-lattice embedding on a rectangular grid: the four axis
directions plus the up-right / down-left diagonal pair.

Adjacency is precomputed once at construction and stored in CSR form
(``nbr_indices`` / ``nbr_starts``); a lattice is immutable afterwards and
safe to share across workers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

# Adjacency uses int32 neighbor indices.
MAX_SITES = 2**31 - 1


class Topology(enum.Enum):
    FOUR = 4
    SIX = 6
    EIGHT = 8

    @property
    def offsets(self) -> tuple[tuple[int, int], ...]:
        """(row, col) neighbor offsets, in the order neighbor lists use."""
        return _OFFSETS[self]


# Offset order fixes the order of each site's neighbor list, which in turn
# fixes DFS traversal order. Within each topology: left, right, then top
# row of diagonals/axis, then bottom row.
_OFFSETS: dict[Topology, tuple[tuple[int, int], ...]] = {
    Topology.FOUR: ((0, -1), (0, 1), (-1, 0), (1, 0)),
    Topology.SIX: ((0, -1), (0, 1), (-1, 0), (-1, 1), (1, 0), (1, -1)),
    Topology.EIGHT: (
        (0, -1),
        (0, 1),
        (-1, 0),
        (-1, -1),
        (-1, 1),
        (1, 0),
        (1, 1),
        (1, -1),
    ),
}


@dataclass(frozen=True)
class Lattice:
    """A rectangular grid plus its precomputed neighbor structure."""

    rows: int
    cols: int
    topology: Topology
    nbr_indices: np.ndarray = field(repr=False)  # int32, concatenated neighbor lists
    nbr_starts: np.ndarray = field(repr=False)  # int64, CSR offsets, len site_count+1

    @property
    def site_count(self) -> int:
        return self.rows * self.cols

    def neighbors(self, site: int) -> np.ndarray:
        """Neighbor site indices of ``site``, in fixed offset order."""
        if not 0 <= site < self.site_count:
            raise IndexError(
                f"site {site} out of range for a lattice with {self.site_count} sites"
            )
        return self.nbr_indices[self.nbr_starts[site] : self.nbr_starts[site + 1]]


def build_lattice(rows: int, cols: int, topology: Topology) -> Lattice:
    """Construct a lattice and its per-site adjacency.

    Raises ValueError for non-positive dimensions or a site count too large
    for the int32 adjacency storage.
    """
    if rows < 1 or cols < 1:
        raise ValueError(f"lattice dimensions must be positive, got {rows}x{cols}")
    if rows * cols > MAX_SITES:
        raise ValueError(f"lattice of {rows}x{cols} sites overflows index storage")

    site_count = rows * cols
    row_of, col_of = np.divmod(np.arange(site_count, dtype=np.int64), cols)

    src_parts: list[np.ndarray] = []
    dst_parts: list[np.ndarray] = []
    rank_parts: list[np.ndarray] = []
    for rank, (dr, dc) in enumerate(topology.offsets):
        nr = row_of + dr
        nc = col_of + dc
        ok = (nr >= 0) & (nr < rows) & (nc >= 0) & (nc < cols)
        src_parts.append(np.nonzero(ok)[0])
        dst_parts.append(nr[ok] * cols + nc[ok])
        rank_parts.append(np.full(int(ok.sum()), rank, dtype=np.int8))

    src = np.concatenate(src_parts)
    dst = np.concatenate(dst_parts)
    rank = np.concatenate(rank_parts)

    # Sort by site, ties broken by offset rank, so each neighbor list keeps
    # the fixed offset order.
    order = np.lexsort((rank, src))
    nbr_indices = dst[order].astype(np.int32)
    counts = np.bincount(src, minlength=site_count)
    nbr_starts = np.zeros(site_count + 1, dtype=np.int64)
    np.cumsum(counts, out=nbr_starts[1:])

    return Lattice(rows, cols, topology, nbr_indices, nbr_starts)
