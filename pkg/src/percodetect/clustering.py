"""Percolation clusters in a binary image.

A cluster is a maximal set of active sites pairwise connected through
chains of neighboring active sites under the lattice topology.
:func:`dfs_spanning_tree` explores one cluster from a seed and labels its
sites with DFS-tree depths; :func:`label_components` partitions all active
sites into clusters. Both are pure functions of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .image import BinaryImage
from .lattice import Lattice


@dataclass(frozen=True)
class DepthLabeling:
    """Spanning-tree depths: 0 outside the seed's cluster, seed has depth 1.

    Every site with depth d >= 2 has a neighbor of depth d - 1 (its mother
    in the tree). Depth is distance within the DFS tree, which can exceed
    graph distance.
    """

    depths: np.ndarray
    seed: int

    @property
    def cluster_sites(self) -> np.ndarray:
        return np.nonzero(self.depths > 0)[0]


@dataclass(frozen=True)
class ClusterLabeling:
    """Cluster partition: labels[i] = 0 for inactive sites, else cluster id."""

    labels: np.ndarray
    cluster_sizes: np.ndarray  # cluster_sizes[k] = size of cluster k + 1
    largest: int

    @property
    def num_clusters(self) -> int:
        return len(self.cluster_sizes)


def _check_dims(image: BinaryImage, lattice: Lattice) -> None:
    if (image.rows, image.cols) != (lattice.rows, lattice.cols):
        raise ValueError(
            f"image is {image.rows}x{image.cols} but lattice is "
            f"{lattice.rows}x{lattice.cols}"
        )


def dfs_spanning_tree(image: BinaryImage, lattice: Lattice, seed: int) -> DepthLabeling:
    """Depth-first exploration of the active cluster containing ``seed``.

    Neighbors are tried in adjacency-list order; the first unvisited active
    neighbor wins, and the search backtracks to the mother site when a site
    has no unvisited active neighbor left.
    """
    _check_dims(image, lattice)
    if not 0 <= seed < lattice.site_count:
        raise IndexError(f"seed {seed} out of range for {lattice.site_count} sites")
    if not image.active[seed]:
        raise ValueError(f"seed site {seed} is inactive")
    depths = kernels.dfs_depths(lattice.nbr_indices, lattice.nbr_starts, image.active, seed)
    return DepthLabeling(depths, seed)


def label_components(image: BinaryImage, lattice: Lattice) -> ClusterLabeling:
    """Partition all active sites into clusters, labeled 1.. in scan order."""
    _check_dims(image, lattice)
    labels, count = kernels.label_components(
        lattice.nbr_indices, lattice.nbr_starts, image.active
    )
    sizes = np.bincount(labels, minlength=count + 1)[1:].astype(np.int64)
    largest = int(sizes.max()) if count else 0
    return ClusterLabeling(labels, sizes, largest)


def largest_cluster_size(labeling: ClusterLabeling) -> int:
    """Size of the largest cluster; 0 when no site is active."""
    return labeling.largest
