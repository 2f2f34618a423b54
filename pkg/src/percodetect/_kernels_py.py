"""Pure-Python kernels: the hot loops behind clustering and the simulators.

The compiled module ``percodetect._kernels`` implements the same four
functions with identical outputs; ``percodetect._backend`` picks whichever
is available. Inputs are the CSR adjacency of a lattice (int32 neighbor
indices, int64 start offsets) plus flat site arrays; output dtypes are
fixed so the two backends are interchangeable bit for bit.
"""

from __future__ import annotations

from array import array

import numpy as np

BACKEND_NAME = "python"


def _as_i64(values) -> array:
    # array('q') indexing is much faster than numpy scalar indexing
    out = array("q")
    out.frombytes(np.ascontiguousarray(values, dtype=np.int64).tobytes())
    return out


def max_cluster_curve(nbr_indices, nbr_starts, order) -> np.ndarray:
    """Largest-cluster size after each site addition.

    Sites are occupied in ``order``; a weighted union-find with path
    halving merges each new site with its occupied neighbors. Returns an
    int64 array ``sizes`` of length ``len(order) + 1`` with ``sizes[0] == 0``
    and ``sizes[n]`` the running maximum after ``n`` additions.
    """
    site_count = len(nbr_starts) - 1
    indices = _as_i64(nbr_indices)
    starts = _as_i64(nbr_starts)
    parent = [0] * site_count
    csize = [0] * site_count
    occupied = bytearray(site_count)

    sizes = [0]
    best = 0
    for s in _as_i64(order):
        occupied[s] = 1
        parent[s] = s
        csize[s] = 1
        x = s
        for j in range(starts[s], starts[s + 1]):
            nb = indices[j]
            if occupied[nb]:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                y = nb
                while parent[y] != y:
                    parent[y] = parent[parent[y]]
                    y = parent[y]
                if x != y:
                    if csize[x] < csize[y]:
                        x, y = y, x
                    parent[y] = x
                    csize[x] += csize[y]
        while parent[x] != x:
            x = parent[x]
        if csize[x] > best:
            best = csize[x]
        sizes.append(best)
    return np.array(sizes, dtype=np.int64)


def joint_max_cluster_table(
    nbr_indices, nbr_starts, inner_sites, inner_order, outer_sites, outer_order
) -> np.ndarray:
    """Largest-cluster table over (inner prefix, outer prefix) pairs.

    ``table[a, b]`` is the largest cluster when the first ``a`` inner sites
    and the first ``b`` outer sites of the respective visiting orders are
    occupied. Each row is recomputed from scratch by replaying the
    combined sequence, so no per-prefix state snapshots are kept.
    """
    inner_sites = np.ascontiguousarray(inner_sites, dtype=np.int64)
    outer_sites = np.ascontiguousarray(outer_sites, dtype=np.int64)
    inner_seq = inner_sites[np.asarray(inner_order, dtype=np.int64)]
    outer_seq = outer_sites[np.asarray(outer_order, dtype=np.int64)]
    n_inner = len(inner_seq)
    n_outer = len(outer_seq)

    table = np.empty((n_inner + 1, n_outer + 1), dtype=np.int64)
    for a in range(n_inner + 1):
        seq = np.concatenate([inner_seq[:a], outer_seq])
        curve = max_cluster_curve(nbr_indices, nbr_starts, seq)
        table[a] = curve[a:]
    return table


def label_components(nbr_indices, nbr_starts, active) -> tuple[np.ndarray, int]:
    """Label connected clusters of active sites, 1.. in scan order of seeds.

    Returns (int32 label array with 0 for inactive sites, component count).
    """
    site_count = len(nbr_starts) - 1
    indices = _as_i64(nbr_indices)
    starts = _as_i64(nbr_starts)
    act = bytes(np.ascontiguousarray(active, dtype=np.uint8))
    labels = [0] * site_count
    stack: list[int] = []
    label = 0
    for s in range(site_count):
        if act[s] and labels[s] == 0:
            label += 1
            labels[s] = label
            stack.append(s)
            while stack:
                v = stack.pop()
                for j in range(starts[v], starts[v + 1]):
                    nb = indices[j]
                    if act[nb] and labels[nb] == 0:
                        labels[nb] = label
                        stack.append(nb)
    return np.array(labels, dtype=np.int32), label


def dfs_depths(nbr_indices, nbr_starts, active, seed) -> np.ndarray:
    """Spanning-tree depth labels of the active cluster containing ``seed``.

    Iterative depth-first search trying neighbors in adjacency order; the
    depth counter increases on discovery and decreases on backtracking, so
    a label is the site's depth within the DFS tree (the seed has depth 1),
    not its graph distance. Sites outside the cluster stay 0.
    """
    site_count = len(nbr_starts) - 1
    indices = _as_i64(nbr_indices)
    starts = _as_i64(nbr_starts)
    act = bytes(np.ascontiguousarray(active, dtype=np.uint8))
    depths = [0] * site_count
    cursor = [0] * site_count

    depths[seed] = 1
    cursor[seed] = starts[seed]
    stack = [seed]
    depth = 1
    while stack:
        v = stack[-1]
        j = cursor[v]
        end = starts[v + 1]
        moved = False
        while j < end:
            nb = indices[j]
            j += 1
            if act[nb] and depths[nb] == 0:
                cursor[v] = j
                depth += 1
                depths[nb] = depth
                cursor[nb] = starts[nb]
                stack.append(nb)
                moved = True
                break
        if not moved:
            cursor[v] = j
            stack.pop()
            depth -= 1
    return np.array(depths, dtype=np.int64)
