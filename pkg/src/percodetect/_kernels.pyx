# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference semantics.

Outputs are bit-identical to the pure-Python backend.
"""

from libc.string cimport memset

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "c"

ctypedef cnp.int32_t i32_t
ctypedef cnp.int64_t i64_t
ctypedef cnp.uint8_t u8_t


cdef inline i64_t _find(i64_t* parent, i64_t x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef i64_t _run_curve(const i32_t* indices, const i64_t* starts,
                      const i64_t* order, Py_ssize_t n_add,
                      i64_t* parent, i64_t* csize, u8_t* occupied,
                      i64_t* out, i64_t best) noexcept nogil:
    # Occupies order[0..n_add) on top of the current union-find state,
    # writing the running maximum into out[0..n_add); returns the final max.
    cdef Py_ssize_t t, j
    cdef i64_t s, nb, x, y, tmp
    for t in range(n_add):
        s = order[t]
        occupied[s] = 1
        parent[s] = s
        csize[s] = 1
        x = s
        for j in range(starts[s], starts[s + 1]):
            nb = indices[j]
            if occupied[nb]:
                x = _find(parent, x)
                y = _find(parent, nb)
                if x != y:
                    if csize[x] < csize[y]:
                        tmp = x
                        x = y
                        y = tmp
                    parent[y] = x
                    csize[x] += csize[y]
        x = _find(parent, x)
        if csize[x] > best:
            best = csize[x]
        out[t] = best
    return best


def max_cluster_curve(nbr_indices, nbr_starts, order):
    """Largest-cluster size after each site addition (see _kernels_py)."""
    cdef cnp.ndarray idx = np.ascontiguousarray(nbr_indices, dtype=np.int32)
    cdef cnp.ndarray st = np.ascontiguousarray(nbr_starts, dtype=np.int64)
    cdef cnp.ndarray visits = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t site_count = st.shape[0] - 1
    cdef Py_ssize_t n_add = visits.shape[0]

    cdef cnp.ndarray sizes = np.zeros(n_add + 1, dtype=np.int64)
    cdef cnp.ndarray parent = np.empty(site_count, dtype=np.int64)
    cdef cnp.ndarray csize = np.empty(site_count, dtype=np.int64)
    cdef cnp.ndarray occupied = np.zeros(site_count, dtype=np.uint8)

    cdef const i32_t* idx_p = <const i32_t*> cnp.PyArray_DATA(idx)
    cdef const i64_t* st_p = <const i64_t*> cnp.PyArray_DATA(st)
    cdef const i64_t* visits_p = <const i64_t*> cnp.PyArray_DATA(visits)
    cdef i64_t* sizes_p = <i64_t*> cnp.PyArray_DATA(sizes)
    cdef i64_t* parent_p = <i64_t*> cnp.PyArray_DATA(parent)
    cdef i64_t* csize_p = <i64_t*> cnp.PyArray_DATA(csize)
    cdef u8_t* occ_p = <u8_t*> cnp.PyArray_DATA(occupied)

    with nogil:
        _run_curve(idx_p, st_p, visits_p, n_add,
                   parent_p, csize_p, occ_p, sizes_p + 1, 0)
    return sizes


def joint_max_cluster_table(nbr_indices, nbr_starts, inner_sites, inner_order,
                            outer_sites, outer_order):
    """Largest-cluster table over (inner prefix, outer prefix) pairs."""
    cdef cnp.ndarray idx = np.ascontiguousarray(nbr_indices, dtype=np.int32)
    cdef cnp.ndarray st = np.ascontiguousarray(nbr_starts, dtype=np.int64)
    inner_arr = np.ascontiguousarray(inner_sites, dtype=np.int64)
    outer_arr = np.ascontiguousarray(outer_sites, dtype=np.int64)
    cdef cnp.ndarray inner_seq = np.ascontiguousarray(
        inner_arr[np.asarray(inner_order, dtype=np.int64)])
    cdef cnp.ndarray outer_seq = np.ascontiguousarray(
        outer_arr[np.asarray(outer_order, dtype=np.int64)])

    cdef Py_ssize_t site_count = st.shape[0] - 1
    cdef Py_ssize_t n_inner = inner_seq.shape[0]
    cdef Py_ssize_t n_outer = outer_seq.shape[0]

    cdef cnp.ndarray table = np.empty((n_inner + 1, n_outer + 1), dtype=np.int64)
    cdef cnp.ndarray parent = np.empty(site_count, dtype=np.int64)
    cdef cnp.ndarray csize = np.empty(site_count, dtype=np.int64)
    cdef cnp.ndarray occupied = np.empty(site_count, dtype=np.uint8)
    cdef cnp.ndarray scratch = np.empty(max(n_inner, 1), dtype=np.int64)

    cdef const i32_t* idx_p = <const i32_t*> cnp.PyArray_DATA(idx)
    cdef const i64_t* st_p = <const i64_t*> cnp.PyArray_DATA(st)
    cdef const i64_t* inner_p = <const i64_t*> cnp.PyArray_DATA(inner_seq)
    cdef const i64_t* outer_p = <const i64_t*> cnp.PyArray_DATA(outer_seq)
    cdef i64_t* table_p = <i64_t*> cnp.PyArray_DATA(table)
    cdef i64_t* parent_p = <i64_t*> cnp.PyArray_DATA(parent)
    cdef i64_t* csize_p = <i64_t*> cnp.PyArray_DATA(csize)
    cdef u8_t* occ_p = <u8_t*> cnp.PyArray_DATA(occupied)
    cdef i64_t* scratch_p = <i64_t*> cnp.PyArray_DATA(scratch)

    cdef Py_ssize_t a, row
    cdef i64_t best
    with nogil:
        for a in range(n_inner + 1):
            memset(occ_p, 0, site_count)
            best = _run_curve(idx_p, st_p, inner_p, a,
                              parent_p, csize_p, occ_p, scratch_p, 0)
            row = a * (n_outer + 1)
            table_p[row] = best
            _run_curve(idx_p, st_p, outer_p, n_outer,
                       parent_p, csize_p, occ_p, table_p + row + 1, best)
    return table


def label_components(nbr_indices, nbr_starts, active):
    """Label connected clusters of active sites, 1.. in scan order of seeds."""
    cdef cnp.ndarray idx = np.ascontiguousarray(nbr_indices, dtype=np.int32)
    cdef cnp.ndarray st = np.ascontiguousarray(nbr_starts, dtype=np.int32)
    cdef cnp.ndarray act = np.ascontiguousarray(active, dtype=np.uint8)
    cdef Py_ssize_t site_count = st.shape[0] - 1

    # fold activity into the label array: -1 inactive, 0 active-unlabeled,
    # so the hot loop reads a single random-access array
    cdef cnp.ndarray labels = act.astype(np.int32)
    np.subtract(labels, 1, out=labels)
    cdef cnp.ndarray stack = np.empty(max(site_count, 1), dtype=np.int32)

    cdef const i32_t* idx_p = <const i32_t*> cnp.PyArray_DATA(idx)
    cdef const i32_t* st_p = <const i32_t*> cnp.PyArray_DATA(st)
    cdef i32_t* lab_p = <i32_t*> cnp.PyArray_DATA(labels)
    cdef i32_t* stk_p = <i32_t*> cnp.PyArray_DATA(stack)

    cdef Py_ssize_t s, j, top
    cdef i32_t v, nb
    cdef i32_t label = 0
    with nogil:
        for s in range(site_count):
            if lab_p[s] == 0:
                label += 1
                lab_p[s] = label
                top = 0
                stk_p[0] = <i32_t> s
                while top >= 0:
                    v = stk_p[top]
                    top -= 1
                    for j in range(st_p[v], st_p[v + 1]):
                        nb = idx_p[j]
                        if lab_p[nb] == 0:
                            lab_p[nb] = label
                            top += 1
                            stk_p[top] = nb
    np.maximum(labels, 0, out=labels)
    return labels, int(label)


def dfs_depths(nbr_indices, nbr_starts, active, seed):
    """Spanning-tree depth labels of the active cluster containing ``seed``."""
    cdef cnp.ndarray idx = np.ascontiguousarray(nbr_indices, dtype=np.int32)
    cdef cnp.ndarray st = np.ascontiguousarray(nbr_starts, dtype=np.int64)
    cdef cnp.ndarray act = np.ascontiguousarray(active, dtype=np.uint8)
    cdef Py_ssize_t site_count = st.shape[0] - 1

    cdef cnp.ndarray depths = np.zeros(site_count, dtype=np.int64)
    cdef cnp.ndarray cursor = np.zeros(site_count, dtype=np.int64)
    cdef cnp.ndarray stack = np.empty(max(site_count, 1), dtype=np.int64)

    cdef const i32_t* idx_p = <const i32_t*> cnp.PyArray_DATA(idx)
    cdef const i64_t* st_p = <const i64_t*> cnp.PyArray_DATA(st)
    cdef const u8_t* act_p = <const u8_t*> cnp.PyArray_DATA(act)
    cdef i64_t* dep_p = <i64_t*> cnp.PyArray_DATA(depths)
    cdef i64_t* cur_p = <i64_t*> cnp.PyArray_DATA(cursor)
    cdef i64_t* stk_p = <i64_t*> cnp.PyArray_DATA(stack)

    cdef Py_ssize_t top = 0
    cdef i64_t v, nb, j, end, depth = 1, root = seed
    cdef bint moved
    dep_p[root] = 1
    cur_p[root] = st_p[root]
    stk_p[0] = root
    with nogil:
        while top >= 0:
            v = stk_p[top]
            j = cur_p[v]
            end = st_p[v + 1]
            moved = False
            while j < end:
                nb = idx_p[j]
                j += 1
                if act_p[nb] and dep_p[nb] == 0:
                    cur_p[v] = j
                    depth += 1
                    dep_p[nb] = depth
                    cur_p[nb] = st_p[nb]
                    top += 1
                    stk_p[top] = nb
                    moved = True
                    break
            if not moved:
                cur_p[v] = j
                top -= 1
                depth -= 1
    return depths
