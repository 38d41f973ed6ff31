"""Compiled inner loops.  All vertex ids here are 0-based."""

import numba as nb
import numpy as np


@nb.njit(cache=True)
def coalesce(he_vertex, n, s_draw, r_draw, child_out, s_out):
    """One run of the fixed-degree additive coalescent.

    ``he_vertex[h]`` is the vertex of non-root half-edge ``h``.  At step
    ``k`` the non-root half-edge is ``pool[s_draw[k]]`` among the unpaired
    ones, and the root half-edge is the ``r_draw[k]``-th current tree root
    once the root of that half-edge's own tree is skipped.  Writes the child
    vertex (whose root half-edge was used) and the half-edge id per step.
    """
    size = he_vertex.shape[0]
    pool = np.arange(size)
    uf = np.arange(n)
    roots = np.arange(n)
    pos = np.arange(n)
    nroots = n
    for k in range(n - 1):
        j = s_draw[k]
        h = pool[j]
        size -= 1
        pool[j] = pool[size]
        c = he_vertex[h]
        while uf[c] != c:
            uf[c] = uf[uf[c]]
            c = uf[c]
        t = r_draw[k]
        if t >= pos[c]:
            t += 1
        rv = roots[t]
        nroots -= 1
        last = roots[nroots]
        roots[t] = last
        pos[last] = t
        uf[rv] = c
        child_out[k] = rv
        s_out[k] = h


@nb.njit(cache=True)
def depths_from_parent(parent, root):
    """Depths for a parent array (``parent[root] == -1``)."""
    n = parent.shape[0]
    depth = np.full(n, -1, np.int64)
    depth[root] = 0
    stack = np.empty(n, np.int64)
    for start in range(n):
        top = 0
        v = start
        while depth[v] < 0:
            stack[top] = v
            top += 1
            v = parent[v]
        base = depth[v]
        while top > 0:
            top -= 1
            base += 1
            depth[stack[top]] = base
    return depth


@nb.njit(cache=True)
def tree_distance(parent, depth, u, v):
    du = depth[u]
    dv = depth[v]
    dist = 0
    while du > dv:
        u = parent[u]
        du -= 1
        dist += 1
    while dv > du:
        v = parent[v]
        dv -= 1
        dist += 1
    while u != v:
        u = parent[u]
        v = parent[v]
        dist += 2
    return dist


@nb.njit(cache=True)
def parent_from_preorder(order, children):
    """Parent array of the plane tree whose preorder visits ``order``.

    ``children[j]`` is the child count of ``order[j]``; the sequence must
    be a valid Lukasiewicz word.  The root gets parent ``-1``.
    """
    n = order.shape[0]
    parent = np.full(n, -1, np.int64)
    stack = np.empty(n, np.int64)
    free = np.empty(n, np.int64)
    top = 0
    for j in range(n):
        v = order[j]
        if top > 0:
            parent[v] = stack[top - 1]
            free[top - 1] -= 1
            while top > 0 and free[top - 1] == 0:
                top -= 1
        if children[j] > 0:
            stack[top] = v
            free[top] = children[j]
            top += 1
    return parent
