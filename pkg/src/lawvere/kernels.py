"""Hot numeric kernels.

Every kernel has two implementations with identical results:

* ``numba`` -- explicit loops compiled with ``@njit``;
* ``numpy`` -- vectorised array code, no compiler needed.

The numba path is used when numba imports and ``LAWVERE_NUMBA`` is not set to
``0``.  Both implementations are importable directly (``NUMPY_KERNELS`` and
``NUMBA_KERNELS``) so they can be cross-checked and benchmarked.

Integer conventions: a tuple ``(v_0, ..., v_{k-1})`` over an alphabet of size
``q`` is encoded as ``sum v_j * q**(k-1-j)`` (first coordinate most
significant), which matches ``itertools.product`` order.
"""

from __future__ import annotations

import os
from types import SimpleNamespace

import numpy as np

INDEX = np.int64

# program opcodes for term evaluation
OP_VAR = 0
OP_APPLY = 1


def digits(q: int, k: int) -> np.ndarray:
    """All k-tuples over range(q) in lexicographic order, shape (q**k, k)."""
    if k == 0:
        return np.zeros((1, 0), dtype=INDEX)
    grids = np.indices((q,) * k, dtype=INDEX)
    return grids.reshape(k, -1).T.copy()


def place_values(q: int, k: int) -> np.ndarray:
    return q ** np.arange(k - 1, -1, -1, dtype=INDEX)


# --------------------------------------------------------------------------
# numpy implementations


def _np_union_edges(parent, left, right):
    # min-label hooking with pointer jumping; parent[x] <= x is invariant and
    # every root is the least index of its component
    left = np.asarray(left, dtype=INDEX)
    right = np.asarray(right, dtype=INDEX)
    if left.size == 0:
        return
    parent[:] = _np_compress(parent)
    while True:
        a = parent[left]
        b = parent[right]
        diff = a != b
        if not diff.any():
            return
        a = a[diff]
        b = b[diff]
        low = np.minimum(a, b)
        np.minimum.at(parent, a, low)
        np.minimum.at(parent, b, low)
        while True:
            jumped = parent[parent]
            if np.array_equal(jumped, parent):
                break
            parent[:] = jumped


def _np_compress(parent):
    while True:
        jumped = parent[parent]
        if np.array_equal(jumped, parent):
            return parent.copy()
        parent[:] = jumped


def _np_eval_program(kinds, args, op_arity, op_offset, tables, q, nvars):
    n_cand = tables.shape[0]
    assign = digits(q, nvars)
    width = assign.shape[0]
    stack = []
    for kind, arg in zip(kinds.tolist(), args.tolist()):
        if kind == OP_VAR:
            stack.append(np.broadcast_to(assign[:, arg], (n_cand, width)))
            continue
        r = int(op_arity[arg])
        code = np.zeros((n_cand, width), dtype=INDEX)
        if r:
            operands = stack[-r:]
            del stack[-r:]
            for v in operands:
                code = code * q + v
        table = tables[:, op_offset[arg]:op_offset[arg] + q ** r]
        stack.append(np.take_along_axis(table, code, axis=1))
    (out,) = stack
    return np.ascontiguousarray(out, dtype=INDEX)


def _np_compose_tables(g, fs, q):
    # g: (C, q**m), fs: (C, m, W) -> (C, W)
    n_cand, m, width = fs.shape
    code = np.zeros((n_cand, width), dtype=INDEX)
    for j in range(m):
        code = code * q + fs[:, j, :]
    return np.take_along_axis(g, code, axis=1)


def _np_hom_filter(maps, src_table, dst_table, q_src, q_dst, arity):
    # maps: (M, q_src); tables are single operations X^arity -> X
    maps = np.asarray(maps, dtype=INDEX)
    lhs = maps[:, src_table]
    assign = digits(q_src, arity)
    code = np.zeros((maps.shape[0], assign.shape[0]), dtype=INDEX)
    for j in range(arity):
        code = code * q_dst + maps[:, assign[:, j]]
    rhs = dst_table[code]
    return np.all(lhs == rhs, axis=1)


def _np_assoc_mismatch(sup_jn, sup_kn, sup_jk, s_k, s_n, j):
    # instance (h, cg, cf): h in T(j), cg codes T(k)^j, cf codes T(n)^k
    n_h = sup_jk.shape[0]
    n_cg = sup_jk.shape[1]
    n_cf = sup_kn.shape[1]
    g_digits = digits(s_k, j) if n_cg else np.zeros((0, j), dtype=INDEX)
    inner = np.zeros((n_cg, n_cf), dtype=INDEX)
    for pos in range(j):
        inner = inner * s_n + sup_kn[g_digits[:, pos]][:, :]
    lhs = sup_jn[:, inner.reshape(-1)].reshape(n_h, n_cg, n_cf) if n_h else np.zeros((0, n_cg, n_cf), dtype=INDEX)
    hg = sup_jk  # (n_h, n_cg) -> element of T(k)
    rhs = sup_kn[hg.reshape(-1)].reshape(n_h, n_cg, n_cf) if n_h and n_cg else np.zeros((n_h, n_cg, n_cf), dtype=INDEX)
    bad = np.flatnonzero((lhs != rhs).reshape(-1))
    return int(bad[0]) if bad.size else -1


NUMPY_KERNELS = SimpleNamespace(
    name="numpy",
    union_edges=_np_union_edges,
    compress=_np_compress,
    eval_program=_np_eval_program,
    compose_tables=_np_compose_tables,
    hom_filter=_np_hom_filter,
    assoc_mismatch=_np_assoc_mismatch,
)


# --------------------------------------------------------------------------
# numba implementations


def _build_numba():
    from numba import njit

    @njit(cache=True)
    def find(parent, x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    @njit(cache=True)
    def union_edges(parent, left, right):
        for e in range(left.shape[0]):
            a = find(parent, left[e])
            b = find(parent, right[e])
            if a < b:
                parent[b] = a
            elif b < a:
                parent[a] = b

    @njit(cache=True)
    def compress(parent):
        out = np.empty_like(parent)
        for x in range(parent.shape[0]):
            out[x] = find(parent, x)
        return out

    @njit(cache=True)
    def eval_program(kinds, args, op_arity, op_offset, tables, q, nvars):
        n_cand = tables.shape[0]
        width = q ** nvars
        out = np.empty((n_cand, width), dtype=np.int64)
        stack = np.empty(kinds.shape[0], dtype=np.int64)
        point = np.empty(max(nvars, 1), dtype=np.int64)
        for a in range(width):
            rest = a
            for v in range(nvars - 1, -1, -1):
                point[v] = rest % q
                rest //= q
            for c in range(n_cand):
                top = 0
                for pc in range(kinds.shape[0]):
                    if kinds[pc] == 0:
                        stack[top] = point[args[pc]]
                        top += 1
                    else:
                        op = args[pc]
                        r = op_arity[op]
                        code = 0
                        for t in range(top - r, top):
                            code = code * q + stack[t]
                        top -= r
                        stack[top] = tables[c, op_offset[op] + code]
                        top += 1
                out[c, a] = stack[0]
        return out

    @njit(cache=True)
    def compose_tables(g, fs, q):
        n_cand, m, width = fs.shape
        out = np.empty((n_cand, width), dtype=np.int64)
        for c in range(n_cand):
            for x in range(width):
                code = 0
                for j in range(m):
                    code = code * q + fs[c, j, x]
                out[c, x] = g[c, code]
        return out

    @njit(cache=True)
    def hom_filter(maps, src_table, dst_table, q_src, q_dst, arity):
        n_maps = maps.shape[0]
        width = src_table.shape[0]
        ok = np.ones(n_maps, dtype=np.bool_)
        for i in range(n_maps):
            for x in range(width):
                rest = x
                code = 0
                scale = 1
                for _ in range(arity):
                    code += maps[i, rest % q_src] * scale
                    scale *= q_dst
                    rest //= q_src
                if maps[i, src_table[x]] != dst_table[code]:
                    ok[i] = False
                    break
        return ok

    @njit(cache=True)
    def assoc_mismatch(sup_jn, sup_kn, sup_jk, s_k, s_n, j):
        n_h = sup_jk.shape[0]
        n_cg = sup_jk.shape[1]
        n_cf = sup_kn.shape[1]
        g = np.empty(max(j, 1), dtype=np.int64)
        for h in range(n_h):
            for cg in range(n_cg):
                rest = cg
                for pos in range(j - 1, -1, -1):
                    g[pos] = rest % s_k
                    rest //= s_k
                hg = sup_jk[h, cg]
                for cf in range(n_cf):
                    code = 0
                    for pos in range(j):
                        code = code * s_n + sup_kn[g[pos], cf]
                    if sup_jn[h, code] != sup_kn[hg, cf]:
                        return (h * n_cg + cg) * n_cf + cf
        return -1

    return SimpleNamespace(
        name="numba",
        union_edges=union_edges,
        compress=compress,
        eval_program=eval_program,
        compose_tables=compose_tables,
        hom_filter=hom_filter,
        assoc_mismatch=assoc_mismatch,
    )


try:
    NUMBA_KERNELS = _build_numba()
except ImportError:  # pragma: no cover - depends on environment
    NUMBA_KERNELS = None


def _select():
    flag = os.environ.get("LAWVERE_NUMBA", "1").strip().lower()
    if flag in ("0", "false", "no", "off") or NUMBA_KERNELS is None:
        return NUMPY_KERNELS
    return NUMBA_KERNELS


ACTIVE = _select()


def backend() -> str:
    return ACTIVE.name


def resolve(impl=None):
    """Kernel namespace for ``impl``: None (active), "numba", "numpy" or a namespace."""
    if impl is None:
        return ACTIVE
    if isinstance(impl, str):
        if impl == "numpy":
            return NUMPY_KERNELS
        if impl == "numba" and NUMBA_KERNELS is not None:
            return NUMBA_KERNELS
        raise ValueError(f"kernel backend {impl!r} is not available")
    return impl


# --------------------------------------------------------------------------
# thin typed wrappers used by the rest of the package


class UnionFind:
    """Union-find over ``range(size)`` whose representatives are least indices."""

    def __init__(self, size: int, impl=None):
        self.impl = resolve(impl)
        self.parent = np.arange(size, dtype=INDEX)

    def union_edges(self, left, right) -> None:
        left = np.ascontiguousarray(left, dtype=INDEX).reshape(-1)
        right = np.ascontiguousarray(right, dtype=INDEX).reshape(-1)
        if left.shape != right.shape:
            raise ValueError("edge arrays must have equal length")
        self.impl.union_edges(self.parent, left, right)

    def labels(self) -> np.ndarray:
        return self.impl.compress(self.parent)


def eval_program(program, op_arity, op_offset, tables, q, nvars, impl=None):
    kinds, args = program
    impl = resolve(impl)
    return impl.eval_program(
        np.ascontiguousarray(kinds, dtype=INDEX),
        np.ascontiguousarray(args, dtype=INDEX),
        np.ascontiguousarray(op_arity, dtype=INDEX),
        np.ascontiguousarray(op_offset, dtype=INDEX),
        np.ascontiguousarray(tables, dtype=INDEX),
        int(q),
        int(nvars),
    )


def compose_tables(g, fs, q, impl=None):
    impl = resolve(impl)
    return impl.compose_tables(
        np.ascontiguousarray(g, dtype=INDEX), np.ascontiguousarray(fs, dtype=INDEX), int(q)
    )


def hom_filter(maps, src_table, dst_table, q_src, q_dst, arity, impl=None):
    impl = resolve(impl)
    maps = np.ascontiguousarray(maps, dtype=INDEX).reshape(-1, q_src)
    return impl.hom_filter(
        maps,
        np.ascontiguousarray(src_table, dtype=INDEX),
        np.ascontiguousarray(dst_table, dtype=INDEX),
        int(q_src),
        int(q_dst),
        int(arity),
    )


def assoc_mismatch(sup_jn, sup_kn, sup_jk, s_k, s_n, j, impl=None):
    """Flat index of the first (h, g-code, f-code) violating associativity, or -1."""
    impl = resolve(impl)
    return int(
        impl.assoc_mismatch(
            np.ascontiguousarray(sup_jn, dtype=INDEX),
            np.ascontiguousarray(sup_kn, dtype=INDEX),
            np.ascontiguousarray(sup_jk, dtype=INDEX),
            int(s_k),
            int(s_n),
            int(j),
        )
    )
