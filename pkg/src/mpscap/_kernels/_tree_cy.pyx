# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled depth-first kernel for the diagonal-distribution tree walk.

Semantics are identical to ``_tree_py``: same pruning rule (cut a branch when
no entry of the partial matrix exceeds ``prune_tol``), same lexicographic
output order, same pruned-mass accounting.  The walk keeps one partial matrix
per depth, so memory is O(n * D^2) regardless of how many strings are live.
"""

from libc.math cimport log2

import numpy as np


cdef inline double _child(
    const double complex[:, :, ::1] ops,
    double complex[:, :, ::1] stack,
    double complex[:, ::1] tmp,
    Py_ssize_t depth,
    Py_ssize_t sym,
    Py_ssize_t dim,
    double *trace_out,
) noexcept nogil:
    """Write A_sym^dag stack[depth] A_sym into stack[depth+1].

    Returns the max entry modulus of the child and stores its real trace.
    """
    cdef Py_ssize_t a, b, c
    cdef double complex acc
    cdef double biggest = 0.0, mag
    cdef double complex tr = 0.0
    # tmp = stack[depth] @ A_sym
    for a in range(dim):
        for c in range(dim):
            acc = 0.0
            for b in range(dim):
                acc = acc + stack[depth, a, b] * ops[sym, b, c]
            tmp[a, c] = acc
    # stack[depth+1] = A_sym^dag @ tmp
    for a in range(dim):
        for c in range(dim):
            acc = 0.0
            for b in range(dim):
                acc = acc + ops[sym, b, a].conjugate() * tmp[b, c]
            stack[depth + 1, a, c] = acc
            mag = abs(acc)
            if mag > biggest:
                biggest = mag
            if a == c:
                tr = tr + acc
    trace_out[0] = tr.real
    return biggest


def distribution(ops, rho, int n, double prune_tol):
    """See ``_tree_py.distribution``; identical contract."""
    ops_arr = np.ascontiguousarray(ops, dtype=np.complex128)
    rho_arr = np.ascontiguousarray(rho, dtype=np.complex128)
    if ops_arr.ndim != 3 or ops_arr.shape[1] != ops_arr.shape[2]:
        raise ValueError(f"ops must have shape (d, D, D), got {ops_arr.shape}")
    if rho_arr.shape != ops_arr.shape[1:]:
        raise ValueError("rho dimension does not match the Kraus operators")
    if n < 1:
        raise ValueError("n must be >= 1")

    cdef const double complex[:, :, ::1] a_ops = ops_arr
    cdef Py_ssize_t d = a_ops.shape[0]
    cdef Py_ssize_t dim = a_ops.shape[1]

    stack_arr = np.zeros((n + 1, dim, dim), dtype=np.complex128)
    cdef double complex[:, :, ::1] stack = stack_arr
    stack_arr[0] = rho_arr
    tmp_arr = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] tmp = tmp_arr

    next_arr = np.zeros(n, dtype=np.intp)
    cdef Py_ssize_t[:] nxt = next_arr
    path_arr = np.zeros(n, dtype=np.uint8)
    cdef unsigned char[:] path = path_arr

    cdef Py_ssize_t capacity = 1024
    codes_arr = np.empty((capacity, n), dtype=np.uint8)
    probs_arr = np.empty(capacity, dtype=np.float64)
    cdef unsigned char[:, ::1] codes = codes_arr
    cdef double[::1] probs = probs_arr

    cdef Py_ssize_t count = 0, depth = 0, sym, j
    cdef double pruned = 0.0, biggest, trace
    cdef double p

    while depth >= 0:
        if nxt[depth] == d:
            depth -= 1
            continue
        sym = nxt[depth]
        nxt[depth] += 1
        biggest = _child(a_ops, stack, tmp, depth, sym, dim, &trace)
        path[depth] = <unsigned char> sym
        if depth + 1 == n:
            p = trace
            if p > prune_tol:
                if count == capacity:
                    capacity *= 2
                    codes_arr = np.concatenate(
                        [codes_arr, np.empty((capacity - count, n), dtype=np.uint8)]
                    )
                    probs_arr = np.concatenate(
                        [probs_arr, np.empty(capacity - count, dtype=np.float64)]
                    )
                    codes = codes_arr
                    probs = probs_arr
                for j in range(n):
                    codes[count, j] = path[j]
                probs[count] = p if p > 0.0 else 0.0
                count += 1
            elif p > 0.0:
                pruned += p
        else:
            if biggest > prune_tol:
                depth += 1
                nxt[depth] = 0
            elif trace > 0.0:
                pruned += trace

    return (
        np.ascontiguousarray(codes_arr[:count]),
        probs_arr[:count].copy(),
        pruned,
    )


def entropy_profile(ops, rho, int n_max, double prune_tol):
    """See ``_tree_py.entropy_profile``; identical contract."""
    ops_arr = np.ascontiguousarray(ops, dtype=np.complex128)
    rho_arr = np.ascontiguousarray(rho, dtype=np.complex128)
    if ops_arr.ndim != 3 or ops_arr.shape[1] != ops_arr.shape[2]:
        raise ValueError(f"ops must have shape (d, D, D), got {ops_arr.shape}")
    if rho_arr.shape != ops_arr.shape[1:]:
        raise ValueError("rho dimension does not match the Kraus operators")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")

    cdef const double complex[:, :, ::1] a_ops = ops_arr
    cdef Py_ssize_t d = a_ops.shape[0]
    cdef Py_ssize_t dim = a_ops.shape[1]

    stack_arr = np.zeros((n_max + 1, dim, dim), dtype=np.complex128)
    cdef double complex[:, :, ::1] stack = stack_arr
    stack_arr[0] = rho_arr
    tmp_arr = np.zeros((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] tmp = tmp_arr

    next_arr = np.zeros(n_max, dtype=np.intp)
    cdef Py_ssize_t[:] nxt = next_arr

    entropy_arr = np.zeros(n_max, dtype=np.float64)
    mass_arr = np.zeros(n_max, dtype=np.float64)
    cut_arr = np.zeros(n_max, dtype=np.float64)
    cdef double[::1] entropy = entropy_arr
    cdef double[::1] mass = mass_arr
    cdef double[::1] cut = cut_arr

    cdef Py_ssize_t depth = 0, sym
    cdef double biggest, trace, p

    while depth >= 0:
        if nxt[depth] == d:
            depth -= 1
            continue
        sym = nxt[depth]
        nxt[depth] += 1
        biggest = _child(a_ops, stack, tmp, depth, sym, dim, &trace)
        p = trace if trace > 0.0 else 0.0
        mass[depth] += p
        if p > 0.0:
            entropy[depth] -= p * log2(p)
        if depth + 1 < n_max:
            if biggest > prune_tol:
                depth += 1
                nxt[depth] = 0
            else:
                cut[depth] += p

    return entropy_arr, mass_arr, cut_arr
