"""Vectorized fallback kernel for the diagonal-distribution tree walk.

Walks the symbol tree breadth-first, holding every live prefix matrix of the
current depth in one (L, D, D) array so each level costs a handful of numpy
calls instead of one call per node.  Children are laid out parent-major /
symbol-minor, which reproduces the lexicographic order of a depth-first walk
exactly; the compiled kernel must produce byte-identical code arrays.

A branch is cut when its partial matrix sum_paths A^dag..rho..A has no entry
above ``prune_tol``.  Because the partial matrices are positive semidefinite,
the total probability mass below a node equals its trace; the kernel
accumulates the traces of everything it cuts so callers can report exactly
how much mass pruning discarded.
"""

from __future__ import annotations

import numpy as np


def _prepare(ops: np.ndarray, rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ops = np.ascontiguousarray(ops, dtype=np.complex128)
    rho = np.ascontiguousarray(rho, dtype=np.complex128)
    if ops.ndim != 3 or ops.shape[1] != ops.shape[2]:
        raise ValueError(f"ops must have shape (d, D, D), got {ops.shape}")
    if rho.shape != ops.shape[1:]:
        raise ValueError("rho dimension does not match the Kraus operators")
    return ops, rho


def _expand(ops: np.ndarray, mats: np.ndarray) -> np.ndarray:
    """All children A_i^dag M A_i of a batch of prefix matrices.

    Returns shape (L*d, D, D) with the symbol index varying fastest.
    """
    children = np.einsum("iba,lbc,icd->liad", ops.conj(), mats, ops, optimize=True)
    d, big_d = ops.shape[0], ops.shape[1]
    return children.reshape(mats.shape[0] * d, big_d, big_d)


def distribution(
    ops: np.ndarray, rho: np.ndarray, n: int, prune_tol: float
) -> tuple[np.ndarray, np.ndarray, float]:
    """Probabilities of all length-n symbol strings above the pruning floor.

    Returns ``(codes, probs, pruned_mass)`` where ``codes`` is a (m, n) uint8
    array of 0-based symbols in lexicographic order, ``probs`` the matching
    trace values, and ``pruned_mass`` the total probability discarded by
    branch cuts and by the final ``p > prune_tol`` filter.
    """
    ops, rho = _prepare(ops, rho)
    if n < 1:
        raise ValueError("n must be >= 1")
    d = ops.shape[0]
    mats = rho[None, :, :]
    codes = np.zeros((1, 0), dtype=np.uint8)
    pruned = 0.0
    symbol_col = np.arange(d, dtype=np.uint8)
    for depth in range(1, n + 1):
        children = _expand(ops, mats)
        codes = np.concatenate(
            [
                np.repeat(codes, d, axis=0),
                np.tile(symbol_col, mats.shape[0])[:, None],
            ],
            axis=1,
        )
        traces = np.trace(children, axis1=1, axis2=2).real
        if depth == n:
            keep = traces > prune_tol
        else:
            keep = np.abs(children).reshape(children.shape[0], -1).max(axis=1) > prune_tol
        pruned += float(np.clip(traces[~keep], 0.0, None).sum())
        mats = children[keep]
        codes = codes[keep]
        if mats.shape[0] == 0:
            return (
                np.zeros((0, n), dtype=np.uint8),
                np.zeros(0, dtype=np.float64),
                pruned,
            )
    probs = np.clip(np.trace(mats, axis1=1, axis2=2).real, 0.0, None)
    return np.ascontiguousarray(codes), probs, pruned


def entropy_profile(
    ops: np.ndarray, rho: np.ndarray, n_max: int, prune_tol: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shannon entropies (bits) of the length-k marginals for k = 1..n_max.

    A single walk suffices because the trace of a prefix matrix is exactly
    the marginal probability of that prefix.  Returns ``(entropy, mass,
    cut_mass)``, each indexed by k-1: per-depth entropy, per-depth total
    counted mass, and per-depth mass of the subtrees cut at that depth.
    """
    ops, rho = _prepare(ops, rho)
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    entropy = np.zeros(n_max)
    mass = np.zeros(n_max)
    cut_mass = np.zeros(n_max)
    mats = rho[None, :, :]
    for depth in range(1, n_max + 1):
        children = _expand(ops, mats)
        traces = np.clip(np.trace(children, axis1=1, axis2=2).real, 0.0, None)
        positive = traces[traces > 0.0]
        entropy[depth - 1] = -(positive * np.log2(positive)).sum()
        mass[depth - 1] = traces.sum()
        if depth == n_max:
            break
        keep = np.abs(children).reshape(children.shape[0], -1).max(axis=1) > prune_tol
        cut_mass[depth - 1] = traces[~keep].sum()
        mats = children[keep]
        if mats.shape[0] == 0:
            break
    return entropy, mass, cut_mass
