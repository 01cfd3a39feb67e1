"""Exact diagonal distribution of an MPS and its entropy-rate estimators.

The distribution of length-n symbol strings,

    p(x_1 .. x_n) = Tr(A_{x_n}^dag .. A_{x_1}^dag rho A_{x_1} .. A_{x_n}),

is computed by a depth-first walk of the d^n symbol tree that cuts every
branch whose partial matrix has vanished.  For the chains treated in closed
form in :mod:`mpscap.closed_form` the dead branches are exactly zero
(nilpotent operator products), so pruning loses no probability mass and
string lengths in the twenties stay cheap.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .mps_core import MPSModel

#: Entry-size floor below which a branch is considered dead.
DEFAULT_PRUNE_TOL = 1e-14

#: Relative tolerance for merging numerically equal probabilities.
DEFAULT_GROUP_TOL = 1e-9


def active_kernel() -> str:
    """Which tree-walk kernel is in use ('compiled' or 'python')."""
    return _kernels.active_kernel()


def _parse_symbols(symbols: Sequence[int] | str, local_dim: int) -> tuple[int, ...]:
    if isinstance(symbols, str):
        seq = tuple(int(ch) for ch in symbols)
    else:
        seq = tuple(int(s) for s in symbols)
    if not seq:
        raise ValueError("symbol string must be non-empty")
    for s in seq:
        if not 1 <= s <= local_dim:
            raise ValueError(f"symbol {s} outside 1..{local_dim}")
    return seq


def format_string(code: Iterable[int], local_dim: int) -> str:
    """Render a 0-based code row as a 1-based symbol string like '1213'."""
    symbols = [int(c) + 1 for c in code]
    if local_dim <= 9:
        return "".join(str(s) for s in symbols)
    return "-".join(str(s) for s in symbols)


@dataclass(frozen=True)
class DiagDistribution:
    """Sparse diagonal distribution: the strings that survived pruning.

    ``codes`` holds 0-based symbols row by row in lexicographic order;
    ``probs`` the matching probabilities.  ``pruned_mass`` is the exact
    probability discarded by branch cuts (zero up to roundoff for models
    whose dead branches vanish identically).
    """

    n: int
    local_dim: int
    codes: np.ndarray
    probs: np.ndarray
    prune_tol: float
    pruned_mass: float

    def __len__(self) -> int:
        return int(self.probs.shape[0])

    def items(self) -> list[tuple[str, float]]:
        """(string, probability) pairs, strings rendered with 1-based symbols."""
        return [
            (format_string(row, self.local_dim), float(p))
            for row, p in zip(self.codes, self.probs)
        ]

    def iter_items(self) -> Iterator[tuple[str, float]]:
        for row, p in zip(self.codes, self.probs):
            yield format_string(row, self.local_dim), float(p)

    def as_dict(self) -> dict[str, float]:
        return dict(self.iter_items())

    def total(self) -> float:
        return float(self.probs.sum())

    def validate(self, mass_tol: float = 1e-10) -> None:
        """Check the stored-distribution invariants; raise on violation."""
        if np.any(self.probs <= self.prune_tol):
            raise ValueError("stored probabilities must exceed prune_tol")
        if abs(self.total() - 1.0) > mass_tol:
            raise ValueError(
                f"probabilities sum to {self.total():.15f} "
                f"(pruned mass {self.pruned_mass:.3e})"
            )
        if len(np.unique(self.codes, axis=0)) != len(self):
            raise ValueError("duplicate strings in distribution")

    def to_json(self, path: str | Path | None = None) -> dict:
        doc = {
            "n": self.n,
            "local_dim": self.local_dim,
            "prune_tol": self.prune_tol,
            "pruned_mass": self.pruned_mass,
            "items": [[s, p] for s, p in self.iter_items()],
        }
        if path is not None:
            Path(path).write_text(
                json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
        return doc

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["string", "probability"])
            for s, p in self.iter_items():
                writer.writerow([s, f"{p:.17g}"])


@dataclass(frozen=True)
class EntropyRecord:
    """One row of an entropy trace (entropy in bits)."""

    n: int
    entropy: float
    rate_avg: float
    rate_cond: float


@dataclass(frozen=True)
class EntropyTrace:
    """Block entropies H_n with both entropy-rate estimators.

    ``rate_avg`` is H_n / n and ``rate_cond`` the conditional increment
    H_n - H_{n-1}; the latter converges geometrically for the chains treated
    here and is the default for verification.  ``mass`` and ``cut_mass``
    expose the per-depth normalization actually seen by the walk.
    """

    records: tuple[EntropyRecord, ...]
    prune_tol: float
    mass: tuple[float, ...]
    cut_mass: tuple[float, ...]

    @property
    def n_max(self) -> int:
        return self.records[-1].n

    def record(self, n: int) -> EntropyRecord:
        if not 1 <= n <= self.n_max:
            raise ValueError(f"n must lie in 1..{self.n_max}")
        return self.records[n - 1]

    def entropy(self, n: int) -> float:
        return self.record(n).entropy

    def rate(self, n: int | None = None, estimator: str = "cond") -> float:
        rec = self.record(self.n_max if n is None else n)
        if estimator == "cond":
            return rec.rate_cond
        if estimator == "avg":
            return rec.rate_avg
        raise ValueError(f"unknown estimator {estimator!r}")

    def to_csv(self, path: str | Path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "H_n", "rate_avg", "rate_cond"])
            for rec in self.records:
                writer.writerow(
                    [
                        rec.n,
                        f"{rec.entropy:.17g}",
                        f"{rec.rate_avg:.17g}",
                        f"{rec.rate_cond:.17g}",
                    ]
                )


@dataclass(frozen=True)
class Spectrum:
    """Multiset of (value, multiplicity) pairs, values strictly decreasing."""

    entries: tuple[tuple[float, int], ...]

    def values(self) -> np.ndarray:
        return np.array([v for v, _ in self.entries])

    def multiplicities(self) -> np.ndarray:
        return np.array([m for _, m in self.entries], dtype=np.int64)

    def total_multiplicity(self) -> int:
        return int(self.multiplicities().sum())

    def weighted_sum(self) -> float:
        return float((self.values() * self.multiplicities()).sum())

    def validate(self, mass_tol: float = 1e-10) -> None:
        vals = self.values()
        if np.any(vals <= 0):
            raise ValueError("spectrum values must be positive")
        if np.any(np.diff(vals) >= 0):
            raise ValueError("spectrum values must be strictly decreasing")
        if abs(self.weighted_sum() - 1.0) > mass_tol:
            raise ValueError(f"spectrum mass {self.weighted_sum():.15f} != 1")


def string_probability(model: MPSModel, symbols: Sequence[int] | str) -> float:
    """Probability of one symbol string (symbols are 1-based).

    Iterates M <- A_i^dag M A_i from M = rho and returns the final trace.
    """
    seq = _parse_symbols(symbols, model.local_dim)
    m = model.invariant_state
    for s in seq:
        a = model.kraus[s - 1]
        m = a.conj().T @ m @ a
    t = complex(np.trace(m))
    if abs(t.imag) > 1e-12:
        raise ArithmeticError(f"trace has imaginary residue {t.imag:.3e}")
    if t.real < -1e-14:
        raise ArithmeticError(f"trace is negative beyond roundoff: {t.real:.3e}")
    return max(t.real, 0.0)


def enumerate_distribution(
    model: MPSModel, n: int, prune_tol: float = DEFAULT_PRUNE_TOL
) -> DiagDistribution:
    """All length-n strings with probability above ``prune_tol``.

    ``prune_tol = 0`` keeps everything with strictly positive probability
    (branches that are exactly zero are still skipped); a negative value
    forces the complete d^n listing including zero-probability strings.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    codes, probs, pruned = _kernels.distribution(
        model.kraus_stack(), model.invariant_state, n, prune_tol
    )
    return DiagDistribution(
        n=n,
        local_dim=model.local_dim,
        codes=codes,
        probs=probs,
        prune_tol=prune_tol,
        pruned_mass=pruned,
    )


def shannon_entropy(dist: DiagDistribution) -> float:
    """Shannon entropy in bits of the stored items (0 log 0 = 0)."""
    p = dist.probs[dist.probs > 0.0]
    if p.size == 0:
        return 0.0
    return float(-(p * np.log2(p)).sum())


def entropy_trace(
    model: MPSModel, n_max: int, prune_tol: float = DEFAULT_PRUNE_TOL
) -> EntropyTrace:
    """Block entropies H_1..H_{n_max} from a single incremental tree walk."""
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    entropy, mass, cut = _kernels.entropy_profile(
        model.kraus_stack(), model.invariant_state, n_max, prune_tol
    )
    records = []
    previous = 0.0
    for k in range(1, n_max + 1):
        h = float(entropy[k - 1])
        records.append(
            EntropyRecord(n=k, entropy=h, rate_avg=h / k, rate_cond=h - previous)
        )
        previous = h
    return EntropyTrace(
        records=tuple(records),
        prune_tol=prune_tol,
        mass=tuple(float(x) for x in mass),
        cut_mass=tuple(float(x) for x in cut),
    )


def spectrum_of(
    dist: DiagDistribution, group_tol: float = DEFAULT_GROUP_TOL
) -> Spectrum:
    """Group the distribution into (value, multiplicity) pairs.

    Probabilities within relative ``group_tol`` of a group's leading value
    are merged; the reported value is the group mean.  Note that grouping is
    purely numeric, so analytically distinct families that collide at special
    parameters merge here.
    """
    if len(dist) == 0:
        return Spectrum(entries=())
    values = np.sort(dist.probs)[::-1]
    entries: list[tuple[float, int]] = []
    anchor = values[0]
    bucket = [anchor]
    for v in values[1:]:
        if anchor - v <= group_tol * anchor:
            bucket.append(v)
        else:
            entries.append((float(np.mean(bucket)), len(bucket)))
            anchor = v
            bucket = [v]
    entries.append((float(np.mean(bucket)), len(bucket)))
    return Spectrum(entries=tuple(entries))


def marginal(dist: DiagDistribution, drop: str) -> dict[str, float]:
    """Marginal distribution after dropping the 'first' or 'last' symbol."""
    if drop == "first":
        sliced = dist.codes[:, 1:]
    elif drop == "last":
        sliced = dist.codes[:, :-1]
    else:
        raise ValueError("drop must be 'first' or 'last'")
    out: dict[str, float] = {}
    for row, p in zip(sliced, dist.probs):
        key = format_string(row, dist.local_dim)
        out[key] = out.get(key, 0.0) + float(p)
    return out


def compare_distributions(
    a: DiagDistribution | dict[str, float],
    b: DiagDistribution | dict[str, float],
) -> float:
    """Largest per-string probability difference, missing strings count as 0."""
    da = a.as_dict() if isinstance(a, DiagDistribution) else a
    db = b.as_dict() if isinstance(b, DiagDistribution) else b
    keys = set(da) | set(db)
    if not keys:
        return 0.0
    return max(abs(da.get(k, 0.0) - db.get(k, 0.0)) for k in keys)


def probability_multiset(dist: DiagDistribution) -> np.ndarray:
    """Stored probabilities sorted in decreasing order."""
    return np.sort(dist.probs)[::-1]


def multiset_gap(
    left: np.ndarray | Sequence[float],
    right: np.ndarray | Sequence[float],
) -> float:
    """Max elementwise gap between two sorted-descending multisets.

    The shorter side is padded with zeros, so entries that one side dropped
    as numerically zero compare against 0.
    """
    lf = np.sort(np.asarray(left, dtype=float))[::-1]
    rf = np.sort(np.asarray(right, dtype=float))[::-1]
    size = max(lf.size, rf.size)
    lf = np.pad(lf, (0, size - lf.size))
    rf = np.pad(rf, (0, size - rf.size))
    if size == 0:
        return 0.0
    return float(np.max(np.abs(lf - rf)))
