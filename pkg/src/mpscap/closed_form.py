"""Closed-form spectra, capacities and string-multiplicity combinatorics.

Everything here is an explicit formula, checkable against the exact
enumeration in :mod:`mpscap.diag_process`:

* the diagonal spectrum of the n-site AKLT state
  (values sin^2p cos^2(n-p) / 2 with multiplicity 2 C(n, p), plus sin^2n once),
* the diagonal spectrum of the n-site Majumdar-Ghosh state (odd and even n
  take different family structures),
* the resulting capacities  log2(3) - h2(theta)  and
  1 + (g/2) log2 g + ((1-g)/2) log2(1-g),
* the multiplicity bookkeeping for Majumdar-Ghosh operator strings: a
  recurrence over eight diagonal classes and its closed-form solution.

Binomial coefficients are exact integers throughout; multiplicities are
combinatorial claims, never floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Iterable

import numpy as np

from .diag_process import Spectrum
from .mps_core import mg_model

LOG2_3 = math.log2(3.0)


def _xlog2(x: float) -> float:
    """x * log2(x) with the 0 log 0 = 0 convention."""
    return 0.0 if x <= 0.0 else x * math.log2(x)


def h2(theta: float) -> float:
    """Binary entropy (bits) of sin^2(theta)."""
    p = math.sin(theta) ** 2
    return -_xlog2(p) - _xlog2(1.0 - p)


def aklt_capacity(theta: float) -> float:
    """Capacity (qubits per use) of the AKLT-correlated dephasing channel."""
    return LOG2_3 - h2(theta)


def mg_capacity(g: float) -> float:
    """Capacity (qubits per use) of the Majumdar-Ghosh-correlated channel."""
    if not (0.0 <= g < 1.0):
        raise ValueError(f"g must lie in [0, 1), got {g}")
    return 1.0 + _xlog2(g) / 2.0 + _xlog2(1.0 - g) / 2.0


@dataclass(frozen=True)
class SpectrumFamily:
    """One analytic family of equal diagonal values."""

    label: str
    value: float
    multiplicity: int


def aklt_spectrum(n: int, theta: float) -> list[SpectrumFamily]:
    """Diagonal spectrum of the n-site AKLT state, families kept separate.

    Zero-valued families (e.g. everything but the pure-A1 string at
    cos(theta) = 0) are dropped.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    s2 = math.sin(theta) ** 2
    c2 = math.cos(theta) ** 2
    families = []
    for p in range(n):
        value = s2**p * c2 ** (n - p) / 2.0
        if value > 0.0:
            families.append(
                SpectrumFamily(f"lambda_{p}", value, 2 * math.comb(n, p))
            )
    top = s2**n
    if top > 0.0:
        families.append(SpectrumFamily(f"lambda_{n}", top, 1))
    return families


def mg_spectrum(n: int, g: float) -> list[SpectrumFamily]:
    """Diagonal spectrum of the n-site Majumdar-Ghosh state.

    Odd n:  mu_0 = ((1-g)^k + g^k)/2 twice and
            mu_i = (1-g)^i g^(k-i)/2 with multiplicity 2 C(k, k-i),
            where k = ceil(n/2) and 1 <= i <= k-1.
    Even n: the four families gamma_0, gamma1_i, gamma2_i, gamma_half with
            m = n/2:
            gamma_0    = ((1-g)^m + g^(m+1))/2           once,
            gamma1_i   = g^i (1-g)^(m-i)/2               C(m, i) times,
            gamma2_i   = g^(m-i+1) (1-g)^i / 2           C(m+1, i) times,
            gamma_half = ((1-g)^(m+1) + g^m)/2           once.

    Only proven for n >= 2; n = 1 is available through enumeration.
    """
    if n < 2:
        raise ValueError("closed-form spectrum requires n >= 2")
    if not (0.0 <= g < 1.0):
        raise ValueError(f"g must lie in [0, 1), got {g}")
    q = 1.0 - g
    families = []
    if n % 2 == 1:
        k = (n + 1) // 2
        value = (q**k + g**k) / 2.0
        if value > 0.0:
            families.append(SpectrumFamily("mu_0", value, 2))
        for i in range(1, k):
            value = q**i * g ** (k - i) / 2.0
            if value > 0.0:
                families.append(
                    SpectrumFamily(f"mu_{i}", value, 2 * math.comb(k, k - i))
                )
    else:
        m = n // 2
        value = (q**m + g ** (m + 1)) / 2.0
        if value > 0.0:
            families.append(SpectrumFamily("gamma_0", value, 1))
        for i in range(1, m):
            value = g**i * q ** (m - i) / 2.0
            if value > 0.0:
                families.append(SpectrumFamily(f"gamma1_{i}", value, math.comb(m, i)))
        for i in range(1, m + 1):
            value = g ** (m - i + 1) * q**i / 2.0
            if value > 0.0:
                families.append(
                    SpectrumFamily(f"gamma2_{i}", value, math.comb(m + 1, i))
                )
        value = (q ** (m + 1) + g**m) / 2.0
        if value > 0.0:
            families.append(SpectrumFamily("gamma_half", value, 1))
    return families


def expand_families(families: Iterable[SpectrumFamily]) -> np.ndarray:
    """Probability multiset of a family list, sorted in decreasing order."""
    values = [f.value for f in families]
    counts = [f.multiplicity for f in families]
    if not values:
        return np.zeros(0)
    return np.sort(np.repeat(values, counts))[::-1]


def family_entropy(families: Iterable[SpectrumFamily]) -> float:
    """Shannon entropy (bits) of a closed-form spectrum."""
    return -sum(f.multiplicity * _xlog2(f.value) for f in families)


def family_mass(families: Iterable[SpectrumFamily]) -> float:
    return sum(f.multiplicity * f.value for f in families)


def group_families(
    families: Iterable[SpectrumFamily], group_tol: float = 1e-9
) -> Spectrum:
    """Merge families with numerically equal values into a grouped spectrum."""
    ordered = sorted(families, key=lambda f: -f.value)
    entries: list[tuple[float, int]] = []
    for fam in ordered:
        if entries and entries[-1][0] - fam.value <= group_tol * entries[-1][0]:
            value, mult = entries[-1]
            entries[-1] = (value, mult + fam.multiplicity)
        else:
            entries.append((fam.value, fam.multiplicity))
    return Spectrum(entries=tuple(entries))


# ---------------------------------------------------------------------------
# Multiplicity bookkeeping for Majumdar-Ghosh operator strings.
#
# For n >= 4 every product O_1..O_n O_n^dag..O_1^dag (O_i one of the two
# Kraus operators) is one of eight diagonal patterns:
#
#   Z = 0                                  B = diag(g^fl, 0, 0)
#   C(i) = diag(g^i q^(fl-i), 0, 0)        D = diag(q^fl, g^ce, 0)
#   E(i) = diag(0, g^i q^(ce-i), 0)        F = diag(0, q^ce, g^fl)
#   G(i) = diag(0, 0, g^(fl-i) q^i)        H = diag(0, 0, q^fl)
#
# with q = 1-g, fl = floor(n/2), ce = ceil(n/2).  The table below counts how
# many strings fall in each class.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MultiplicityTable:
    """Class counts of the 2^n Majumdar-Ghosh operator strings.

    ``c``, ``e`` and ``g`` store the indexed families as tuples whose entry
    ``[i-1]`` is the count at index i; valid ranges are i = 1..floor(n/2)-1
    for c and g and i = 1..ceil(n/2)-1 for e.
    """

    n: int
    z: int
    b: int
    d: int
    f: int
    h: int
    c: tuple[int, ...]
    e: tuple[int, ...]
    g: tuple[int, ...]

    @property
    def total(self) -> int:
        return (
            self.z
            + self.b
            + self.d
            + self.f
            + self.h
            + sum(self.c)
            + sum(self.e)
            + sum(self.g)
        )

    @property
    def live(self) -> int:
        """Number of strings with a non-vanishing product: 2^n - z."""
        return 2**self.n - self.z

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {"z": self.z, "b": self.b, "d": self.d}
        out.update({f"c({i})": v for i, v in enumerate(self.c, start=1)})
        out.update({f"e({i})": v for i, v in enumerate(self.e, start=1)})
        out["f"] = self.f
        out.update({f"g({i})": v for i, v in enumerate(self.g, start=1)})
        out["h"] = self.h
        return out

    def as_dict(self) -> dict:
        """JSON-ready form with labelled counts."""
        return {"n": self.n, "total": self.total, "live": self.live,
                "counts": self.counts()}


def _mg_class_templates(n: int, g: float) -> dict[str, np.ndarray]:
    q = 1.0 - g
    fl, ce = n // 2, (n + 1) // 2
    templates: dict[str, np.ndarray] = {
        "z": np.zeros((3, 3)),
        "b": np.diag([g**fl, 0.0, 0.0]),
        "d": np.diag([q**fl, g**ce, 0.0]),
        "f": np.diag([0.0, q**ce, g**fl]),
        "h": np.diag([0.0, 0.0, q**fl]),
    }
    for i in range(1, fl):
        templates[f"c({i})"] = np.diag([g**i * q ** (fl - i), 0.0, 0.0])
        templates[f"g({i})"] = np.diag([0.0, 0.0, g ** (fl - i) * q**i])
    for i in range(1, ce):
        templates[f"e({i})"] = np.diag([0.0, g**i * q ** (ce - i), 0.0])
    return templates


def mg_multiplicity_seed(n: int = 4) -> MultiplicityTable:
    """Derive a multiplicity table by classifying every operator product.

    Each of the 2^n products is computed at a generic coupling and matched
    against the class templates; the match must be unique.  Feasible for
    small n only (the seed of the recurrence uses n = 4).  Note: a hand count
    that assigns one of the sixteen n = 4 strings elsewhere yields e(1) = 1
    and a total of 15; direct classification gives e(1) = 2 and all 16
    strings accounted for, which is what the recurrence needs downstream.
    """
    if n < 4:
        raise ValueError("classification is defined for n >= 4")
    if n > 14:
        raise ValueError("direct classification of 2^n products is capped at n=14")
    g = 0.3  # generic: all template values distinct
    model = mg_model(g)
    templates = _mg_class_templates(n, g)
    counts = dict.fromkeys(templates, 0)
    for s in product(range(2), repeat=n):
        prod = reduce(lambda x, y: x @ y, [model.kraus[i] for i in s])
        pattern = (prod @ prod.conj().T).real
        hits = [
            key
            for key, tpl in templates.items()
            if np.max(np.abs(pattern - tpl)) < 1e-12
        ]
        if len(hits) != 1:
            raise ArithmeticError(f"string {s} matched classes {hits}")
        counts[hits[0]] += 1
    fl, ce = n // 2, (n + 1) // 2
    return MultiplicityTable(
        n=n,
        z=counts["z"],
        b=counts["b"],
        d=counts["d"],
        f=counts["f"],
        h=counts["h"],
        c=tuple(counts[f"c({i})"] for i in range(1, fl)),
        e=tuple(counts[f"e({i})"] for i in range(1, ce)),
        g=tuple(counts[f"g({i})"] for i in range(1, fl)),
    )


def _advance(table: MultiplicityTable) -> MultiplicityTable:
    """One step n -> n+1 of the class-count recurrence."""
    n = table.n
    new_n = n + 1
    fl_new = new_n // 2
    ce_new = (new_n + 1) // 2
    c1 = {i: v for i, v in enumerate(table.c, start=1)}
    e1 = {i: v for i, v in enumerate(table.e, start=1)}
    g1 = {i: v for i, v in enumerate(table.g, start=1)}

    z = 2 * table.z + table.b + sum(table.c) + sum(table.g) + table.h
    b = table.d
    d = table.f
    f = table.d
    h = table.f
    # c and g inherit e (g reversed); lengths match because
    # floor((n+1)/2) = ceil(n/2).
    c = tuple(e1[i] for i in range(1, fl_new))
    g_fam = tuple(e1[(n + 1) // 2 - i] for i in range(1, fl_new))
    e: dict[int, int] = {}
    e[1] = table.h + c1.get(1, 0)
    for i in range(2, ce_new - 1):
        e[i] = g1[n // 2 - i + 1] + c1[i]
    e[ce_new - 1] = g1.get(1, 0) + table.b
    e_fam = tuple(e[i] for i in range(1, ce_new))
    return MultiplicityTable(
        n=new_n, z=z, b=b, d=d, f=f, h=h, c=c, e=e_fam, g=g_fam
    )


def mg_multiplicity_recurrence(n_max: int) -> list[MultiplicityTable]:
    """Iterate the class-count recurrence from the classified n = 4 seed.

    Returns the tables for n = 4..n_max.
    """
    if n_max < 4:
        raise ValueError("n_max must be >= 4")
    tables = [mg_multiplicity_seed()]
    while tables[-1].n < n_max:
        tables.append(_advance(tables[-1]))
    return tables


def mg_multiplicity_closed_form(n: int) -> MultiplicityTable:
    """Closed-form class counts:

    z = 2^n - 2^(floor(n/2)+1) - 2^(ceil(n/2)) + 2, the corner classes
    b = d = f = h = 1, and binomial families c(i) = g(i) = C(floor(n/2), i),
    e(i) = C(ceil(n/2), i).
    """
    if n < 4:
        raise ValueError("closed form stated for n >= 4")
    fl, ce = n // 2, (n + 1) // 2
    return MultiplicityTable(
        n=n,
        z=2**n - 2 ** (fl + 1) - 2**ce + 2,
        b=1,
        d=1,
        f=1,
        h=1,
        c=tuple(math.comb(fl, i) for i in range(1, fl)),
        e=tuple(math.comb(ce, i) for i in range(1, ce)),
        g=tuple(math.comb(fl, i) for i in range(1, fl)),
    )


def mg_live_string_count(n: int) -> int:
    """Closed-form number of strings with nonzero product for n >= 2."""
    if n < 2:
        raise ValueError("n must be >= 2")
    fl, ce = n // 2, (n + 1) // 2
    return 2 ** (fl + 1) + 2**ce - 2
