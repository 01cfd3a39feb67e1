"""Desk-scale verification suite: every cross-check the library promises.

Each check compares two independent routes to the same quantity (closed form
vs enumeration, pruned vs unpruned walk, channel simulation vs distribution)
or asserts a structural invariant.  The CLI ``verify`` command runs this
suite and exits nonzero if anything fails.

Where an estimator converges to the capacity only in the string-length
limit, the checks assert exact finite-size identities (which hold at every
n) plus convergence at the documented lengths, rather than pinning one
tolerance to an arbitrary n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from . import closed_form as cf
from . import channel_sim as cs
from . import diag_process as dp
from . import mps_core as mk

#: Parameter grids used by the cross-checks.
THETA_GRID = (0.0, 0.3, 0.7, mk.AKLT_GROUND_THETA, 1.2)
G_GRID = tuple(round(0.1 * k, 1) for k in range(10))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __str__(self) -> str:
        mark = "ok  " if self.passed else "FAIL"
        return f"{mark} {self.name}: {self.detail}"


def _residual_check(name: str, residual: float, tol: float) -> CheckResult:
    return CheckResult(
        name=name,
        passed=residual < tol,
        detail=f"residual {residual:.3e} (tol {tol:.1e})",
    )


def _models(which: str, theta_grid: Sequence[float], g_grid: Sequence[float]):
    if which in ("aklt", "both"):
        for theta in theta_grid:
            yield mk.aklt_model(theta), f"aklt theta={theta:.4f}"
    if which in ("mg", "both"):
        for g in g_grid:
            yield mk.mg_model(g), f"mg g={g:.2f}"


def check_model_structure(which: str = "both", n_max: int = 12) -> list[CheckResult]:
    out = []
    for model, tag in _models(which, THETA_GRID, G_GRID):
        report = mk.validate_model(model)
        out.append(
            _residual_check(f"{tag}: model conditions", report.max_residual, 1e-12)
        )
    if which in ("aklt", "both"):
        model = mk.aklt_model(0.7)
        a1, a2, a3 = model.kraus
        exact = max(
            mk.max_abs(a2 @ a2),
            mk.max_abs(a3 @ a3),
            mk.max_abs(a1 @ mk.dagger(a1) - math.sin(0.7) ** 2 * np.eye(2)),
        )
        out.append(
            _residual_check("aklt: nilpotency and A1 A1^dag = sin^2 I", exact, 1e-15)
        )
    if which in ("mg", "both"):
        model = mk.mg_model(0.3)
        cubes = max(mk.max_abs(a @ a @ a) for a in model.kraus)
        out.append(_residual_check("mg: Kraus operators cube to zero", cubes, 1e-15))
    for builder, tag in (
        (lambda: mk.aklt_model(1.0), "aklt theta=1.0"),
        (lambda: mk.mg_model(0.3), "mg g=0.30"),
    ):
        model = builder()
        solved = mk.solve_invariant_state(model.kraus)
        out.append(
            _residual_check(
                f"{tag}: invariant-state solver matches analytic state",
                mk.max_abs(solved - model.invariant_state),
                1e-10,
            )
        )
    return out


def check_enumeration(which: str = "both", n_max: int = 12) -> list[CheckResult]:
    out = []
    norm_n = min(n_max, 12)
    for model, tag in _models(which, (0.3, mk.AKLT_GROUND_THETA), (0.0, 0.5, 0.9)):
        dist = dp.enumerate_distribution(model, norm_n)
        out.append(
            _residual_check(
                f"{tag}: normalization at n={norm_n}",
                abs(dist.total() - 1.0),
                1e-10,
            )
        )
    oracle_n = min(n_max, 8)
    for model, tag in _models(which, (0.1, 0.7, mk.AKLT_GROUND_THETA), (0.2, 0.5)):
        pruned = dp.enumerate_distribution(model, oracle_n)
        full = dp.enumerate_distribution(model, oracle_n, prune_tol=0.0)
        out.append(
            _residual_check(
                f"{tag}: pruned vs full walk at n={oracle_n}",
                dp.compare_distributions(pruned, full),
                1e-12,
            )
        )
        longer = dp.enumerate_distribution(model, oracle_n + 1)
        first = dp.marginal(longer, drop="first")
        last = dp.marginal(longer, drop="last")
        base = pruned.as_dict()
        out.append(
            _residual_check(
                f"{tag}: stationarity of marginals at n={oracle_n}",
                max(
                    dp.compare_distributions(first, base),
                    dp.compare_distributions(last, base),
                ),
                1e-10,
            )
        )
    for model, tag in _models(which, (0.7,), (0.4,)):
        trace = dp.entropy_trace(model, min(n_max, 12))
        h = [rec.entropy for rec in trace.records]
        increments = np.diff([0.0] + h)
        monotone = all(b >= a - 1e-12 for a, b in zip(h, h[1:]))
        concave = all(
            later <= earlier + 1e-9
            for earlier, later in zip(increments, increments[1:])
        )
        out.append(
            CheckResult(
                f"{tag}: entropy chain rule",
                monotone and concave,
                "H_n nondecreasing, conditional increments nonincreasing",
            )
        )
    if which in ("aklt", "both"):
        dist = dp.enumerate_distribution(mk.aklt_model(0.8), min(n_max, 8))
        bad = 0
        for row in dist.codes:
            tail = [int(s) for s in row if s != 0]
            bad += any(a == b for a, b in zip(tail, tail[1:]))
        out.append(
            CheckResult(
                "aklt: symbols 2 and 3 alternate in live strings",
                bad == 0,
                f"{len(dist)} strings inspected",
            )
        )
    return out


def check_closed_form(which: str = "both", n_max: int = 12) -> list[CheckResult]:
    out = []
    spectrum_n = min(n_max, 8)
    worst = {"aklt": 0.0, "mg": 0.0}
    if which in ("aklt", "both"):
        for theta in THETA_GRID:
            model = mk.aklt_model(theta)
            for n in range(1, spectrum_n + 1):
                gap = dp.multiset_gap(
                    cf.expand_families(cf.aklt_spectrum(n, theta)),
                    dp.probability_multiset(
                        dp.enumerate_distribution(model, n, prune_tol=0.0)
                    ),
                )
                worst["aklt"] = max(worst["aklt"], gap)
        out.append(
            _residual_check(
                f"aklt: closed-form spectrum vs enumeration, n<=({spectrum_n})",
                worst["aklt"],
                1e-12,
            )
        )
    if which in ("mg", "both"):
        for g in G_GRID:
            model = mk.mg_model(g)
            for n in range(2, spectrum_n + 1):
                gap = dp.multiset_gap(
                    cf.expand_families(cf.mg_spectrum(n, g)),
                    dp.probability_multiset(
                        dp.enumerate_distribution(model, n, prune_tol=0.0)
                    ),
                )
                worst["mg"] = max(worst["mg"], gap)
        out.append(
            _residual_check(
                f"mg: closed-form spectrum vs enumeration, n<=({spectrum_n})",
                worst["mg"],
                1e-12,
            )
        )
    mass_worst = 0.0
    for n in range(1, 21):
        for theta in THETA_GRID:
            mass_worst = max(
                mass_worst, abs(cf.family_mass(cf.aklt_spectrum(n, theta)) - 1.0)
            )
        for g in G_GRID:
            if n >= 2:
                mass_worst = max(
                    mass_worst, abs(cf.family_mass(cf.mg_spectrum(n, g)) - 1.0)
                )
    out.append(
        _residual_check("closed-form spectra: mass sums to 1, n<=20", mass_worst, 1e-12)
    )

    seed = cf.mg_multiplicity_seed()
    out.append(
        CheckResult(
            "mg multiplicity seed accounts for every n=4 string",
            seed.total == 16 and seed.e == (2,),
            f"total {seed.total} of 16, e(1) = {seed.e[0]} "
            "(an undercount of e(1) to 1 would leave a 15-string table "
            "and break the recurrence downstream)",
        )
    )
    tables = cf.mg_multiplicity_recurrence(20)
    mismatch = [t.n for t in tables if t != cf.mg_multiplicity_closed_form(t.n)]
    out.append(
        CheckResult(
            "mg multiplicity recurrence equals closed form, n=4..20",
            not mismatch,
            "exact integer equality" if not mismatch else f"mismatch at n={mismatch}",
        )
    )
    live_n = min(n_max, 12)
    live_bad = []
    for g in (0.25, 0.5, 0.75):
        model = mk.mg_model(g)
        for n in range(2, live_n + 1):
            if len(dp.enumerate_distribution(model, n)) != cf.mg_live_string_count(n):
                live_bad.append((g, n))
    out.append(
        CheckResult(
            f"mg live-string count matches 2^n - z_n, n<=({live_n})",
            not live_bad,
            "counts agree" if not live_bad else f"mismatch at {live_bad}",
        )
    )
    return out


def check_capacity(which: str = "both", n_max: int = 12) -> list[CheckResult]:
    out = []
    out.append(
        _residual_check(
            "aklt ground-point capacity equals 2/3",
            abs(cf.aklt_capacity(mk.AKLT_GROUND_THETA) - 2.0 / 3.0),
            1e-12,
        )
    )
    out.append(
        _residual_check(
            "mg ground-point capacity equals 1/2",
            abs(cf.mg_capacity(0.5) - 0.5),
            1e-12,
        )
    )
    n = min(n_max, 12)
    if which in ("aklt", "both"):
        worst = 0.0
        for theta in THETA_GRID:
            model = mk.aklt_model(theta)
            trace = dp.entropy_trace(model, n)
            p = math.sin(theta) ** 2
            # Exact finite-size identity: the conditional rate exceeds the
            # entropy rate by precisely p^(n-1) (1-p).
            expected_gap = p ** (n - 1) * (1.0 - p)
            estimate = math.log2(3) - trace.rate(n, "cond")
            worst = max(
                worst, abs(estimate - cf.aklt_capacity(theta) + expected_gap)
            )
        out.append(
            _residual_check(
                f"aklt: conditional-rate finite-size identity at n={n}",
                worst,
                1e-9,
            )
        )
    if which in ("mg", "both"):
        worst = 0.0
        for g in G_GRID:
            model = mk.mg_model(g)
            trace = dp.entropy_trace(model, n)
            for k in range(2, n + 1):
                closed_rate = cf.family_entropy(cf.mg_spectrum(k, g)) - (
                    cf.family_entropy(cf.mg_spectrum(k - 1, g))
                    if k - 1 >= 2
                    else trace.entropy(1)
                )
                worst = max(worst, abs(trace.rate(k, "cond") - closed_rate))
        out.append(
            _residual_check(
                f"mg: conditional rate agrees with closed-form spectra, n<=({n})",
                worst,
                1e-10,
            )
        )
    # Average-rate bound: |log2 d - H_n/n - capacity| <= 1.5/n on the sweep
    # grids (the excess block entropy of both chains is below 1.5 bits).
    worst_ratio = 0.0
    if which in ("aklt", "both"):
        n_aklt = min(n_max, 14)
        for theta in [round(0.1 * k, 1) for k in range(16)] + [mk.AKLT_GROUND_THETA]:
            model = mk.aklt_model(theta)
            trace = dp.entropy_trace(model, n_aklt)
            gap = abs(
                math.log2(3) - trace.rate(n_aklt, "avg") - cf.aklt_capacity(theta)
            )
            worst_ratio = max(worst_ratio, gap * n_aklt / 1.5)
    if which in ("mg", "both"):
        n_mg = min(n_max, 20)
        for g in [round(0.05 * k, 2) for k in range(20)]:
            model = mk.mg_model(g)
            trace = dp.entropy_trace(model, n_mg)
            gap = abs(1.0 - trace.rate(n_mg, "avg") - cf.mg_capacity(g))
            worst_ratio = max(worst_ratio, gap * n_mg / 1.5)
    out.append(
        CheckResult(
            "average-rate gap below 1.5/n across default grids",
            worst_ratio <= 1.0,
            f"worst gap is {worst_ratio:.6f} of the 1.5/n allowance",
        )
    )
    return out


def check_channel(which: str = "both", n_max: int = 12) -> list[CheckResult]:
    out = []
    gate = cs.phase_gate(3, 1) @ cs.phase_gate(3, 2)
    out.append(
        _residual_check(
            "phase gates: Z(1) Z(2) = I for d=3",
            mk.max_abs(gate - np.eye(3)),
            1e-14,
        )
    )
    for d in (2, 3):
        u = cs.controlled_phase_unitary(d)
        out.append(
            _residual_check(
                f"controlled-phase unitarity, d={d}",
                mk.max_abs(u @ mk.dagger(u) - np.eye(d * d)),
                1e-12,
            )
        )
    out.append(
        _residual_check(
            "entropy of the maximally mixed 8-state",
            abs(cs.von_neumann_entropy(cs.maximally_mixed(8)) - 3.0),
            1e-12,
        )
    )
    n_top = min(n_max, 4)
    worst_cptp = 0.0
    worst_two_path = 0.0
    worst_offdiag = 0.0
    for model, tag in _models(which, (0.3, mk.AKLT_GROUND_THETA, 1.2), (0.1, 0.5, 0.9)):
        for n in range(1, n_top + 1):
            dist = dp.enumerate_distribution(model, n)
            channel = cs.dephasing_channel(dist)
            worst_cptp = max(worst_cptp, channel.completeness_residual())
            comp = cs.complementary_output(
                channel, cs.maximally_mixed(model.local_dim**n)
            )
            offdiag = mk.max_abs(comp.matrix - np.diag(np.diag(comp.matrix)))
            worst_offdiag = max(worst_offdiag, offdiag)
            worst_two_path = max(
                worst_two_path,
                abs(cs.von_neumann_entropy(comp) - dp.shannon_entropy(dist)),
            )
    out.append(
        _residual_check(
            f"dephasing channels trace preserving, n<=({n_top})", worst_cptp, 1e-10
        )
    )
    out.append(
        _residual_check(
            "complementary output diagonal at maximally mixed input",
            worst_offdiag,
            1e-10,
        )
    )
    out.append(
        _residual_check(
            "environment entropy equals complementary-output entropy",
            worst_two_path,
            1e-9,
        )
    )
    # Dephasing acts trivially on inputs diagonal in the phase basis.
    model = mk.mg_model(0.5)
    dist = dp.enumerate_distribution(model, 2)
    channel = cs.dephasing_channel(dist)
    diag_in = cs.DensityMatrix(np.diag([0.4, 0.3, 0.2, 0.1]).astype(complex))
    moved = cs.apply_channel(channel, diag_in)
    out.append(
        _residual_check(
            "dephasing leaves diagonal inputs unchanged",
            mk.max_abs(moved.matrix - diag_in.matrix),
            1e-12,
        )
    )
    return out


#: The registered sections in execution order.
SECTIONS: tuple[tuple[str, Callable[..., list[CheckResult]]], ...] = (
    ("model structure", check_model_structure),
    ("enumeration", check_enumeration),
    ("closed form", check_closed_form),
    ("capacity", check_capacity),
    ("channel", check_channel),
)


def run_verification(
    which: str = "both",
    n_max: int = 12,
    sections: Iterable[str] | None = None,
) -> list[CheckResult]:
    """Run the requested sections; returns every individual check result."""
    if which not in ("aklt", "mg", "both"):
        raise ValueError(f"unknown model selector {which!r}")
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    wanted = set(sections) if sections is not None else None
    results: list[CheckResult] = []
    for name, runner in SECTIONS:
        if wanted is not None and name not in wanted:
            continue
        results.extend(runner(which, n_max))
    return results
