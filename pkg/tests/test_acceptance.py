"""Acceptance suite: one test per shipped guarantee, each printing a
PASS/FAIL line (run with ``pytest tests/test_acceptance.py -v -s`` to see
them).

The guarantees:

1. the AKLT ground-point capacity is exactly 2/3;
2. the Majumdar-Ghosh ground-point capacity is exactly 1/2;
3. the closed-form AKLT spectrum reproduces full 3^n enumeration
   (values and multiplicities) for n <= 8 across five angles;
4. the closed-form Majumdar-Ghosh spectrum reproduces full 2^n enumeration
   for n = 2..12 across ten couplings;
5. the multiplicity recurrence from the classified n = 4 seed matches the
   closed-form counts up to n = 20, live-string counts match enumeration,
   and the known 15-vs-16 seed undercount is surfaced, not patched over;
6. finite-n capacity estimators converge: the conditional rate at the
   documented lengths and tolerance, and the average rate within 1.5/n on
   the default sweep grids;
7. the entropy of the environment diagonal equals the entropy of the
   complementary-channel output at maximally mixed input (n <= 4), and all
   constructed channels are trace preserving;
8. structural invariants: model conditions, normalization, stationarity.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from bruteforce import brute_distribution, brute_multiset
from mpscap import (
    AKLT_GROUND_THETA,
    MultiplicityTable,
    aklt_capacity,
    aklt_model,
    aklt_spectrum,
    complementary_output,
    dephasing_channel,
    enumerate_distribution,
    entropy_trace,
    expand_families,
    marginal,
    maximally_mixed,
    mg_capacity,
    mg_live_string_count,
    mg_model,
    mg_multiplicity_closed_form,
    mg_multiplicity_recurrence,
    mg_multiplicity_seed,
    mg_spectrum,
    multiset_gap,
    shannon_entropy,
    spectrum_of,
    validate_model,
    von_neumann_entropy,
)
from mpscap.closed_form import _advance
from mpscap.diag_process import compare_distributions

THETA_GRID = (0.0, 0.3, 0.7, AKLT_GROUND_THETA, 1.2)
G_GRID = tuple(round(0.1 * k, 1) for k in range(10))
SWEEP_THETAS = tuple(round(0.1 * k, 1) for k in range(16)) + (AKLT_GROUND_THETA,)
SWEEP_GS = tuple(round(0.05 * k, 2) for k in range(20))


def report(criterion: str, passed: bool, detail: str) -> None:
    print(f"ACCEPTANCE {criterion}: {'PASS' if passed else 'FAIL'} - {detail}")


def test_criterion_1_aklt_headline_capacity():
    gap = abs(aklt_capacity(math.acos(math.sqrt(2 / 3))) - 2 / 3)
    report("1", gap <= 1e-12, f"aklt ground capacity off 2/3 by {gap:.3e}")
    assert gap <= 1e-12


def test_criterion_2_mg_headline_capacity():
    gap = abs(mg_capacity(0.5) - 0.5)
    report("2", gap <= 1e-12, f"mg ground capacity off 1/2 by {gap:.3e}")
    assert gap <= 1e-12


def _family_multiplicities_match(families, brute_values, tol=1e-12) -> bool:
    """Each distinct closed-form value must occur in the brute-force set
    exactly as often as the (possibly merged) family multiplicities say."""
    for fam in families:
        expected = sum(
            other.multiplicity
            for other in families
            if abs(other.value - fam.value) <= tol
        )
        seen = int(np.sum(np.abs(brute_values - fam.value) <= tol))
        if seen != expected:
            return False
    return True


def test_criterion_3_aklt_spectrum_oracle():
    worst = 0.0
    structure_ok = True
    for theta in THETA_GRID:
        model = aklt_model(theta)
        for n in range(1, 9):
            families = aklt_spectrum(n, theta)
            brute = brute_multiset(model, n, floor=1e-300)
            worst = max(worst, multiset_gap(expand_families(families), brute))
            structure_ok &= _family_multiplicities_match(families, brute)
            # Multiplicities are the binomial pattern whenever no family
            # is dropped as zero.
            if 0 < math.sin(theta) ** 2 < 1:
                assert [f.multiplicity for f in families] == [
                    2 * math.comb(n, p) for p in range(n)
                ] + [1]
    passed = worst <= 1e-12 and structure_ok
    report(
        "3",
        passed,
        f"aklt spectrum vs 3^n enumeration: worst gap {worst:.3e}, "
        f"multiplicities {'match' if structure_ok else 'MISMATCH'}",
    )
    assert worst <= 1e-12
    assert structure_ok


def test_criterion_4_mg_spectrum_oracle():
    worst = 0.0
    structure_ok = True
    for g in G_GRID:
        model = mg_model(g)
        for n in range(2, 13):
            families = mg_spectrum(n, g)
            brute = brute_multiset(model, n, floor=1e-300)
            worst = max(worst, multiset_gap(expand_families(families), brute))
            structure_ok &= _family_multiplicities_match(families, brute)
    passed = worst <= 1e-12 and structure_ok
    report(
        "4",
        passed,
        f"mg spectrum vs 2^n enumeration: worst gap {worst:.3e}, "
        f"multiplicities {'match' if structure_ok else 'MISMATCH'}",
    )
    assert worst <= 1e-12
    assert structure_ok


def test_criterion_5_multiplicity_recurrence():
    seed = mg_multiplicity_seed()
    # The undercounted variant of the seed (e(1) = 1, fifteen strings) is
    # reported and shown to diverge, not silently patched.
    undercount = MultiplicityTable(
        n=4, z=6, b=1, d=1, f=1, h=1, c=(2,), e=(1,), g=(2,)
    )
    assert undercount.total == 15
    drifted = _advance(undercount)
    diverges = drifted.c != mg_multiplicity_closed_form(5).c
    tables = mg_multiplicity_recurrence(20)
    recurrence_ok = all(
        table == mg_multiplicity_closed_form(table.n)
        for table in tables
        if table.n >= 5
    )
    live_ok = all(
        len(enumerate_distribution(mg_model(g), n)) == mg_live_string_count(n)
        for g in (0.25, 0.5, 0.75)
        for n in range(2, 13)
    )
    passed = seed.total == 16 and diverges and recurrence_ok and live_ok
    report(
        "5",
        passed,
        f"seed classifies {seed.total}/16 strings with e(1) = {seed.e[0]} "
        "(a 15-string undercount with e(1) = 1 drifts from the closed form "
        f"at n = 5: {'yes' if diverges else 'no'}); recurrence matches closed "
        f"form for n = 5..20: {recurrence_ok}; live counts match: {live_ok}",
    )
    assert seed.total == 16
    assert seed.e == (2,)
    assert diverges
    assert recurrence_ok
    assert live_ok


def test_criterion_6_aklt_conditional_rate_at_n12():
    trace = entropy_trace(aklt_model(AKLT_GROUND_THETA), 12)
    gap = abs((math.log2(3) - trace.rate(12, "cond")) - 2 / 3)
    report("6 (aklt cond n=12)", gap <= 1e-5, f"gap {gap:.3e} vs 1e-5")
    assert gap <= 1e-5


def test_criterion_6_mg_conditional_rate_at_n20():
    trace = entropy_trace(mg_model(0.5), 20)
    gap = abs((1.0 - trace.rate(20, "cond")) - 0.5)
    report("6 (mg cond n=20)", gap <= 1e-5, f"gap {gap:.3e} vs 1e-5")
    # The conditional estimator's finite-size wobble for this chain decays
    # per pair of sites, as 2^(-n/2); at n = 20 it stands at about 6.1e-4.
    assert gap <= 1e-5, (
        f"conditional-rate gap at n=20 is {gap:.3e}; the estimator "
        "oscillation decays as 2^(-n/2), so 1e-5 is first reached "
        "near n = 33 (see the companion convergence test)"
    )


def test_criterion_6_mg_conditional_rate_converges_at_longer_strings():
    trace = entropy_trace(mg_model(0.5), 33)
    gap = abs((1.0 - trace.rate(33, "cond")) - 0.5)
    report("6 (mg cond n=33)", gap <= 1e-5, f"gap {gap:.3e} vs 1e-5")
    assert gap <= 1e-5


def test_criterion_6_average_rate_bound_on_sweep_grids():
    worst_ratio = 0.0
    for theta in SWEEP_THETAS:
        trace = entropy_trace(aklt_model(theta), 14)
        gap = abs(math.log2(3) - trace.rate(14, "avg") - aklt_capacity(theta))
        worst_ratio = max(worst_ratio, gap / (1.5 / 14))
    for g in SWEEP_GS:
        trace = entropy_trace(mg_model(g), 20)
        gap = abs(1.0 - trace.rate(20, "avg") - mg_capacity(g))
        worst_ratio = max(worst_ratio, gap / (1.5 / 20))
    report(
        "6 (avg rate, grids)",
        worst_ratio <= 1.0,
        f"worst |log2 d - H_n/n - closed| is {worst_ratio:.4f} of 1.5/n",
    )
    assert worst_ratio <= 1.0


def test_criterion_7_two_path_entropy_check():
    worst_entropy = 0.0
    worst_cptp = 0.0
    for model in [aklt_model(t) for t in THETA_GRID] + [mg_model(g) for g in G_GRID]:
        for n in range(1, 5):
            dist = enumerate_distribution(model, n)
            channel = dephasing_channel(dist)
            worst_cptp = max(worst_cptp, channel.completeness_residual())
            comp = complementary_output(
                channel, maximally_mixed(model.local_dim**n)
            )
            worst_entropy = max(
                worst_entropy,
                abs(von_neumann_entropy(comp) - shannon_entropy(dist)),
            )
    passed = worst_entropy <= 1e-9 and worst_cptp <= 1e-10
    report(
        "7",
        passed,
        f"two-path entropy residual {worst_entropy:.3e} (tol 1e-9), "
        f"trace preservation residual {worst_cptp:.3e} (tol 1e-10)",
    )
    assert worst_entropy <= 1e-9
    assert worst_cptp <= 1e-10


def test_criterion_8_structural_invariants():
    worst_model = 0.0
    for model in [aklt_model(t) for t in THETA_GRID] + [mg_model(g) for g in G_GRID]:
        worst_model = max(worst_model, validate_model(model).max_residual)
    worst_norm = 0.0
    for model in (aklt_model(0.7), aklt_model(AKLT_GROUND_THETA), mg_model(0.5)):
        dist = enumerate_distribution(model, 12)
        worst_norm = max(worst_norm, abs(dist.total() - 1.0))
    worst_marginal = 0.0
    for model in (aklt_model(0.3), mg_model(0.8)):
        base = enumerate_distribution(model, 8).as_dict()
        longer = enumerate_distribution(model, 9)
        worst_marginal = max(
            worst_marginal,
            compare_distributions(marginal(longer, "first"), base),
            compare_distributions(marginal(longer, "last"), base),
        )
    passed = worst_model < 1e-12 and worst_norm <= 1e-10 and worst_marginal <= 1e-10
    report(
        "8",
        passed,
        f"model residual {worst_model:.3e} (tol 1e-12), normalization "
        f"{worst_norm:.3e} (tol 1e-10), stationarity {worst_marginal:.3e} "
        "(tol 1e-10)",
    )
    assert worst_model < 1e-12
    assert worst_norm <= 1e-10
    assert worst_marginal <= 1e-10


def test_enumerated_spectrum_agrees_with_closed_form_grouping():
    # Spot check that the numeric grouping of the enumerated distribution
    # reproduces the merged closed-form spectrum at a degenerate point.
    dist = enumerate_distribution(aklt_model(AKLT_GROUND_THETA), 2)
    grouped = spectrum_of(dist)
    assert grouped.values() == pytest.approx([2 / 9, 1 / 9], abs=1e-12)
    assert list(grouped.multiplicities()) == [2, 5]
