"""Bound evaluators: closed-form constants, a high-precision dual
implementation, catalog transcription checks, and crossover location."""

import math

import mpmath as mp
import numpy as np
import pytest

from pvbounds.bounds import (
    CrossoverNotFound,
    EULER_GAMMA,
    bound_names,
    c0,
    catalog_bounds,
    crossover,
    evaluate_bound,
    margin_report,
    pomerance_bound,
    psi1,
    psi2,
    theorem1_bound,
)
from pvbounds.charsums import CharSumResult

mp.mp.dps = 50


def mp_theorem1(q: int, parity: str) -> float:
    """Independent re-implementation at 50 digits (dual-route oracle)."""
    qm = mp.mpf(q)
    rq = mp.sqrt(qm)
    c = 4 * mp.pi ** mp.mpf("2.5") + 5
    if parity == "even":
        main = 2 / mp.pi**2 * rq * mp.log(qm)
        second = 4 / mp.pi**2 * rq * (1 + mp.euler + mp.log(c))
        psi = 1 + 24 / (mp.pi**2 * c) + 8 / mp.pi**2 * rq / mp.expm1(2 * rq / c)
    else:
        main = rq * mp.log(qm) / (2 * mp.pi)
        second = rq / mp.pi * (1 + mp.euler + mp.log(2 * c / mp.pi))
        psi = 1 + 3 / c + 2 / mp.pi * rq / mp.expm1(mp.pi * rq / c)
    return float(main + second + psi)


def mp_pomerance(q: int, parity: str) -> float:
    qm = mp.mpf(q)
    rq = mp.sqrt(qm)
    if parity == "even":
        return float(
            2 / mp.pi**2 * rq * mp.log(qm)
            + 4 / mp.pi**2 * rq * mp.log(mp.log(qm))
            + mp.mpf(3) / 2 * rq
        )
    return float(
        rq * mp.log(qm) / (2 * mp.pi) + rq * mp.log(mp.log(qm)) / mp.pi + rq
    )


# ---------------------------------------------------------------------------
# constants


def test_c0_value():
    assert abs(c0() - 74.9736733) < 1e-6


def test_c0_over_2pi2_consistency():
    lhs = c0() / (2 * math.pi**2)
    rhs = 2 * math.sqrt(math.pi) + 5 / (2 * math.pi**2)
    assert abs(lhs - rhs) < 1e-14
    assert abs(lhs - 3.7982107) < 1e-6


def test_euler_gamma_against_mpmath():
    assert abs(EULER_GAMMA - float(mp.euler)) < 1e-16


# ---------------------------------------------------------------------------
# theorem1


def test_psi1_limit_at_huge_q():
    # the exponential term is below 1e-100 by q = 1e8
    assert abs(psi1(10**8) - (1 + 24 / (math.pi**2 * c0()))) < 1e-15


def test_psi_no_overflow_and_clamp():
    for q in (10**6, 10**10, 10**14):
        assert 1.0 < psi1(q) < 1.3
        assert 1.0 < psi2(q) < 1.1


@pytest.mark.parametrize("q", [3, 17, 100, 18000, 10**4, 10**6, 10**8])
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_theorem1_dual_implementation(q, parity):
    mine = theorem1_bound(q, parity).value
    oracle = mp_theorem1(q, parity)
    assert abs(mine - oracle) / oracle < 1e-10


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_theorem1_rejects_small_q(parity):
    with pytest.raises(ValueError):
        theorem1_bound(2, parity)


def test_theorem1_rejects_bad_parity():
    with pytest.raises(ValueError):
        theorem1_bound(10, "both")


def test_psi_decreasing_from_9():
    qs = np.arange(9, 20000)
    p1 = np.array([psi1(int(q)) for q in qs])
    p2 = np.array([psi2(int(q)) for q in qs])
    assert np.all(np.diff(p1) < 0)
    assert np.all(np.diff(p2) < 0)


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_bound_monotone_on_grid(parity):
    qs = np.unique(np.geomspace(3, 10**7, 400).astype(int))
    vals = [theorem1_bound(int(q), parity).value for q in qs]
    assert all(b > a for a, b in zip(vals, vals[1:]))
    vals_p = [pomerance_bound(int(q), parity).value for q in qs]
    assert all(b > a for a, b in zip(vals_p, vals_p[1:]))


# ---------------------------------------------------------------------------
# pomerance


@pytest.mark.parametrize("q", [3, 16, 100, 10**6])
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_pomerance_dual_implementation(q, parity):
    mine = pomerance_bound(q, parity).value
    oracle = mp_pomerance(q, parity)
    assert abs(mine - oracle) / oracle < 1e-10


def test_pomerance_at_16_loglog_positive():
    assert abs(math.log(math.log(16)) - 1.0197814) < 1e-6
    bv = pomerance_bound(16, "even")
    assert bv.second_term > 0


def test_pomerance_domain_edge_q3():
    assert pomerance_bound(3, "even").value > 0
    with pytest.raises(ValueError):
        pomerance_bound(2, "even")


def test_pomerance_above_theorem1_at_1e6():
    for parity in ("even", "odd"):
        assert pomerance_bound(10**6, parity).value > theorem1_bound(10**6, parity).value


# ---------------------------------------------------------------------------
# catalog


def test_dobrowolski_williams_at_100():
    bv = evaluate_bound("dobrowolski_williams", 100, "even")
    expected = 10 * math.log(100) / (2 * math.log(2)) + 30
    assert abs(bv.value - expected) < 1e-12
    assert abs(bv.value - 63.2192809) < 1e-6


def test_bachman_rachakonda_coefficient_comparison():
    assert abs(1 / (3 * math.log(3)) - 0.30341307) < 1e-7
    assert 1 / (3 * math.log(3)) < 1 / (2 * math.log(2))


def test_catalog_labels_and_flags():
    rows = {bv.name: bv for bv in catalog_bounds(1000, "even")}
    assert set(rows) == set(bound_names())
    assert rows["qiu"].as_printed is True
    assert rows["simalarides"].quantity == "T"
    assert rows["simalarides"].as_printed is True  # constant term lacks sqrt(q)
    assert rows["theorem1"].quantity == "S"
    odd = {bv.name: bv for bv in catalog_bounds(1000, "odd")}
    assert odd["simalarides"].as_printed is False
    assert odd["simalarides"].quantity == "T"


def test_qiu_terms_as_printed():
    bv = evaluate_bound("qiu", 400, "even")
    rq = 20.0
    expected = (
        4 / math.pi**2 * rq * math.log(400) + 0.38 * rq + 0.608 / rq + 0.116 * rq
    )
    assert abs(bv.value - expected) < 1e-12
    assert len(bv.terms) == 4


@pytest.mark.parametrize("name", bound_names())
@pytest.mark.parametrize("q", [3, 10, 1000, 10**6])
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_breakdown_sums_to_value(name, q, parity):
    bv = evaluate_bound(name, q, parity)
    total = bv.main_term + bv.second_term + bv.psi_term
    assert abs(total - bv.value) <= 1e-12 * abs(bv.value)
    term_sum = sum(v for _, v in bv.terms)
    assert abs(term_sum - bv.value) <= 1e-12 * abs(bv.value)


def test_unknown_bound_name():
    with pytest.raises(KeyError):
        evaluate_bound("landau", 100, "even")


@pytest.mark.parametrize("name", bound_names())
@pytest.mark.parametrize("parity", ["even", "odd"])
def test_catalog_monotone_on_grid(name, parity):
    qs = np.unique(np.geomspace(3, 10**7, 300).astype(int))
    vals = [evaluate_bound(name, int(q), parity).value for q in qs]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_catalog_dominates_exact_sums_small_range():
    # every catalog entry sits above the exact quantity it bounds
    from pvbounds.characters import enumerate_characters
    from pvbounds.charsums import char_sum_result

    for q in range(3, 301):
        cache = {}
        for chi in enumerate_characters(q):
            if not chi.is_primitive:
                continue
            res = char_sum_result(chi)
            for name in bound_names():
                key = (name, chi.parity)
                if key not in cache:
                    cache[key] = evaluate_bound(name, q, chi.parity)
                bv = cache[key]
                exact = res.s_chi if bv.quantity == "S" else res.t_chi
                assert bv.value > exact, (q, chi.label, name)


# ---------------------------------------------------------------------------
# crossover


def test_crossover_even_below_18000():
    qstar = crossover("even")
    assert qstar <= 18000
    assert qstar == 17011  # frozen from the first verified run
    assert theorem1_bound(qstar, "even").value < pomerance_bound(qstar, "even").value
    assert theorem1_bound(qstar - 1, "even").value >= pomerance_bound(qstar - 1, "even").value


def test_crossover_odd_below_28000():
    qstar = crossover("odd")
    assert qstar <= 28000
    assert qstar == 27087  # frozen from the first verified run
    assert theorem1_bound(qstar, "odd").value < pomerance_bound(qstar, "odd").value
    assert theorem1_bound(qstar - 1, "odd").value >= pomerance_bound(qstar - 1, "odd").value


def test_crossover_not_found_raises():
    with pytest.raises(CrossoverNotFound):
        crossover("even", limit=1000)


@pytest.mark.parametrize("parity", ["even", "odd"])
def test_log_grid_negative_beyond_crossover(parity):
    qstar = crossover(parity)
    grid = np.unique(np.geomspace(qstar, 10**7, 300).astype(int))
    for q in grid:
        assert theorem1_bound(int(q), parity).value < pomerance_bound(int(q), parity).value


# ---------------------------------------------------------------------------
# margins


def _result(q, label, parity, s, t):
    return CharSumResult(
        q=q, label=label, parity=parity, conductor=q, s_chi=s, t_chi=t,
        s_witness=(1, 1), t_witness=1, parity_consistent=None,
    )


def test_margin_report_q5_even_quadratic():
    rows = margin_report(5, [_result(5, (2,), "even", 2.0, 1.0)])
    by_name = {r.bound_name: r for r in rows}
    assert by_name["theorem1"].margin == theorem1_bound(5, "even").value - 2.0
    assert by_name["theorem1"].margin > 0
    assert not by_name["theorem1"].violation
    assert abs(by_name["theorem1"].ratio - 2.0 / (math.sqrt(5) * math.log(5))) < 1e-15


def test_margin_report_q3_odd_pomerance():
    rows = margin_report(3, [_result(3, (1,), "odd", 1.0, 1.0)], names=("pomerance",))
    expected = (
        math.sqrt(3) * math.log(3) / (2 * math.pi)
        + math.sqrt(3) * math.log(math.log(3)) / math.pi
        + math.sqrt(3)
        - 1.0
    )
    assert abs(rows[0].margin - expected) < 1e-12
    assert rows[0].margin > 0


def test_margin_report_empty():
    assert margin_report(7, []) == []


def test_margin_report_flags_negative():
    rows = margin_report(5, [_result(5, (2,), "even", 1e9, 1.0)])
    assert all(r.violation for r in rows if r.quantity == "S")


def test_margin_report_t_bounds_compare_against_t():
    rows = margin_report(5, [_result(5, (2,), "even", 2.0, 1.0)], names=("simalarides",))
    assert rows[0].quantity == "T"
    assert rows[0].exact_value == 1.0
