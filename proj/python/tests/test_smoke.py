"""Smoke tests for the python bindings."""

import json
import math
import os

import pytest

import epbound as eb


def test_scalar_bounds():
    assert eb.bennett_h(0.0) == 0.0
    assert eb.bennett_h(3.0) == pytest.approx(4.0 * math.log(4.0) - 3.0, abs=1e-14)
    assert eb.psi(0.0) == 1.0
    assert eb.phi(0.0) == 0.0

    p = eb.BoundParams(mean_z=0.0, v_n=1.0)
    assert p.v == 1.0
    assert eb.upper_tail_bound(0.0, p, eb.TailForm.B) == 1.0
    assert eb.upper_tail_bound(1.0, p, eb.TailForm.C_SIMPLE) == pytest.approx(
        math.exp(-0.2), abs=1e-14
    )
    assert eb.lower_tail_bound(1.0, p, eb.TailForm.C_SIMPLE) == pytest.approx(
        math.exp(-0.25), abs=1e-14
    )
    with pytest.raises(ValueError):
        eb.BoundParams(mean_z=-1.0, v_n=1.0)


def test_invert_round_trip():
    p = eb.BoundParams(0.0, 2.0)
    for side in (eb.Side.UPPER, eb.Side.LOWER):
        for form in (eb.TailForm.B, eb.TailForm.C_TIGHT, eb.TailForm.C_SIMPLE):
            for delta in (0.9, 0.3, 1e-4):
                x = eb.invert_tail_bound(delta, p, form, side)
                assert eb.tail_bound(x, p, form, side) == pytest.approx(delta, abs=1e-10)


def test_chernoff_dominance():
    p = eb.BoundParams(0.0, 1.0)
    bound, t_star = eb.chernoff_optimized_tail(1.0, p, eb.Side.UPPER)
    assert t_star > 0
    assert bound <= eb.upper_tail_bound(1.0, p, eb.TailForm.C_TIGHT) + 1e-12


def test_roots_and_integrals():
    t0 = eb.phi_unit_root()
    t1 = eb.bennett_crossing_root()
    assert 0.46 <= t0 <= 0.47
    assert 0.76 <= t1 <= 0.77
    assert t1 > t0
    assert eb.phi_integral(0.2) == pytest.approx(0.23447336465875, abs=1e-10)
    assert eb.kernel_integral(0.2) == pytest.approx(0.014440005798257, abs=1e-10)
    assert eb.lower_log_laplace_refined(0.3, 0.0, 1.0) <= float(
        eb.lower_log_laplace_bound(0.3, eb.BoundParams(0.0, 1.0))
    )


def test_scenario_enumeration():
    s = eb.build_rademacher([[1.0, 1.0]])
    assert s.m == 1 and s.n == 2
    assert eb.validate(s) == []
    assert eb.max_variance(s) == 2.0
    summary = eb.enumerate_exact(s)
    assert summary.mean_z == pytest.approx(0.0, abs=1e-15)
    assert summary.var_z == pytest.approx(2.0, abs=1e-12)
    assert summary.support_size == 3
    assert summary.prob_at_least(2.0) == pytest.approx(0.25, abs=1e-15)

    two = eb.build_rademacher([[1.0, 1.0], [-1.0, -1.0]])
    assert eb.enumerate_exact(two).mean_z == pytest.approx(1.0, abs=1e-12)
    assert eb.talagrand_variance(two) == pytest.approx(2.0, abs=1e-12)


def test_scenario_json_and_file():
    s = eb.scenario_from_json('{"kind": "rademacher", "zeta": [[1, 1], [-1, -1]]}')
    text = eb.scenario_to_json(s)
    again = eb.scenario_from_json(text)
    assert eb.enumerate_exact(again).var_z == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        eb.scenario_from_json('{"kind": "rademacher", "zeta": [[1]], "oops": 1}')

    data_dir = os.environ.get("EPBOUND_DATA")
    if data_dir:
        loaded = eb.load_scenario(os.path.join(data_dir, "two_function_signs.json"))
        assert loaded.m == 2


def test_sampling_determinism():
    s = eb.build_rademacher([[1.0, 1.0], [-1.0, -1.0]])
    draws = [eb.sample_supremum(s, 7, t) for t in range(50)]
    assert draws == [eb.sample_supremum(s, 7, t) for t in range(50)]
    r1 = eb.estimate_stats(s, 5000, 7, [1.0], workers=1)
    r8 = eb.estimate_stats(s, 5000, 7, [1.0], workers=8)
    assert r1.to_json() == r8.to_json()
    assert r1.tails[0].lcb_ge <= r1.tails[0].freq_ge


def test_checks():
    s = eb.build_rademacher([[1.0, 1.0], [-1.0, -1.0]])
    tail = eb.check_tail_bounds(s, [0.0, 0.5, 1.0, 2.0], mode="exact")
    assert tail.passed and not tail.advisory
    parsed = json.loads(tail.to_json())
    assert parsed["pass"] is True

    laplace = eb.check_log_laplace_bounds(s, [0.0, 0.1, 0.5, 1.0])
    assert laplace.passed
    variance = eb.check_variance_bound(s)
    assert variance.passed

    mc = eb.check_tail_bounds(s, [0.0, 1.0], mode="mc", trials=20000, seed=5)
    assert mc.advisory and mc.passed

    roots = eb.check_root_intervals()
    assert roots.passed
    legendre = eb.check_legendre_conjugate([0.0, 1.0, 8.0])
    assert legendre.passed
    entropy = eb.check_entropy_inequality([(1.0, 0.5), (-1.0, 0.5)], [1.0])
    assert entropy.passed
    assert entropy.worst_margin == pytest.approx(
        1.0 - (math.sinh(1.0) - math.cosh(1.0) * math.log(math.cosh(1.0))), abs=1e-12
    )
    suite = eb.scalar_inequality_reports(128)
    assert all(r.passed for r in suite)
    csv = eb.reports_to_csv(suite)
    assert csv.startswith("check_name,domain,worst_margin,pass")
