import json

import pytest

from besselint.bounds import BoundId, Direction, Point
from besselint.errors import InvalidDomain, NotFound
from besselint.verifier import (
    CheckReport,
    Grid,
    Verdict,
    check_point,
    default_grid,
    find_crossover,
    logspace,
    relative_error_table,
    sweep,
    tightness_scan,
)


class TestCheckPoint:
    def test_main_holds(self):
        r = check_point(BoundId.MAIN, Point(nu=-0.25, gamma=0.5, x=10.0))
        assert r.verdict is Verdict.HOLDS
        assert r.rel_margin > 0

    def test_prop1_exploratory_violated_at_large_x(self):
        r = check_point(BoundId.PROP1, Point(nu=0.0, mu=0.0, gamma=0.0, x=100.0),
                        exploratory=True)
        assert r.verdict is Verdict.VIOLATED
        assert r.rel_margin < -r.uncertainty

    def test_equality_point_is_inconclusive(self):
        r = check_point(BoundId.NEW1, Point(nu=1.0, n=-1.0, gamma=0.0, x=3.0))
        assert r.verdict is Verdict.INCONCLUSIVE
        assert abs(r.rel_margin) <= r.uncertainty

    def test_out_of_domain_raises_with_hypothesis(self):
        with pytest.raises(InvalidDomain, match="mu >= nu >= 1/2"):
            check_point(BoundId.PROP1, Point(nu=0.0, mu=0.0, gamma=0.0, x=100.0))

    def test_report_round_trips_through_json(self):
        r = check_point(BoundId.MAIN, Point(nu=0.0, gamma=0.3, x=2.0))
        encoded = json.dumps(r.to_dict())
        back = CheckReport.from_dict(json.loads(encoded))
        assert back == r


class TestSweep:
    def test_empty_grid(self):
        g = Grid(nu_values=(), gamma_values=(), x_values=())
        res = sweep([BoundId.MAIN], g)
        assert res.reports == [] and res.skipped == []
        assert res.counts == {"holds": 0, "violated": 0, "inconclusive": 0}

    def test_out_of_domain_point_recorded(self):
        g = Grid(nu_values=(-0.75, 1.0), gamma_values=(0.0,), x_values=(2.0,))
        res = sweep([BoundId.MAIN], g)
        assert len(res.reports) == 1
        assert len(res.skipped) == 1
        assert "nu > -0.5" in res.skipped[0].reason

    def test_small_grid_all_hold(self):
        g = Grid(nu_values=(0.0, 1.0), gamma_values=(0.0, 0.5),
                 x_values=(0.5, 5.0, 40.0), n_values=(0.0, 1.0),
                 mu_values=(0.5, 1.0))
        res = sweep(list(BoundId), g, tol=1e-10)
        assert res.counts["violated"] == 0
        # inconclusive only at the LOWER1 gamma=0 equality regime
        for r in res.reports:
            if r.verdict is Verdict.INCONCLUSIVE:
                assert r.direction is Direction.EQUALITY

    def test_deterministic_output(self):
        g = Grid(nu_values=(0.0, 2.5), gamma_values=(0.0, 0.9),
                 x_values=(1.0, 10.0))
        a = sweep([BoundId.MAIN, BoundId.LOWER3, BoundId.NEED2], g)
        b = sweep([BoundId.NEED2, BoundId.LOWER3, BoundId.MAIN], g)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_threads_do_not_change_results(self):
        g = Grid(nu_values=(0.0, 1.0), gamma_values=(0.0, 0.5),
                 x_values=(1.0, 20.0))
        a = sweep([BoundId.MAIN, BoundId.LOWER4], g, threads=None)
        b = sweep([BoundId.MAIN, BoundId.LOWER4], g, threads=4)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())


class TestTables:
    def test_spec_spot_values(self):
        t = relative_error_table(BoundId.TWOSIDED_L, [0.0, -0.25], [5.0, 10.0])
        assert t.entries[0][0] == pytest.approx(0.0528, abs=1e-12)
        assert t.entries[1][1] == pytest.approx(0.3593, abs=1e-12)
        t = relative_error_table(BoundId.TWOSIDED_U, [1.0], [10.0])
        assert t.entries[0][0] == pytest.approx(0.0464, abs=1e-12)

    def test_entries_rounded_to_four_places(self):
        t = relative_error_table(BoundId.TWOSIDED_U, [0.0], [1.0, 5.0])
        for v in t.entries[0]:
            assert v == pytest.approx(round(v, 4), abs=1e-12)

    def test_rejects_other_bounds(self):
        with pytest.raises(InvalidDomain):
            relative_error_table(BoundId.MAIN, [0.0], [1.0])


class TestTightness:
    def test_new1_tight_at_zero_for_gamma_zero(self):
        r = tightness_scan(BoundId.NEW1, Point(nu=1.0, n=0.0, gamma=0.0),
                           [0.01, 0.1])
        assert abs(r[0] - 1.0) < abs(r[1] - 1.0)
        assert abs(r[0] - 1.0) < 1e-4

    def test_lower2_increases_toward_one(self):
        r = tightness_scan(BoundId.LOWER2, Point(nu=1.0, gamma=0.5),
                           [50.0, 100.0, 200.0, 400.0])
        assert all(a < b for a, b in zip(r, r[1:]))
        assert all(v < 1.0 for v in r)
        assert abs(r[-1] - 1.0) < 0.05

    def test_lower4_tight_at_zero(self):
        # the gap closes linearly in x when gamma > 0 (like gamma x/(2nu+2))
        r = tightness_scan(BoundId.LOWER4, Point(nu=0.0, n=0.0, gamma=0.5),
                           [1.0, 0.1, 0.01, 0.001])
        assert abs(r[-1] - 1.0) < abs(r[0] - 1.0)
        assert abs(r[-1] - 1.0) < 1e-3

    def test_domain_enforced_for_every_x(self):
        with pytest.raises(InvalidDomain):
            tightness_scan(BoundId.TWOSIDED_U, Point(nu=1.0, n=0.0, gamma=0.5),
                           [1.0, 2.0])


class TestCrossover:
    def test_exists_for_small_mu(self):
        xs = find_crossover(0.0, 0.0, 0.0)
        assert xs is not None and 0.1 < xs < 500.0

    def test_none_in_safe_region(self):
        assert find_crossover(1.0, 1.0, 0.3) is None

    def test_not_found_reports_range(self):
        with pytest.raises(NotFound, match="0.5"):
            find_crossover(0.0, 0.0, 0.0, x_max=0.5)

    def test_borderline_mu_returns_or_raises(self):
        try:
            xs = find_crossover(0.4, 0.4, 0.0, x_max=500.0)
            assert xs is None or xs > 0
        except NotFound as exc:
            assert "500" in str(exc)

    def test_domain(self):
        with pytest.raises(InvalidDomain):
            find_crossover(-0.6, -0.6, 0.0)
        with pytest.raises(InvalidDomain):
            find_crossover(0.0, 0.0, 1.0)


def test_logspace_endpoints():
    xs = logspace(1e-3, 200.0, 24)
    assert len(xs) == 24
    assert xs[0] == pytest.approx(1e-3, rel=1e-12)
    assert xs[-1] == pytest.approx(200.0, rel=1e-12)
    assert all(a < b for a, b in zip(xs, xs[1:]))


def test_default_grid_shape():
    g = default_grid()
    assert len(g.nu_values) == 9
    assert len(g.gamma_values) == 7
    assert len(g.x_values) == 24
    assert len(g.n_values) == 4
    assert len(g.mu_values) == 5
