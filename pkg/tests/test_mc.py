import math

import pytest
from scipy import stats

from bigjump import bounds, dist, mc, regime
from bigjump.dist import TailModel, Variant
from bigjump.events import EventKind, EventParams
from oracles import binomial_se, two_sum_tail


class TestWilson:
    def test_matches_closed_form(self):
        # Wilson interval at 95%: textbook example 8 of 20
        lo, hi = mc.wilson_interval(8, 20, 0.95)
        z = stats.norm.ppf(0.975)
        p = 0.4
        c = (p + z * z / 40) / (1 + z * z / 20)
        h = z / (1 + z * z / 20) * math.sqrt(p * 0.6 / 20 + z * z / 1600)
        assert (lo, hi) == pytest.approx((c - h, c + h), rel=1e-12)

    def test_zero_hits_one_sided(self):
        lo, hi = mc.wilson_interval(0, 1000, 0.99)
        z = stats.norm.ppf(0.99)
        assert lo == 0.0
        assert hi == pytest.approx(z * z / (1000 + z * z), rel=1e-12)

    @pytest.mark.parametrize("hits", [0, 1, 5, 500, 999, 1000])
    def test_contains_estimate(self, hits):
        lo, hi = mc.wilson_interval(hits, 1000)
        assert 0.0 <= lo <= hits / 1000 <= hi <= 1.0

    def test_bad_level(self):
        with pytest.raises(ValueError):
            mc.wilson_interval(1, 10, 1.0)


class TestCrude:
    def test_single_summand_matches_tail(self, cauchy_like):
        N = 10**6
        e = mc.estimate_crude(cauchy_like, EventParams(1, 4.0, 0.5, 0.5), N, 1)
        assert abs(e.value - 0.125) <= 4 * e.stderr
        assert e.method is mc.Method.CRUDE and e.samples == N and e.seed == 1
        assert e.ci_lo <= e.value <= e.ci_hi

    @pytest.mark.parametrize("variant", list(Variant))
    def test_two_summands_matches_quadrature(self, variant):
        m = TailModel(1.0, 1.0, variant)
        truth = two_sum_tail(m, 20.0)
        e = mc.estimate_crude(m, EventParams(2, 20.0, 0.5, 0.5), 10**6, 2)
        assert abs(e.value - truth) <= 4 * e.stderr

    def test_min_samples(self, cauchy_like):
        with pytest.raises(ValueError):
            mc.estimate_crude(cauchy_like, EventParams(1, 4.0, 0.5, 0.5), 999, 1)

    def test_degenerate_zero_hits(self):
        e = mc.estimate_crude(TailModel(1.9), EventParams(1, 1e9, 0.5, 0.5), 1000, 0)
        assert e.value == 0.0 and e.degenerate
        assert e.ci_hi > 0

    def test_x_must_be_positive(self):
        with pytest.raises(ValueError):
            EventParams(2, 0.0, 0.5, 0.5)

    def test_stderr_formula(self, cauchy_like):
        e = mc.estimate_crude(cauchy_like, EventParams(3, 10.0, 0.5, 0.5), 5000, 3)
        p = e.hits / 5000
        assert e.stderr == math.sqrt(p * (1 - p) / 5000)


class TestDecomposition:
    def test_partition_identity(self, cauchy_like):
        p = EventParams(10, 50.0, 0.3, 0.3)
        N = 200_000
        d = mc.estimate_decomposition(cauchy_like, p, N, 9)
        crude = mc.estimate_crude(cauchy_like, p, N, 9)
        assert sum(e.hits for e in d.terms.values()) == d.total.hits == crude.hits
        assert d.term_sum() == d.total.value == crude.value
        assert d.refined.hits <= d[EventKind.ONE_POS_BIG].hits

    def test_one_big_dominates(self, cauchy_like):
        d = mc.estimate_decomposition(cauchy_like, EventParams(10, 100.0, 0.3, 0.3), 200_000, 4)
        assert d[EventKind.ONE_POS_BIG].value / d.total.value > 0.5

    def test_zero_big_share_vanishes(self):
        m = TailModel(1.0)
        shares = []
        for x in (50.0, 100.0, 200.0):
            c, b = regime.default_cb(1.0, 5, x)
            d = mc.estimate_decomposition(m, EventParams(5, x, c, b), 10**6, 5)
            shares.append(d[EventKind.ZERO_BIG].value / d.total.value)
        assert shares[0] > 0
        assert shares[0] >= shares[1] >= shares[2]
        assert shares[2] < 0.01


class TestOneBig:
    def test_single_summand_exact(self, cauchy_like):
        p = EventParams(1, 37.0, 0.4, 0.4)
        e = mc.estimate_one_big(cauchy_like, p, "+", 1000, 1)
        assert e.value == dist.tail(cauchy_like, 37.0)
        assert e.stderr == 0.0

    def test_exchangeability_identity(self):
        # union probability equals n times the first-coordinate probability, checked on plain samples
        m = TailModel(1.0)
        p = EventParams(3, 8.0, 0.3, 0.3)
        N = 10**6
        d = mc.estimate_decomposition(m, p, N, 21)
        cond = mc.estimate_one_big(m, p, "+", N, 22)
        assert abs(d[EventKind.ONE_POS_BIG].value - cond.value) <= 4 * mc.combined_stderr(d[EventKind.ONE_POS_BIG], cond)

    def test_cross_check_moderate(self, cauchy_like):
        p = EventParams(5, 50.0, 0.3, 0.3)
        d = mc.estimate_decomposition(cauchy_like, p, 10**6, 10)
        cond = mc.estimate_one_big(cauchy_like, p, "+", 10**6, 11)
        ref = d[EventKind.ONE_POS_BIG]
        assert abs(cond.value - ref.value) <= 4 * mc.combined_stderr(cond, ref)
        assert cond.stderr < ref.stderr / 5

    def test_negative_negligible(self, cauchy_like):
        p = EventParams(5, 1e3, 0.2, 0.2)
        pos = mc.estimate_one_big(cauchy_like, p, "+", 10**5, 3)
        neg = mc.estimate_one_big(cauchy_like, p, "-", 10**5, 3)
        assert neg.value / pos.value < 0.05

    def test_negative_reachable(self):
        # with (n-1) c > 2 the negative one-big event is possible
        m = TailModel(1.0)
        p = EventParams(6, 10.0, 0.8, 0.5)
        d = mc.estimate_decomposition(m, p, 10**6, 8)
        neg = mc.estimate_one_big(m, p, "-", 10**6, 8)
        ref = d[EventKind.ONE_NEG_BIG]
        assert neg.value > 0
        assert abs(neg.value - ref.value) <= 4 * mc.combined_stderr(neg, ref)

    def test_bad_sign(self, cauchy_like):
        with pytest.raises(ValueError):
            mc.estimate_one_big(cauchy_like, EventParams(2, 10.0, 0.5, 0.5), "0", 1000, 1)


class TestRefined:
    def test_nested_on_same_batch(self, cauchy_like):
        p = EventParams(10, 100.0, 0.3, 0.1)
        pos, ref = mc.estimate_one_big_and_refined(cauchy_like, p, 50_000, 7)
        assert ref.hits <= pos.hits
        assert ref.value <= pos.value
        assert mc.estimate_refined(cauchy_like, p, 50_000, 7) == ref
        assert mc.estimate_one_big(cauchy_like, p, "+", 50_000, 7) == pos

    def test_monotone_in_b(self, cauchy_like):
        vals = [
            mc.estimate_refined(cauchy_like, EventParams(10, 100.0, 0.3, b), 20_000, 7).value
            for b in (0.01, 0.05, 0.1, 0.3, 0.6, 0.99)
        ]
        assert vals == sorted(vals)

    def test_ratio_near_one(self):
        m = TailModel(1.2)
        c, b = regime.default_cb(1.2, 10, 1e3)
        p = EventParams(10, 1e3, c, b)
        ref = mc.estimate_refined(m, p, 10**6, 5)
        d = mc.estimate_decomposition(m, p, 10**6, 5)
        assert 0.85 <= ref.value / d.total.value <= 1.0 + 4 * d.total.stderr / d.total.value


class TestOneMid:
    def test_weight(self, cauchy_like):
        e = mc.estimate_one_mid(cauchy_like, EventParams(10, 100.0, 0.3, 0.3), 1000, 1)
        assert e.weight == pytest.approx(10 * 2 * (1 / 60 - 1 / 200), rel=1e-14)

    def test_cross_check(self, cauchy_like):
        p = EventParams(5, 50.0, 0.3, 0.3)
        d = mc.estimate_decomposition(cauchy_like, p, 10**6, 12)
        mid = mc.estimate_one_mid(cauchy_like, p, 10**6, 13)
        ref = d[EventKind.ONE_MID]
        assert abs(mid.value - ref.value) <= 4 * mc.combined_stderr(mid, ref)

    def test_empty_stratum(self):
        m = TailModel(1.0, 10.0)
        e = mc.estimate_one_mid(m, EventParams(3, 5.0, 0.5, 0.5), 1000, 1)
        assert e.value == 0.0 and e.degenerate

    def test_share_vanishes(self):
        m = TailModel(1.2)
        shares = []
        for p, _ in regime.sequence(1.2, 10, [1e2, 1e3, 1e4]):
            mid = mc.estimate_one_mid(m, p, 200_000, 3)
            pos = mc.estimate_one_big(m, p, "+", 200_000, 3)
            shares.append(mid.value / pos.value)
        assert shares[0] > shares[1] > shares[2]


@pytest.mark.parametrize("alpha", [0.8, 1.0, 1.5])
@pytest.mark.parametrize("n", [2, 5, 10])
def test_conditional_estimators_unbiased(alpha, n):
    m = TailModel(alpha)
    # x with n * tail(x) ~ 2e-2 keeps the total well above 1e-4
    x = float(dist.quantile_tail(m, 0.02 / n))
    p = EventParams(n, x, 0.3, 0.3)
    N = 400_000
    d = mc.estimate_decomposition(m, p, N, 100)
    assert d.total.value >= 1e-4
    pos = mc.estimate_one_big(m, p, "+", N, 101)
    mid = mc.estimate_one_mid(m, p, N, 102)
    neg = mc.estimate_one_big(m, p, "-", N, 103)
    for cond, kind in ((pos, EventKind.ONE_POS_BIG), (mid, EventKind.ONE_MID), (neg, EventKind.ONE_NEG_BIG)):
        ref = d[kind]
        assert abs(cond.value - ref.value) <= 4 * mc.combined_stderr(cond, ref) + 1e-15, kind
    # all terms are below the total
    assert pos.ci_lo <= d.total.ci_hi


@pytest.mark.parametrize("alpha", [0.8, 1.2, 1.5])
@pytest.mark.parametrize("n,x", [(2, 30.0), (5, 100.0), (10, 300.0)])
def test_feller_dominance(alpha, n, x):
    m = TailModel(alpha)
    e = mc.estimate_crude(m, EventParams(n, x, 0.5, 0.5), 200_000, 31)
    assert e.value >= bounds.feller_lower_bound(m, n, x) - 3 * e.stderr


class TestDeterminism:
    @pytest.mark.parametrize("workers", [2, 5])
    def test_workers_do_not_change_results(self, cauchy_like, workers):
        p = EventParams(4, 20.0, 0.3, 0.3)
        N = 300_001  # several chunks plus a remainder
        for fn in (
            lambda w: mc.estimate_crude(cauchy_like, p, N, 77, workers=w),
            lambda w: mc.estimate_decomposition(cauchy_like, p, N, 77, workers=w),
            lambda w: mc.estimate_one_big(cauchy_like, p, "+", N, 77, workers=w),
            lambda w: mc.estimate_one_mid(cauchy_like, p, N, 77, workers=w),
        ):
            assert fn(1) == fn(workers)

    def test_seed_changes_results(self, cauchy_like):
        p = EventParams(4, 20.0, 0.3, 0.3)
        assert mc.estimate_crude(cauchy_like, p, 10**5, 1).hits != mc.estimate_crude(cauchy_like, p, 10**5, 2).hits


def test_relative_error_property(cauchy_like):
    e = mc.estimate_crude(cauchy_like, EventParams(1, 4.0, 0.5, 0.5), 10**4, 1)
    assert e.relative_error == pytest.approx(e.stderr / e.value)
    assert binomial_se(0.125, 10**4) == pytest.approx(e.stderr, rel=0.1)
