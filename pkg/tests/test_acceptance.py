"""Acceptance suite: one test per primary criterion, each printing a
pass/fail line (run with ``pytest tests/test_acceptance.py -v -s``)."""

import math
from contextlib import contextmanager
from fractions import Fraction

import numpy as np
import pytest

import regret_forge as rf
from es_reference import ReferenceSampler
from regret_forge.games.model import P1, P2
from regret_forge.minimizers import DiscountSchedule, nh_scale
from regret_forge.cfr import PRESETS


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[ACCEPTANCE] {name}: FAIL")
        raise
    print(f"[ACCEPTANCE] {name}: PASS")


def pow2_checkpoints(records, lo=1, hi=None):
    out = [r for r in records if (r.iteration & (r.iteration - 1)) == 0]
    out = [r for r in out if r.iteration >= lo]
    if hi is not None:
        out = [r for r in out if r.iteration <= hi]
    return out


# ---------------------------------------------------------------------------
# shared heavy runs


@pytest.fixture(scope="module")
def matrix_runs(matrix22):
    out = {}
    for preset in ("cfr+", "dcfr"):
        run = rf.CfrRun(matrix22, rf.preset_config(preset, iterations=100_000))
        run.run()
        out[preset] = run.records
    return out


@pytest.fixture(scope="module")
def goofspiel_runs(goofspiel, goofspiel_flat):
    out = {}
    for preset in ("cfr+", "dcfr"):
        run = rf.CfrRun(goofspiel, rf.preset_config(preset, iterations=8192),
                        flat=goofspiel_flat)
        run.run()
        out[preset] = run.records
    return out


# ---------------------------------------------------------------------------
# 1. bandit reproduction


def test_c01_bandit_pure_switch_iterations():
    with criterion("bandit pure-switch iterations (471,407 and 970 +-2)"):
        game = rf.build_bandit([0.0, 1.0, -1_000_000.0])
        plus = rf.CfrRun(game, rf.preset_config(
            "cfr+", iterations=480_000, evaluate=False, track_pure_switch=True))
        plus.run()
        assert plus.pure_switch_iteration is not None
        assert abs(plus.pure_switch_iteration - 471_407) <= 2

        lin = rf.CfrRun(game, rf.preset_config(
            "lcfr", iterations=1_500, evaluate=False, track_pure_switch=True))
        lin.run()
        assert lin.pure_switch_iteration is not None
        assert abs(lin.pure_switch_iteration - 970) <= 2


# ---------------------------------------------------------------------------
# 2. first-iteration bandit regrets, exact


def test_c02_bandit_first_iteration_regrets_exact():
    with criterion("bandit first-iteration regrets exact (333333, 333334, 0)"):
        payoffs = [Fraction(0), Fraction(1), Fraction(-1_000_000)]
        value = sum(payoffs) / 3
        exact = [u - value for u in payoffs]
        # exact arithmetic: the first-iteration regrets are integers
        assert exact == [Fraction(333333), Fraction(333334), Fraction(-666667)]
        assert [max(r, 0) for r in exact] == [333333, 333334, 0]

        game = rf.build_bandit([0.0, 1.0, -1_000_000.0])
        run = rf.CfrRun(game, rf.preset_config("cfr+", iterations=1,
                                               evaluate=False))
        run.iterate()
        np.testing.assert_allclose(run.tables.regret, [333333.0, 333334.0, 0.0],
                                   rtol=0, atol=1e-6)
        raw = rf.CfrRun(game, rf.preset_config("cfr", iterations=1,
                                               evaluate=False))
        raw.iterate()
        np.testing.assert_allclose(raw.tables.regret,
                                   [333333.0, 333334.0, -666667.0],
                                   rtol=0, atol=1e-6)


# ---------------------------------------------------------------------------
# 3. equivalence suite


def test_c03_discount_equivalences(kuhn, kuhn_flat, matrix22):
    with criterion("DCFR(1,1,1) == LCFR and DCFR(inf,-inf,2) == CFR+ "
                   "(1,000 iterations, 1e-9)"):
        pairs = (
            ("lcfr", rf.SolveConfig(minimizer="rm",
                                    schedule=DiscountSchedule(1.0, 1.0, 1.0),
                                    iterations=1000, evaluate=False)),
            ("cfr+", rf.SolveConfig(minimizer="rm",
                                    schedule=DiscountSchedule(
                                        math.inf, -math.inf, 2.0),
                                    iterations=1000, evaluate=False)),
        )
        for game, flat in ((kuhn, kuhn_flat), (matrix22, None)):
            for preset_name, explicit in pairs:
                preset = rf.preset_config(preset_name, iterations=1000,
                                          evaluate=False)
                iterates = {}
                for tag, config in (("preset", preset), ("explicit", explicit)):
                    grabbed = []
                    run = rf.CfrRun(game, config, flat=flat)
                    run.run(on_iteration=lambda r: grabbed.append(
                        r.current_strategies()))
                    iterates[tag] = grabbed
                diffs = [float(np.max(np.abs(a - b))) for a, b in
                         zip(iterates["preset"], iterates["explicit"])]
                assert max(diffs) <= 1e-9


# ---------------------------------------------------------------------------
# 4. slower-than-1/T matrix behavior


def test_c04_matrix_slope_and_dcfr_advantage(matrix_runs):
    with criterion("2x2 matrix: CFR+ log-log slope > -1 on [1e3, 1e5]; "
                   "DCFR final below CFR+"):
        pts = [(r.iteration, r.exploit_avg) for r in matrix_runs["cfr+"]
               if 1_000 <= r.iteration <= 100_000 and r.exploit_avg > 0]
        assert len(pts) >= 5
        slope = np.polyfit(np.log([p[0] for p in pts]),
                           np.log([p[1] for p in pts]), 1)[0]
        assert slope > -1.0
        assert matrix_runs["dcfr"][-1].exploit_avg < \
            matrix_runs["cfr+"][-1].exploit_avg


# ---------------------------------------------------------------------------
# 5. bound suite


def test_c05a_rm_per_infoset_regret_bound(kuhn, kuhn_flat):
    # The guarantee applies to the accumulation regret matching actually
    # plays on: the counterfactual-reach-weighted regrets, whose
    # per-iteration range is at most delta.  (The pi-normalized shadow sums
    # regrets the strategy never saw at full weight and provably escapes
    # this bound; see the decisions ledger.)
    with criterion("RM per-infoset regret <= delta sqrt(|A|) sqrt(T) "
                   "(simultaneous, T <= 4096)"):
        delta = kuhn.delta
        f = kuhn_flat
        checkpoints = {1 << k for k in range(13)}
        failures = []

        def check(run):
            if run.t not in checkpoints:
                return
            for i in range(f.n_isets):
                s = int(f.iset_start[i])
                n = int(f.iset_size[i])
                top = float(np.max(run.tables.regret[s:s + n]))
                bound = delta * math.sqrt(n) * math.sqrt(run.t)
                if top > bound + 1e-9:
                    failures.append((run.t, f.iset_keys[i], top, bound))

        cfg = rf.preset_config("cfr", iterations=4096, evaluate=False,
                               update_mode="simultaneous")
        rf.CfrRun(kuhn, cfg, flat=f).run(on_iteration=check)
        assert failures == []


def test_c05b_regret_floors(kuhn, kuhn_flat):
    with criterion("regret floors: beta=0 above -2*delta; "
                   "beta=1/2 above -delta*sqrt(T)"):
        delta = kuhn.delta
        mins_zero = []
        mins_half = []

        cfg = rf.preset_config("dcfr", iterations=4096, evaluate=False)
        rf.CfrRun(kuhn, cfg, flat=kuhn_flat).run(
            on_iteration=lambda r: mins_zero.append(
                float(r.tables.regret.min())))
        assert all(m > -2.0 * delta for m in mins_zero)

        cfg = rf.preset_config("dcfr-prune", iterations=4096, evaluate=False)
        rf.CfrRun(kuhn, cfg, flat=kuhn_flat).run(
            on_iteration=lambda r: mins_half.append(
                (r.t, float(r.tables.regret.min()))))
        assert all(m >= -delta * math.sqrt(t) - 1e-9 for t, m in mins_half)


def test_c05c_dcfr_exploitability_bounds(kuhn, kuhn_flat):
    with criterion("DCFR exploitability under the 6-delta and 9-delta "
                   "closed-form bounds at every checkpoint"):
        index = rf.enumerate_infosets(kuhn)
        delta = kuhn.delta
        n_infosets = index.total_infosets
        max_a = index.max_actions

        cfg = rf.preset_config("dcfr", iterations=4096,
                               update_mode="simultaneous")
        _, records = rf.CfrRun(kuhn, cfg, flat=kuhn_flat).run()
        for r in records:
            bound = 6 * delta * n_infosets * \
                (math.sqrt(max_a) + 1 / math.sqrt(r.iteration)) / \
                math.sqrt(r.iteration)
            assert r.exploit_avg <= bound + 1e-9

        cfg = rf.preset_config("dcfr-prune", iterations=4096,
                               update_mode="simultaneous")
        _, records = rf.CfrRun(kuhn, cfg, flat=kuhn_flat).run()
        for r in records:
            bound = 9 * delta * n_infosets * math.sqrt(max_a) / \
                math.sqrt(r.iteration)
            assert r.exploit_avg <= bound + 1e-9


def test_c05d_regret_like_dominates_regret(kuhn, kuhn_flat):
    with criterion("regret-like value Q >= true regret R at every iteration"):
        bad = []

        def check(run):
            if not np.all(run.tables.regret >= run.tables.raw_regret):
                bad.append(run.t)

        cfg = rf.preset_config("cfr+", iterations=4096, evaluate=False,
                               update_mode="simultaneous",
                               track_raw_regret=True)
        rf.CfrRun(kuhn, cfg, flat=kuhn_flat).run(on_iteration=check)
        assert bad == []


# ---------------------------------------------------------------------------
# 6. convergence targets


def test_c06_convergence_targets(kuhn, kuhn_flat, goofspiel_runs):
    with criterion("Kuhn < 1e-3 chips in 1,024 iterations; Goofspiel "
                   "CFR+/DCFR within 2x at checkpoints 64..8192"):
        for preset in ("cfr+", "dcfr"):
            cfg = rf.preset_config(preset, iterations=1024, eval_every=1024)
            _, records = rf.CfrRun(kuhn, cfg, flat=kuhn_flat).run()
            assert records[-1].exploit_avg < 1e-3

        plus = {r.iteration: r.exploit_avg
                for r in pow2_checkpoints(goofspiel_runs["cfr+"], lo=64)}
        disc = {r.iteration: r.exploit_avg
                for r in pow2_checkpoints(goofspiel_runs["dcfr"], lo=64)}
        assert sorted(plus) == [64, 128, 256, 512, 1024, 2048, 4096, 8192]
        for t in sorted(plus):
            ratio = disc[t] / plus[t]
            assert 0.5 <= ratio <= 2.0, (t, ratio)


# ---------------------------------------------------------------------------
# 7. whole-game regret bound and the 2-epsilon link


def test_c07_overall_regret_and_two_epsilon(kuhn, kuhn_flat):
    with criterion("overall regret <= sum of per-infoset regrets; "
                   "exploitability <= max regret / T at T in {16, 64, 256}"):
        f = kuhn_flat
        for T in (16, 64, 256):
            cfg = rf.preset_config("cfr", iterations=T, evaluate=False,
                                   update_mode="simultaneous",
                                   track_value_sum=True)
            run = rf.CfrRun(kuhn, cfg, flat=f)
            run.run()
            summary = run.iterate_summary()
            regrets = {}
            for player in (P1, P2):
                # sum over the player's infosets of max_a R+(I, a)
                total = 0.0
                for i in range(f.n_isets):
                    if int(f.iset_player[i]) != player:
                        continue
                    s = int(f.iset_start[i])
                    n = int(f.iset_size[i])
                    total += max(0.0, float(np.max(run.tables.regret[s:s + n])))
                regrets[player] = rf.overall_regret(kuhn, summary, player)
                assert regrets[player] <= total + 1e-9
            exploit = rf.exploitability(kuhn, summary.average_profile)
            assert exploit <= max(regrets.values()) / T + 1e-9


# ---------------------------------------------------------------------------
# 8. MCCFR suite


def test_c08_mccfr_suite(kuhn, kuhn_flat, leduc, leduc_flat):
    with criterion("MCCFR: nodes-touched oracle equality; discounted <= "
                   "vanilla on Leduc over 100 seeds; seed determinism"):
        # nodes touched equals the instrumented reference, bit for bit
        pairs = 300
        run = rf.MccfrRun(kuhn, rf.MccfrConfig(variant="vanilla", seed=17,
                                               budget_nodes=10**9,
                                               evaluate=False), flat=kuhn_flat)
        for _ in range(pairs):
            run.step_pair()
        ref = ReferenceSampler(kuhn, seed=17)
        ref.run_pairs(pairs)
        assert run.nodes_touched == ref.nodes_touched

        # identical seeds give bit-identical runs
        cfg = rf.MccfrConfig(variant="discounted", seed=4,
                             budget_nodes=60_000, period_nodes=10_000,
                             eval_every=30_000)
        a = rf.MccfrRun(kuhn, cfg, flat=kuhn_flat)
        b = rf.MccfrRun(kuhn, cfg, flat=kuhn_flat)
        a.run()
        b.run()
        np.testing.assert_array_equal(a.regret, b.regret)
        assert [(r.iteration, r.nodes_touched, r.exploit_avg) for r in a.records] \
            == [(r.iteration, r.nodes_touched, r.exploit_avg) for r in b.records]

        # directional: discounted beats vanilla on Leduc, 100-seed mean at
        # the final matched checkpoint
        budget = 500_000
        finals = {}
        for variant in ("vanilla", "discounted"):
            values = []
            for k in range(100):
                cfg = rf.MccfrConfig(variant=variant, seed=11, run_index=k,
                                     budget_nodes=budget, period_nodes=100_000,
                                     eval_every=budget)
                r = rf.MccfrRun(leduc, cfg, flat=leduc_flat)
                _, records = r.run()
                assert records[-1].checkpoint == budget
                values.append(records[-1].exploit_avg)
            finals[variant] = float(np.mean(values))
        assert finals["discounted"] <= finals["vanilla"]


# ---------------------------------------------------------------------------
# 9. NormalHedge


def test_c09_normalhedge(kuhn, kuhn_flat):
    with criterion("NormalHedge: scale equation residual <= 1e-10 over 1e4 "
                   "vectors; NH-DCFR < 1e-2 on Kuhn in 4,096 iterations"):
        rng = np.random.default_rng(42)
        checked = 0
        while checked < 10_000:
            scale = 10.0 ** rng.uniform(-3, 6)
            r = rng.normal(size=int(rng.integers(2, 9))) * scale
            if not np.any(r > 0):
                continue
            c = nh_scale(r)
            pos = np.maximum(r, 0.0)
            lhs = float(np.exp(pos * pos / (2.0 * c)).mean())
            assert abs(lhs - math.e) / math.e <= 1e-10
            checked += 1

        cfg = rf.SolveConfig(minimizer="nh",
                             schedule=PRESETS["dcfr"].schedule,
                             iterations=4096, eval_every=4096)
        _, records = rf.CfrRun(kuhn, cfg, flat=kuhn_flat).run()
        assert records[-1].exploit_avg < 1e-2
