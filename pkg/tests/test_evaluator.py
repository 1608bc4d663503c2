import itertools

import numpy as np
import pytest

import regret_forge as rf
from regret_forge.evaluate import IterateSummary
from regret_forge.games.model import P1, P2


def uniform_profile(game):
    return rf.StrategyProfile.uniform(rf.enumerate_infosets(game))


def random_profile(index, rng):
    tables = ({}, {})
    for p in (P1, P2):
        for s in index.infosets(p):
            raw = rng.random(s.n_actions) + 1e-3
            tables[p][s.key] = raw / raw.sum()
    return rf.StrategyProfile(tables[0], tables[1])


def matrix22_nash(matrix22):
    """Equilibrium of [[1, .9], [-.7, 1]] from the indifference equations."""
    index = rf.enumerate_infosets(matrix22)
    rows = index.infosets(P1)[0].key
    cols = index.infosets(P2)[0].key
    p = 17.0 / 18.0
    q = 1.0 / 18.0
    return rf.StrategyProfile({rows: np.array([p, 1 - p])},
                              {cols: np.array([q, 1 - q])})


# ---------------------------------------------------------------------------
# best response


def test_matrix_best_response_vs_uniform(matrix22):
    prof = uniform_profile(matrix22)
    choice, value = rf.best_response(matrix22, prof, P1)
    # row values are (0.95, 0.15)
    assert value == pytest.approx(0.95, abs=1e-12)
    assert choice == {"rows": 0}


def test_best_response_at_nash_equals_game_value(matrix22):
    nash = matrix22_nash(matrix22)
    value = 163.0 / 180.0  # 0.90555..., the 2x2 game value
    assert rf.best_response(matrix22, nash, P1)[1] == pytest.approx(value, abs=1e-12)
    assert rf.best_response(matrix22, nash, P2)[1] == pytest.approx(-value, abs=1e-12)
    assert rf.exploitability(matrix22, nash) == pytest.approx(0.0, abs=1e-12)


def enumerate_pure_profiles(game, player):
    """All pure strategies of one player as one-hot strategy dicts."""
    index = rf.enumerate_infosets(game)
    infosets = index.infosets(player)
    sizes = [s.n_actions for s in infosets]
    for combo in itertools.product(*(range(n) for n in sizes)):
        vectors = {}
        for s, a in zip(infosets, combo):
            vec = np.zeros(s.n_actions)
            vec[a] = 1.0
            vectors[s.key] = vec
        yield vectors


def test_kuhn_best_response_vs_uniform_exhaustive(kuhn):
    prof = uniform_profile(kuhn)
    for player in (P1, P2):
        best = -np.inf
        for vectors in enumerate_pure_profiles(kuhn, player):
            if player == P1:
                candidate = rf.StrategyProfile(vectors, prof.vectors(P2))
            else:
                candidate = rf.StrategyProfile(prof.vectors(P1), vectors)
            best = max(best, rf.expected_value(kuhn, candidate, player))
        assert rf.best_response(kuhn, prof, player)[1] == \
            pytest.approx(best, abs=1e-12)


def test_best_response_dominates_random_strategies(kuhn):
    index = rf.enumerate_infosets(kuhn)
    rng = np.random.default_rng(23)
    base = random_profile(index, rng)
    br_value = rf.best_response(kuhn, base, P1)[1]
    for _ in range(100):
        candidate = rf.StrategyProfile(random_profile(index, rng).vectors(P1),
                                       base.vectors(P2))
        assert br_value >= rf.expected_value(kuhn, candidate, P1) - 1e-9


def test_best_response_tie_breaks_low_index():
    game = rf.build_matrix_game([[1.0, 1.0], [1.0, 1.0]])
    choice, _ = rf.best_response(game, uniform_profile(game), P1)
    assert choice == {"rows": 0}


# ---------------------------------------------------------------------------
# exploitability


def test_exploitability_nonnegative_random(kuhn):
    index = rf.enumerate_infosets(kuhn)
    rng = np.random.default_rng(29)
    for _ in range(20):
        prof = random_profile(index, rng)
        assert rf.exploitability(kuhn, prof) >= -1e-9


def test_exploitability_zero_iff_nash(pennies):
    prof = uniform_profile(pennies)
    assert rf.exploitability(pennies, prof) == pytest.approx(0.0, abs=1e-12)
    skew = rf.StrategyProfile(
        {"rows": np.array([0.7, 0.3])}, dict(prof.vectors(P2)))
    assert rf.exploitability(pennies, skew) > 0.01


def test_exploitability_parts_average(kuhn):
    prof = uniform_profile(kuhn)
    br1, br2, avg = rf.exploitability_parts(kuhn, prof)
    assert avg == pytest.approx(0.5 * (br1 + br2), abs=1e-15)


# ---------------------------------------------------------------------------
# whole-game regret


def run_tracked(game, iterations):
    cfg = rf.preset_config("cfr", iterations=iterations, evaluate=False,
                           update_mode="simultaneous", track_value_sum=True)
    run = rf.CfrRun(game, cfg)
    run.run()
    return run


def test_overall_regret_single_iteration(kuhn):
    run = run_tracked(kuhn, 1)
    summary = run.iterate_summary()
    uniform = uniform_profile(kuhn)
    for player in (P1, P2):
        expected = rf.best_response(kuhn, uniform, player)[1] - \
            rf.expected_value(kuhn, uniform, player)
        assert rf.overall_regret(kuhn, summary, player) == \
            pytest.approx(expected, abs=1e-9)


def test_overall_regret_zero_for_best_responder(matrix22):
    # a player already best responding to the opponent's average has none
    prof = uniform_profile(matrix22)
    choice, br_value = rf.best_response(matrix22, prof, P1)
    vec = np.zeros(2)
    vec[choice["rows"]] = 1.0
    played = rf.StrategyProfile({"rows": vec}, prof.vectors(P2))
    summary = IterateSummary(
        iterations=1, average_profile=played,
        value_p1_sum=rf.expected_value(matrix22, played, P1))
    assert rf.overall_regret(matrix22, summary, P1) == pytest.approx(0.0, abs=1e-12)


def test_overall_regret_matches_stored_iterate_sum(kuhn):
    # oracle: keep all 16 iterate profiles and maximize the explicit sum
    # over every pure deviation strategy
    T = 16
    cfg = rf.preset_config("cfr", iterations=T, evaluate=False,
                           update_mode="simultaneous", track_value_sum=True)
    # capture the played profile before each iteration
    run2 = rf.CfrRun(kuhn, cfg)
    iterates = []
    for _ in range(T):
        iterates.append(run2.current_profile())
        run2.iterate()

    summary = run2.iterate_summary()
    for player in (P1, P2):
        best = -np.inf
        for vectors in enumerate_pure_profiles(kuhn, player):
            total = 0.0
            for prof in iterates:
                if player == P1:
                    candidate = rf.StrategyProfile(vectors, prof.vectors(P2))
                else:
                    candidate = rf.StrategyProfile(prof.vectors(P1), vectors)
                total += rf.expected_value(kuhn, candidate, player)
            best = max(best, total)
        realized = sum(rf.expected_value(kuhn, prof, player) for prof in iterates)
        oracle = best - realized
        assert rf.overall_regret(kuhn, summary, player) == \
            pytest.approx(oracle, abs=1e-8)


def test_two_epsilon_link(kuhn):
    T = 16
    cfg = rf.preset_config("cfr", iterations=T, evaluate=False,
                           update_mode="simultaneous", track_value_sum=True)
    run = rf.CfrRun(kuhn, cfg)
    run.run()
    summary = run.iterate_summary()
    regrets = [rf.overall_regret(kuhn, summary, p) for p in (P1, P2)]
    exploit = rf.exploitability(kuhn, summary.average_profile)
    assert exploit <= max(regrets) / T + 1e-9
    # the two-player average is exactly the mean of the normalized regrets
    assert exploit == pytest.approx((regrets[0] + regrets[1]) / (2 * T), abs=1e-9)


def test_overall_regret_requires_summary(kuhn):
    with pytest.raises(ValueError):
        rf.overall_regret(kuhn, IterateSummary(0, None, 0.0), P1)


# ---------------------------------------------------------------------------
# unit conversion


def test_to_mbb():
    assert rf.to_mbb(0.1, 100.0) == pytest.approx(1.0)
    assert rf.to_mbb(0.0, 3.0) == 0.0
    assert rf.to_mbb(-2.5, 100.0) == pytest.approx(-25.0)
    with pytest.raises(ValueError):
        rf.to_mbb(1.0, 0.0)
    with pytest.raises(ValueError):
        rf.to_mbb(1.0, -2.0)
