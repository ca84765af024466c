import numpy as np
import pytest

from statecomp import montecarlo, rng
from statecomp.baselines import separable_solution
from statecomp.ensemble import Povm, PureEnsemble, comparison_povm, equal_overlap_states, witness_povm
from statecomp.errors import PovmDefectError, ValidationError
from statecomp.montecarlo import SimConfig, conclusive_probability, exact_success, simulate
from statecomp.solver2oo2 import solve


def test_splitmix64_reference_vectors():
    # published SplitMix64 outputs for state 1234567
    expected = [6457827717110365317, 3203168211198807973, 9817491932198370423,
                4593380528125082431, 16408922859458223821]
    got = rng.splitmix64(1234567, np.arange(5))
    assert [int(x) for x in got] == expected
    assert int(rng.splitmix64(0, np.array([0]))[0]) == 0xE220A8397B1DCDAF


def test_vector_matches_scalar():
    ks = np.array([0, 1, 2, 10 ** 6, 2 ** 40 + 3])
    for seed in (0, 42, 2 ** 63 + 5):
        vec = rng.splitmix64(seed, ks)
        assert [int(v) for v in vec] == [rng.splitmix64_scalar(seed, int(k)) for k in ks]


def test_uniforms_range_and_slicing():
    u = rng.uniforms(9, 0, 10000)
    assert u.min() >= 0 and u.max() < 1
    assert abs(u.mean() - 0.5) < 0.01
    assert np.array_equal(rng.uniforms(9, 4000, 100), u[4000:4100])


def optimal_config(trials, seed, q1=0.5, c=0.5, **kw):
    sol = solve(q1, c)
    return sol, SimConfig(trials, seed, sol.povm, sol.instance.ensemble(), **kw)


def test_deterministic_and_seed_dependent():
    _, cfg = optimal_config(50000, 3)
    a, b = simulate(cfg), simulate(cfg)
    assert a.counts == b.counts
    _, other = optimal_config(50000, 4)
    assert simulate(other).counts != a.counts


def test_sharding_is_bit_identical():
    _, whole = optimal_config(300001, 11)
    _, sharded = optimal_config(300001, 11, shards=[100000, 1, 150000, 50000], workers=3)
    assert simulate(whole).counts == simulate(sharded).counts
    with pytest.raises(ValidationError):
        simulate(optimal_config(10, 0, shards=[3, 3])[1])


@pytest.mark.parametrize("q1, c", [(0.5, 0.5), (0.9, 0.5), (0.2, 0.3), (0.6, 0.9)])
def test_no_errors_for_unambiguous_measurements(q1, c):
    sol = solve(q1, c)
    rep = simulate(SimConfig(200000, 1, sol.povm, sol.instance.ensemble()))
    assert rep.error_count == 0
    sep = separable_solution(q1, c)
    rep = simulate(SimConfig(200000, 2, sep.povm, sep.local.instance.ensemble()))
    assert rep.error_count == 0


def test_ambiguous_measurement_produces_errors():
    ens = PureEnsemble([[1, 0], [0.6, 0.8]], [0.5, 0.5])
    naive = Povm({"a": np.eye(4) * 0.5, "b": np.eye(4) * 0.5, "?": np.zeros((4, 4))})
    rep = simulate(SimConfig(10000, 0, naive, ens))
    assert rep.error_count > 4000
    assert rep.empirical_p == 1.0


def test_exact_and_conclusive_agree_when_unambiguous():
    sol = solve(0.3, 0.4)
    ens = sol.instance.ensemble()
    assert exact_success(sol.povm, ens) == pytest.approx(sol.p_opt, abs=1e-12)
    assert conclusive_probability(sol.povm, ens) == pytest.approx(sol.p_opt, abs=1e-12)


def test_defective_povm_rejected():
    ens = PureEnsemble([[1, 0], [0.6, 0.8]], [0.5, 0.5])
    bad = Povm({"a": np.eye(4) * 0.7, "b": np.eye(4) * 0.7, "?": np.zeros((4, 4))})
    with pytest.raises(PovmDefectError):
        simulate(SimConfig(10, 0, bad, ens))


def test_convergence_rate():
    sol, _ = optimal_config(1, 0, q1=0.3, c=0.4)
    ens = sol.instance.ensemble()
    p = sol.p_opt
    sigma = np.sqrt(p * (1 - p) / 100000)
    hits = 0
    for seed in range(100):
        rep = simulate(SimConfig(100000, seed, sol.povm, ens))
        hits += abs(rep.empirical_p - p) <= 2.576 * sigma
    assert hits >= 95


def test_witness_comparison_simulation():
    states = equal_overlap_states(3, 0.4)
    ens = PureEnsemble(states, [0.2, 0.3, 0.5])
    povm = comparison_povm(witness_povm(ens), 2)
    rep = simulate(SimConfig(100000, 5, povm, ens))
    assert rep.error_count == 0
    p = exact_success(povm, ens)
    assert abs(rep.empirical_p - p) <= 5 * rep.std_error


def test_three_copies():
    ens = PureEnsemble([[1, 0], [0, 1]], [0.5, 0.5])
    e = np.eye(2)
    local = Povm({"1": np.diag(e[0]), "2": np.diag(e[1]), "?": np.zeros((2, 2))})
    rep = simulate(SimConfig(40000, 8, comparison_povm(local, 3), ens, copies=3))
    assert rep.empirical_p == 1.0 and rep.error_count == 0
    assert rep.count("equal", "a") == pytest.approx(10000, rel=0.05)
