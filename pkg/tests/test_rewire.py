import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from laser.generators import complete_graph, cycle_graph, erdos_renyi_graph, lollipop_graph, path_graph
from laser.graph import Graph, bfs_distances, distance_matrix
from laser.measures import compute_mu_nu, resistance_matrix
from laser.rewire import (
    AlreadyCompleteError,
    RewireConfig,
    laser_rewire,
    orbit_of,
    rewire_level,
    round_half_away,
    select_from_orbit,
    selection_count,
    spectral_greedy_add,
)
from laser.snapshots import flatten_snapshots
from laser import rng

from oracles import exact_distance_pairs
from strategies import connected_graphs


def test_orbit_examples():
    d = distance_matrix(path_graph(5))
    assert orbit_of(d, 0, 2).members.tolist() == [2]
    assert orbit_of(d, 2, 2).members.tolist() == [0, 4]
    assert orbit_of(distance_matrix(complete_graph(4)), 1, 2).members.tolist() == []


def test_round_half_away():
    assert [round_half_away(x) for x in (0.4, 0.5, 1.4, 1.5, 2.5)] == [0, 1, 1, 2, 3]


@pytest.mark.parametrize(
    "size, rho, min_one, expected",
    [(14, 0.1, True, 1), (4, 0.1, True, 1), (4, 0.1, False, 0), (0, 0.5, True, 0), (5, 1.0, True, 5), (3, 0.0, True, 0)],
)
def test_selection_count(size, rho, min_one, expected):
    assert selection_count(size, rho, min_one) == expected


def test_select_lowest_scores():
    members = np.array([3, 5, 7, 9])
    scores = np.array([10.0, 1.0, 5.0, 2.0])
    assert select_from_orbit(members, scores, 0.5).tolist() == [5, 9]


def test_tie_frequency_half():
    members = np.array([0, 1])
    scores = np.array([4.0, 4.0])
    hits = sum(
        select_from_orbit(members, scores, 0.5, True, rng.uniform(s, 0, 0, members))[0] == 0 for s in range(10000)
    )
    assert abs(hits / 10000 - 0.5) <= 0.02


def test_tie_without_keys_uses_node_order():
    assert select_from_orbit(np.array([4, 2]), np.array([1.0, 1.0]), 0.5).tolist() == [2]


def test_rewire_level_path_full():
    g = path_graph(5)
    rel = rewire_level(g, compute_mu_nu(g, 2), 2, RewireConfig(rho_density=1.0))
    assert rel.level == 1
    assert rel.undirected().tolist() == [[0, 2], [1, 3], [2, 4]]
    assert rel.num_directed == 6


def test_rewire_level_clique_empty():
    g = complete_graph(4)
    rel = rewire_level(g, compute_mu_nu(g, 2), 2, RewireConfig(rho_density=0.7))
    assert rel.num_directed == 0


def test_rewire_level_min_one():
    g = path_graph(5)
    rel = rewire_level(g, compute_mu_nu(g, 2), 2, RewireConfig(rho_density=0.1, min_one=True))
    assert rel.out_degrees().tolist() == [1, 1, 1, 1, 1]


def test_rewire_level_beyond_horizon():
    g = path_graph(5)
    with pytest.raises(ValueError):
        rewire_level(g, compute_mu_nu(g, 2), 3, RewireConfig())


def test_rho_one_recovers_multihop():
    g = path_graph(5)
    seq = laser_rewire(g, RewireConfig(L=1, rho_density=1.0))
    assert set(map(tuple, seq.levels[0].undirected().tolist())) == exact_distance_pairs(5, g.edges().tolist(), 2)


def test_disabled_rewiring():
    g = path_graph(5)
    assert laser_rewire(g, RewireConfig(L=0)).L == 0
    assert laser_rewire(g, RewireConfig(L=3, rho_density=0.0)).L == 0


def test_disconnected_graph_warns():
    g = Graph.from_edges(6, [(0, 1), (1, 2), (3, 4), (4, 5)])
    with pytest.warns(UserWarning):
        seq = laser_rewire(g, RewireConfig(L=1, rho_density=1.0))
    assert seq.levels[0].undirected().tolist() == [[0, 2], [3, 5]]


@pytest.mark.parametrize("kw", [{"rho_density": 1.2}, {"rho_density": -0.1}, {"L": -1}, {"mode": "x"}, {"walk_k": 0}])
def test_config_validation(kw):
    with pytest.raises(ValueError):
        RewireConfig(**kw)


@given(connected_graphs(max_n=12), st.integers(1, 3), st.floats(0.05, 1.0), st.booleans(), st.integers(0, 99),
       st.sampled_from(["mu_guided", "uniform_random"]))
def test_locality_nesting_and_budget(g, L, rho, min_one, seed, mode):
    cfg = RewireConfig(L=L, rho_density=rho, seed=seed, min_one=min_one, mode=mode)
    seq = laser_rewire(g, cfg)
    d = distance_matrix(g)
    prev = set(map(tuple, g.edges().tolist()))
    for ell, rel in enumerate(seq.levels, start=1):
        assert rel.level == ell
        for v, ts in enumerate(rel.targets):
            assert len(set(ts)) == len(ts)
            assert all(d[v, u] == ell + 1 for u in ts)
            assert len(ts) == selection_count(int(np.sum(d[v] == ell + 1)), rho, min_one)
        cur = set(map(tuple, flatten_snapshots(seq, ell).edges().tolist()))
        assert prev <= cur
        prev = cur


@given(connected_graphs(max_n=12), st.floats(0.05, 0.95), st.integers(0, 50))
def test_optimal_selection(g, rho, seed):
    mp = compute_mu_nu(g, 2)
    rel = rewire_level(g, mp, 2, RewireConfig(rho_density=rho, seed=seed))
    for v, ts in enumerate(rel.targets):
        orbit = orbit_of(mp.locality, v, 2).members
        if not ts:
            continue
        rest = sorted(set(orbit.tolist()) - set(ts))
        if not rest:
            continue
        mu_sel = mp.connectivity[v, list(ts)]
        mu_rest = mp.connectivity[v, rest]
        assert mu_sel.max() <= mu_rest.min()
        # strictly lower members are always taken
        assert all(u in ts for u in orbit.tolist() if mp.connectivity[v, u] < mu_sel.max())


def test_determinism():
    g = erdos_renyi_graph(150, 6 / 150, 4)
    cfg = RewireConfig(L=2, rho_density=0.3, seed=9, mode="uniform_random")
    assert laser_rewire(g, cfg).levels == laser_rewire(g, cfg).levels


def test_seed_changes_random_mode():
    g = erdos_renyi_graph(150, 6 / 150, 4)
    a = laser_rewire(g, RewireConfig(L=1, rho_density=0.3, seed=1, mode="uniform_random"))
    b = laser_rewire(g, RewireConfig(L=1, rho_density=0.3, seed=2, mode="uniform_random"))
    assert a.levels != b.levels


def test_cycle_equivariance_frequencies():
    g = cycle_graph(6)
    mp = compute_mu_nu(g, 2)
    trials = 2000
    counts = np.zeros((6, 6))
    for s in range(trials):
        rel = rewire_level(g, mp, 2, RewireConfig(rho_density=0.5, seed=s))
        for v, ts in enumerate(rel.targets):
            counts[v, list(ts)] += 1
    se = math.sqrt(0.25 / trials)
    for v in range(6):
        for u in ((v + 2) % 6, (v - 2) % 6):
            assert abs(counts[v, u] / trials - 0.5) <= 3 * se


def test_lollipop_sparse_snapshot_scale():
    chain, clique = 12, 64
    g = lollipop_graph(chain, clique)
    mp = compute_mu_nu(g, 2)
    z_prime = chain - 1
    internal = []
    for s in range(20):
        seq = laser_rewire(g, RewireConfig(L=1, rho_density=1 / 12, min_one=False, seed=s), mp)
        pairs = seq.levels[0].undirected().tolist()
        internal.append(sum(1 for u, v in pairs if max(u, v) <= chain and z_prime not in (u, v)))
        # z' is the only chain node whose 2-hop orbit reaches into the clique
        assert all(z_prime in (u, v) for u, v in pairs)
    assert np.mean(internal) <= math.sqrt(chain) / 2


def test_spectral_greedy_examples():
    g = spectral_greedy_add(path_graph(3), 1)
    assert g.edges().tolist() == [[0, 1], [0, 2], [1, 2]]
    with pytest.raises(AlreadyCompleteError):
        spectral_greedy_add(complete_graph(4), 1)


def test_spectral_greedy_lollipop_hits_chain_end():
    chain, clique = 9, 50
    g = lollipop_graph(chain, clique)
    added = spectral_greedy_add(g, 1)
    (u, v), = set(map(tuple, added.edges().tolist())) - set(map(tuple, g.edges().tolist()))
    assert u == 0 and v > chain
    # pseudoinverse oracle: chosen pair attains the maximum resistance among non-edges
    r = resistance_matrix(g)
    r[g.adjacency().toarray() > 0] = -np.inf
    np.fill_diagonal(r, -np.inf)
    assert r[u, v] == pytest.approx(r.max(), rel=1e-12)
    assert bfs_distances(g, 0)[v] == chain + 1
