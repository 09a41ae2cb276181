import itertools
from collections import deque
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from bwkit.errors import InvalidK, NotATree, UnsupportedMultiplicity
from bwkit.factors import (
    central_cut,
    central_order,
    congestion,
    metrics,
    normalized_congestion,
    sigma,
    unique_path_congestion_oracle,
)
from bwkit.graph import build_factor, factor, factor_edges
from bwkit.oracle import Partition, cut_size, exact_bisection_width

TREE_SIZES = [1, 3, 7, 15, 31, 63, 127, 255, 511, 1023]


def route_count(k, edges, paths):
    """Max load on any edge when every pair in `paths` is routed."""
    load = {tuple(sorted(e)): 0 for e in edges}
    for route in paths:
        for a, b in zip(route, route[1:]):
            load[tuple(sorted((a, b)))] += 1
    return max(load.values(), default=0)


def bfs_path(adj, s, t):
    prev = {s: None}
    q = deque([s])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if v not in prev:
                prev[v] = u
                q.append(v)
    out = [t]
    while out[-1] != s:
        out.append(prev[out[-1]])
    return out[::-1]


def brute_tree_congestion(kind, k):
    """Route every pair along its unique path and count."""
    edges = [(u, v) for u, v, _ in factor_edges(factor(kind, k))]
    adj = {i: [] for i in range(k)}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    paths = [bfs_path(adj, a, b) for a, b in itertools.combinations(range(k), 2)]
    return route_count(k, edges, paths)


def ring_shortest_routing(k):
    """Two copies per pair on a ring, both along the shorter arc; antipodal
    pairs send one copy each way."""
    edges = [(i, (i + 1) % k) for i in range(k)]
    paths = []
    for a, b in itertools.combinations(range(k), 2):
        cw = [(a + j) % k for j in range((b - a) % k + 1)]
        ccw = [(a - j) % k for j in range((a - b) % k + 1)]
        if len(cw) < len(ccw):
            paths += [cw, cw]
        elif len(ccw) < len(cw):
            paths += [ccw, ccw]
        else:
            paths += [cw, ccw]
    return route_count(k, edges, paths)


# --- paper values ----------------------------------------------------------


def test_paper_values():
    assert congestion(factor("path", 4)) == 4
    assert congestion(factor("cbt", 7)) == 12
    assert congestion(factor("ssb", 5)) == 10
    assert normalized_congestion(factor("ssa", 5)) == F(1, 6)
    assert central_cut(factor("ssa", 5)) == 2
    assert central_cut(factor("ssa", 4)) == 2
    for kind in ("path", "cbt"):
        assert central_cut(factor(kind, 7)) == 1
    for kind in ("ring", "xt"):
        assert central_cut(factor(kind, 7)) == 2
    assert central_cut(factor("ssb", 6)) == 1


@pytest.mark.parametrize("k", range(3, 65))
def test_ring_beta(k):
    assert normalized_congestion(factor("ring", k)) == F(1, 4)


def test_xt_beta():
    for k in TREE_SIZES[1:8]:
        assert normalized_congestion(factor("xt", k)) == F(1, 4)


@pytest.mark.parametrize("k", range(2, 40))
def test_switch_betas(k):
    even = k % 2 == 0
    assert normalized_congestion(factor("ssa", k)) == (F(k - 1, k * k) if even else F(1, k + 1))
    assert normalized_congestion(factor("ssb", k)) == (F(k - 1, 2 * k) if even else F(k, 2 * (k + 1)))


@pytest.mark.parametrize("k", range(1, 40))
def test_path_congestion_closed_form(k):
    for r in (1, 2, 3):
        want = r * k * k // 4 if k % 2 == 0 else r * (k * k - 1) // 4
        assert congestion(factor("path", k), r) == want


def test_sigma():
    assert [sigma(k) for k in range(1, 7)] == [0, 4, 8, 16, 24, 36]


# --- invariants ------------------------------------------------------------


def test_path_cbt_beta_all_k():
    for r in (1, 2, 5):
        for k in range(1, 1026):
            assert normalized_congestion(factor("path", k), r) == F(r, 4)
        for k in TREE_SIZES:
            assert normalized_congestion(factor("cbt", k), r) == F(r, 4)


def test_ring_beta_all_k():
    for k in range(3, 1026):
        assert normalized_congestion(factor("ring", k)) == F(1, 4)


@given(st.integers(2, 200), st.integers(1, 6))
def test_multiplicity_scaling(k, r):
    for kind in ("path", "ssa", "ssb", "clique"):
        assert congestion(factor(kind, k), r) == r * congestion(factor(kind, k), 1)


def test_ring_rejects_other_r():
    with pytest.raises(UnsupportedMultiplicity):
        congestion(factor("ring", 5), 1)
    with pytest.raises(UnsupportedMultiplicity):
        congestion(factor("xt", 7), 4)


def test_rclique_congestion():
    assert congestion(factor("rclique", 5, 3)) == 1
    assert congestion(factor("rclique", 5, 3), 6) == 2
    assert congestion(factor("clique", 5)) == 1
    assert central_cut(factor("rclique", 5, 3)) == 3 * 6


def test_metrics_bundle():
    m = metrics(factor("ssa", 5))
    assert (m.m_r, m.beta_r, m.cc, m.r) == (4, F(1, 6), 2, 1)


def test_central_cut_rejects_trivial():
    with pytest.raises(InvalidK):
        central_cut(factor("path", 1))


# --- oracles ---------------------------------------------------------------


@pytest.mark.parametrize("kind,k", [("path", k) for k in range(2, 13)] + [("cbt", 3), ("cbt", 7), ("cbt", 15)])
def test_brute_routing_matches(kind, k):
    assert congestion(factor(kind, k)) == brute_tree_congestion(kind, k)


@pytest.mark.parametrize("k", range(3, 16))
def test_ring_routing_matches(k):
    assert congestion(factor("ring", k)) == ring_shortest_routing(k)


def test_small_oracle_values():
    assert unique_path_congestion_oracle(build_factor(factor("path", 5))) == 6
    assert unique_path_congestion_oracle(build_factor(factor("cbt", 7))) == 12
    assert unique_path_congestion_oracle(build_factor(factor("cbt", 7)), r=3) == 36


def test_tree_oracle_matches_all_k():
    for k in range(1, 1024):
        assert unique_path_congestion_oracle(build_factor(factor("path", k))) == congestion(factor("path", k))
    for k in TREE_SIZES:
        t = build_factor(factor("cbt", k))
        assert unique_path_congestion_oracle(t) == congestion(factor("cbt", k))


def test_tree_oracle_rejects_cycles():
    with pytest.raises(NotATree):
        unique_path_congestion_oracle(build_factor(factor("ring", 5)))
    with pytest.raises(NotATree):
        unique_path_congestion_oracle(build_factor(factor("xt", 7)))


CC_CASES = (
    [("path", k) for k in range(2, 13)]
    + [("ring", k) for k in range(2, 13)]
    + [("clique", k) for k in range(2, 11)]
    + [("ssa", k) for k in range(2, 13)]
    + [("ssb", k) for k in range(2, 13)]
    + [(kind, k) for kind in ("cbt", "xt") for k in (3, 7, 15)]
)


@pytest.mark.parametrize("kind,k", CC_CASES)
def test_central_cut_is_factor_bisection_width(kind, k):
    t = build_factor(factor(kind, k))
    assert exact_bisection_width(t).width == central_cut(factor(kind, k))


# --- central order ---------------------------------------------------------


def order_cases():
    for kind in ("path", "ring", "clique", "ssa", "ssb"):
        for k in range(2, 65):
            yield factor(kind, k)
    for k in (3, 4, 7):
        yield factor("rclique", k, 2)
    for kind in ("cbt", "xt"):
        for k in TREE_SIZES[1:7]:
            yield factor(kind, k)


def test_central_order_prefixes_cut_at_most_cc():
    for f in order_cases():
        order = central_order(f)
        assert sorted(order) == list(range(f.k))
        t = build_factor(f)
        for size in {f.k // 2, (f.k + 1) // 2}:
            s = Partition(frozenset(order[:size]), f.k)
            assert cut_size(t, s) <= central_cut(f), (f.label(), size)


def test_xt_order_is_hamiltonian_path():
    for k in TREE_SIZES[1:8]:
        order = central_order(factor("xt", k))
        edges = {(u, v) for u, v, _ in factor_edges(factor("xt", k))}
        for a, b in zip(order, order[1:]):
            assert (min(a, b), max(a, b)) in edges
        # closes into a cycle
        assert (min(order[0], order[-1]), max(order[0], order[-1])) in edges


def test_cbt_order_is_inorder():
    assert central_order(factor("cbt", 7)) == (3, 1, 4, 0, 5, 2, 6)
