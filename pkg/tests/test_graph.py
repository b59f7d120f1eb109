import random

import numpy as np
import pytest

from kblinker.candidates import Candidate
from kblinker.config import LinkerConfig
from kblinker.graph import (
    DisambiguationGraph,
    build_graph,
    run_hits,
    run_pagerank,
    select,
)


def cand(entity, mention=0, sim=1.0):
    return Candidate(
        mention_index=mention,
        entity=entity,
        matched_label=entity,
        sim=sim,
        popularity=0.0,
        source="direct",
    )


def graph_of(nodes, edges):
    return DisambiguationGraph(
        nodes=set(nodes),
        edges=set(edges),
        level={v: 0 for v in nodes},
        candidate_mentions={},
    )


def dense_hits_oracle(nodes, edges, iterations):
    """Authority vector after the stated iteration scheme, in dense algebra."""
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    A = np.zeros((n, n))
    for u, v in edges:
        A[index[u], index[v]] = 1.0
    hub = np.ones(n) / n
    auth = np.ones(n) / n
    for _ in range(iterations):
        new_auth = A.T @ hub
        if new_auth.sum() > 0:
            auth = new_auth / new_auth.sum()
        new_hub = A @ auth
        if new_hub.sum() > 0:
            hub = new_hub / new_hub.sum()
    return {v: auth[index[v]] for v in nodes}, {v: hub[index[v]] for v in nodes}


def dense_pagerank_oracle(nodes, edges, damping):
    n = len(nodes)
    index = {v: i for i, v in enumerate(nodes)}
    out_deg = {v: 0 for v in nodes}
    for u, v in edges:
        out_deg[u] += 1
    P = np.zeros((n, n))
    for u, v in edges:
        P[index[v], index[u]] += 1.0 / out_deg[u]
    for u in nodes:
        if out_deg[u] == 0:
            P[:, index[u]] = 1.0 / n
    x = np.linalg.solve(np.eye(n) - damping * P, (1.0 - damping) / n * np.ones(n))
    return {v: x[index[v]] for v in nodes}


class TestBuildGraph:
    def test_depth_zero_keeps_closure_edge(self):
        kb_graph = {"A": [("p", "B")], "B": []}
        g = build_graph([[cand("A"), cand("B")]], kb_graph, depth=0)
        assert g.nodes == {"A", "B"}
        assert g.edges == {("A", "B")}
        assert g.level == {"A": 0, "B": 0}

    def test_empty_candidates_empty_graph(self):
        g = build_graph([[]], {"A": [("p", "B")]}, depth=3)
        assert g.nodes == set()
        assert g.edges == set()

    def test_depth_one_bfs_oracle(self, rio_bundle):
        seeds = ["e:Rio_city", "e:Estado_Rio", "e:Copacabana"]
        g = build_graph([[cand(s) for s in seeds]], rio_bundle.graph, depth=1)

        # independent BFS over the adjacency list
        adjacency = {u: {t for _, t in vs} for u, vs in rio_bundle.graph.items()}
        expected = set(seeds)
        for s in seeds:
            expected |= adjacency.get(s, set())
        assert g.nodes == expected
        for v in g.nodes:
            assert g.level[v] <= 1
        for s in seeds:
            assert g.level[s] == 0

    def test_monotone_growth_with_depth(self, rio_bundle):
        seeds = [[cand("e:Copacabana"), cand("e:Barack_Obama")]]
        previous = set()
        for depth in range(4):
            g = build_graph(seeds, rio_bundle.graph, depth)
            assert previous <= g.nodes
            previous = g.nodes

    def test_mention_flags(self):
        g = build_graph(
            [[cand("A", mention=0)], [cand("A", mention=1), cand("B", mention=1)]],
            {},
            depth=0,
        )
        assert g.candidate_mentions == {"A": {0, 1}, "B": {1}}


class TestRunHits:
    def test_two_targets(self):
        g = graph_of("ABC", [("A", "B"), ("A", "C")])
        scores = run_hits(g, iterations=20)
        assert scores["B"].authority == pytest.approx(0.5)
        assert scores["C"].authority == pytest.approx(0.5)
        assert scores["A"].hub == pytest.approx(1.0)
        assert scores["A"].authority == pytest.approx(0.0)

    def test_edgeless_graph_uniform(self):
        g = graph_of("ABC", [])
        scores = run_hits(g, iterations=5)
        for v in "ABC":
            assert scores[v].authority == pytest.approx(1 / 3)
            assert scores[v].hub == pytest.approx(1 / 3)

    def test_two_cycle_symmetry(self):
        g = graph_of("AB", [("A", "B"), ("B", "A")])
        scores = run_hits(g, iterations=20)
        assert scores["A"].authority == pytest.approx(0.5)
        assert scores["B"].authority == pytest.approx(0.5)

    def test_normalization_every_iteration(self):
        g = graph_of("ABCD", [("A", "B"), ("B", "C"), ("C", "A")])
        for iterations in (1, 2, 3, 7):
            scores = run_hits(g, iterations)
            assert sum(s.authority for s in scores.values()) == pytest.approx(1.0)
            assert sum(s.hub for s in scores.values()) == pytest.approx(1.0)

    def test_matches_dense_oracle(self):
        rng = random.Random(42)
        for _ in range(50):
            n = rng.randint(2, 8)
            nodes = [f"n{i}" for i in range(n)]
            edges = {
                (u, v)
                for u in nodes
                for v in nodes
                if u != v and rng.random() < 0.3
            }
            g = graph_of(nodes, edges)
            scores = run_hits(g, iterations=100)
            auth_oracle, hub_oracle = dense_hits_oracle(nodes, edges, 100)
            for v in nodes:
                assert scores[v].authority == pytest.approx(auth_oracle[v], abs=1e-6)
                assert scores[v].hub == pytest.approx(hub_oracle[v], abs=1e-6)


class TestRunPagerank:
    def test_two_cycle(self):
        g = graph_of("AB", [("A", "B"), ("B", "A")])
        scores = run_pagerank(g, damping=0.85, iterations=50)
        assert scores["A"].pagerank == pytest.approx(0.5)
        assert scores["B"].pagerank == pytest.approx(0.5)

    def test_zero_damping_uniform(self):
        g = graph_of("ABCD", [("A", "B"), ("C", "D"), ("D", "A")])
        scores = run_pagerank(g, damping=0.0, iterations=10)
        for v in "ABCD":
            assert scores[v].pagerank == pytest.approx(0.25)

    def test_chain_matches_dense_solve(self):
        g = graph_of("ABC", [("A", "B"), ("A", "C"), ("B", "C")])
        scores = run_pagerank(g, damping=0.85, iterations=100)
        oracle = dense_pagerank_oracle(["A", "B", "C"], [("A", "B"), ("A", "C"), ("B", "C")], 0.85)
        for v in "ABC":
            assert scores[v].pagerank == pytest.approx(oracle[v], abs=1e-6)

    def test_sum_to_one_with_dangling(self):
        g = graph_of("ABC", [("A", "B")])
        scores = run_pagerank(g, damping=0.85, iterations=50)
        assert sum(s.pagerank for s in scores.values()) == pytest.approx(1.0, abs=1e-9)


class TestSelect:
    def setup_method(self):
        self.cfg = LinkerConfig(algorithm="hits")

    def test_argmax(self):
        g = graph_of("XY", [])
        scores = run_hits(g, 1)
        # hand-crafted scores
        scores["X"].authority = 0.4
        scores["Y"].authority = 0.1
        decisions = select(g, scores, [[cand("X"), cand("Y")]], self.cfg)
        assert decisions[0].chosen == "X"
        assert decisions[0].candidates_considered == 2

    def test_tie_lexicographic(self):
        g = graph_of(["e:A", "e:B"], [])
        scores = run_hits(g, 1)
        scores["e:A"].authority = 0.3
        scores["e:B"].authority = 0.3
        decisions = select(g, scores, [[cand("e:B"), cand("e:A")]], self.cfg)
        assert decisions[0].chosen == "e:A"

    def test_empty_candidates_nil(self):
        decisions = select(graph_of([], []), {}, [[]], self.cfg)
        assert decisions[0].chosen is None
        assert decisions[0].candidates_considered == 0

    def test_chosen_always_in_candidate_list(self, rio_bundle):
        from kblinker.candidates import generate_candidates
        from kblinker.documents import parse_entity_tagged_text

        doc = parse_entity_tagged_text(
            "<entity>Rio</entity> and <entity>Obama</entity> and <entity>Zzz</entity>"
        )
        cfg = LinkerConfig()
        cands = generate_candidates(doc, rio_bundle, cfg)
        g = build_graph(cands, rio_bundle.graph, cfg.depth)
        scores = run_hits(g, cfg.hits_iterations)
        decisions = select(g, scores, cands, cfg)
        for decision, per_mention in zip(decisions, cands):
            allowed = {c.entity for c in per_mention}
            if decision.chosen is None:
                assert allowed == set()
            else:
                assert decision.chosen in allowed

    def test_argmax_invariant_under_scaling(self):
        g = graph_of(["e:A", "e:B", "e:C"], [("e:A", "e:B"), ("e:C", "e:B"), ("e:B", "e:A")])
        scores = run_hits(g, 20)
        candidates = [[cand("e:A"), cand("e:B")], [cand("e:C"), cand("e:B")]]
        base = select(g, scores, candidates, self.cfg)
        for v in scores.values():
            v.authority *= 7.5
            v.hub *= 7.5
        scaled = select(g, scores, candidates, self.cfg)
        assert [d.chosen for d in base] == [d.chosen for d in scaled]

    def test_pagerank_field_used(self):
        cfg = LinkerConfig(algorithm="pagerank")
        g = graph_of(["e:A", "e:B"], [("e:A", "e:B")])
        scores = run_pagerank(g, 0.85, 20)
        decisions = select(g, scores, [[cand("e:A"), cand("e:B")]], cfg)
        assert decisions[0].chosen == "e:B"  # the pointed-to node outranks
