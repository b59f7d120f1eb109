import dataclasses
import io

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kblinker.errors import CorruptBundle, VersionMismatch
from kblinker.indexing import (
    FORMAT_VERSION,
    IndexConfig,
    build_indices,
    compute_popularity,
    load_acronym_seeds,
    load_bundle,
    normalize_surface_form,
    persist_bundle,
    tokenize,
)
from kblinker.kb import load_kb


def dense_pagerank_oracle(nodes, edges, damping):
    """Solve (I - d P) x = (1-d)/N 1 with dangling columns teleporting."""
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


class TestNormalize:
    def test_lowercase(self):
        assert normalize_surface_form("New York City") == "new york city"

    def test_whitespace_collapse(self):
        assert normalize_surface_form("  Big\tApple ") == "big apple"

    def test_unicode_lowercase_preserves_diacritics(self):
        assert normalize_surface_form("Łódź") == "łódź"

    def test_edge_punctuation_stripped(self):
        assert normalize_surface_form("Smith, John") == "smith john"
        assert normalize_surface_form("(Paris)") == "paris"

    def test_inner_punctuation_kept(self):
        assert normalize_surface_form("Paris Saint-Germain") == "paris saint-germain"

    def test_empty_and_punct_only(self):
        assert normalize_surface_form("") == ""
        assert normalize_surface_form("--- ...") == ""

    @given(st.text(max_size=40))
    def test_total_and_idempotent(self, s):
        once = normalize_surface_form(s)
        assert normalize_surface_form(once) == once


def test_tokenize_word_chars():
    assert tokenize("Carnival, beaches & samba!") == ["carnival", "beaches", "samba"]


class TestPopularity:
    def test_two_node_cycle_pagerank(self):
        graph = {"A": [("p", "B")], "B": [("p", "A")]}
        scores = compute_popularity(graph, "pagerank", 0.85, 50)
        assert scores["A"] == pytest.approx(0.5, abs=1e-12)
        assert scores["B"] == pytest.approx(0.5, abs=1e-12)

    def test_star_frequency(self):
        graph = {"A": [("p", "B"), ("p", "C")]}
        scores = compute_popularity(graph, "frequency")
        assert scores == {"A": 0.0, "B": 1.0, "C": 1.0}

    def test_chain_matches_dense_solve(self):
        graph = {"A": [("p", "B"), ("p", "C")], "B": [("p", "C")]}
        scores = compute_popularity(graph, "pagerank", 0.85, 100)
        oracle = dense_pagerank_oracle(
            ["A", "B", "C"], [("A", "B"), ("A", "C"), ("B", "C")], 0.85
        )
        for v in oracle:
            assert scores[v] == pytest.approx(oracle[v], abs=1e-6)

    def test_pagerank_sums_to_one_and_positive(self, rio_kb):
        scores = compute_popularity(rio_kb.out_edges, "pagerank", 0.85, 50)
        assert sum(scores.values()) == pytest.approx(1.0, abs=1e-9)
        assert all(s > 0 for s in scores.values())

    def test_frequency_equals_independent_in_degree_scan(self, rio_kb):
        scores = compute_popularity(rio_kb.out_edges, "frequency")
        indeg = {}
        for _, targets in rio_kb.out_edges.items():
            for _, t in targets:
                indeg[t] = indeg.get(t, 0) + 1
        for v, s in scores.items():
            assert s == float(indeg.get(v, 0))
            assert s == int(s)

    def test_empty_graph(self):
        assert compute_popularity({}, "pagerank") == {}


class TestBuildIndices:
    def test_surface_contains_big_apple(self):
        lines = io.StringIO(
            '<e:NYC> <rdfs:label> "New York City"@en\n'
            '<e:NYC> <rdfs:label> "NY"@en\n'
            '<e:NYC> <rdfs:label> "Big Apple"@en\n'
        )
        kb = load_kb(lines, "en", "nyc")
        bundle = build_indices(kb)
        assert "e:NYC" in bundle.surface["big apple"]

    def test_empty_kb_empty_bundle(self):
        kb = load_kb(io.StringIO(""), "en", "empty")
        bundle = build_indices(kb)
        assert bundle.surface == {}
        assert bundle.persons == {}
        assert bundle.rare == {}
        assert bundle.acronyms == {}
        assert bundle.context.postings == {}
        assert bundle.popularity == {}

    def test_surface_completeness_for_non_redirects(self, rio_kb, rio_bundle):
        for iri, rec in rio_kb.entities.items():
            if rec.redirect_to is not None:
                continue
            for label in rec.alt_labels:
                key = normalize_surface_form(label)
                assert iri in rio_bundle.surface[key]

    def test_redirect_labels_feed_rare_index(self, rio_bundle):
        assert rio_bundle.rare["cidade maravilhosa"] == {"e:Rio_city"}
        assert "cidade maravilhosa" not in rio_bundle.surface

    def test_disambiguation_members_in_rare_index(self, rio_bundle):
        assert rio_bundle.rare["rio"] >= {"e:Rio_city", "e:Estado_Rio", "e:Rio_Grande"}

    def test_person_name_variants(self, rio_bundle):
        assert rio_bundle.persons["obama"] == {"e:Barack_Obama", "e:Michelle_Obama"}
        assert rio_bundle.persons["obama barack"] == {"e:Barack_Obama"}
        assert rio_bundle.persons["barack o"] == {"e:Barack_Obama"}
        # non-person entities contribute nothing
        assert "brazil" not in rio_bundle.persons

    def test_acronym_harvested_from_initials(self, rio_bundle):
        assert rio_bundle.acronyms["US"] == {"United States"}

    def test_acronym_seed_file(self, psg_bundle):
        assert psg_bundle.acronyms["PSG"] == {"Paris Saint-Germain"}

    def test_bad_seed_file_rejected(self, tmp_path):
        seed = tmp_path / "acronyms.tsv"
        seed.write_text("toolongacronym\tNope\n", encoding="utf-8")
        from kblinker.errors import InvalidValue

        with pytest.raises(InvalidValue):
            load_acronym_seeds(seed)

    def test_context_postings(self, rio_bundle):
        assert rio_bundle.context.postings["carnival"]["e:Rio_city"] == 1
        assert rio_bundle.context.postings["beach"]["e:Rio_city"] == 1
        assert "e:Estado_Rio" not in rio_bundle.context.postings["beach"]
        assert "e:Estado_Rio" in rio_bundle.context.postings["carnival"]

    def test_types_recorded(self, rio_bundle):
        assert rio_bundle.types["e:Rio_city"] == {"dbo:Place"}
        assert rio_bundle.types["e:Barack_Obama"] == {"foaf:Person"}

    def test_deterministic(self, rio_kb):
        a = build_indices(rio_kb, IndexConfig())
        b = build_indices(rio_kb, IndexConfig())
        a_meta = dataclasses.replace(a.meta, built_at="")
        b_meta = dataclasses.replace(b.meta, built_at="")
        assert dataclasses.replace(a, meta=a_meta) == dataclasses.replace(b, meta=b_meta)

    def test_every_indexed_iri_is_known(self, rio_kb, rio_bundle):
        known = set(rio_kb.entities) | set(rio_bundle.graph)
        for index in (rio_bundle.surface, rio_bundle.persons, rio_bundle.rare):
            for iris in index.values():
                assert iris <= known
        for entry in rio_bundle.context.postings.values():
            assert set(entry) <= known
        assert set(rio_bundle.popularity) <= known


class TestPersistence:
    def test_round_trip_identity(self, rio_bundle, tmp_path):
        persist_bundle(rio_bundle, tmp_path / "b")
        assert load_bundle(tmp_path / "b") == rio_bundle

    def test_psg_round_trip(self, psg_bundle, tmp_path):
        persist_bundle(psg_bundle, tmp_path / "b")
        assert load_bundle(tmp_path / "b") == psg_bundle

    def test_file_inventory(self, rio_bundle, tmp_path):
        persist_bundle(rio_bundle, tmp_path / "b")
        names = sorted(p.name for p in (tmp_path / "b").iterdir())
        assert names == [
            "acronyms.idx",
            "context.idx",
            "graph.idx",
            "meta.txt",
            "persons.idx",
            "popularity.idx",
            "rare.idx",
            "redirects.idx",
            "surface.idx",
            "types.idx",
        ]

    def test_empty_directory_is_corrupt(self, tmp_path):
        with pytest.raises(CorruptBundle):
            load_bundle(tmp_path)

    def test_version_gate(self, rio_bundle, tmp_path):
        persist_bundle(rio_bundle, tmp_path / "b")
        meta = tmp_path / "b" / "meta.txt"
        text = meta.read_text(encoding="utf-8").replace(
            f"format_version\t{FORMAT_VERSION}", f"format_version\t{FORMAT_VERSION + 1}"
        )
        meta.write_text(text, encoding="utf-8")
        with pytest.raises(VersionMismatch):
            load_bundle(tmp_path / "b")

    def test_keys_sorted_on_disk(self, rio_bundle, tmp_path):
        persist_bundle(rio_bundle, tmp_path / "b")
        for name in ("surface.idx", "graph.idx", "popularity.idx"):
            keys = [
                line.split("\t", 1)[0]
                for line in (tmp_path / "b" / name).read_text(encoding="utf-8").splitlines()
            ]
            assert keys == sorted(keys)

    def test_deterministic_bytes(self, rio_bundle, tmp_path):
        persist_bundle(rio_bundle, tmp_path / "a")
        persist_bundle(rio_bundle, tmp_path / "b")
        for name in ("surface.idx", "graph.idx", "context.idx"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestRedirectChains:
    def test_chain_labels_attach_to_final_target(self):
        import io

        from kblinker.kb import load_kb

        kb = load_kb(
            io.StringIO(
                '<e:A> <rdfs:label> "Old Name"\n'
                "<e:A> <dbo:wikiPageRedirects> <e:B>\n"
                "<e:B> <dbo:wikiPageRedirects> <e:C>\n"
                '<e:C> <rdfs:label> "New Name"\n'
            ),
            "en",
            "chain",
        )
        bundle = build_indices(kb)
        assert bundle.rare["old name"] == {"e:C"}
        assert bundle.surface == {"new name": {"e:C"}}
        assert bundle.redirects == {"e:A": "e:B", "e:B": "e:C"}
