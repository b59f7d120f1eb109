"""Online step 2: the disambiguation graph and its ranking algorithms.

Candidates seed the graph at level 0, a breadth-first pass follows KB
out-edges for a bounded number of rounds, and every KB edge between two
included nodes is kept.  HITS or PageRank then scores the nodes and the
best-scoring candidate per mention wins.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .candidates import Candidate
from .config import LinkerConfig


@dataclass
class DisambiguationGraph:
    nodes: set[str] = field(default_factory=set)
    edges: set[tuple[str, str]] = field(default_factory=set)
    level: dict[str, int] = field(default_factory=dict)
    # Which mentions each candidate node belongs to.
    candidate_mentions: dict[str, set[int]] = field(default_factory=dict)


@dataclass
class NodeScore:
    hub: float = 0.0
    authority: float = 0.0
    pagerank: float = 0.0


@dataclass(frozen=True)
class LinkDecision:
    chosen: str | None
    score: float
    candidates_considered: int


def build_graph(
    candidates: list[list[Candidate]],
    kb_graph: dict[str, list[tuple[str, str]]],
    depth: int,
) -> DisambiguationGraph:
    """Depth-bounded BFS along out-edges, then the induced edge closure."""
    g = DisambiguationGraph()
    for per_mention in candidates:
        for cand in per_mention:
            g.nodes.add(cand.entity)
            g.level.setdefault(cand.entity, 0)
            g.candidate_mentions.setdefault(cand.entity, set()).add(cand.mention_index)

    successors = {u: sorted({t for _, t in targets}) for u, targets in kb_graph.items()}

    frontier = sorted(g.nodes)
    for round_no in range(1, depth + 1):
        next_frontier = []
        for u in frontier:
            for v in successors.get(u, ()):
                if v not in g.nodes:
                    g.nodes.add(v)
                    g.level[v] = round_no
                    next_frontier.append(v)
        frontier = next_frontier
        if not frontier:
            break

    for u in g.nodes:
        for v in successors.get(u, ()):
            if v in g.nodes:
                g.edges.add((u, v))
    return g


def _l1_normalize(vec: dict[str, float]) -> None:
    # A zero vector is left untouched so an edgeless graph keeps its
    # uniform initial scores.
    total = sum(vec.values())
    if total > 0.0:
        for k in vec:
            vec[k] /= total


def run_hits(g: DisambiguationGraph, iterations: int = 20) -> dict[str, NodeScore]:
    """Mutual-reinforcement scoring, L1-normalized every iteration."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    nodes = sorted(g.nodes)
    if not nodes:
        return {}
    hub = {v: 1.0 / len(nodes) for v in nodes}
    auth = {v: 1.0 / len(nodes) for v in nodes}
    in_edges: dict[str, list[str]] = {v: [] for v in nodes}
    out_edges: dict[str, list[str]] = {v: [] for v in nodes}
    for u, v in sorted(g.edges):
        in_edges[v].append(u)
        out_edges[u].append(v)

    for _ in range(iterations):
        new_auth = {v: sum(hub[u] for u in in_edges[v]) for v in nodes}
        if sum(new_auth.values()) > 0.0:
            auth = new_auth
            _l1_normalize(auth)
        new_hub = {u: sum(auth[v] for v in out_edges[u]) for u in nodes}
        if sum(new_hub.values()) > 0.0:
            hub = new_hub
            _l1_normalize(hub)

    return {v: NodeScore(hub=hub[v], authority=auth[v]) for v in nodes}


def run_pagerank(
    g: DisambiguationGraph, damping: float = 0.85, iterations: int = 50
) -> dict[str, NodeScore]:
    """Power iteration with uniform teleport; dangling mass spread uniformly."""
    if not 0.0 <= damping < 1.0:
        raise ValueError("damping must be in [0, 1)")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    nodes = sorted(g.nodes)
    if not nodes:
        return {}
    n = len(nodes)
    out_edges: dict[str, list[str]] = {v: [] for v in nodes}
    for u, v in sorted(g.edges):
        out_edges[u].append(v)

    rank = {v: 1.0 / n for v in nodes}
    base = (1.0 - damping) / n
    for _ in range(iterations):
        nxt = {v: 0.0 for v in nodes}
        dangling = 0.0
        for u in nodes:
            succ = out_edges[u]
            if not succ:
                dangling += rank[u]
                continue
            share = rank[u] / len(succ)
            for v in succ:
                nxt[v] += share
        spread = damping * dangling / n
        for v in nodes:
            nxt[v] = base + damping * nxt[v] + spread
        rank = nxt

    return {v: NodeScore(pagerank=rank[v]) for v in nodes}


def select(
    g: DisambiguationGraph,
    scores: dict[str, NodeScore],
    candidates: list[list[Candidate]],
    cfg: LinkerConfig,
) -> list[LinkDecision]:
    """Highest-scoring candidate per mention; NIL for empty candidate lists."""
    use_pagerank = cfg.algorithm == "pagerank"
    decisions = []
    for per_mention in candidates:
        if not per_mention:
            decisions.append(LinkDecision(chosen=None, score=0.0, candidates_considered=0))
            continue
        best_iri: str | None = None
        best_score = -1.0
        for cand in per_mention:
            node = scores.get(cand.entity)
            value = 0.0
            if node is not None:
                value = node.pagerank if use_pagerank else node.authority
            if value > best_score or (value == best_score and (best_iri is None or cand.entity < best_iri)):
                best_iri = cand.entity
                best_score = value
        decisions.append(
            LinkDecision(
                chosen=best_iri,
                score=best_score,
                candidates_considered=len(per_mention),
            )
        )
    return decisions
