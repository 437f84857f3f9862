"""Node importance scores and structural descriptors for networks."""

import enum
from collections import deque
from dataclasses import dataclass

import numpy as np


class Measure(enum.Enum):
    DEGREE = "degree"
    WEIGHTED_DEGREE = "weighted-degree"
    BETWEENNESS = "betweenness"
    PAGERANK = "pagerank"


DEFAULT_MEASURE = Measure.WEIGHTED_DEGREE


@dataclass(frozen=True)
class ScoreMap:
    scores: dict
    measure: Measure
    normalized: bool = False

    def __getitem__(self, cid):
        return self.scores[cid]

    def __len__(self):
        return len(self.scores)

    def ranking(self):
        """Node ids by decreasing score, ties broken by id."""
        return sorted(self.scores, key=lambda cid: (-self.scores[cid], cid))

    def argmax(self):
        ranked = self.ranking()
        return ranked[0] if ranked else None


def degree_scores(net, weighted=False):
    scores = {cid: 0.0 for cid in net.node_ids()}
    for (a, b), w in net.edges.items():
        inc = float(w) if weighted else 1.0
        scores[a] += inc
        scores[b] += inc
    measure = Measure.WEIGHTED_DEGREE if weighted else Measure.DEGREE
    return ScoreMap(scores, measure)


def betweenness_scores(net):
    """Brandes accumulation over hop-count shortest paths.

    Edge weights are ignored.  Each unordered endpoint pair is counted
    once, so a path A-B-C gives B a score of 1.
    """
    adj = {cid: sorted(nbrs) for cid, nbrs in net.neighbors().items()}
    bc = dict.fromkeys(adj, 0.0)
    for s in sorted(adj):
        stack = []
        preds = {v: [] for v in adj}
        sigma = dict.fromkeys(adj, 0)
        sigma[s] = 1
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(adj, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return ScoreMap({v: bc[v] / 2.0 for v in adj}, Measure.BETWEENNESS)


def pagerank_scores(net, damping=0.85, tolerance=1e-8, max_iterations=200):
    """Power iteration on the weighted undirected graph.

    Isolated nodes spread their mass uniformly.  Stops when the L1 change
    between iterates drops below ``tolerance``.
    """
    ids = net.node_ids()
    n = len(ids)
    if n == 0:
        return ScoreMap({}, Measure.PAGERANK)
    pos = {cid: k for k, cid in enumerate(ids)}
    W = np.zeros((n, n))
    for (a, b), w in net.edges.items():
        W[pos[a], pos[b]] += w
        W[pos[b], pos[a]] += w
    out = W.sum(axis=1)
    dangling = out == 0
    P = np.divide(W, out[:, None], out=np.zeros_like(W), where=~dangling[:, None])
    x = np.full(n, 1.0 / n)
    for _ in range(max_iterations):
        nxt = damping * (x @ P + x[dangling].sum() / n) + (1.0 - damping) / n
        nxt /= nxt.sum()
        change = np.abs(nxt - x).sum()
        x = nxt
        if change < tolerance:
            break
    return ScoreMap({cid: float(x[pos[cid]]) for cid in ids}, Measure.PAGERANK)


def connected_components(net):
    """Components as sorted lists of node ids, ordered by smallest id."""
    adj = net.neighbors()
    seen = set()
    parts = []
    for root in sorted(adj):
        if root in seen:
            continue
        seen.add(root)
        comp = []
        queue = deque([root])
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        parts.append(sorted(comp))
    return parts


def importance(net, measure=DEFAULT_MEASURE, normalize=True, **pagerank_options):
    """Score every node with ``measure``; optionally divide by the maximum.

    A network without edges carries no relational importance, so its
    normalized map is all zeros whatever the measure.
    """
    measure = Measure(measure)
    if measure is Measure.DEGREE:
        sm = degree_scores(net, weighted=False)
    elif measure is Measure.WEIGHTED_DEGREE:
        sm = degree_scores(net, weighted=True)
    elif measure is Measure.BETWEENNESS:
        sm = betweenness_scores(net)
    else:
        sm = pagerank_scores(net, **pagerank_options)
    if not normalize:
        return sm
    if not net.edges:
        return ScoreMap(dict.fromkeys(sm.scores, 0.0), measure, True)
    top = max(sm.scores.values(), default=0.0)
    if top <= 0:
        return ScoreMap(dict(sm.scores), measure, True)
    return ScoreMap({cid: v / top for cid, v in sm.scores.items()}, measure, True)
