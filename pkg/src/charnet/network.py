"""Co-occurrence networks over characters, whole-text or sliced.

A window is a stretch of text (a sentence, a paragraph, or ``width``
consecutive tokens); two characters co-occur in it when each has at least
one mention starting inside it.
"""

import enum
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations

from .errors import BoundsError

log = logging.getLogger(__name__)


class WindowMode(enum.Enum):
    SENTENCE = "sentence"
    PARAGRAPH = "paragraph"
    TOKEN_SLIDING = "token"


class CountScheme(enum.Enum):
    BINARY_PER_WINDOW = "binary"
    PAIR_PER_MENTION = "pairs"


@dataclass(frozen=True)
class WindowSpec:
    mode: WindowMode = WindowMode.SENTENCE
    width: "int | None" = None
    count_scheme: CountScheme = CountScheme.BINARY_PER_WINDOW

    def __post_init__(self):
        if self.mode is WindowMode.TOKEN_SLIDING:
            if self.width is None or self.width < 1:
                raise ValueError("sliding windows need a width >= 1")
        elif self.width is not None:
            raise ValueError(f"width only applies to sliding windows, not {self.mode.value}")

    @classmethod
    def parse(cls, text, count="binary"):
        """Build from CLI-style strings: ``sentence``, ``paragraph`` or ``token:<w>``."""
        scheme = CountScheme(count)
        if text.startswith("token:"):
            return cls(WindowMode.TOKEN_SLIDING, int(text.split(":", 1)[1]), scheme)
        return cls(WindowMode(text), None, scheme)

    def describe(self):
        mode = f"token:{self.width}" if self.mode is WindowMode.TOKEN_SLIDING else self.mode.value
        return f"{mode}/{self.count_scheme.value}"


@dataclass(frozen=True)
class SliceSpec:
    boundaries: tuple = (0.0, 1.0)
    alignment: str = "SENTENCE"
    cumulative: bool = False

    def __post_init__(self):
        b = tuple(float(x) for x in self.boundaries)
        object.__setattr__(self, "boundaries", b)
        if len(b) < 2 or b[0] != 0.0 or b[-1] != 1.0:
            raise ValueError("slice boundaries must start at 0 and end at 1")
        if any(y <= x for x, y in zip(b, b[1:])):
            raise ValueError("slice boundaries must be strictly increasing")
        if self.alignment != "SENTENCE":
            raise ValueError("only SENTENCE alignment is supported")


# beginning / end pairing: the middle half is discarded by the caller
BEGIN_END = SliceSpec((0.0, 0.25, 0.75, 1.0))


@dataclass(frozen=True)
class NetworkNode:
    character: object
    mention_count: int

    @property
    def id(self):
        return self.character.character_id

    @property
    def label(self):
        return self.character.canonical_name


@dataclass(frozen=True)
class CharacterNetwork:
    """Undirected weighted graph; ``edges`` maps ``(a, b)`` with ``a < b``."""

    nodes: tuple
    edges: dict
    scope: tuple
    window: WindowSpec = WindowSpec()
    label: str = "full"
    diagnostics: tuple = field(default=(), compare=False)

    def node_ids(self):
        return [n.id for n in self.nodes]

    def node(self, cid):
        for n in self.nodes:
            if n.id == cid:
                return n
        raise KeyError(cid)

    def neighbors(self):
        adj = {n.id: {} for n in self.nodes}
        for (a, b), w in self.edges.items():
            adj[a][b] = w
            adj[b][a] = w
        return adj

    def __len__(self):
        return len(self.nodes)


def _check_scope(doc, scope):
    start, end = scope
    if not (0 <= start <= end <= len(doc.tokens)):
        raise BoundsError(f"scope {scope} outside document of {len(doc.tokens)} tokens")


def _mention_starts(doc, char):
    """Start tokens of a character's mentions, outermost span only.

    A mention nested inside another mention of the same character is
    dropped so a title inside a longer name is not counted twice.
    """
    spans = sorted((doc.mentions[i].start_token, -doc.mentions[i].end_token) for i in char.mention_indices)
    starts = []
    reach = -1
    for s, neg_e in spans:
        if s <= reach:
            continue
        starts.append(s)
        reach = -neg_e
    return starts


def _windows(doc, window, start, end):
    if window.mode is WindowMode.SENTENCE:
        spans = doc.sentence_spans()
    elif window.mode is WindowMode.PARAGRAPH:
        spans = doc.paragraph_spans()
    else:
        return None
    out = []
    for s, e in spans:
        s, e = max(s, start), min(e, end)
        if s < e:
            out.append((s, e))
    return out


def _add(weights, present, scheme):
    for a, b in combinations(sorted(present), 2):
        if scheme is CountScheme.BINARY_PER_WINDOW:
            weights[(a, b)] += 1
        else:
            weights[(a, b)] += min(present[a], present[b])


def build_network(doc, chars, window=WindowSpec(), scope=None, label="full"):
    """Co-occurrence network of ``chars`` over the token range ``scope``.

    ``scope`` is a ``(start, end)`` half-open token range, the whole
    document by default.  Sliding windows step one token at a time over
    the scope; a scope no longer than the width is a single window.
    """
    if scope is None:
        scope = (0, len(doc.tokens))
    scope = tuple(scope)
    _check_scope(doc, scope)
    start, end = scope

    at_token = {}
    counts = Counter()
    for ch in chars:
        for s in _mention_starts(doc, ch):
            if start <= s < end:
                at_token.setdefault(s, []).append(ch.character_id)
                counts[ch.character_id] += 1

    weights = Counter()
    spans = _windows(doc, window, start, end)
    if spans is not None:
        for s, e in spans:
            present = Counter()
            for t in range(s, e):
                for cid in at_token.get(t, ()):
                    present[cid] += 1
            _add(weights, present, window.count_scheme)
    elif end > start:
        width = min(window.width, end - start)
        present = Counter()
        for t in range(start, start + width):
            for cid in at_token.get(t, ()):
                present[cid] += 1
        _add(weights, present, window.count_scheme)
        for p in range(start + 1, end - width + 1):
            for cid in at_token.get(p - 1, ()):
                present[cid] -= 1
                if not present[cid]:
                    del present[cid]
            for cid in at_token.get(p + width - 1, ()):
                present[cid] += 1
            _add(weights, present, window.count_scheme)

    nodes = tuple(
        NetworkNode(ch, counts[ch.character_id])
        for ch in sorted(chars, key=lambda c: c.character_id)
        if counts[ch.character_id]
    )
    edges = {pair: weights[pair] for pair in sorted(weights) if weights[pair] > 0}
    return CharacterNetwork(nodes, edges, scope, window, label)


def slice_bounds(doc, slices):
    """Token boundaries for ``slices``: floor of fraction × length, snapped
    forward to the next sentence start."""
    n = len(doc.tokens)
    starts = list(doc.sentence_starts)
    out = []
    for f in slices.boundaries:
        idx = min(n, math.floor(f * n))
        snapped = next((s for s in starts if s >= idx), n)
        out.append(snapped)
    return out


def slice_labels(count, drop_middle=False):
    if drop_middle and count >= 2:
        return ["begin"] + [None] * (count - 2) + ["end"]
    return [f"slice{i}" for i in range(count)]


def slice_networks(doc, chars, window=WindowSpec(), slices=BEGIN_END, drop_middle=False):
    """One network per consecutive boundary pair (``[0, b]`` when cumulative).

    With ``drop_middle`` only the first and last slices are returned,
    labelled ``begin`` and ``end``.
    """
    bounds = slice_bounds(doc, slices)
    labels = slice_labels(len(bounds) - 1, drop_middle)
    nets = []
    for i, label in enumerate(labels):
        if label is None:
            continue
        lo = 0 if slices.cumulative else bounds[i]
        hi = bounds[i + 1]
        if hi <= lo:
            msg = (
                f"slice {label} [{slices.boundaries[0 if slices.cumulative else i]}, "
                f"{slices.boundaries[i + 1]}) covers no sentence"
            )
            log.warning(msg)
            nets.append(CharacterNetwork((), {}, (lo, lo), window, label, (msg,)))
            continue
        nets.append(build_network(doc, chars, window, (lo, hi), label))
    return nets


def filter_network(net, min_edge_weight=0, min_mentions=0):
    """Drop light edges and rarely mentioned nodes (with their edges)."""
    if min_edge_weight < 0 or min_mentions < 0:
        raise ValueError("thresholds must be >= 0")
    nodes = tuple(n for n in net.nodes if n.mention_count >= min_mentions)
    keep = {n.id for n in nodes}
    edges = {
        pair: w for pair, w in net.edges.items()
        if w >= min_edge_weight and pair[0] in keep and pair[1] in keep
    }
    return CharacterNetwork(nodes, edges, net.scope, net.window, net.label, net.diagnostics)
