import random
import sys
from pathlib import Path

import pytest

from charnet.annotation import Mention, MentionKind, Token, build_document
from charnet.lexicon import Gender
from charnet.mentions import Character
from charnet.network import CharacterNetwork, NetworkNode

DATA = Path(__file__).parent / "data"
sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def data_dir():
    return DATA


def make_doc(sentences, paragraphs=None, mentions=(), source_id="doc"):
    """Document from a list of sentence lengths.

    ``paragraphs`` gives the paragraph id of each sentence (all 0 when
    omitted); ``mentions`` holds ``(start, end, cluster)`` triples.
    """
    paragraphs = paragraphs or [0] * len(sentences)
    tokens = []
    for sid, (length, pid) in enumerate(zip(sentences, paragraphs)):
        for _ in range(length):
            k = len(tokens)
            tokens.append(Token(k, sid, pid, f"w{k}", f"w{k}", "X"))
    ms = [Mention(s, e, MentionKind.PROPER, "PER", c, f"C{c}") for s, e, c in mentions]
    return build_document(tokens, ms, source_id)


def characters_of(doc):
    groups = {}
    for i, m in enumerate(doc.mentions):
        groups.setdefault(m.cluster_id, []).append(i)
    return [
        Character(cid, f"C{cid}", frozenset([f"C{cid}"]), tuple(idx), Gender.UNKNOWN)
        for cid, idx in sorted(groups.items())
    ]


def random_doc(rng, max_sentences=50, max_chars=6, nest=True):
    n_sent = rng.randint(1, max_sentences)
    lengths = [rng.randint(1, 12) for _ in range(n_sent)]
    paragraphs = []
    pid = 0
    for i in range(n_sent):
        if i and rng.random() < 0.3:
            pid += 1
        paragraphs.append(pid)
    n_chars = rng.randint(1, max_chars)
    mentions = []
    pos = 0
    for length in lengths:
        k = pos
        while k < pos + length:
            if rng.random() < 0.3:
                span = rng.choice([1, 1, 2, 3])
                end = min(k + span, pos + length) - 1
                cid = rng.randrange(n_chars)
                mentions.append((k, end, cid))
                if nest and end > k and rng.random() < 0.3:
                    mentions.append((end, end, rng.randrange(n_chars)))
                k = end + 1
            else:
                k += 1
        pos += length
    return make_doc(lengths, paragraphs, mentions)


def make_network(n, edges, label="g"):
    """Network over ids ``0..n-1`` from ``{(a, b): w}`` or an edge list."""
    if not isinstance(edges, dict):
        edges = {e: 1 for e in edges}
    nodes = tuple(
        NetworkNode(Character(i, f"N{i}", frozenset([f"N{i}"]), (0,), Gender.UNKNOWN), 1) for i in range(n)
    )
    norm = {(min(a, b), max(a, b)): w for (a, b), w in edges.items()}
    return CharacterNetwork(nodes, dict(sorted(norm.items())), (0, 0), label=label)


@pytest.fixture
def rng():
    return random.Random(20240611)
