import random

import pytest
from hypothesis import given, settings, strategies as st

from charnet.annotation import Mention, MentionKind
from charnet.errors import AliasLookupError
from charnet.lexicon import Gender, default_lexicon, parse_lexicon
from charnet.mentions import (
    Character, detect_mentions, fallback_characters, merge_aliases, promote_characters, resolve_coreference,
    attach_clusters,
)
from charnet.segment import segment_text

LEX = default_lexicon()


def detect(text):
    doc = segment_text(text)
    return doc, detect_mentions(doc, LEX)


def texts(mentions):
    return [(m.kind, m.text) for m in mentions]


def test_particles_absorbed():
    _, ms = detect("Boule de Suif partit.")
    assert texts(ms) == [(MentionKind.PROPER, "Boule de Suif")]


def test_sentence_initial_pronoun():
    _, ms = detect("Il partit. Elle resta.")
    assert texts(ms) == [(MentionKind.PRONOUN, "Il"), (MentionKind.PRONOUN, "Elle")]


def test_empty_document():
    doc = segment_text("")
    assert detect_mentions(doc, LEX) == []


def test_honorific_and_nominal():
    _, ms = detect("Mme Carré-Lamadon regarda le comte. La Comtesse de Bréville sourit.")
    assert texts(ms) == [
        (MentionKind.PROPER, "Mme Carré-Lamadon"),
        (MentionKind.NOMINAL, "le comte"),
        (MentionKind.PROPER, "Comtesse de Bréville"),
    ]
    assert all(m.category == "PER" and m.cluster_id is None for m in ms)


def test_function_word_not_a_name():
    _, ms = detect("Pendant le voyage, Cornudet dormait.")
    assert texts(ms) == [(MentionKind.PROPER, "Cornudet")]


def test_pronoun_links_to_name():
    doc, ms = detect("Loiseau entra. Il salua.")
    assert resolve_coreference(doc, ms, LEX, max_distance=1) == {0: 0, 1: 0}


def test_gender_conflict_blocks_merge():
    doc = segment_text("Mme Carré-Lamadon arriva. On attendait. On partit. M. Carré-Lamadon fuma.")
    surname = next(i for i, t in enumerate(doc.tokens) if t.surface == "Carré-Lamadon" and i > 3)
    ms = [
        Mention(0, 1, MentionKind.PROPER, "PER", None, "Mme Carré-Lamadon"),
        Mention(surname, surname, MentionKind.PROPER, "PER", None, "Carré-Lamadon"),
    ]
    assert doc.sentence_ordinal(surname) == 3
    assignment = resolve_coreference(doc, ms, LEX)
    assert assignment[0] != assignment[1]


def test_lonely_pronoun_singleton():
    doc, ms = detect("Elle pleurait.")
    assert resolve_coreference(doc, ms, LEX) == {0: 0}


def test_subset_rule():
    doc, ms = detect("Le Comte Hubert de Bréville monta. Bréville salua.")
    assert [m.text for m in ms] == ["Comte Hubert de Bréville", "Bréville"]
    assert resolve_coreference(doc, ms, LEX) == {0: 0, 1: 0}


def test_plural_pronoun_singleton():
    doc, ms = detect("Loiseau arriva. Ils partirent.")
    a = resolve_coreference(doc, ms, LEX)
    assert a[0] != a[1]


def test_nominal_exact_match():
    doc, ms = detect("Le cocher cria. Le cocher fouetta. Un cocher passa.")
    a = resolve_coreference(doc, ms, LEX)
    assert a[0] == a[1] != a[2]


def test_pronoun_skips_incompatible_gender():
    doc, ms = detect("Mme Loiseau regardait M. Cornudet. Elle sourit.")
    a = resolve_coreference(doc, ms, LEX)
    assert a[2] == a[0] != a[1]
    # an unmarked name is compatible with either pronoun
    doc, ms = detect("Mme Loiseau regardait Cornudet. Elle sourit.")
    assert resolve_coreference(doc, ms, LEX)[2] == 1


def test_max_distance_zero():
    doc, ms = detect("Loiseau entra. Il salua. Loiseau rit et il partit.")
    a = resolve_coreference(doc, ms, LEX, max_distance=0)
    assert a[1] not in (a[0], a[2])
    assert a[3] == a[2] == a[0]


def test_max_distance_window():
    text = "Cornudet fumait. On roulait. On roulait encore. Il dormait."
    doc, ms = detect(text)
    assert resolve_coreference(doc, ms, LEX, max_distance=3)[1] == 0
    assert resolve_coreference(doc, ms, LEX, max_distance=2)[1] == 1


def test_cluster_ids_dense_first_mention_order():
    doc, ms = detect("Cornudet rit. Loiseau rit. Cornudet sortit. Elles partirent.")
    assert resolve_coreference(doc, ms, LEX) == {0: 0, 1: 1, 2: 0, 3: 2}


def _cluster_doc(spec):
    """Document whose mentions are ``(kind, text)`` in one long sentence."""
    words = []
    ms = []
    for kind, text in spec:
        start = len(words)
        words.extend(text.split())
        ms.append(Mention(start, len(words) - 1, kind, "PER", None, text))
    doc = segment_text(" ".join(words))
    return doc, ms


def test_canonical_most_frequent_proper():
    P, N, R = MentionKind.PROPER, MentionKind.NOMINAL, MentionKind.PRONOUN
    spec = [(P, "Élisabeth Rousset")] * 2 + [(P, "Boule de Suif")] * 12 + [(R, "elle")] * 30 + [(N, "la fille")]
    doc, ms = _cluster_doc(spec)
    (ch,) = promote_characters(attach_clusters(doc, ms, {}), dict.fromkeys(range(len(ms)), 0), LEX)
    assert ch.canonical_name == "Boule de Suif"
    assert ch.aliases == {"Élisabeth Rousset", "Boule de Suif", "la fille"}
    assert ch.gender is Gender.FEM
    assert ch.mention_indices == tuple(range(len(ms)))


def test_canonical_tie_goes_to_earliest():
    P = MentionKind.PROPER
    doc, ms = _cluster_doc([(P, "Rousset"), (P, "Boule"), (P, "Boule"), (P, "Rousset")])
    doc = attach_clusters(doc, ms, {})
    (ch,) = promote_characters(doc, dict.fromkeys(range(4), 0), LEX)
    assert ch.canonical_name == "Rousset"


def test_pronoun_only_cluster_dropped():
    R = MentionKind.PRONOUN
    doc, ms = _cluster_doc([(R, "il"), (R, "il")])
    diag = []
    doc = attach_clusters(doc, ms, {0: 0, 1: 0})
    assert promote_characters(doc, {0: 0, 1: 0}, LEX, diag) == []
    assert len(diag) == 1


def test_two_clusters_two_characters():
    P = MentionKind.PROPER
    doc, ms = _cluster_doc([(P, "Cornudet"), (P, "Loiseau"), (P, "Cornudet")])
    doc = attach_clusters(doc, ms, {})
    chars = promote_characters(doc, {0: 7, 1: 3, 2: 7}, LEX)
    assert [(c.character_id, c.canonical_name) for c in chars] == [(0, "Cornudet"), (1, "Loiseau")]


def _char(cid, name, indices):
    return Character(cid, name, frozenset([name]), tuple(indices))


def test_merge_aliases():
    chars = [_char(0, "Boule de Suif", [0, 2]), _char(1, "Élisabeth Rousset", [1])]
    diag = []
    (merged,) = merge_aliases(chars, {"Élisabeth Rousset": "Boule de Suif"}, diag)
    assert merged.canonical_name == "Boule de Suif"
    assert merged.mention_indices == (0, 1, 2)
    assert merged.aliases == {"Boule de Suif", "Élisabeth Rousset"}
    assert len(diag) == 1


def test_merge_empty_table():
    chars = [_char(0, "A", [0]), _char(1, "B", [1])]
    assert merge_aliases(chars, {}) == chars


def test_merge_unknown_target():
    with pytest.raises(AliasLookupError):
        merge_aliases([_char(0, "X", [0])], {"X": "Nobody"})
    with pytest.raises(LookupError):
        merge_aliases([_char(0, "X", [0])], {"X": "Nobody"})


def test_merge_renumbers_in_mention_order():
    chars = [_char(0, "A", [0]), _char(1, "B", [1]), _char(2, "C", [2])]
    out = merge_aliases(chars, {"A": "C"})
    assert [(c.character_id, c.canonical_name, c.mention_indices) for c in out] == [
        (0, "C", (0, 2)), (1, "B", (1,)),
    ]


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_merge_idempotent(data):
    names = [f"N{i}" for i in range(data.draw(st.integers(1, 6)))]
    chars = [_char(i, n, [i]) for i, n in enumerate(names)]
    # acyclic table: each name may point at a strictly earlier one
    table = {}
    for i, n in enumerate(names[1:], start=1):
        if data.draw(st.booleans()):
            table[n] = names[data.draw(st.integers(0, i - 1))]
    once = merge_aliases(chars, table)
    assert merge_aliases(once, table) == once


MINI_TEXT = (
    "M. Loiseau entra. Il regarda Mme Loiseau. Elle sourit. Boule de Suif attendait.\n\n"
    "Le comte salua Cornudet. Il rit. Ils partirent. La Comtesse de Bréville pleura."
)


def test_fallback_deterministic():
    runs = [fallback_characters(segment_text(MINI_TEXT, "t")) for _ in range(3)]
    assert all(r == runs[0] for r in runs)
    assert [c.canonical_name for c in runs[0][1]] == [
        "M. Loiseau", "Mme Loiseau", "Boule de Suif", "Le comte", "Cornudet", "Comtesse de Bréville",
    ]


def test_partition_property():
    rng = random.Random(3)
    words = ["Loiseau", "Cornudet", "il", "elle", "le", "comte", "Mme", "M.", "partit", "de", "Suif", "."]
    for _ in range(100):
        text = " ".join(rng.choice(words) for _ in range(rng.randint(0, 40)))
        diag = []
        doc, chars = fallback_characters(segment_text(text), diagnostics=diag)
        used = [i for c in chars for i in c.mention_indices]
        assert len(used) == len(set(used))
        for c in chars:
            assert c.canonical_name in c.aliases and c.mention_indices
        assigned = {m.cluster_id for i, m in enumerate(doc.mentions) if i not in set(used)}
        lost_clusters = len(assigned)
        assert lost_clusters == len(diag)
        for i, m in enumerate(doc.mentions):
            if i not in set(used):
                assert m.kind is MentionKind.PRONOUN


def test_custom_lexicon():
    lex = parse_lexicon(
        "[honorifics]\nSir = MASC\n[pronouns]\nhe = MASC SG\nthey = UNKNOWN PL\n[person_nouns]\nbutler\n"
        "[determiners]\nthe = UNKNOWN\n[function_words]\nthen\n"
    )
    doc = segment_text("Sir Alfred rang. Then the butler came. He bowed.", lex=lex)
    doc, chars = fallback_characters(doc, lex)
    assert [m.text for m in doc.mentions] == ["Sir Alfred", "the butler", "He"]
    assert [c.canonical_name for c in chars] == ["Sir Alfred", "the butler"]
    assert chars[1].mention_indices == (1, 2)
