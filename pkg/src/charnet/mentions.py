"""Rule-based mention detection, coreference and character promotion.

This is the fallback used when no precomputed annotations are available.
Everything here is deterministic: the same document and lexicon always
produce the same mentions, clusters and character ids.
"""

import logging
from collections import Counter
from dataclasses import dataclass, replace

from .annotation import Document, Mention, MentionKind
from .errors import AliasLookupError, FormatError
from .lexicon import PARTICLES, Gender, Number, default_lexicon

log = logging.getLogger(__name__)

DEFAULT_MAX_DISTANCE = 2


@dataclass(frozen=True)
class Character:
    character_id: int
    canonical_name: str
    aliases: frozenset
    mention_indices: tuple
    gender: Gender = Gender.UNKNOWN


def _capitalized(surface):
    return surface[:1].isalpha() and surface[:1].isupper()


def _name_like(surface, lex):
    return (
        _capitalized(surface)
        and lex.pronoun(surface) is None
        and lex.determiner(surface) is None
        and not lex.is_function_word(surface)
        and lex.honorific(surface) is None
    )


def _proper_end(tokens, i, end, lex):
    """Last token index of the proper-name run starting at ``i``, or None."""
    first = tokens[i].surface
    if lex.honorific(first) is None and not _name_like(first, lex):
        return None
    last = i
    has_name = _name_like(first, lex)
    k = i + 1
    while k < end:
        s = tokens[k].surface
        if _name_like(s, lex) or lex.honorific(s) is not None:
            has_name = has_name or _name_like(s, lex)
            last = k
        elif s not in PARTICLES:
            break
        k += 1
    return last if has_name else None


def detect_mentions(doc, lex=None):
    """Find PER mentions in ``doc`` with surface rules.

    Pronouns from the lexicon win over everything else, then
    determiner + person-noun bigrams (NOMINAL), then maximal runs of
    capitalized tokens with honorifics and inner particles absorbed
    (PROPER).  Mentions carry no cluster id.
    """
    lex = lex or default_lexicon()
    tokens = doc.tokens
    found = []
    for start, end in doc.sentence_spans():
        i = start
        while i < end:
            surface = tokens[i].surface
            if lex.pronoun(surface) is not None:
                found.append(Mention(i, i, MentionKind.PRONOUN, "PER", None, surface))
                i += 1
                continue
            if (
                lex.determiner(surface) is not None
                and i + 1 < end
                and lex.is_person_noun(tokens[i + 1].surface)
                # "la Comtesse de Bréville" is a name, not a nominal
                and not (lex.honorific(tokens[i + 1].surface) and _proper_end(tokens, i + 1, end, lex))
            ):
                found.append(Mention(i, i + 1, MentionKind.NOMINAL, "PER", None, doc.surface(i, i + 1)))
                i += 2
                continue
            last = _proper_end(tokens, i, end, lex)
            if last is not None:
                found.append(Mention(i, last, MentionKind.PROPER, "PER", None, doc.surface(i, last)))
                i = last + 1
                continue
            i += 1
    return found


def _split_honorifics(words, lex):
    """Return ``(gender, remaining_words)`` after stripping leading honorifics."""
    gender = None
    k = 0
    while k < len(words) and lex.honorific(words[k]) is not None:
        if gender is None:
            gender = lex.honorific(words[k])
        k += 1
    return gender, words[k:]


def normalize(text, lex=None):
    """Case-fold, drop leading honorifics and collapse whitespace."""
    lex = lex or default_lexicon()
    _, rest = _split_honorifics(text.split(), lex)
    return " ".join(rest).casefold()


def _name_tokens(norm):
    return frozenset(w for w in norm.split() if w not in PARTICLES)


def mention_honorific_gender(doc, mention, lex):
    """Gender marked by an honorific inside or just before a mention."""
    gender, _ = _split_honorifics(mention.text.split(), lex)
    if gender is None and mention.start_token > 0:
        prev = doc.tokens[mention.start_token - 1]
        same_sentence = prev.sentence_id == doc.tokens[mention.start_token].sentence_id
        if same_sentence:
            gender = lex.honorific(prev.surface)
    return gender or Gender.UNKNOWN


class _Cluster:
    __slots__ = ("cid", "gender", "names", "surfaces", "last")

    def __init__(self, cid, gender):
        self.cid = cid
        self.gender = gender
        self.names = []  # (normalized surface, name token set) of PROPER members
        self.surfaces = set()
        self.last = -1


def resolve_coreference(doc, mentions, lex=None, max_distance=DEFAULT_MAX_DISTANCE):
    """Cluster ``mentions`` (sorted by start token) with deterministic rules.

    Returns a dict mapping each mention's index to a dense cluster id;
    ids follow first-mention order.
    """
    lex = lex or default_lexicon()
    clusters = []
    owner = {}
    sentence = [doc.sentence_ordinal(m.start_token) for m in mentions]

    def new_cluster(gender):
        c = _Cluster(len(clusters), gender)
        clusters.append(c)
        return c

    def join(idx, c):
        owner[idx] = c
        c.last = idx

    def most_recent(candidates):
        return max(candidates, key=lambda c: c.last) if candidates else None

    nominal_seen = {}
    for idx, m in enumerate(mentions):
        if m.kind is MentionKind.PROPER:
            gender = mention_honorific_gender(doc, m, lex)
            norm = normalize(m.text, lex)
            names = _name_tokens(norm)
            same = [
                c for c in clusters
                if c.gender.compatible(gender) and any(n == norm for n, _ in c.names)
            ]
            # a bare "Loiseau" prefers the cluster that already used that exact form
            verbatim = [c for c in same if m.text.casefold() in c.surfaces]
            target = most_recent(verbatim or same)
            if target is None and names:
                target = most_recent([
                    c for c in clusters
                    if c.gender.compatible(gender)
                    and any(t and (names <= t or t <= names) for _, t in c.names)
                ])
            if target is None:
                target = new_cluster(gender)
            elif target.gender is Gender.UNKNOWN:
                target.gender = gender
            target.names.append((norm, names))
            target.surfaces.add(m.text.casefold())
            join(idx, target)

        elif m.kind is MentionKind.PRONOUN:
            gender, number = lex.pronoun(m.text) or (Gender.UNKNOWN, Number.SG)
            target = None
            if number is Number.SG:
                for j in range(idx - 1, -1, -1):
                    if sentence[idx] - sentence[j] > max_distance:
                        break
                    cand = mentions[j]
                    if cand.start_token >= m.start_token:
                        continue
                    if cand.kind is MentionKind.PRONOUN:
                        info = lex.pronoun(cand.text)
                        if info is not None and info[1] is Number.PL:
                            continue
                    if owner[j].gender.compatible(gender):
                        target = owner[j]
                        break
            if target is None:
                target = new_cluster(gender)
            join(idx, target)

        else:
            norm = " ".join(m.text.split()).casefold()
            target = nominal_seen.get(norm)
            if target is None:
                words = m.text.split()
                det = lex.determiner(words[0]) if words else None
                target = new_cluster(det or Gender.UNKNOWN)
                nominal_seen[norm] = target
            join(idx, target)

    return {idx: owner[idx].cid for idx in range(len(mentions))}


def attach_clusters(doc, mentions, assignment):
    """A new Document carrying ``mentions`` with their cluster ids set."""
    clustered = [replace(m, cluster_id=assignment.get(i)) for i, m in enumerate(mentions)]
    return Document(doc.tokens, tuple(clustered), doc.source_id)


def assignment_from_document(doc):
    """Cluster assignment for the PER mentions of an annotated document.

    Unclustered mentions become singleton clusters numbered after the
    largest annotated id.
    """
    ids = [m.cluster_id for m in doc.mentions if m.cluster_id is not None]
    fresh = max(ids) + 1 if ids else 0
    assignment = {}
    for i, m in enumerate(doc.mentions):
        if m.category != "PER":
            continue
        if m.cluster_id is None:
            assignment[i] = fresh
            fresh += 1
        else:
            assignment[i] = m.cluster_id
    return assignment


def _most_frequent(texts):
    counts = Counter(texts)
    first = {}
    for pos, t in enumerate(texts):
        first.setdefault(t, pos)
    return min(counts, key=lambda t: (-counts[t], first[t]))


def promote_characters(doc, assignment, lex=None, diagnostics=None):
    """Turn clusters of PER mentions into :class:`Character` objects.

    Clusters made only of pronouns are dropped (and reported in
    ``diagnostics`` when a list is given).  Characters are numbered in
    order of their first mention.
    """
    lex = lex or default_lexicon()
    groups = {}
    for idx in sorted(assignment):
        if doc.mentions[idx].category != "PER":
            continue
        groups.setdefault(assignment[idx], []).append(idx)

    chars = []
    for cid, members in sorted(groups.items(), key=lambda kv: kv[1][0]):
        mentions = [doc.mentions[i] for i in members]
        proper = [m.text for m in mentions if m.kind is MentionKind.PROPER]
        nominal = [m.text for m in mentions if m.kind is MentionKind.NOMINAL]
        if not proper and not nominal:
            msg = (
                f"dropped pronoun-only cluster {cid} "
                f"({len(members)} mention(s), first at token {mentions[0].start_token})"
            )
            log.info(msg)
            if diagnostics is not None:
                diagnostics.append(msg)
            continue
        votes = Counter()
        for m in mentions:
            if m.kind is MentionKind.PRONOUN:
                info = lex.pronoun(m.text)
                if info is not None:
                    votes[info[0]] += 1
            elif m.kind is MentionKind.PROPER:
                votes[mention_honorific_gender(doc, m, lex)] += 1
        votes.pop(Gender.UNKNOWN, None)
        if votes[Gender.MASC] > votes[Gender.FEM]:
            gender = Gender.MASC
        elif votes[Gender.FEM] > votes[Gender.MASC]:
            gender = Gender.FEM
        else:
            gender = Gender.UNKNOWN
        chars.append(Character(
            character_id=len(chars),
            canonical_name=_most_frequent(proper or nominal),
            aliases=frozenset(proper + nominal),
            mention_indices=tuple(members),
            gender=gender,
        ))
    return chars


def merge_aliases(chars, alias_table, diagnostics=None):
    """Union characters whose canonical names map to the same target.

    ``alias_table`` maps a canonical name to another canonical name.
    Names that match no character are ignored; a target that matches no
    character raises :class:`AliasLookupError`.  A target may also be a
    name merged away earlier, so applying a table twice changes nothing.
    """
    if not alias_table:
        return list(chars)
    by_name = {c.canonical_name: c for c in chars}
    # a name already merged away survives as an alias of exactly one character
    owners = {}
    for c in chars:
        for a in c.aliases:
            owners.setdefault(a, []).append(c)
    for a, cs in owners.items():
        if a not in by_name and len(cs) == 1:
            by_name[a] = cs[0]
    for source, target in alias_table.items():
        if target not in by_name:
            raise AliasLookupError(f"alias target {target!r} (for {source!r}) is not a character name")

    def resolve(name):
        seen = []
        while name in alias_table and alias_table[name] != name:
            if name in seen:
                raise AliasLookupError(f"alias cycle through {name!r}")
            seen.append(name)
            name = alias_table[name]
        return name

    merged = {}
    for c in chars:
        head = by_name[resolve(c.canonical_name)]
        merged.setdefault(head.canonical_name, []).append(c)

    out = []
    for target, group in merged.items():
        head = by_name[target]
        if len(group) == 1:
            out.append(group[0])
            continue
        for c in group:
            if c is not head:
                msg = f"merged {c.canonical_name!r} into {target!r}"
                log.info(msg)
                if diagnostics is not None:
                    diagnostics.append(msg)
        gender = head.gender
        if gender is Gender.UNKNOWN:
            known = {c.gender for c in group} - {Gender.UNKNOWN}
            if len(known) == 1:
                gender = known.pop()
        out.append(Character(
            character_id=head.character_id,
            canonical_name=head.canonical_name,
            aliases=frozenset().union(*(c.aliases for c in group)),
            mention_indices=tuple(sorted(i for c in group for i in c.mention_indices)),
            gender=gender,
        ))
    out.sort(key=lambda c: c.mention_indices[0])
    return [replace(c, character_id=k) for k, c in enumerate(out)]


def load_alias_table(path):
    """Read a two-column ``alias<TAB>canonical`` file.

    A first line reading ``alias<TAB>canonical`` is treated as a header;
    blank lines and ``#`` comments are skipped.
    """
    table = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cells = line.split("\t")
            if len(cells) != 2:
                raise FormatError("expected two tab-separated columns", line=lineno, source=path)
            if lineno == 1 and [c.strip().lower() for c in cells] == ["alias", "canonical"]:
                continue
            table[cells[0].strip()] = cells[1].strip()
    return table


def annotated_characters(doc, lex=None, diagnostics=None):
    """Characters from the COREF column of an annotated document."""
    return promote_characters(doc, assignment_from_document(doc), lex, diagnostics)


def fallback_characters(doc, lex=None, max_distance=DEFAULT_MAX_DISTANCE, diagnostics=None):
    """Run detection, coreference and promotion on an unannotated document.

    Returns the document with the detected mentions attached, plus the
    characters indexing into it.
    """
    lex = lex or default_lexicon()
    mentions = detect_mentions(doc, lex)
    assignment = resolve_coreference(doc, mentions, lex, max_distance)
    annotated = attach_clusters(doc, mentions, assignment)
    return annotated, promote_characters(annotated, assignment, lex, diagnostics)

