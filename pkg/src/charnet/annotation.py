"""Reading and writing BookNLP-style ``.tokens`` / ``.entities`` tables.

Both files are tab-separated with a header row.  Columns are matched by
header name, so extra BookNLP columns (byte offsets, dependency heads,
event flags...) are tolerated and ignored.
"""

import bisect
import enum
import io
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

from .errors import BoundsError, FormatError, SpanError, StructureError

TOKEN_COLUMNS = (
    "paragraph_ID",
    "sentence_ID",
    "token_ID_within_document",
    "word",
    "lemma",
    "POS_tag",
)
ENTITY_COLUMNS = ("COREF", "start_token", "end_token", "prop", "cat", "text")


class MentionKind(enum.Enum):
    PROPER = "PROP"
    NOMINAL = "NOM"
    PRONOUN = "PRON"

    @classmethod
    def from_code(cls, code):
        for kind in cls:
            if kind.value == code:
                return kind
        raise ValueError(code)


@dataclass(frozen=True)
class Token:
    doc_index: int
    sentence_id: int
    paragraph_id: int
    surface: str
    lemma: str
    pos: str


@dataclass(frozen=True)
class Mention:
    start_token: int
    end_token: int
    kind: MentionKind
    category: str
    cluster_id: "int | None"
    text: str

    @property
    def span(self):
        return (self.start_token, self.end_token)

    def contains(self, other):
        """True when ``other`` lies inside this span (or equals it)."""
        return self.start_token <= other.start_token and other.end_token <= self.end_token


def _mention_order(m):
    # outer spans before the spans they contain
    return (m.start_token, -m.end_token)


@dataclass(frozen=True)
class Document:
    tokens: tuple
    mentions: tuple = ()
    source_id: str = ""

    def __len__(self):
        return len(self.tokens)

    @cached_property
    def sentence_starts(self):
        """doc_index of the first token of every sentence, ascending."""
        starts = []
        prev = None
        for tok in self.tokens:
            if tok.sentence_id != prev:
                starts.append(tok.doc_index)
                prev = tok.sentence_id
        return tuple(starts)

    @cached_property
    def paragraph_starts(self):
        starts = []
        prev = None
        for tok in self.tokens:
            if tok.paragraph_id != prev:
                starts.append(tok.doc_index)
                prev = tok.paragraph_id
        return tuple(starts)

    def sentence_spans(self):
        """``[start, end)`` token ranges of sentences."""
        return _spans(self.sentence_starts, len(self.tokens))

    def paragraph_spans(self):
        return _spans(self.paragraph_starts, len(self.tokens))

    def sentence_ordinal(self, token_index):
        """0-based rank of the sentence holding ``token_index``."""
        return bisect.bisect_right(self.sentence_starts, token_index) - 1

    def surface(self, start, end):
        """Space-joined surface text of tokens ``start..end`` inclusive."""
        return " ".join(t.surface for t in self.tokens[start:end + 1])


def _spans(starts, n):
    return [(s, e) for s, e in zip(starts, list(starts[1:]) + [n])]


def _read_table(stream, required, source):
    """Yield ``(line_number, row_dict)`` for each non-blank data row."""
    if isinstance(stream, (str, bytes)):
        raise TypeError("expected a text stream, not a string; wrap it in io.StringIO")
    lines = iter(stream)
    try:
        header_line = next(lines)
    except StopIteration:
        raise FormatError("empty file, header row expected", line=1, source=source)
    header = header_line.rstrip("\r\n").lstrip("﻿").split("\t")
    positions = {}
    for name in required:
        if name not in header:
            raise FormatError(f"missing required column {name!r}", line=1, source=source)
        positions[name] = header.index(name)
    width = max(positions.values()) + 1
    for lineno, raw in enumerate(lines, start=2):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) < width:
            raise FormatError(
                f"expected at least {width} fields, found {len(cells)}", line=lineno, source=source
            )
        yield lineno, {name: cells[pos] for name, pos in positions.items()}


def _int(value, column, lineno, source):
    try:
        return int(value.strip())
    except ValueError:
        raise FormatError(f"column {column!r}: {value!r} is not an integer", line=lineno, source=source)


def parse_tokens(stream, source=None):
    """Parse a ``.tokens`` table into a list of :class:`Token`.

    Raises :class:`FormatError` for missing columns or non-integer ids and
    :class:`StructureError` when ids are not contiguous or sentence and
    paragraph ids run backwards.
    """
    tokens = []
    prev = None
    sentence_paragraph = {}
    for lineno, row in _read_table(stream, TOKEN_COLUMNS, source):
        idx = _int(row["token_ID_within_document"], "token_ID_within_document", lineno, source)
        sid = _int(row["sentence_ID"], "sentence_ID", lineno, source)
        pid = _int(row["paragraph_ID"], "paragraph_ID", lineno, source)
        if idx != len(tokens):
            raise StructureError(
                f"token id {idx} out of sequence (expected {len(tokens)})", line=lineno, source=source
            )
        if prev is not None:
            if sid < prev.sentence_id:
                raise StructureError(
                    f"sentence id decreases from {prev.sentence_id} to {sid}", line=lineno, source=source
                )
            if pid < prev.paragraph_id:
                raise StructureError(
                    f"paragraph id decreases from {prev.paragraph_id} to {pid}", line=lineno, source=source
                )
        if sentence_paragraph.setdefault(sid, pid) != pid:
            raise StructureError(
                f"sentence {sid} spans paragraphs {sentence_paragraph[sid]} and {pid}",
                line=lineno, source=source,
            )
        tok = Token(idx, sid, pid, row["word"], row["lemma"], row["POS_tag"])
        tokens.append(tok)
        prev = tok
    return tokens


def parse_entities(stream, n_tokens=None, source=None):
    """Parse an ``.entities`` table into mentions sorted by start token.

    When ``n_tokens`` is given, spans are bounds-checked against it.  An
    empty or ``-`` COREF cell yields an unclustered mention.
    """
    mentions = []
    for lineno, row in _read_table(stream, ENTITY_COLUMNS, source):
        start = _int(row["start_token"], "start_token", lineno, source)
        end = _int(row["end_token"], "end_token", lineno, source)
        if start > end:
            raise SpanError(f"start_token {start} > end_token {end}", line=lineno, source=source)
        if start < 0 or (n_tokens is not None and end >= n_tokens):
            raise BoundsError(
                f"span {start}..{end} outside document of {n_tokens} tokens", line=lineno, source=source
            )
        try:
            kind = MentionKind.from_code(row["prop"].strip())
        except ValueError:
            raise FormatError(f"unknown prop value {row['prop']!r}", line=lineno, source=source)
        coref = row["COREF"].strip()
        cluster = None if coref in ("", "-") else _int(coref, "COREF", lineno, source)
        mentions.append(Mention(start, end, kind, row["cat"].strip(), cluster, row["text"]))
    mentions.sort(key=_mention_order)
    return mentions


def build_document(tokens, mentions, source_id=""):
    """Cross-validate tokens and mentions and freeze them into a Document."""
    tokens = tuple(tokens)
    mentions = tuple(sorted(mentions, key=_mention_order))
    n = len(tokens)
    for m in mentions:
        if m.start_token > m.end_token:
            raise SpanError(f"mention {m.text!r} has start {m.start_token} > end {m.end_token}")
        if m.start_token < 0 or m.end_token >= n:
            raise BoundsError(f"mention {m.text!r} {m.span} outside document of {n} tokens")
        if tokens[m.start_token].sentence_id != tokens[m.end_token].sentence_id:
            raise StructureError(
                f"mention {m.text!r} {m.span} crosses sentences "
                f"{tokens[m.start_token].sentence_id} and {tokens[m.end_token].sentence_id}"
            )
    # overlaps must nest strictly; sorted order puts the outer span first
    open_spans = []
    for m in mentions:
        while open_spans and open_spans[-1].end_token < m.start_token:
            open_spans.pop()
        if open_spans:
            outer = open_spans[-1]
            if outer.span == m.span or not outer.contains(m):
                raise StructureError(
                    f"mention {m.text!r} {m.span} overlaps {outer.text!r} {outer.span} without nesting"
                )
        open_spans.append(m)
    return Document(tokens, mentions, source_id)


def write_tokens(doc, stream):
    stream.write("\t".join(TOKEN_COLUMNS) + "\n")
    for t in doc.tokens:
        stream.write(f"{t.paragraph_id}\t{t.sentence_id}\t{t.doc_index}\t{t.surface}\t{t.lemma}\t{t.pos}\n")


def write_entities(doc, stream):
    stream.write("\t".join(ENTITY_COLUMNS) + "\n")
    for m in doc.mentions:
        coref = "" if m.cluster_id is None else str(m.cluster_id)
        stream.write(f"{coref}\t{m.start_token}\t{m.end_token}\t{m.kind.value}\t{m.category}\t{m.text}\n")


def load_document(tokens_path, entities_path=None, source_id=None):
    """Read a ``.tokens`` file and optional ``.entities`` file from disk."""
    tokens_path = Path(tokens_path)
    if source_id is None:
        source_id = tokens_path.name.split(".")[0]
    with open(tokens_path, encoding="utf-8", newline="") as fh:
        tokens = parse_tokens(fh, source=tokens_path)
    mentions = []
    if entities_path is not None:
        entities_path = Path(entities_path)
        with open(entities_path, encoding="utf-8", newline="") as fh:
            mentions = parse_entities(fh, n_tokens=len(tokens), source=entities_path)
    return build_document(tokens, mentions, source_id)


def dumps_document(doc):
    """Return the ``(tokens_text, entities_text)`` pair for ``doc``."""
    tok, ent = io.StringIO(), io.StringIO()
    write_tokens(doc, tok)
    write_entities(doc, ent)
    return tok.getvalue(), ent.getvalue()
