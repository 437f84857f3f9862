"""Plain-text tokenizer and sentence/paragraph splitter for fallback mode.

Paragraphs are separated by blank lines; sentences end at ``.``, ``!``,
``?`` or ``…`` tokens.  Honorific abbreviations such as ``M.`` stay
single tokens so they never close a sentence.
"""

import re

from .annotation import Document, Token
from .lexicon import default_lexicon

_ELISION = r"(?:[dDlLjJmMnNsStTcC]|[Qq]u)['’](?=\w)"
_WORD = r"\w+(?:[-‐]\w+)*"
_PUNCT = r"\.\.\.|…|[^\w\s]"
_PARAGRAPH_BREAK = re.compile(r"\n[ \t]*\n+")
SENTENCE_END = frozenset({".", "!", "?", "…", "..."})
CLOSERS = frozenset({"»", '"', ")", "”"})


def _token_pattern(abbreviations):
    abbrevs = sorted((re.escape(a) for a in abbreviations if a.endswith(".")), key=len, reverse=True)
    parts = [r"(?<!\w)(?:%s)" % "|".join(abbrevs)] if abbrevs else []
    parts += [_ELISION, _WORD, _PUNCT]
    return re.compile("|".join(parts))


def tokenize(text, lex=None):
    """Split ``text`` into surface strings."""
    lex = lex or default_lexicon()
    return _token_pattern(lex.honorifics).findall(text)


def segment_text(text, source_id="", lex=None):
    """Build a mention-less :class:`Document` from plain text."""
    lex = lex or default_lexicon()
    pattern = _token_pattern(lex.honorifics)
    tokens = []
    sentence = 0
    paragraphs = [p for p in _PARAGRAPH_BREAK.split(text) if p.strip()]
    for pid, para in enumerate(paragraphs):
        open_sentence = False
        for surface in pattern.findall(para):
            if (
                surface in CLOSERS and not open_sentence and tokens
                and tokens[-1].paragraph_id == pid and tokens[-1].surface in SENTENCE_END | CLOSERS
            ):
                # closing quote after a full stop belongs to the finished sentence
                tokens.append(Token(len(tokens), sentence - 1, pid, surface, surface, "_"))
                continue
            tokens.append(Token(len(tokens), sentence, pid, surface, surface, "_"))
            open_sentence = True
            if surface in SENTENCE_END:
                sentence += 1
                open_sentence = False
        if open_sentence:
            sentence += 1
    return Document(tuple(tokens), (), source_id)
