"""Word lists driving the rule-based mention pipeline.

Lexicon files are INI-style: one ``[section]`` per list, ``key = value``
lines for maps and bare keys for sets::

    [honorifics]
    Mme = FEM
    [pronouns]
    elle = FEM SG
    [person_nouns]
    cocher

``determiners`` and ``function_words`` sections are optional; when absent
the built-in French lists are used.
"""

import configparser
import enum
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import FormatError


class Gender(enum.Enum):
    MASC = "MASC"
    FEM = "FEM"
    UNKNOWN = "UNKNOWN"

    def compatible(self, other):
        return self is Gender.UNKNOWN or other is Gender.UNKNOWN or self is other


class Number(enum.Enum):
    SG = "SG"
    PL = "PL"


# absorbed between capitalized tokens inside a proper name
PARTICLES = frozenset({"de", "du", "des", "d'", "d’", "la", "le"})

REQUIRED_SECTIONS = ("honorifics", "pronouns", "person_nouns")


@dataclass(frozen=True)
class Lexicon:
    honorifics: dict
    pronouns: dict
    person_nouns: frozenset
    determiners: dict = None
    function_words: frozenset = None

    def __post_init__(self):
        if not self.honorifics or not self.pronouns or not self.person_nouns:
            raise ValueError("honorifics, pronouns and person_nouns must be non-empty")
        default = None
        if self.determiners is None or self.function_words is None:
            default = default_lexicon()
        if self.determiners is None:
            object.__setattr__(self, "determiners", default.determiners)
        if self.function_words is None:
            object.__setattr__(self, "function_words", default.function_words)

    def honorific(self, surface):
        """Gender of an honorific, or None.  Case-sensitive."""
        return self.honorifics.get(surface)

    def pronoun(self, surface):
        """``(Gender, Number)`` for a pronoun, or None.  Case-insensitive."""
        return self.pronouns.get(surface.lower())

    def determiner(self, surface):
        return self.determiners.get(surface.lower())

    def is_person_noun(self, surface):
        return surface.lower() in self.person_nouns

    def is_function_word(self, surface):
        return surface.lower() in self.function_words


def _parse_gender(value, section, key):
    try:
        return Gender(value.strip().upper())
    except ValueError:
        raise FormatError(f"[{section}] {key}: unknown gender {value!r}")


def parse_lexicon(text, source=None):
    parser = configparser.ConfigParser(
        allow_no_value=True, delimiters=("=",), comment_prefixes=("#",), interpolation=None
    )
    parser.optionxform = str
    try:
        parser.read_string(text, source=str(source or "<lexicon>"))
    except configparser.Error as exc:
        raise FormatError(str(exc), source=source)
    for name in REQUIRED_SECTIONS:
        if not parser.has_section(name):
            raise FormatError(f"missing section [{name}]", source=source)

    honorifics = {k: _parse_gender(v or "", "honorifics", k) for k, v in parser.items("honorifics")}
    pronouns = {}
    for key, value in parser.items("pronouns"):
        parts = (value or "").split()
        if len(parts) != 2:
            raise FormatError(f"[pronouns] {key}: expected 'GENDER NUMBER', got {value!r}", source=source)
        try:
            number = Number(parts[1].upper())
        except ValueError:
            raise FormatError(f"[pronouns] {key}: unknown number {parts[1]!r}", source=source)
        pronouns[key.lower()] = (_parse_gender(parts[0], "pronouns", key), number)
    person_nouns = frozenset(k.lower() for k, _ in parser.items("person_nouns"))

    determiners = None
    if parser.has_section("determiners"):
        determiners = {
            k.lower(): _parse_gender(v or "UNKNOWN", "determiners", k)
            for k, v in parser.items("determiners")
        }
    function_words = None
    if parser.has_section("function_words"):
        function_words = frozenset(k.lower() for k, _ in parser.items("function_words"))
    try:
        return Lexicon(honorifics, pronouns, person_nouns, determiners, function_words)
    except ValueError as exc:
        raise FormatError(str(exc), source=source)


def load_lexicon(path):
    with open(path, encoding="utf-8") as fh:
        return parse_lexicon(fh.read(), source=path)


@lru_cache(maxsize=None)
def default_lexicon():
    """The French lexicon shipped with the package."""
    text = resources.files("charnet").joinpath("data/french.lexicon").read_text(encoding="utf-8")
    return parse_lexicon(text, source="french.lexicon")
