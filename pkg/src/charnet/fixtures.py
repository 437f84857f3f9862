"""Bundled sample data: an annotated fixture shaped like a short novella."""

from importlib import resources

from .annotation import load_document


def fixture_paths():
    """``(tokens_path, entities_path)`` of the bundled fixture."""
    base = resources.files("charnet") / "data"
    return str(base / "boule_de_suif.tokens"), str(base / "boule_de_suif.entities")


def load_fixture():
    tokens, entities = fixture_paths()
    return load_document(tokens, entities)
