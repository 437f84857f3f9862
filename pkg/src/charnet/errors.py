"""Exception hierarchy shared by the parsers and the pipeline."""


class CharnetError(Exception):
    """Base class for every error raised by charnet."""


class AnnotationError(CharnetError):
    """An annotation file or in-memory annotation is malformed.

    ``line`` is the 1-based line number of the offending row when the
    error comes from a file (the header is line 1).
    """

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += str(source)
        if line is not None:
            where += (":" if where else "line ") + str(line)
        super().__init__(f"{where}: {message}" if where else message)
        self.message = message


class FormatError(AnnotationError):
    """Missing column, bad integer, unknown code."""


class StructureError(AnnotationError):
    """Token ordering or mention placement violates document structure."""


class BoundsError(AnnotationError):
    """A span or scope falls outside the document."""


class SpanError(AnnotationError):
    """A span whose start lies after its end."""


class AliasLookupError(CharnetError, LookupError):
    """An alias table points at a canonical name that does not exist."""


class NetworkSchemaError(CharnetError):
    """A serialized network does not match the expected JSON schema."""
