"""Character co-occurrence networks from annotated or raw literary text."""

__version__ = "0.1.0"

from .annotation import (  # noqa: E402
    Document, Mention, MentionKind, Token, build_document, load_document, parse_entities, parse_tokens,
)
from .coref_eval import EvalReport, b_cubed, ceaf_e, evaluate, mean_f, muc, prf  # noqa: E402
from .errors import (  # noqa: E402
    AliasLookupError, AnnotationError, BoundsError, CharnetError, FormatError, SpanError, StructureError,
)
from .export import network_from_json, to_dot, to_gexf, to_graphml, to_json  # noqa: E402
from .lexicon import Gender, Lexicon, default_lexicon, load_lexicon  # noqa: E402
from .mentions import (  # noqa: E402
    Character, annotated_characters, detect_mentions, fallback_characters, merge_aliases,
    promote_characters, resolve_coreference,
)
from .metrics import (  # noqa: E402
    Measure, ScoreMap, betweenness_scores, connected_components, degree_scores, importance, pagerank_scores,
)
from .network import (  # noqa: E402
    BEGIN_END, CharacterNetwork, CountScheme, SliceSpec, WindowMode, WindowSpec, build_network,
    filter_network, slice_networks,
)
from .render import ColorScale, DEFAULT_SCALE, LayoutResult, layout_force_directed, render_svg  # noqa: E402
from .segment import segment_text  # noqa: E402
from .fixtures import fixture_paths, load_fixture  # noqa: E402
