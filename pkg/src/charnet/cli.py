"""Command-line interface: ``charnet extract | eval | render | metrics``.

Exit codes: 0 success, 1 input error (unreadable or malformed file),
2 configuration error (conflicting or invalid options).
"""

import argparse
import json
import logging
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .annotation import load_document, parse_entities, parse_tokens
from .coref_eval import evaluate
from .errors import CharnetError, NetworkSchemaError
from .export import WRITERS, network_from_json
from .lexicon import default_lexicon, load_lexicon
from .mentions import (
    DEFAULT_MAX_DISTANCE, annotated_characters, fallback_characters, load_alias_table, merge_aliases,
)
from .metrics import Measure, connected_components, importance
from .network import SliceSpec, WindowSpec, build_network, filter_network, slice_networks
from .render import DEFAULT_ITERATIONS, DEFAULT_SEED, layout_force_directed, render_svg
from .segment import segment_text

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

log = logging.getLogger("charnet")

EXIT_OK, EXIT_INPUT, EXIT_CONFIG = 0, 1, 2
OUTPUT_FORMATS = ("gexf", "graphml", "dot", "json", "svg")


class InputError(Exception):
    pass


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    tokens: list = field(default_factory=list)
    entities: list = field(default_factory=list)
    raw: list = field(default_factory=list)
    window: WindowSpec = WindowSpec()
    slices: "SliceSpec | None" = None
    drop_middle: bool = False
    measure: Measure = Measure.WEIGHTED_DEGREE
    min_edge_weight: int = 0
    min_mentions: int = 0
    out: Path = Path(".")
    formats: tuple = ("gexf",)
    seed: int = DEFAULT_SEED
    iterations: int = DEFAULT_ITERATIONS
    lexicon: "Path | None" = None
    aliases: "Path | None" = None
    max_distance: int = DEFAULT_MAX_DISTANCE
    jobs: int = 4

    @property
    def raw_mode(self):
        return bool(self.raw)


def _as_list(value):
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return [str(v) for v in value]
    return [str(value)]


def _csv(value):
    if isinstance(value, (list, tuple)):
        return [str(v).strip() for v in value]
    return [v.strip() for v in str(value).split(",") if v.strip()]


def build_config(args):
    """Merge ``--config`` file values with flags (flags win) and validate."""
    settings = {}
    if args.config:
        try:
            with open(args.config, "rb") as fh:
                settings = tomllib.load(fh)
        except OSError as exc:
            raise InputError(f"{args.config}: {exc.strerror}")
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{args.config}: {exc}")
        settings = {k.replace("-", "_"): v for k, v in settings.items()}
    for key, value in vars(args).items():
        if value is not None and key not in ("command", "func", "config", "verbose"):
            settings[key] = value

    unknown = set(settings) - set(RunConfig.__dataclass_fields__) - {"count", "cumulative"}
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(sorted(unknown))}")

    cfg = RunConfig()
    cfg.tokens = _as_list(settings.get("tokens"))
    cfg.entities = _as_list(settings.get("entities"))
    cfg.raw = _as_list(settings.get("raw"))
    if cfg.raw and (cfg.tokens or cfg.entities):
        raise ConfigError("choose one input mode: --raw or --tokens/--entities")
    if not cfg.raw:
        if not cfg.tokens:
            raise ConfigError("no input: give --tokens with --entities, or --raw")
        if len(cfg.entities) != len(cfg.tokens):
            raise ConfigError("annotated mode needs one --entities file per --tokens file")
    try:
        cfg.window = WindowSpec.parse(str(settings.get("window", "sentence")), str(settings.get("count", "binary")))
        cfg.measure = Measure(settings.get("measure", Measure.WEIGHTED_DEGREE.value))
    except ValueError as exc:
        raise ConfigError(f"invalid window/count/measure: {exc}")

    cumulative = bool(settings.get("cumulative", False))
    cfg.drop_middle = bool(settings.get("drop_middle", False))
    if "slices" in settings:
        try:
            bounds = [float(x) for x in _csv(settings["slices"])]
            cfg.slices = SliceSpec(tuple(bounds), cumulative=cumulative)
        except ValueError as exc:
            raise ConfigError(f"invalid --slices: {exc}")
    elif cumulative or cfg.drop_middle:
        raise ConfigError("--cumulative and --drop-middle need --slices")

    formats = tuple(_csv(settings.get("formats", "gexf")))
    bad = [f for f in formats if f not in OUTPUT_FORMATS]
    if bad or not formats:
        raise ConfigError(f"unknown output format(s) {bad}; choose from {', '.join(OUTPUT_FORMATS)}")
    cfg.formats = formats

    for name in ("min_edge_weight", "min_mentions", "seed", "iterations", "max_distance", "jobs"):
        if name in settings:
            try:
                setattr(cfg, name, int(settings[name]))
            except (TypeError, ValueError):
                raise ConfigError(f"{name} must be an integer")
    if cfg.min_edge_weight < 0 or cfg.min_mentions < 0 or cfg.max_distance < 0:
        raise ConfigError("thresholds and --max-distance must be >= 0")
    if cfg.iterations < 1 or cfg.jobs < 1:
        raise ConfigError("--iterations and --jobs must be >= 1")
    cfg.out = Path(settings.get("out", "."))
    cfg.lexicon = Path(settings["lexicon"]) if settings.get("lexicon") else None
    cfg.aliases = Path(settings["aliases"]) if settings.get("aliases") else None
    return cfg


def _load_input(cfg, lex, alias_table, k):
    diagnostics = []
    try:
        if cfg.raw_mode:
            path = Path(cfg.raw[k])
            text = path.read_text(encoding="utf-8")
            doc = segment_text(text, source_id=path.name.split(".")[0], lex=lex)
            doc, chars = fallback_characters(doc, lex, cfg.max_distance, diagnostics)
        else:
            doc = load_document(cfg.tokens[k], cfg.entities[k])
            chars = annotated_characters(doc, lex, diagnostics)
        chars = merge_aliases(chars, alias_table, diagnostics)
    except OSError as exc:
        raise InputError(f"{exc.filename}: {exc.strerror}")
    except UnicodeDecodeError as exc:
        raise InputError(f"{cfg.raw[k] if cfg.raw_mode else cfg.tokens[k]}: not UTF-8 ({exc.reason})")
    except CharnetError as exc:
        raise InputError(str(exc))
    for msg in diagnostics:
        log.info("%s: %s", doc.source_id, msg)
    return doc, chars


def _networks(cfg, doc, chars):
    if cfg.slices is None:
        nets = [build_network(doc, chars, cfg.window, label="full")]
    else:
        nets = slice_networks(doc, chars, cfg.window, cfg.slices, drop_middle=cfg.drop_middle)
    return [filter_network(n, cfg.min_edge_weight, cfg.min_mentions) for n in nets]


def _render_outputs(cfg, doc, nets):
    files = {}
    rows = []
    for net in nets:
        scores = importance(net, cfg.measure, normalize=True)
        for fmt in cfg.formats:
            name = f"{doc.source_id}.{net.label}.{fmt}"
            if fmt == "svg":
                layout = layout_force_directed(net, cfg.seed, cfg.iterations)
                files[name] = render_svg(net, layout, scores)
            else:
                files[name] = WRITERS[fmt](net, scores)
        labels = {n.id: n.label for n in net.nodes}
        top = [f"{labels[c]} ({scores[c]:.3f})" for c in scores.ranking()[:3]]
        rows.append((doc.source_id, net.label, len(net.nodes), len(net.edges),
                     len(connected_components(net)), "; ".join(top)))
    return files, rows


def write_atomically(out_dir, files):
    """Write every file or none: all temp files first, then rename."""
    out_dir.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=f".{name}.", suffix=".tmp")
            staged.append((tmp, out_dir / name))
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    except OSError:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)


def cmd_extract(args):
    cfg = build_config(args)
    try:
        lex = load_lexicon(cfg.lexicon) if cfg.lexicon else default_lexicon()
        alias_table = load_alias_table(cfg.aliases) if cfg.aliases else {}
    except OSError as exc:
        raise InputError(f"{exc.filename}: {exc.strerror}")
    except CharnetError as exc:
        raise InputError(str(exc))

    count = len(cfg.raw) if cfg.raw_mode else len(cfg.tokens)
    with ThreadPoolExecutor(max_workers=min(cfg.jobs, count)) as pool:
        loaded = list(pool.map(lambda k: _load_input(cfg, lex, alias_table, k), range(count)))

    files, rows = {}, []
    for doc, chars in loaded:
        f, r = _render_outputs(cfg, doc, _networks(cfg, doc, chars))
        files.update(f)
        rows.extend(r)
    try:
        write_atomically(cfg.out, files)
    except OSError as exc:
        raise ConfigError(f"cannot write to {cfg.out}: {exc.strerror}")

    header = ("source", "slice", "nodes", "edges", "components", "top-3 importance")
    widths = [max(len(str(r[i])) for r in [header, *rows]) for i in range(len(header))]
    for row in [header, *rows]:
        print("  ".join(str(v).ljust(w) for v, w in zip(row, widths)).rstrip())
    return EXIT_OK


def _read_entities(path, n_tokens=None):
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return parse_entities(fh, n_tokens=n_tokens, source=path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 ({exc.reason})")
    except CharnetError as exc:
        raise InputError(str(exc))


def cmd_eval(args):
    n_tokens = None
    if args.tokens:
        try:
            with open(args.tokens, encoding="utf-8", newline="") as fh:
                n_tokens = len(parse_tokens(fh, source=args.tokens))
        except OSError as exc:
            raise InputError(f"{args.tokens}: {exc.strerror}")
        except CharnetError as exc:
            raise InputError(str(exc))
    gold = _read_entities(args.gold, n_tokens)
    pred = _read_entities(args.pred, n_tokens)
    report = evaluate(gold, pred, category=None if args.all_categories else "PER")
    sys.stdout.write(report.to_tsv() if args.format == "tsv" else report.to_json())
    return EXIT_OK


def _load_network(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}")
    try:
        return network_from_json(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")
    except NetworkSchemaError as exc:
        raise InputError(f"{path}: {exc}")


def cmd_render(args):
    net, _ = _load_network(args.network)
    if args.iterations is not None and args.iterations < 1:
        raise ConfigError("--iterations must be >= 1")
    measure = Measure(args.measure or Measure.WEIGHTED_DEGREE.value)
    scores = importance(net, measure, normalize=True)
    layout = layout_force_directed(
        net,
        DEFAULT_SEED if args.seed is None else args.seed,
        DEFAULT_ITERATIONS if args.iterations is None else args.iterations,
    )
    svg = render_svg(net, layout, scores)
    target = Path(args.out) if args.out else Path(args.network).with_suffix(".svg")
    if target.is_dir():
        target = target / (Path(args.network).stem + ".svg")
    try:
        write_atomically(target.parent, {target.name: svg})
    except OSError as exc:
        raise ConfigError(f"cannot write {target}: {exc.strerror}")
    print(target)
    return EXIT_OK


def cmd_metrics(args):
    net, _ = _load_network(args.network)
    measure = Measure(args.measure or Measure.WEIGHTED_DEGREE.value)
    sm = importance(net, measure, normalize=not args.raw_scores)
    labels = {n.id: n.label for n in net.nodes}
    out = {
        "measure": measure.value,
        "normalized": sm.normalized,
        "components": connected_components(net),
        "scores": [{"id": c, "label": labels[c], "score": sm[c]} for c in sm.ranking()],
    }
    sys.stdout.write(json.dumps(out, ensure_ascii=False, indent=2) + "\n")
    return EXIT_OK


def make_parser():
    parser = argparse.ArgumentParser(prog="charnet", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)
    measures = [m.value for m in Measure]

    p = sub.add_parser("extract", help="build character networks from annotations or raw text")
    p.add_argument("--tokens", nargs="+", help="BookNLP .tokens file(s)")
    p.add_argument("--entities", nargs="+", help="BookNLP .entities file(s), one per --tokens")
    p.add_argument("--raw", nargs="+", metavar="TEXT", help="plain UTF-8 text file(s); rule-based fallback")
    p.add_argument("--config", help="TOML file of option=value pairs; flags win")
    p.add_argument("--window", help="sentence (default) | paragraph | token:<width>")
    p.add_argument("--count", choices=["binary", "pairs"], help="edge increment per window")
    p.add_argument("--slices", help="comma-separated fractions, e.g. 0,0.25,0.75,1")
    p.add_argument("--cumulative", action="store_true", default=None, help="each slice starts at 0")
    p.add_argument("--drop-middle", action="store_true", default=None,
                   help="keep only the first and last slices, labelled begin/end")
    p.add_argument("--measure", choices=measures)
    p.add_argument("--min-edge-weight", type=int)
    p.add_argument("--min-mentions", type=int)
    p.add_argument("--formats", help="comma-separated subset of " + ",".join(OUTPUT_FORMATS))
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int, help="layout iterations for svg output")
    p.add_argument("--out", help="output directory")
    p.add_argument("--lexicon", help="lexicon file for the fallback pipeline")
    p.add_argument("--aliases", help="alias<TAB>canonical table merging characters")
    p.add_argument("--max-distance", type=int, help="pronoun antecedent window in sentences")
    p.add_argument("--jobs", type=int, help="worker threads for multiple inputs")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("eval", help="score predicted coreference against gold")
    p.add_argument("gold", help="gold .entities file")
    p.add_argument("pred", help="predicted .entities file")
    p.add_argument("--tokens", help=".tokens file for bounds checking")
    p.add_argument("--format", choices=["json", "tsv"], default="json")
    p.add_argument("--all-categories", action="store_true", help="score every entity class, not only PER")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("render", help="draw a network JSON file as SVG")
    p.add_argument("network")
    p.add_argument("--out", help="output file or directory")
    p.add_argument("--seed", type=int)
    p.add_argument("--iterations", type=int)
    p.add_argument("--measure", choices=measures)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("metrics", help="dump importance scores of a network JSON file")
    p.add_argument("network")
    p.add_argument("--measure", choices=measures)
    p.add_argument("--raw-scores", action="store_true", help="do not normalize by the maximum")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"charnet {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConfigError as exc:
        print(f"charnet {args.command}: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
