"""Serialize character networks to GEXF, GraphML, DOT and JSON.

Every writer emits nodes in ascending character id and edges in ascending
``(source, target)`` order so outputs are byte-stable.
"""

import json
import xml.etree.ElementTree as ET

import jsonschema

from .errors import NetworkSchemaError
from .lexicon import Gender
from .mentions import Character
from .network import CharacterNetwork, NetworkNode, WindowSpec

GEXF_NS = "http://gexf.net/1.3"
GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"
XSI_NS = "http://www.w3.org/2001/XMLSchema-instance"

FORMATS = ("gexf", "graphml", "dot", "json")


def _score_dict(scores):
    if scores is None:
        return None
    return dict(getattr(scores, "scores", scores))


def _xml_text(root):
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def _description(net):
    return f"label={net.label} scope={net.scope[0]}:{net.scope[1]} window={net.window.describe()}"


def to_gexf(net, scores=None):
    scores = _score_dict(scores)
    ET.register_namespace("", GEXF_NS)
    ET.register_namespace("xsi", XSI_NS)
    q = lambda tag: f"{{{GEXF_NS}}}{tag}"  # noqa: E731
    root = ET.Element(q("gexf"), {
        "version": "1.3",
        f"{{{XSI_NS}}}schemaLocation": f"{GEXF_NS} {GEXF_NS}/gexf.xsd",
    })
    meta = ET.SubElement(root, q("meta"))
    ET.SubElement(meta, q("creator")).text = "charnet"
    ET.SubElement(meta, q("description")).text = _description(net)
    graph = ET.SubElement(root, q("graph"), {"defaultedgetype": "undirected", "mode": "static"})
    attrs = ET.SubElement(graph, q("attributes"), {"class": "node", "mode": "static"})
    ET.SubElement(attrs, q("attribute"), {"id": "importance", "title": "importance", "type": "double"})
    ET.SubElement(attrs, q("attribute"), {"id": "mentions", "title": "mentions", "type": "integer"})
    nodes = ET.SubElement(graph, q("nodes"))
    for node in net.nodes:
        el = ET.SubElement(nodes, q("node"), {"id": str(node.id), "label": node.label})
        values = ET.SubElement(el, q("attvalues"))
        if scores is not None:
            ET.SubElement(values, q("attvalue"), {"for": "importance", "value": repr(float(scores[node.id]))})
        ET.SubElement(values, q("attvalue"), {"for": "mentions", "value": str(node.mention_count)})
    edges = ET.SubElement(graph, q("edges"))
    for k, ((a, b), w) in enumerate(sorted(net.edges.items())):
        ET.SubElement(edges, q("edge"), {"id": str(k), "source": str(a), "target": str(b), "weight": str(w)})
    return _xml_text(root)


def to_graphml(net, scores=None):
    scores = _score_dict(scores)
    ET.register_namespace("", GRAPHML_NS)
    ET.register_namespace("xsi", XSI_NS)
    q = lambda tag: f"{{{GRAPHML_NS}}}{tag}"  # noqa: E731
    root = ET.Element(q("graphml"), {
        f"{{{XSI_NS}}}schemaLocation":
            f"{GRAPHML_NS} {GRAPHML_NS}/1.0/graphml.xsd",
    })
    keys = [
        ("d0", "node", "label", "string"),
        ("d1", "node", "mentions", "int"),
        ("d2", "node", "importance", "double"),
        ("d3", "edge", "weight", "int"),
    ]
    for kid, domain, name, typ in keys:
        ET.SubElement(root, q("key"), {"id": kid, "for": domain, "attr.name": name, "attr.type": typ})
    graph = ET.SubElement(root, q("graph"), {"id": net.label, "edgedefault": "undirected"})
    ET.SubElement(graph, q("desc")).text = _description(net)
    for node in net.nodes:
        el = ET.SubElement(graph, q("node"), {"id": f"n{node.id}"})
        ET.SubElement(el, q("data"), {"key": "d0"}).text = node.label
        ET.SubElement(el, q("data"), {"key": "d1"}).text = str(node.mention_count)
        if scores is not None:
            ET.SubElement(el, q("data"), {"key": "d2"}).text = repr(float(scores[node.id]))
    for k, ((a, b), w) in enumerate(sorted(net.edges.items())):
        el = ET.SubElement(graph, q("edge"), {"id": f"e{k}", "source": f"n{a}", "target": f"n{b}"})
        ET.SubElement(el, q("data"), {"key": "d3"}).text = str(w)
    return _xml_text(root)


def _dot_quote(text):
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def to_dot(net, scores=None):
    scores = _score_dict(scores)
    lines = [f"graph {_dot_quote(net.label)} {{"]
    lines.append(f"  // {_description(net)}")
    for node in net.nodes:
        attrs = [f"label={_dot_quote(node.label)}", f"mentions={node.mention_count}"]
        if scores is not None:
            attrs.append(f"importance={repr(float(scores[node.id]))}")
        lines.append(f"  {node.id} [{', '.join(attrs)}];")
    for (a, b), w in sorted(net.edges.items()):
        lines.append(f"  {a} -- {b} [weight={w}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(net, scores=None):
    scores = _score_dict(scores)
    doc = {
        "label": net.label,
        "window": net.window.describe(),
        "scope": {"start": net.scope[0], "end": net.scope[1]},
        "nodes": [
            {
                "id": node.id,
                "label": node.label,
                "mentions": node.mention_count,
                "importance": None if scores is None else float(scores[node.id]),
            }
            for node in net.nodes
        ],
        "edges": [{"source": a, "target": b, "weight": w} for (a, b), w in sorted(net.edges.items())],
    }
    return json.dumps(doc, ensure_ascii=False, indent=2) + "\n"


NETWORK_SCHEMA = {
    "type": "object",
    "required": ["nodes", "edges", "scope"],
    "properties": {
        "label": {"type": "string"},
        "window": {"type": "string"},
        "scope": {
            "type": "object",
            "required": ["start", "end"],
            "properties": {"start": {"type": "integer", "minimum": 0}, "end": {"type": "integer", "minimum": 0}},
        },
        "nodes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "label", "mentions"],
                "properties": {
                    "id": {"type": "integer"},
                    "label": {"type": "string"},
                    "mentions": {"type": "integer", "minimum": 0},
                    "importance": {"type": ["number", "null"]},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source", "target", "weight"],
                "properties": {
                    "source": {"type": "integer"},
                    "target": {"type": "integer"},
                    "weight": {"type": "integer", "minimum": 1},
                },
            },
        },
    },
}


def network_from_json(text):
    """Load a network written by :func:`to_json`.

    Returns ``(network, scores)`` where ``scores`` is None unless every
    node carries an importance value.  Raises ``json.JSONDecodeError`` on
    malformed text and :class:`NetworkSchemaError` on schema violations.
    """
    data = json.loads(text)
    try:
        jsonschema.validate(data, NETWORK_SCHEMA)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise NetworkSchemaError(f"{path}: {exc.message}")
    ids = [n["id"] for n in data["nodes"]]
    if len(set(ids)) != len(ids):
        raise NetworkSchemaError("duplicate node id")
    known = set(ids)
    edges = {}
    for e in data["edges"]:
        a, b = e["source"], e["target"]
        if a not in known or b not in known:
            raise NetworkSchemaError(f"edge {a}-{b} references an unknown node")
        if a == b:
            raise NetworkSchemaError(f"self-loop on node {a}")
        pair = (min(a, b), max(a, b))
        if pair in edges:
            raise NetworkSchemaError(f"duplicate edge {pair[0]}-{pair[1]}")
        edges[pair] = e["weight"]
    nodes = tuple(
        NetworkNode(Character(n["id"], n["label"], frozenset([n["label"]]), (), Gender.UNKNOWN), n["mentions"])
        for n in sorted(data["nodes"], key=lambda n: n["id"])
    )
    window = WindowSpec()
    if "window" in data:
        mode, _, count = data["window"].partition("/")
        try:
            window = WindowSpec.parse(mode, count or "binary")
        except ValueError as exc:
            raise NetworkSchemaError(f"window: {exc}")
    scope = (data["scope"]["start"], data["scope"]["end"])
    net = CharacterNetwork(nodes, dict(sorted(edges.items())), scope, window, data.get("label", "full"))
    values = {n["id"]: n.get("importance") for n in data["nodes"]}
    scores = values if values and all(v is not None for v in values.values()) else None
    return net, scores


WRITERS = {"gexf": to_gexf, "graphml": to_graphml, "dot": to_dot, "json": to_json}
