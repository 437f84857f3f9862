"""Beginning and end networks of the bundled fixture, side by side.

Run from the repository root::

    python demos/fixture_begin_end.py [out_dir]
"""

import sys
from pathlib import Path

from charnet import load_fixture
from charnet.export import to_gexf
from charnet.mentions import annotated_characters
from charnet.metrics import Measure, connected_components, importance
from charnet.network import BEGIN_END, slice_networks
from charnet.render import layout_force_directed, render_svg


def describe(net, chars):
    names = {c.character_id: c.canonical_name for c in chars}
    print(f"== {net.label}: tokens {net.scope[0]}-{net.scope[1]}, "
          f"{len(net.nodes)} characters, {len(net.edges)} edges")
    for measure in Measure:
        scores = importance(net, measure)
        top = ", ".join(f"{names[v]} {scores[v]:.2f}" for v in scores.ranking()[:3])
        print(f"   {measure.value:>16}: {top}")
    parts = connected_components(net)
    print(f"   components: {[[names[v] for v in p] for p in parts]}")


def main(out_dir="demo_out"):
    doc = load_fixture()
    chars = annotated_characters(doc)
    out = Path(out_dir)
    out.mkdir(exist_ok=True)
    for net in slice_networks(doc, chars, slices=BEGIN_END, drop_middle=True):
        describe(net, chars)
        scores = importance(net)
        (out / f"{net.label}.gexf").write_text(to_gexf(net, scores), encoding="utf-8")
        (out / f"{net.label}.svg").write_text(render_svg(net, layout_force_directed(net), scores),
                                              encoding="utf-8")
    print(f"wrote begin/end GEXF and SVG to {out}/")


if __name__ == "__main__":
    main(*sys.argv[1:2])
