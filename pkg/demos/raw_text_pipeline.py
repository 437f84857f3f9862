"""Rule-based fallback on plain French text: mentions, clusters, network.

    python demos/raw_text_pipeline.py [text_file]

Without an argument the 30-sentence test text is used.
"""

import sys
from pathlib import Path

from charnet.mentions import fallback_characters
from charnet.metrics import importance
from charnet.network import WindowMode, WindowSpec, build_network
from charnet.segment import segment_text

DEFAULT_TEXT = Path(__file__).resolve().parent.parent / "tests" / "data" / "mini_boule.txt"


def main(path=DEFAULT_TEXT):
    path = Path(path)
    doc = segment_text(path.read_text(encoding="utf-8"), path.stem)
    annotated, chars = fallback_characters(doc)
    print(f"{len(doc.sentence_starts)} sentences, {len(annotated.mentions)} mentions, {len(chars)} characters")
    for ch in chars:
        surfaces = [annotated.mentions[i].text for i in ch.mention_indices]
        print(f"  {ch.canonical_name:<22} {ch.gender.name:<8} {surfaces}")
    for window in (WindowSpec(), WindowSpec(WindowMode.PARAGRAPH)):
        net = build_network(annotated, chars, window)
        names = {c.character_id: c.canonical_name for c in chars}
        scores = importance(net)
        top = ", ".join(f"{names[v]} {scores[v]:.2f}" for v in scores.ranking()[:4])
        print(f"{window.describe():>18}: {len(net.edges)} edges; top {top}")


if __name__ == "__main__":
    main(*sys.argv[1:2])
