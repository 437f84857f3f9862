"""Convert bracket markup into BookNLP-style .tokens/.entities files.

Markup: one sentence per line, blank line between paragraphs, tokens
separated by spaces, mentions written ``[surface words|cluster|KIND]``
where KIND is PROP, NOM or PRON.  Lines starting with ``#`` are skipped.

    python tools/markup_to_booknlp.py fixture.markup out/prefix
"""

import re
import sys

MENTION = re.compile(r"\[([^\]|]+)\|(-?\d*)\|(PROP|NOM|PRON)\]")


def convert(text):
    tokens, entities = [], []
    sentence = paragraph = 0
    in_paragraph = False
    for line in text.splitlines():
        if line.startswith("#"):
            continue
        if not line.strip():
            if in_paragraph:
                paragraph += 1
                in_paragraph = False
            continue
        in_paragraph = True
        pos = 0
        for m in MENTION.finditer(line):
            for w in line[pos:m.start()].split():
                tokens.append((paragraph, sentence, w))
            words = m.group(1).split()
            start = len(tokens)
            for w in words:
                tokens.append((paragraph, sentence, w))
            entities.append((m.group(2), start, len(tokens) - 1, m.group(3), "PER", " ".join(words)))
            pos = m.end()
        for w in line[pos:].split():
            tokens.append((paragraph, sentence, w))
        sentence += 1
    tok_lines = ["paragraph_ID\tsentence_ID\ttoken_ID_within_document\tword\tlemma\tPOS_tag"]
    for i, (p, s, w) in enumerate(tokens):
        tok_lines.append(f"{p}\t{s}\t{i}\t{w}\t{w.lower()}\t{'PUNCT' if not w[0].isalnum() else 'X'}")
    ent_lines = ["COREF\tstart_token\tend_token\tprop\tcat\ttext"]
    for e in sorted(entities, key=lambda e: (e[1], -e[2])):
        ent_lines.append("\t".join(str(x) for x in e))
    return "\n".join(tok_lines) + "\n", "\n".join(ent_lines) + "\n"


if __name__ == "__main__":
    src, prefix = sys.argv[1], sys.argv[2]
    with open(src, encoding="utf-8") as fh:
        tok, ent = convert(fh.read())
    with open(prefix + ".tokens", "w", encoding="utf-8") as fh:
        fh.write(tok)
    with open(prefix + ".entities", "w", encoding="utf-8") as fh:
        fh.write(ent)
