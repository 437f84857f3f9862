"""Mention detection and coreference scores: P/R/F, MUC, B-cubed, CEAF-e.

Clusterings are collections of sets of hashable mention keys, usually
``(start_token, end_token)`` pairs.  For MUC and B-cubed, mentions present
on one side only are added to the other side as singletons before
scoring.  CEAF-e aligns the clusters as given: padding with singletons
would let two clusterings with no mention in common score above zero.
"""

import json
import logging
from dataclasses import asdict, dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

log = logging.getLogger(__name__)


def f_measure(precision, recall):
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def prf(gold, pred):
    """Precision, recall and F1 of predicted mention keys against gold."""
    gold, pred = set(gold), set(pred)
    hit = len(gold & pred)
    if pred:
        p = hit / len(pred)
    else:
        p = 1.0 if not gold else 0.0
    if gold:
        r = hit / len(gold)
    else:
        r = 1.0 if not pred else 0.0
    return p, r, f_measure(p, r)


def _complete(gold, pred):
    gold = [frozenset(c) for c in gold if c]
    pred = [frozenset(c) for c in pred if c]
    gold_seen = set().union(*gold) if gold else set()
    pred_seen = set().union(*pred) if pred else set()
    gold += [frozenset([m]) for m in sorted(pred_seen - gold_seen, key=repr)]
    pred += [frozenset([m]) for m in sorted(gold_seen - pred_seen, key=repr)]
    return gold, pred


def _index(clusters):
    return {m: k for k, c in enumerate(clusters) for m in c}


def _muc_side(keys, response):
    """Link-based recall of ``keys`` against ``response``."""
    where = _index(response)
    num = den = 0
    for c in keys:
        parts = {where[m] for m in c}
        num += len(c) - len(parts)
        den += len(c) - 1
    return num, den


def muc(gold, pred):
    gold, pred = _complete(gold, pred)
    rn, rd = _muc_side(gold, pred)
    pn, pd = _muc_side(pred, gold)
    if rd == 0 or pd == 0:
        log.warning("MUC undefined for all-singleton %s; scored 0",
                    "gold and prediction" if rd == pd == 0 else ("gold" if rd == 0 else "prediction"))
    r = rn / rd if rd else 0.0
    p = pn / pd if pd else 0.0
    return p, r, f_measure(p, r)


def b_cubed(gold, pred):
    gold, pred = _complete(gold, pred)
    if not gold:
        return 0.0, 0.0, 0.0
    g_of = {m: c for c in gold for m in c}
    p_of = {m: c for c in pred for m in c}
    mentions = list(g_of)
    p = sum(len(p_of[m] & g_of[m]) / len(p_of[m]) for m in mentions) / len(mentions)
    r = sum(len(p_of[m] & g_of[m]) / len(g_of[m]) for m in mentions) / len(mentions)
    return p, r, f_measure(p, r)


def phi4(g, p):
    return 2 * len(g & p) / (len(g) + len(p))


def ceaf_alignment(gold, pred):
    """Best total phi4 similarity under a one-to-one cluster alignment."""
    if not gold or not pred:
        return 0.0
    sim = np.array([[phi4(g, p) for p in pred] for g in gold])
    rows, cols = linear_sum_assignment(sim, maximize=True)
    return float(sim[rows, cols].sum())


def ceaf_e(gold, pred):
    gold = [frozenset(c) for c in gold if c]
    pred = [frozenset(c) for c in pred if c]
    if not gold or not pred:
        return 0.0, 0.0, 0.0
    total = ceaf_alignment(gold, pred)
    p = total / len(pred)
    r = total / len(gold)
    return p, r, f_measure(p, r)


def mean_f(muc_f, b_cubed_f, ceaf_f):
    return (muc_f + b_cubed_f + ceaf_f) / 3.0


@dataclass(frozen=True)
class EvalReport:
    ner: "tuple | None"
    muc: tuple
    b_cubed: tuple
    ceaf_e: tuple
    mean_f: float

    def to_dict(self):
        out = {}
        for name, value in asdict(self).items():
            if isinstance(value, (tuple, list)):
                out[name] = dict(zip(("precision", "recall", "f1"), value))
            else:
                out[name] = value
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def to_tsv(self):
        lines = ["metric\tprecision\trecall\tf1"]
        for name in ("ner", "muc", "b_cubed", "ceaf_e"):
            value = getattr(self, name)
            if value is not None:
                lines.append(name + "\t" + "\t".join(f"{v:.6f}" for v in value))
        lines.append(f"mean_f\t\t\t{self.mean_f:.6f}")
        return "\n".join(lines) + "\n"


def clustering_from_mentions(mentions, category="PER"):
    """Group mention spans by COREF id; unclustered spans are singletons.

    Pass ``category=None`` to keep every entity class.
    """
    clusters = {}
    singles = []
    for m in mentions:
        if category is not None and m.category != category:
            continue
        if m.cluster_id is None:
            singles.append(frozenset([m.span]))
        else:
            clusters.setdefault(m.cluster_id, set()).add(m.span)
    return [frozenset(c) for _, c in sorted(clusters.items())] + singles


def evaluate(gold_mentions, pred_mentions, category="PER"):
    """Score predicted annotations against gold ones."""
    def keys(ms):
        return {m.span for m in ms if category is None or m.category == category}

    gold_c = clustering_from_mentions(gold_mentions, category)
    pred_c = clustering_from_mentions(pred_mentions, category)
    m, b, c = muc(gold_c, pred_c), b_cubed(gold_c, pred_c), ceaf_e(gold_c, pred_c)
    return EvalReport(
        ner=prf(keys(gold_mentions), keys(pred_mentions)),
        muc=m,
        b_cubed=b,
        ceaf_e=c,
        mean_f=mean_f(m[2], b[2], c[2]),
    )

