import json
import logging
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from charnet.annotation import Mention, MentionKind
from charnet.coref_eval import (
    EvalReport, b_cubed, ceaf_alignment, ceaf_e, clustering_from_mentions, evaluate, f_measure, mean_f, muc, phi4,
    prf,
)

a, b, c, d, e = "abcde"
GOLD = [{a, b, c}, {d}]
PRED = [{a, b}, {c, d}]


def test_prf_reported_figures():
    assert f_measure(0.915, 0.852) == pytest.approx(0.8824, abs=5e-4)
    assert round(100 * f_measure(0.915, 0.852), 1) == 88.2


def test_prf_examples():
    assert prf({a, b}, {a, b}) == (1.0, 1.0, 1.0)
    p, r, f = prf({a, b, c, d}, {a, b, e})
    assert (p, r) == (pytest.approx(2 / 3), 0.5)
    assert f == pytest.approx(4 / 7, abs=1e-12)


def test_prf_empty_conventions():
    assert prf(set(), set()) == (1.0, 1.0, 1.0)
    assert prf({a}, set()) == (0.0, 0.0, 0.0)
    assert prf(set(), {a}) == (0.0, 0.0, 0.0)


def test_muc_example():
    p, r, f = muc([{a, b, c, d}], [{a, b}, {c, d}])
    assert p == 1.0 and r == pytest.approx(2 / 3, abs=1e-12) and f == pytest.approx(0.8, abs=1e-12)


def test_muc_identity():
    assert muc(GOLD, GOLD) == (1.0, 1.0, 1.0)


def test_muc_all_singletons(caplog):
    with caplog.at_level(logging.WARNING, logger="charnet.coref_eval"):
        assert muc([{a}, {b}], [{a}, {b}]) == (0.0, 0.0, 0.0)
    assert "MUC" in caplog.text


def test_b_cubed_example():
    p, r, _ = b_cubed(GOLD, PRED)
    assert p == pytest.approx(0.75, abs=1e-12) and r == pytest.approx(2 / 3, abs=1e-12)
    assert b_cubed(GOLD, GOLD) == (1.0, 1.0, 1.0)


def test_b_cubed_singletons_vs_one_cluster():
    for n in range(1, 8):
        ms = list(range(n))
        p, r, _ = b_cubed([set(ms)], [{m} for m in ms])
        assert p == 1.0 and r == pytest.approx(1 / n)


def test_ceaf_example():
    assert phi4({a, b, c}, {a, b}) == pytest.approx(0.8)
    assert ceaf_alignment([frozenset(x) for x in GOLD], [frozenset(x) for x in PRED]) == pytest.approx(22 / 15)
    p, r, _ = ceaf_e(GOLD, PRED)
    assert p == pytest.approx(11 / 15, abs=1e-12) and r == pytest.approx(11 / 15, abs=1e-12)


def test_ceaf_identity_and_disjoint():
    assert ceaf_e(GOLD, GOLD) == pytest.approx((1.0, 1.0, 1.0))
    assert ceaf_e([{a, b}], [{c, d}]) == (0.0, 0.0, 0.0)


def test_mean_f():
    assert mean_f(0.8, 0.75, 0.7) == pytest.approx(0.75)
    assert mean_f(1.0, 1.0, 1.0) == 1.0
    # worked examples: MUC F, B-cubed F, CEAF-e F recomputed with exact fractions
    muc_f = Fraction(4, 5)
    bp, br = Fraction(3, 4), Fraction(2, 3)
    b_f = 2 * bp * br / (bp + br)
    assert float(b_f) == pytest.approx(0.705882352941, abs=1e-12)
    ceaf_f = Fraction(11, 15)
    expected = float((muc_f + b_f + ceaf_f) / 3)
    got = mean_f(muc([{a, b, c, d}], [{a, b}, {c, d}])[2], b_cubed(GOLD, PRED)[2], ceaf_e(GOLD, PRED)[2])
    assert got == pytest.approx(expected, abs=1e-12)


def test_unseen_mentions_become_singletons():
    # e only in pred, d only in gold
    assert b_cubed([{a, b}, {d}], [{a, b, e}]) == b_cubed([{a, b}, {d}, {e}], [{a, b, e}, {d}])
    assert muc([{a, b, d}], [{a, b, e}]) == muc([{a, b, d}, {e}], [{a, b, e}, {d}])
    # CEAF-e aligns only the clusters each side actually produced
    p, r, _ = ceaf_e([{a, b}, {d}], [{a, b, e}])
    assert (p, r) == (pytest.approx(0.8), pytest.approx(0.4))


def random_clustering(rng, universe):
    items = list(universe)
    rng.shuffle(items)
    out = []
    while items:
        k = rng.randint(1, len(items))
        out.append(set(items[:k]))
        items = items[k:]
    return out


def random_pair(rng):
    base = list(range(rng.randint(1, 10)))
    gold = random_clustering(rng, [m for m in base if rng.random() < 0.9] or base[:1])
    pred = random_clustering(rng, [m for m in base if rng.random() < 0.9] or base[:1])
    return gold, pred


def test_ceaf_matches_exhaustive_alignment():
    rng = random.Random(21)
    for _ in range(300):
        gold, pred = random_pair(rng)
        g = [frozenset(x) for x in gold]
        p = [frozenset(x) for x in pred]
        total = oracles.best_alignment(g, p, phi4)
        cp, cr, _ = ceaf_e(gold, pred)
        assert cp == pytest.approx(total / len(p), abs=1e-12)
        assert cr == pytest.approx(total / len(g), abs=1e-12)


clusterings = st.lists(st.integers(0, 9), min_size=1, max_size=10, unique=True).flatmap(
    lambda ms: st.lists(st.integers(0, 3), min_size=len(ms), max_size=len(ms)).map(
        lambda labels: [set(m for m, k in zip(ms, labels) if k == lab) for lab in sorted(set(labels))]
    )
)


@settings(max_examples=200, deadline=None)
@given(clusterings, clusterings)
def test_symmetry_and_range(gold, pred):
    for metric in (muc, b_cubed, ceaf_e):
        p, r, f = metric(gold, pred)
        p2, r2, f2 = metric(pred, gold)
        assert (p, r) == pytest.approx((r2, p2), abs=1e-12)
        assert f == pytest.approx(f2, abs=1e-12)
        assert min(p, r) >= -1e-12 and max(p, r) <= 1.0 + 1e-12
        assert min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12


@settings(max_examples=100, deadline=None)
@given(clusterings, st.permutations(range(10)))
def test_identity_and_relabeling(gold, perm):
    assert b_cubed(gold, gold) == pytest.approx((1.0, 1.0, 1.0))
    assert ceaf_e(gold, gold) == pytest.approx((1.0, 1.0, 1.0))
    if any(len(x) > 1 for x in gold):
        assert muc(gold, gold) == (1.0, 1.0, 1.0)
    pred = [set(list(x)[::-1]) for x in reversed(gold)] + [{99}]
    relabel = [{perm[m] for m in x} for x in gold]
    relabel_pred = [{perm[m] if m < 10 else m for m in x} for x in pred]
    for metric in (muc, b_cubed, ceaf_e):
        assert metric(relabel, relabel_pred) == pytest.approx(metric(gold, pred))


def _m(start, cluster, cat="PER"):
    return Mention(start, start, MentionKind.PROPER, cat, cluster, "x")


def test_evaluate_and_report():
    gold = [_m(0, 0), _m(1, 0), _m(2, 0), _m(3, 1), _m(9, 5, "LOC")]
    pred = [_m(0, 4), _m(1, 4), _m(2, 7), _m(3, 7)]
    rep = evaluate(gold, pred)
    assert rep.b_cubed[:2] == pytest.approx((0.75, 2 / 3))
    assert rep.ceaf_e[:2] == pytest.approx((11 / 15, 11 / 15))
    assert rep.ner == (1.0, 1.0, 1.0)
    assert rep.mean_f == pytest.approx(mean_f(rep.muc[2], rep.b_cubed[2], rep.ceaf_e[2]))
    data = json.loads(rep.to_json())
    assert set(data) == {"ner", "muc", "b_cubed", "ceaf_e", "mean_f"}
    assert data["b_cubed"]["precision"] == pytest.approx(0.75)
    assert rep.to_tsv().splitlines()[0] == "metric\tprecision\trecall\tf1"
    every = evaluate(gold, pred, category=None)
    assert every.ner[1] == pytest.approx(0.8)


def test_clustering_from_mentions_singletons():
    ms = [_m(0, None), _m(1, 2), _m(2, 2), _m(3, None)]
    assert clustering_from_mentions(ms) == [frozenset({(1, 1), (2, 2)}), frozenset({(0, 0)}), frozenset({(3, 3)})]


def test_report_fields():
    rep = EvalReport(None, (1, 1, 1), (1, 1, 1), (1, 1, 1), 1.0)
    assert "ner" not in rep.to_tsv()
