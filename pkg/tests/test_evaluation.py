"""Scoring: per-category counting, averaging, and report formatting."""

import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from medoidknn import (
    CategoryCounts,
    Corpus,
    Document,
    Prediction,
    Split,
    WeightMode,
    evaluate,
    f1,
    format_table,
    format_tsv,
    precision,
    recall,
)
from medoidknn.errors import DomainError, UnknownDocId


class TestPrecisionRecallF1:
    def test_precision_counts_predicted_positives(self):
        assert precision(3, 1) == 0.75

    def test_precision_zero_when_nothing_predicted(self):
        assert precision(0, 0) == 0.0

    def test_recall_counts_gold_positives(self):
        assert recall(3, 2) == 0.6

    def test_recall_zero_when_no_positives_exist(self):
        assert recall(0, 0) == 0.0

    def test_f1_hand_value(self):
        assert f1(0.89, 0.93) == pytest.approx(0.9096, abs=5e-5)

    def test_f1_zero_when_both_zero(self):
        assert f1(0.0, 0.0) == 0.0

    def test_f1_rejects_negative_inputs(self):
        with pytest.raises(DomainError):
            f1(-0.1, 0.5)

    @given(
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
    )
    def test_f1_is_symmetric_and_below_the_arithmetic_mean(self, p, r):
        value = f1(p, r)
        assert value == f1(r, p)
        assert 0.0 <= value <= (p + r) / 2 + 1e-12


class TestCategoryCounts:
    def test_support_is_gold_positive_count(self):
        assert CategoryCounts(tp=3, fp=9, fn=2).support == 5

    def test_methods_delegate_to_the_count_fields(self):
        counts = CategoryCounts(tp=2, fp=2, fn=6)
        assert counts.precision() == 0.5
        assert counts.recall() == 0.25
        assert counts.f1() == f1(0.5, 0.25)


GOLD = {
    "d1": {"a"},
    "d2": {"a"},
    "d3": {"b"},
    "d4": {"b"},
    "d5": {"c"},
}
PREDICTED = {"d1": "a", "d2": "b", "d3": "b", "d4": "c", "d5": "c"}


class TestEvaluate:
    def test_hand_confusion_counts(self):
        report = evaluate(PREDICTED, GOLD)
        assert report.counts["a"] == CategoryCounts(tp=1, fp=0, fn=1)
        assert report.counts["b"] == CategoryCounts(tp=1, fp=1, fn=1)
        assert report.counts["c"] == CategoryCounts(tp=1, fp=1, fn=0)
        assert report.n_documents == 5
        assert report.n_correct == 3
        assert report.accuracy == 0.6

    def test_micro_pools_counts(self):
        p, r, f = evaluate(PREDICTED, GOLD).micro()
        assert (p, r) == (0.6, 0.6)
        assert f == pytest.approx(0.6)

    def test_macro_averages_per_category(self):
        p, r, f = evaluate(PREDICTED, GOLD).macro()
        assert p == pytest.approx((1.0 + 0.5 + 0.5) / 3)
        assert r == pytest.approx((0.5 + 0.5 + 1.0) / 3)
        assert f == pytest.approx((2 / 3 + 0.5 + 2 / 3) / 3)

    def test_multilabel_hit_still_misses_the_other_label(self):
        # Predicting one of two gold labels is a correct prediction and,
        # at the same time, a miss for the label not chosen.
        report = evaluate({"d": "ship"}, {"d": {"ship", "grain"}})
        assert report.counts["ship"] == CategoryCounts(tp=1, fp=0, fn=0)
        assert report.counts["grain"] == CategoryCounts(tp=0, fp=0, fn=1)
        assert report.accuracy == 1.0
        p, r, _ = report.micro()
        assert p == 1.0
        assert r == 0.5

    def test_unpredicted_gold_document_misses_every_label(self):
        report = evaluate({"d1": "a"}, {"d1": {"a"}, "d2": {"b", "c"}})
        assert report.counts["b"].fn == 1
        assert report.counts["c"].fn == 1
        assert report.n_documents == 2
        assert report.n_correct == 1

    def test_prediction_outside_gold_set_rejected(self):
        with pytest.raises(UnknownDocId) as err:
            evaluate({"ghost": "a"}, {"d1": {"a"}})
        assert "ghost" in str(err.value)

    def test_gold_document_without_labels_rejected(self):
        with pytest.raises(DomainError):
            evaluate({}, {"d1": set()})

    def test_accepts_corpus_and_prediction_objects(self):
        corpus = Corpus(
            documents=(
                Document("d1", "", frozenset({"a"}), Split.TEST),
                Document("d2", "", frozenset({"b"}), Split.TEST),
            )
        )
        predictions = [
            Prediction("d1", {"a": 1.0}, "a", 1, WeightMode.NONE),
            Prediction("d2", {"a": 1.0}, "a", 1, WeightMode.NONE),
        ]
        report = evaluate(predictions, corpus)
        assert report.n_correct == 1
        assert report.counts["a"] == CategoryCounts(tp=1, fp=1, fn=0)
        assert report.counts["b"] == CategoryCounts(tp=0, fp=0, fn=1)

    @given(
        st.dictionaries(
            st.text(alphabet="xyz", min_size=1, max_size=3),
            st.sampled_from(["cat0", "cat1", "cat2"]),
            min_size=1,
            max_size=12,
        ),
        st.randoms(use_true_random=False),
    )
    def test_micro_equals_accuracy_on_single_label_gold(self, gold_choice, rng):
        # With one gold label per document and full prediction coverage,
        # every document is either a tp or an fp+fn pair, so pooled
        # precision, recall, and accuracy all coincide.
        gold = {doc_id: {label} for doc_id, label in gold_choice.items()}
        predicted = {
            doc_id: rng.choice(["cat0", "cat1", "cat2"]) for doc_id in gold
        }
        report = evaluate(predicted, gold)
        p, r, f = report.micro()
        assert p == pytest.approx(report.accuracy)
        assert r == pytest.approx(report.accuracy)
        assert f == pytest.approx(report.accuracy)

    def test_support_sums_to_gold_label_occurrences(self):
        report = evaluate(PREDICTED, GOLD)
        total_support = sum(c.support for c in report.counts.values())
        assert total_support == sum(len(labels) for labels in GOLD.values())


class TestReportFormats:
    def report(self):
        report = evaluate(PREDICTED, GOLD)
        report.timings["test_seconds"] = 1.23456
        return report

    def test_table_layout(self):
        lines = format_table(self.report()).splitlines()
        assert lines[0].split() == ["category", "precision", "recall", "f1", "support"]
        assert set(lines[1]) == {"-", " "}
        assert lines[2].split() == ["a", "1.0000", "0.5000", "0.6667", "2"]
        assert lines[5].split() == ["micro", "0.6000", "0.6000", "0.6000", "5"]
        assert lines[6].split()[0] == "macro"
        assert lines[7] == "accuracy  0.6000  (3/5)"
        assert lines[8] == "test_seconds  1.235s"

    def test_table_rows_are_sorted_by_category(self):
        names = [line.split()[0] for line in format_table(self.report()).splitlines()[2:5]]
        assert names == ["a", "b", "c"]

    def test_tsv_shape(self):
        text = format_tsv(self.report())
        assert text.endswith("\n")
        rows = [line.split("\t") for line in text.splitlines()]
        assert rows[0] == ["category", "precision", "recall", "f1", "support"]
        assert len(rows) == 1 + 3 + 3
        assert all(len(row) == 5 for row in rows)
        assert rows[4] == ["micro", "0.6000", "0.6000", "0.6000", "5"]

    def test_json_report_round_trips(self):
        parsed = json.loads(self.report().to_json())
        assert parsed["accuracy"] == 0.6
        assert parsed["n_documents"] == 5
        assert parsed["categories"]["a"]["support"] == 2
        assert parsed["micro"]["f1"] == pytest.approx(0.6)
        assert parsed["timings"]["test_seconds"] == 1.23456
