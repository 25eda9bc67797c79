"""Effectiveness metrics, significance, sweeps, and report assembly.

Expected metric values are computed by hand from the constructed ranked
lists; the t-test boundary uses the two-tailed critical value 2.262157
at nine degrees of freedom, which corresponds to p = 0.05.
"""
import math

import numpy as np
import pytest

from rmlsh.errors import ConfigError, UnjudgedQueryError, ZeroVarianceError
from rmlsh.evaluation import (
    RECALL_POINTS,
    evaluate_runs,
    format_percent,
    interpolated_rp,
    load_qrels,
    load_run,
    load_topics,
    paired_ttest,
    pareto_frontier,
    percent_diff,
    precision_at_5,
    sweep,
    sweep_csv,
    SweepRow,
    wall_clock,
)
from rmlsh.lm import SmoothingConfig
from rmlsh.lsh import LshConfig
from rmlsh.retrieval import PipelineConfig

QRELS = {"q1": {"A": 1, "B": 1, "C": 0}, "q2": {"D": 2}}


def ranked(*docnos):
    return [(d, -float(i)) for i, d in enumerate(docnos)]


class TestLoaders:
    def test_qrels_four_column(self, tmp_path):
        p = tmp_path / "qrels.txt"
        p.write_text("q1 0 A 1\nq1 0 B 0\nq2 0 D 2\n")
        assert load_qrels(p) == {"q1": {"A": 1, "B": 0}, "q2": {"D": 2}}

    def test_qrels_duplicate_pair_rejected(self, tmp_path):
        p = tmp_path / "qrels.txt"
        p.write_text("q1 0 A 1\nq1 0 A 0\n")
        with pytest.raises(ValueError, match="duplicate"):
            load_qrels(p)

    def test_topics_tab_separated(self, tmp_path):
        p = tmp_path / "topics.tsv"
        p.write_text("101\tfirst query\n102\tsecond one\n")
        assert load_topics(p) == [("101", "first query"), ("102", "second one")]


class TestPrecisionAt5:
    # five constructed lists with hand-counted relevant-in-top-5 tallies
    @pytest.mark.parametrize(
        "docs,expect",
        [
            (("A", "B", "x", "y", "z"), 2 / 5),
            (("x", "y", "z", "w", "v"), 0.0),
            (("A", "x", "y", "z", "w", "B"), 1 / 5),  # B at rank 6 ignored
            (("C", "A", "x", "y", "z"), 1 / 5),  # grade 0 is non-relevant
            (("A",), 1 / 5),  # short list pads with misses
        ],
    )
    def test_hand_counts(self, docs, expect):
        assert precision_at_5(ranked(*docs), QRELS, "q1") == pytest.approx(expect)

    def test_unjudged_query_rejected(self):
        with pytest.raises(UnjudgedQueryError):
            precision_at_5(ranked("A"), QRELS, "nope")


class TestInterpolatedRp:
    def test_hand_curve_two_relevant(self):
        # ranks: A hit (recall .5, prec 1.0), two misses, B hit (recall 1, prec .5)
        curve = interpolated_rp(ranked("A", "x", "y", "B"), QRELS, "q1")
        expect = [1.0] * 6 + [0.5] * 5
        np.testing.assert_allclose(curve, expect, atol=1e-12)

    def test_perfect_run_is_all_ones(self):
        curve = interpolated_rp(ranked("A", "B"), QRELS, "q1")
        np.testing.assert_allclose(curve, np.ones(11), atol=1e-12)

    def test_never_retrieved_is_zero(self):
        curve = interpolated_rp(ranked("x", "y"), QRELS, "q1")
        np.testing.assert_allclose(curve, np.zeros(11), atol=1e-12)

    def test_non_increasing_everywhere(self):
        for docs in (("A", "x", "B"), ("x", "A", "y", "B", "z"), ("B",)):
            curve = interpolated_rp(ranked(*docs), QRELS, "q1")
            assert np.all(np.diff(curve) <= 1e-12)

    def test_eleven_evenly_spaced_points(self):
        np.testing.assert_allclose(RECALL_POINTS, np.linspace(0, 1, 11), atol=1e-15)

    def test_zero_relevant_rejected(self):
        with pytest.raises(ValueError, match="relevant"):
            interpolated_rp(ranked("C"), {"q": {"C": 0}}, "q")


class TestPairedTtest:
    def test_zero_mean_difference(self):
        t, p = paired_ttest([0.5, 0.6, 0.7], [0.6, 0.5, 0.7])
        assert t == pytest.approx(0.0, abs=1e-12)
        assert p == pytest.approx(1.0, abs=1e-12)

    def test_hand_statistic(self):
        # d = (0.1, 0.2, 0.3): mean .2, s = .1, t = .2/(.1/sqrt(3)) = 2*sqrt(3);
        # at two degrees of freedom the tail has the closed form
        # P(T > t) = (1 - t/sqrt(2 + t^2))/2, so p = 1 - t/sqrt(2 + t^2)
        t, p = paired_ttest([0.2, 0.4, 0.6], [0.1, 0.2, 0.3])
        expect_t = 2 * math.sqrt(3)
        assert t == pytest.approx(expect_t, abs=1e-9)
        assert p == pytest.approx(1 - expect_t / math.sqrt(2 + expect_t**2), abs=1e-12)

    def test_critical_value_boundary(self):
        # build n=10 differences whose t statistic is the df=9 critical value
        offsets = np.arange(10) - 4.5
        s = offsets.std(ddof=1)
        mean = 2.262157 * s / math.sqrt(10)
        t, p = paired_ttest(list(mean + offsets), [0.0] * 10)
        assert t == pytest.approx(2.262157, abs=1e-6)
        assert p == pytest.approx(0.05, abs=1e-3)

    def test_symmetry_two_tailed(self):
        t1, p1 = paired_ttest([1, 2, 3, 5], [0, 0, 0, 0])
        t2, p2 = paired_ttest([0, 0, 0, 0], [1, 2, 3, 5])
        assert t1 == pytest.approx(-t2, abs=1e-12)
        assert p1 == pytest.approx(p2, abs=1e-12)

    def test_zero_variance_rejected(self):
        # exactly representable values so the differences are truly constant
        with pytest.raises(ZeroVarianceError):
            paired_ttest([0.5, 0.75], [0.25, 0.5])

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            paired_ttest([1.0, 2.0], [1.0])


class TestWallClock:
    def test_mean_and_raw_repetitions(self):
        calls = []
        mean, raw = wall_clock(lambda: calls.append(1), repetitions=5)
        assert len(calls) == 5
        assert len(raw) == 5
        assert mean == pytest.approx(sum(raw) / 5, rel=1e-9)

    def test_repetitions_validated(self):
        with pytest.raises(ConfigError):
            wall_clock(lambda: None, repetitions=0)


class TestPercentDiff:
    def test_published_operation_reductions(self):
        assert format_percent(percent_diff(7_418_506, 14_315_788)) == "-48.18"
        assert format_percent(percent_diff(1_992_440, 14_315_788)) == "-86.08"

    def test_signs(self):
        assert percent_diff(150, 100) == pytest.approx(50.0)
        assert percent_diff(50, 100) == pytest.approx(-50.0)

    def test_zero_base_rejected(self):
        with pytest.raises(ConfigError):
            percent_diff(1, 0)


class TestSweep:
    def test_rows_sorted_by_ops_with_parseable_labels(self, synth_index, synth_data):
        _, topics, qrels = synth_data
        grid = [
            PipelineConfig(system="rm", terms=50, fb_docs=10),
            PipelineConfig(
                system="rrm", terms=50, fb_docs=10, lsh=LshConfig(bits=5, tables=2, seed=42)
            ),
            PipelineConfig(
                system="mp-rrm", terms=50, fb_docs=10,
                lsh=LshConfig(bits=7, tables=2, probes=2, seed=42),
            ),
        ]
        rows = sweep(grid, topics[:4], qrels, synth_index)
        assert len(rows) == 3
        ops = [r.postings_ops for r in rows]
        assert ops == sorted(ops)
        for r in rows:
            assert r.error is None
            assert 0.0 <= r.p_at_5 <= 1.0

    def test_failing_config_becomes_error_row(self, synth_index, synth_data):
        _, _, qrels = synth_data
        grid = [PipelineConfig(system="rm", terms=10, fb_docs=5)]
        rows = sweep(grid, [("q1", "zzz-not-a-term")], qrels, synth_index)
        assert len(rows) == 1
        assert rows[0].error is not None
        assert rows[0].p_at_5 is None

    def test_csv_shape_and_error_marker(self):
        rows = [
            SweepRow("RM-baseline (10)", 0.5, 1000, 0.25),
            SweepRow("RRM (10,4,2)", None, None, None, error="boom"),
        ]
        text = sweep_csv(rows)
        lines = text.strip().split("\n")
        assert lines[0] == "label,p_at_5,postings_ops,wall_clock_s,error"
        assert lines[1].startswith('"RM-baseline (10)",0.5')
        assert lines[2] == '"RRM (10,4,2)",,,,"boom"'

    def test_csv_omit_timing_blanks_wall(self):
        rows = [SweepRow("LM", 0.5, 10, 0.125)]
        assert ",0.125" not in sweep_csv(rows, omit_timing=True)


class TestParetoFrontier:
    def test_dominated_rows_excluded(self):
        a = SweepRow("A", 0.8, 100, None)
        b = SweepRow("B", 0.8, 200, None)  # same quality, more work
        c = SweepRow("C", 0.9, 300, None)
        d = SweepRow("D", 0.7, 50, None)
        err = SweepRow("E", None, None, None, error="x")
        frontier = pareto_frontier([a, b, c, d, err])
        labels = {r.label for r in frontier}
        assert labels == {"A", "C", "D"}


class TestEvaluateRuns:
    def test_report_numbers_and_baseline_diffs(self):
        qrels = {"q1": {"A": 1, "B": 1}, "q2": {"D": 1}}
        base_run = {"q1": ranked("A", "B", "x", "y", "z"), "q2": ranked("D", "x", "y", "z", "w")}
        slow_run = {"q1": ranked("A", "x", "y", "z", "w"), "q2": ranked("x", "D", "y", "z", "w")}
        rep = evaluate_runs(
            [("BASE", base_run), ("OTHER", slow_run)],
            qrels,
            baseline="BASE",
            efficiency={"BASE": (1000, 2.0), "OTHER": (500, 1.0)},
        )
        rows = {r.label: r for r in rep.rows}
        assert rows["BASE"].mean_p5 == pytest.approx((2 / 5 + 1 / 5) / 2)
        assert rows["OTHER"].mean_p5 == pytest.approx(1 / 5)
        assert rows["BASE"].p5_pct is None
        assert rows["OTHER"].p5_pct == pytest.approx(percent_diff(1 / 5, 3 / 10))
        assert rows["OTHER"].ops_pct == pytest.approx(-50.0)
        assert rep.baseline_label == "BASE"
        assert set(rep.rp_curves) == {"BASE", "OTHER"}
        assert rep.rp_curves["BASE"].shape == (11,)

    def test_missing_qid_scores_zero(self):
        qrels = {"q1": {"A": 1}, "q2": {"D": 1}}
        rep = evaluate_runs([("R", {"q1": ranked("A")})], qrels)
        assert rep.rows[0].mean_p5 == pytest.approx((1 / 5 + 0.0) / 2)

    def test_text_and_csv_render(self):
        qrels = {"q1": {"A": 1}}
        rep = evaluate_runs([("R", {"q1": ranked("A")})], qrels)
        text = rep.render_text()
        assert "P@5" in text and "R" in text
        csv_text = rep.render_csv()
        assert csv_text.splitlines()[0].startswith("label,")


class TestLoadRun:
    def test_round_trip_with_format_run(self, tmp_path):
        from rmlsh.retrieval import format_run

        results = [("7", [("B", 2.0), ("A", 1.0)])]
        p = tmp_path / "x.run"
        p.write_text(format_run(results, "TAG(1)"))
        tag, by_qid = load_run(p)
        assert tag == "TAG(1)"
        assert by_qid == {"7": [("B", 2.0), ("A", 1.0)]}

    def test_malformed_line_rejected(self, tmp_path):
        p = tmp_path / "x.run"
        p.write_text("q1 Q0 A 1\n")
        with pytest.raises(ValueError, match=":1:"):
            load_run(p)
