"""Inverted index construction, statistics, and on-disk round-trips."""
import numpy as np
import pytest

from rmlsh.errors import DuplicateDocnoError, IndexFormatError
from rmlsh.index import InvertedIndex, build_index

from conftest import FRUIT_DOCS


class TestBuildIndex:
    def test_hand_counted_statistics(self, fruit_index):
        stats = fruit_index.stats
        assert stats.nd == 3
        assert stats.total_tokens == 7
        assert stats.ds == pytest.approx(7 / 3)
        assert stats.vs == 3

    def test_document_frequency(self, fruit_index):
        banana = fruit_index.term_to_id["banana"]
        assert fruit_index.df[banana] == 2
        apple = fruit_index.term_to_id["apple"]
        assert fruit_index.df[apple] == 1

    def test_collection_frequency(self, fruit_index):
        cf = {t: int(fruit_index.cf[i]) for i, t in enumerate(fruit_index.terms)}
        assert cf == {"apple": 2, "banana": 2, "cherry": 3}

    def test_postings_sorted_doc_ids_and_counts(self, fruit_index):
        banana = fruit_index.term_to_id["banana"]
        doc_ids, counts = fruit_index.postings(banana)
        assert doc_ids.tolist() == [0, 1]
        assert counts.tolist() == [1, 1]
        cherry = fruit_index.term_to_id["cherry"]
        doc_ids, counts = fruit_index.postings(cherry)
        assert doc_ids.tolist() == [1, 2]
        assert counts.tolist() == [1, 2]

    def test_doc_lengths(self, fruit_index):
        assert fruit_index.doc_lengths.tolist() == [3, 2, 2]

    def test_term_ids_in_first_occurrence_order(self, fruit_index):
        assert fruit_index.terms == ["apple", "banana", "cherry"]

    def test_duplicate_docno_rejected(self):
        with pytest.raises(DuplicateDocnoError, match="D1"):
            build_index(iter([("D1", "a"), ("D1", "b")]))

    def test_zero_token_documents_dropped_and_recorded(self):
        index = build_index(iter([("A", "word"), ("B", "..."), ("C", "")]))
        assert index.nd == 1
        assert index.dropped == ["B", "C"]

    def test_nothing_indexable_rejected(self):
        with pytest.raises(ValueError):
            build_index(iter([("A", "?!")]))

    def test_stopwords_apply_at_build_time(self):
        index = build_index(iter(FRUIT_DOCS), stopwords=["banana"])
        assert "banana" not in index.term_to_id
        assert index.doc_lengths.tolist() == [2, 1, 2]

    def test_docno_rank_orders_by_string(self):
        index = build_index(iter([("Z", "a"), ("A", "a"), ("M", "a")]))
        # doc ids 0,1,2 hold docnos Z,A,M; rank is position under string sort
        assert index.docno_rank.tolist() == [2, 0, 1]


class TestPersistence:
    def test_round_trip_preserves_everything(self, fruit_index, tmp_path):
        out = tmp_path / "idx"
        fruit_index.save(out)
        loaded = InvertedIndex.load(out)
        assert loaded.docnos == fruit_index.docnos
        assert loaded.terms == fruit_index.terms
        np.testing.assert_array_equal(loaded.doc_term_ids, fruit_index.doc_term_ids)
        np.testing.assert_array_equal(loaded.doc_term_counts, fruit_index.doc_term_counts)
        np.testing.assert_array_equal(loaded.df, fruit_index.df)
        np.testing.assert_array_equal(loaded.cf, fruit_index.cf)

    def test_save_twice_is_byte_identical(self, fruit_index, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        fruit_index.save(a)
        fruit_index.save(b)
        for name in ("meta.json", "stats.txt", "vocab.tsv", "docs.tsv"):
            assert (a / name).read_bytes() == (b / name).read_bytes()

    def test_stats_file_lists_counts(self, fruit_index, tmp_path):
        out = tmp_path / "idx"
        fruit_index.save(out)
        stats = (out / "stats.txt").read_text()
        assert "nd = 3" in stats
        assert "vs = 3" in stats

    def test_refuses_overwrite_without_force(self, fruit_index, tmp_path):
        out = tmp_path / "idx"
        fruit_index.save(out)
        with pytest.raises(Exception, match="exists"):
            fruit_index.save(out)
        fruit_index.save(out, force=True)

    def test_corrupt_meta_rejected(self, fruit_index, tmp_path):
        out = tmp_path / "idx"
        fruit_index.save(out)
        meta = out / "meta.json"
        meta.write_text(meta.read_text().replace('"nd": 3', '"nd": 4'))
        with pytest.raises(IndexFormatError):
            InvertedIndex.load(out)
