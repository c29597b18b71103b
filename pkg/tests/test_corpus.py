"""Tests for tokenization and line-JSON corpus loading."""

import json

import pytest

from graphlex import (
    CorpusFormatError,
    document_frequencies,
    load_corpus,
    load_stopwords,
    tokenize,
)

from conftest import corpus_of


class TestTokenize:
    def test_basic_splitting(self):
        assert tokenize("The cat, the hat.") == ["the", "cat", "the", "hat"]

    def test_lowercase_off(self):
        assert tokenize("The Cat", lowercase=False) == ["The", "Cat"]

    def test_apostrophes_stay_inside_tokens(self):
        assert tokenize("don't isn't rock'n'roll") == ["don't", "isn't", "rock'n'roll"]

    def test_unicode_apostrophe(self):
        assert tokenize("don’t") == ["don’t"]

    def test_underscores_and_digits_kept(self):
        assert tokenize("covid_19 2nd-wave") == ["covid_19", "2nd", "wave"]

    def test_punctuation_only_is_empty(self):
        assert tokenize("... !!! ---") == []

    def test_roundtrip_is_stable(self):
        # tokenizing the space-joined output must reproduce the sequence
        toks = tokenize("It's a mixed-bag: 90% noise, 10% signal!")
        assert tokenize(" ".join(toks)) == toks


class TestLoadCorpus:
    def _write(self, tmp_path, records):
        path = tmp_path / "corpus.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            for rec in records:
                fh.write(json.dumps(rec) + "\n")
        return path

    def test_text_records(self, tmp_path):
        path = self._write(tmp_path, [
            {"id": "a", "text": "Vaccines work.", "label": 1},
            {"id": "b", "text": "Weather is mild.", "label": 0},
            {"id": "c", "text": "No label here."},
        ])
        corpus = load_corpus(path)
        assert len(corpus) == 3
        assert corpus.documents[0].tokens == ("vaccines", "work")
        assert corpus.documents[2].label is None
        assert corpus.n_true == 1 and corpus.n_false == 1

    def test_token_records_and_blank_lines(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"id": "a", "tokens": ["X", "y"], "label": 0}) + "\n")
            fh.write("\n\n")
            fh.write(json.dumps({"id": "b", "tokens": [], "label": 1}) + "\n")
        corpus = load_corpus(path)
        assert corpus.documents[0].tokens == ("x", "y")
        assert corpus.documents[1].tokens == ()

    def test_lowercase_off_preserves_tokens(self, tmp_path):
        path = self._write(tmp_path, [{"id": "a", "tokens": ["Covid", "covid"]}])
        corpus = load_corpus(path, lowercase=False)
        assert corpus.documents[0].tokens == ("Covid", "covid")

    def test_stopwords_dropped_after_casefold(self, tmp_path):
        path = self._write(tmp_path, [{"id": "a", "text": "The THE cat"}])
        corpus = load_corpus(path, stopwords=["THE"])
        assert corpus.documents[0].tokens == ("cat",)

    def test_duplicate_id_rejected(self, tmp_path):
        path = self._write(tmp_path, [
            {"id": "a", "text": "x"}, {"id": "a", "text": "y"},
        ])
        with pytest.raises(CorpusFormatError, match="duplicate document id"):
            load_corpus(path)

    def test_text_and_tokens_together_rejected(self, tmp_path):
        path = self._write(tmp_path, [{"id": "a", "text": "x", "tokens": ["x"]}])
        with pytest.raises(CorpusFormatError, match="exactly one of"):
            load_corpus(path)

    def test_neither_text_nor_tokens_rejected(self, tmp_path):
        path = self._write(tmp_path, [{"id": "a", "label": 1}])
        with pytest.raises(CorpusFormatError, match="exactly one of"):
            load_corpus(path)

    def test_bad_label_rejected(self, tmp_path):
        path = self._write(tmp_path, [{"id": "a", "text": "x", "label": 2}])
        with pytest.raises(CorpusFormatError, match="label must be 0 or 1"):
            load_corpus(path)

    def test_boolean_label_rejected(self, tmp_path):
        # JSON true is not a valid label even though bool subclasses int
        path = self._write(tmp_path, [{"id": "a", "text": "x", "label": True}])
        with pytest.raises(CorpusFormatError, match="label must be 0 or 1"):
            load_corpus(path)

    def test_invalid_json_line_rejected(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"id": "a", "text": "x"}\nnot json\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="line 2"):
            load_corpus(path)

    def test_non_object_record_rejected(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('["id", "a"]\n', encoding="utf-8")
        with pytest.raises(CorpusFormatError, match="not an object"):
            load_corpus(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(CorpusFormatError, match="cannot read corpus"):
            load_corpus(tmp_path / "nope.jsonl")

    def test_non_string_token_rejected(self, tmp_path):
        path = self._write(tmp_path, [{"id": "a", "tokens": ["ok", 3]}])
        with pytest.raises(CorpusFormatError):
            load_corpus(path)


class TestStopwordsFile:
    def test_load_stopwords(self, tmp_path):
        path = tmp_path / "stop.txt"
        path.write_text("the\n\nand\n# a comment line\n")
        stops = load_stopwords(path)
        assert stops == frozenset({"the", "and"})


class TestDocumentFrequencies:
    def test_counts_documents_not_occurrences(self):
        corpus = corpus_of([
            ("a", ["x", "x", "y"], 1),
            ("b", ["y"], 0),
            ("c", ["z"], None),
        ])
        df = document_frequencies(corpus)
        assert df["x"] == 1  # two occurrences, one document
        assert df["y"] == 2
        assert df["z"] == 1
