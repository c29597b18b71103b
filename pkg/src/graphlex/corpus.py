"""Labeled corpus ingestion and token statistics.

Corpora are line-delimited JSON, one document per line:

    {"id": "doc-1", "text": "Some raw text.", "label": 1}
    {"id": "doc-2", "tokens": ["pre", "tokenized", "great_replacement"]}

Exactly one of "text" or "tokens" must be present; "label" is optional and
must be 0 or 1 when given. Pre-tokenized documents are taken as-is (phrases
joined with underscores survive), text documents run through the tokenizer.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .errors import CorpusFormatError

# Tokens are maximal runs of Unicode word characters (underscore included),
# optionally chained by intra-word apostrophes. Leading/trailing apostrophes
# are never part of a token.
_TOKEN_RE = re.compile(r"\w+(?:['’]\w+)*", re.UNICODE)


def tokenize(text, lowercase=True):
    """Split raw text into tokens.

    Lowercases first (if requested), then takes maximal alphanumeric runs.
    Underscores and intra-word apostrophes stay inside tokens, every other
    character is a boundary. Tokenizing the space-joined output again gives
    the same sequence back.
    """
    if lowercase:
        text = text.lower()
    return _TOKEN_RE.findall(text)


@dataclass(frozen=True)
class Document:
    id: str
    tokens: tuple[str, ...]
    label: int | None = None
    token_set: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "token_set", frozenset(self.tokens))


@dataclass(frozen=True)
class LabeledCorpus:
    documents: tuple[Document, ...]
    n_true: int
    n_false: int

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def labeled(self):
        """Documents that carry a label, in corpus order."""
        return [d for d in self.documents if d.label is not None]


def read_token_file(path):
    """Read a one-token-per-line file. '#' lines are comments, blanks ignored."""
    tokens = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                tokens.append(line)
    except OSError as exc:
        raise CorpusFormatError(f"cannot read token file {path}: {exc}") from exc
    return tokens


def load_stopwords(path):
    return frozenset(read_token_file(path))


def _coerce_tokens(raw, lineno):
    if not isinstance(raw, list) or not all(isinstance(t, str) for t in raw):
        raise CorpusFormatError(f"line {lineno}: 'tokens' must be an array of strings")
    for t in raw:
        if not t or any(c.isspace() for c in t):
            raise CorpusFormatError(
                f"line {lineno}: token {t!r} is empty or contains whitespace"
            )
    return raw


def load_corpus(path, lowercase=True, stopwords=None):
    """Load a line-JSON corpus into a LabeledCorpus.

    Parameters
    ----------
    path : str or Path
        File with one JSON object per line (blank lines are skipped).
    lowercase : bool
        Lowercase text and pre-supplied tokens before anything else.
    stopwords : iterable of str, optional
        Tokens to drop after case folding. The set itself is case folded
        under the same setting so callers can pass either form.

    Raises CorpusFormatError on unreadable files, malformed records,
    duplicate ids, or labels outside {0, 1}.
    """
    if stopwords:
        stops = {s.lower() for s in stopwords} if lowercase else set(stopwords)
    else:
        stops = set()

    documents = []
    seen_ids = set()
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise CorpusFormatError(f"cannot read corpus {path}: {exc}") from exc
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusFormatError(f"line {lineno}: invalid JSON ({exc})") from exc
            if not isinstance(record, dict):
                raise CorpusFormatError(f"line {lineno}: record is not an object")

            doc_id = record.get("id")
            if not isinstance(doc_id, str) or not doc_id:
                raise CorpusFormatError(f"line {lineno}: missing or non-string 'id'")
            if doc_id in seen_ids:
                raise CorpusFormatError(f"line {lineno}: duplicate document id {doc_id!r}")
            seen_ids.add(doc_id)

            has_text = "text" in record
            has_tokens = "tokens" in record
            if has_text == has_tokens:
                raise CorpusFormatError(
                    f"line {lineno}: exactly one of 'text' or 'tokens' is required"
                )
            if has_text:
                if not isinstance(record["text"], str):
                    raise CorpusFormatError(f"line {lineno}: 'text' must be a string")
                tokens = tokenize(record["text"], lowercase=lowercase)
            else:
                tokens = _coerce_tokens(record["tokens"], lineno)
                if lowercase:
                    tokens = [t.lower() for t in tokens]
            if stops:
                tokens = [t for t in tokens if t not in stops]

            label = record.get("label")
            if label is not None:
                # bool is an int subclass; JSON true/false is not a valid label
                if isinstance(label, bool) or label not in (0, 1):
                    raise CorpusFormatError(
                        f"line {lineno}: label must be 0 or 1, got {label!r}"
                    )
                label = int(label)

            documents.append(Document(id=doc_id, tokens=tuple(tokens), label=label))

    n_true = sum(1 for d in documents if d.label == 1)
    n_false = sum(1 for d in documents if d.label == 0)
    return LabeledCorpus(documents=tuple(documents), n_true=n_true, n_false=n_false)


def document_frequencies(corpus):
    """Map token -> number of documents whose token set contains it."""
    df = {}
    for doc in corpus.documents:
        for token in doc.token_set:
            df[token] = df.get(token, 0) + 1
    return df
