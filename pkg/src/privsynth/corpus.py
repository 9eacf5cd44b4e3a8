"""Annotated corpus model, JSONL I/O, segmentation, and the word tokenizer.

Documents carry typed private spans (direct vs quasi identifiers) with
code-point offsets. The tokenizer is deliberately simple: case-sensitive
word-level splitting, with sentence punctuation broken out into
single-character tokens and newlines mapped to a reserved token. Keeping
tokens at word granularity makes decode-time blocking and leak matching
operate on exactly the same units.
"""

from __future__ import annotations

import enum
import json
import logging
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

logger = logging.getLogger(__name__)


class CorpusError(ValueError):
    """Raised for malformed corpus files or invalid spans/documents."""


class Category(enum.Enum):
    """Private entity categories, in canonical order."""

    PERSON = "PERSON"
    CODE = "CODE"
    LOC = "LOC"
    ORG = "ORG"
    DEM = "DEM"
    DATETIME = "DATETIME"
    QUANTITY = "QUANTITY"
    MISC = "MISC"


CANONICAL_CATEGORY_ORDER: tuple[Category, ...] = tuple(Category)


class IdentifierClass(enum.Enum):
    DIRECT = "DIRECT"
    QUASI = "QUASI"


@dataclass(frozen=True)
class EntitySpan:
    """A typed private span; offsets are Unicode code points, end exclusive."""

    start: int
    end: int
    surface: str
    category: Category
    identifier_class: IdentifierClass

    def __post_init__(self) -> None:
        if not (0 <= self.start < self.end):
            raise CorpusError(f"invalid span offsets [{self.start}, {self.end})")

    def overlaps(self, other: "EntitySpan") -> bool:
        return self.start < other.end and other.start < self.end

    def contains(self, other: "EntitySpan") -> bool:
        return self.start <= other.start and other.end <= self.end


def _check_spans(doc_id: str, text: str, spans: Sequence[EntitySpan]) -> None:
    for span in spans:
        if span.end > len(text):
            raise CorpusError(f"document {doc_id!r}: span [{span.start}, {span.end}) exceeds text length {len(text)}")
        slice_ = text[span.start : span.end]
        if slice_ != span.surface:
            raise CorpusError(
                f"document {doc_id!r}: span surface {span.surface!r} does not match text slice {slice_!r}"
            )
    ordered = sorted(spans, key=lambda s: (s.start, -s.end))
    for a, b in zip(ordered, ordered[1:]):
        if a.overlaps(b) and not (a.contains(b) or b.contains(a)):
            raise CorpusError(
                f"document {doc_id!r}: spans [{a.start},{a.end}) and [{b.start},{b.end}) partially overlap"
            )


@dataclass(frozen=True)
class Document:
    """One annotated text; spans are kept sorted by (start, -end)."""

    id: str
    text: str
    spans: tuple[EntitySpan, ...] = ()

    def __post_init__(self) -> None:
        if not self.id:
            raise CorpusError("document id must be non-empty")
        _check_spans(self.id, self.text, self.spans)
        object.__setattr__(self, "spans", tuple(sorted(self.spans, key=lambda s: (s.start, -s.end))))

    def spans_of(self, classes: Iterable[IdentifierClass]) -> tuple[EntitySpan, ...]:
        wanted = frozenset(classes)
        return tuple(s for s in self.spans if s.identifier_class in wanted)


# --------------------------------------------------------------------------
# JSONL I/O
# --------------------------------------------------------------------------

def load_corpus(path: str | Path) -> list[Document]:
    """Load a JSONL corpus; one record per line.

    Schema per line:
    ``{"id": str, "text": str, "annotations": [{"start", "end", "category",
    "identifier_class"}]}``. Span surfaces are derived from the text slice.
    Errors report the offending line number and, where known, the record id.
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    docs: list[Document] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: malformed JSON: {exc}") from exc
            try:
                doc = _document_from_record(record)
            except (KeyError, TypeError, ValueError) as exc:
                doc_id = record.get("id", "<missing id>") if isinstance(record, dict) else "<non-object>"
                raise CorpusError(f"{path}:{lineno}: record {doc_id!r}: {exc}") from exc
            if doc.id in seen_ids:
                raise CorpusError(f"{path}:{lineno}: duplicate document id {doc.id!r}")
            seen_ids.add(doc.id)
            docs.append(doc)
    return docs


def _document_from_record(record: dict) -> Document:
    doc_id = record["id"]
    text = record["text"]
    if not isinstance(doc_id, str) or not isinstance(text, str):
        raise CorpusError("id and text must be strings")
    spans = []
    for ann in record.get("annotations", []):
        start, end = int(ann["start"]), int(ann["end"])
        if end > len(text):
            raise CorpusError(f"span [{start}, {end}) exceeds text length {len(text)}")
        spans.append(
            EntitySpan(
                start=start,
                end=end,
                surface=text[start:end],
                category=Category[ann["category"]],
                identifier_class=IdentifierClass[ann["identifier_class"]],
            )
        )
    return Document(id=doc_id, text=text, spans=tuple(spans))


def save_corpus(docs: Iterable[Document], path: str | Path) -> None:
    """Serialize documents back to the JSONL schema (round-trips with load)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for doc in docs:
            record = {
                "id": doc.id,
                "text": doc.text,
                "annotations": [
                    {
                        "start": s.start,
                        "end": s.end,
                        "category": s.category.name,
                        "identifier_class": s.identifier_class.name,
                    }
                    for s in doc.spans
                ],
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")


# --------------------------------------------------------------------------
# Paragraph segmentation
# --------------------------------------------------------------------------

def _paragraph_ranges(text: str) -> list[tuple[int, int]]:
    """Code-point ranges of blank-line-separated paragraphs."""
    ranges: list[tuple[int, int]] = []
    para_start: int | None = None
    para_end = 0
    pos = 0
    for line in text.splitlines(keepends=True):
        content = line.rstrip("\n")
        if content.strip():
            if para_start is None:
                para_start = pos
            para_end = pos + len(content)
        else:
            if para_start is not None:
                ranges.append((para_start, para_end))
                para_start = None
        pos += len(line)
    if para_start is not None:
        ranges.append((para_start, para_end))
    return ranges


def segment_document(doc: Document, boundary: int = 6, limit: int = 12) -> list[Document]:
    """Split a document into up to two paragraph segments.

    Segment one covers paragraphs ``[0, boundary)`` and segment two
    ``[boundary, limit)``. Documents with at most ``boundary`` paragraphs
    come back unchanged. Spans that cross a cut are dropped with a warning;
    spans inside a segment are re-offset into it.
    """
    paragraphs = _paragraph_ranges(doc.text)
    if len(paragraphs) <= boundary:
        return [doc]

    windows = [paragraphs[:boundary], paragraphs[boundary : min(limit, len(paragraphs))]]
    segments: list[Document] = []
    for idx, window in enumerate(windows, start=1):
        if not window:
            continue
        seg_start, seg_end = window[0][0], window[-1][1]
        kept: list[EntitySpan] = []
        for span in doc.spans:
            if seg_start <= span.start and span.end <= seg_end:
                kept.append(
                    EntitySpan(
                        start=span.start - seg_start,
                        end=span.end - seg_start,
                        surface=span.surface,
                        category=span.category,
                        identifier_class=span.identifier_class,
                    )
                )
        segments.append(Document(id=f"{doc.id}#{idx}", text=doc.text[seg_start:seg_end], spans=tuple(kept)))

    total_kept = sum(len(seg.spans) for seg in segments)
    dropped = len(doc.spans) - total_kept
    if dropped > 0:
        logger.warning("segmenting %r dropped %d span(s) crossing a cut or beyond the limit", doc.id, dropped)
    return segments


def parent_id(doc_id: str) -> str:
    """Id of the original document behind a segment id (identity otherwise)."""
    return doc_id.split("#", 1)[0]


# --------------------------------------------------------------------------
# Tokenizer
# --------------------------------------------------------------------------

# Characters split out as single-character tokens. Word-internal marks that
# occur inside identifier values (/ - $ % & @ _ ') stay attached so values
# like "36244/06" or "45-year-old" remain single tokens.
_SPLIT_CHARS = frozenset(set(string.punctuation) - set("/-$%&@_'")) | frozenset("“”‘’«»—–…")

PAD, UNK, BOS, EOS, NEWLINE = "<PAD>", "<UNK>", "<BOS>", "<EOS>", "<NL>"
RESERVED_TOKENS: tuple[str, ...] = (PAD, UNK, BOS, EOS, NEWLINE)
PAD_ID, UNK_ID, BOS_ID, EOS_ID, NEWLINE_ID = range(5)


def split_words(text: str) -> list[tuple[str, int, int]]:
    """Split text into (piece, start, end) triples.

    Pieces are maximal non-whitespace runs, with splitting punctuation
    emitted as single-character pieces and each newline emitted as a
    ``"\\n"`` piece. Other whitespace produces no piece.
    """
    pieces: list[tuple[str, int, int]] = []
    word_start: int | None = None
    for i, ch in enumerate(text):
        if ch == "\n":
            if word_start is not None:
                pieces.append((text[word_start:i], word_start, i))
                word_start = None
            pieces.append(("\n", i, i + 1))
        elif ch.isspace():
            if word_start is not None:
                pieces.append((text[word_start:i], word_start, i))
                word_start = None
        elif ch in _SPLIT_CHARS:
            if word_start is not None:
                pieces.append((text[word_start:i], word_start, i))
                word_start = None
            pieces.append((ch, i, i + 1))
        else:
            if word_start is None:
                word_start = i
    if word_start is not None:
        pieces.append((text[word_start:], word_start, len(text)))
    return pieces


def string_tokens(text: str) -> list[str]:
    """Token strings of a text (newlines kept as ``"\\n"`` markers)."""
    return [piece for piece, _, _ in split_words(text)]


class Vocabulary:
    """Bijective token-string/id mapping with five reserved leading ids.

    Case-sensitive by construction: "apple" and "Apple" get distinct ids.
    """

    def __init__(self, tokens: Sequence[str]) -> None:
        for tok in tokens:
            if not tok or any(c.isspace() for c in tok):
                raise CorpusError(f"invalid vocabulary token {tok!r}")
            if tok in RESERVED_TOKENS:
                raise CorpusError(f"token {tok!r} collides with a reserved token")
        self._id_to_token: tuple[str, ...] = RESERVED_TOKENS + tuple(tokens)
        self._token_to_id = {tok: i for i, tok in enumerate(self._id_to_token)}
        if len(self._token_to_id) != len(self._id_to_token):
            raise CorpusError("duplicate tokens in vocabulary")

    def __len__(self) -> int:
        return len(self._id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self._token_to_id

    def id_of(self, token: str) -> int:
        """Id of a token, falling back to the UNK id."""
        return self._token_to_id.get(token, UNK_ID)

    def token_of(self, token_id: int) -> str:
        return self._id_to_token[token_id]

    @property
    def tokens(self) -> tuple[str, ...]:
        """All tokens including the reserved prefix."""
        return self._id_to_token

    def save(self, path: str | Path) -> None:
        """Write the plain-text format: header of reserved tokens, then one token per line."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = [" ".join(RESERVED_TOKENS)]
        lines.extend(self._id_to_token[len(RESERVED_TOKENS) :])
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        if not lines or tuple(lines[0].split(" ")) != RESERVED_TOKENS:
            raise CorpusError(f"vocabulary file {path} has a bad reserved-token header")
        return cls(lines[1:])


def build_vocab(corpus: Sequence[Document], min_freq: int = 1) -> Vocabulary:
    """Build a vocabulary from a corpus.

    Tokens with frequency >= min_freq are kept, ordered by descending
    frequency then lexicographically, after the reserved ids. Newlines are
    covered by the reserved newline token and never become entries.
    """
    if not corpus:
        raise CorpusError("cannot build a vocabulary from an empty corpus")
    if min_freq < 1:
        raise CorpusError(f"min_freq must be >= 1, got {min_freq}")
    counts: dict[str, int] = {}
    for doc in corpus:
        for piece in string_tokens(doc.text):
            if piece == "\n":
                continue
            counts[piece] = counts.get(piece, 0) + 1
    kept = sorted((tok for tok, n in counts.items() if n >= min_freq), key=lambda t: (-counts[t], t))
    return Vocabulary(kept)


@dataclass(frozen=True)
class TokenizedDocument:
    """Token ids plus per-token (start, end) offsets into the source text."""

    ids: tuple[int, ...]
    offsets: tuple[tuple[int, int], ...] = field(repr=False)

    def __post_init__(self) -> None:
        if len(self.ids) != len(self.offsets):
            raise CorpusError("ids and offsets must have equal length")

    def __len__(self) -> int:
        return len(self.ids)


def tokenize(text: str, vocab: Vocabulary) -> TokenizedDocument:
    """Tokenize text against a vocabulary.

    Out-of-vocabulary pieces map to UNK but keep their offsets, so masks
    built from spans stay aligned with the original text.
    """
    ids: list[int] = []
    offsets: list[tuple[int, int]] = []
    for piece, start, end in split_words(text):
        ids.append(NEWLINE_ID if piece == "\n" else vocab.id_of(piece))
        offsets.append((start, end))
    return TokenizedDocument(ids=tuple(ids), offsets=tuple(offsets))


# Punctuation that attaches to the preceding token when detokenizing.
_ATTACH_LEFT = frozenset(".,:;!?)]}")
_ATTACH_RIGHT = frozenset("([{")


def detokenize(ids: Iterable[int], vocab: Vocabulary) -> str:
    """Render token ids back to text (inverse of tokenize up to whitespace).

    PAD/BOS/EOS are dropped; newline tokens become real newlines; closing
    punctuation attaches to the previous token.
    """
    out: list[str] = []
    prev: str | None = None
    for token_id in ids:
        if token_id in (PAD_ID, BOS_ID, EOS_ID):
            continue
        tok = vocab.token_of(token_id)
        if token_id == NEWLINE_ID:
            out.append("\n")
        elif not out or out[-1] == "\n" or tok in _ATTACH_LEFT or (prev is not None and prev in _ATTACH_RIGHT):
            out.append(tok)
        else:
            out.append(" " + tok)
        prev = "\n" if token_id == NEWLINE_ID else tok
    return "".join(out)


def case_variants(surface: str) -> list[str]:
    """Deduplicated {original, lowercase, UPPERCASE, Title Case} forms."""
    variants = [surface, surface.lower(), surface.upper(), string.capwords(surface)]
    seen: list[str] = []
    for v in variants:
        if v not in seen:
            seen.append(v)
    return seen
