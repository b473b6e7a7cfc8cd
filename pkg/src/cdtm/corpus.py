"""Text ingestion: tokenization, vocabulary building, splitting, window counts.

A corpus is a shared :class:`Vocabulary` plus encoded :class:`Document`
objects (token order preserved, since the coherence windows need positions).
Raw input comes either from a directory of UTF-8 text files (one document
per file) or a single file with one document per line; an already-encoded
corpus can be round-tripped through the sparse text export.
"""

import logging
import os
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

logger = logging.getLogger(__name__)

# Common English function words.  Deliberately compact; callers needing a
# different list pass their own via CorpusConfig.
DEFAULT_STOPWORDS = frozenset("""
a about above after again against all am an and any are as at back be because
been before being below between both but by came can cannot come could did do
does doing down during each even few first for from further get got had has
have having he her here hers herself him himself his how i if in into is it
its itself just like made make many may me might more most much must my myself
never new no nor not now of off on once one only or other our ours ourselves
out over own per said same see she should so some still such than that the
their theirs them themselves then there these they this those through to too
under until up upon us very was way we well were what when where which while
who whom why will with would you your yours yourself yourselves
""".split())

_NON_ALNUM = re.compile(r"[^0-9a-zA-Z]+")


@dataclass(frozen=True)
class CorpusConfig:
    """Preprocessing settings for tokenize/build_corpus.

    Defaults mirror common topic-modeling practice: lowercase, strip
    non-alphanumerics, drop tokens shorter than 2 characters, drop English
    stopwords, require document frequency >= 5, and drop tokens appearing
    in more than half of all documents.
    """

    lowercase: bool = True
    min_token_len: int = 2
    stopwords: frozenset = DEFAULT_STOPWORDS
    min_doc_freq: int = 5
    max_doc_fraction: float = 0.5

    def validate(self):
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")
        if self.min_doc_freq < 1:
            raise ValueError("min_doc_freq must be >= 1")
        if not 0.0 < self.max_doc_fraction <= 1.0:
            raise ValueError("max_doc_fraction must lie in (0, 1]")


@dataclass
class Vocabulary:
    terms: list
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {t: j for j, t in enumerate(self.terms)}

    def __len__(self):
        return len(self.terms)

    def encode(self, tokens, drop_unknown=False):
        if drop_unknown:
            return [self.index[t] for t in tokens if t in self.index]
        return [self.index[t] for t in tokens]

    def decode(self, word_ids):
        return [self.terms[w] for w in word_ids]


@dataclass
class Document:
    id: str
    tokens: np.ndarray  # word ids, position order preserved

    def __post_init__(self):
        self.tokens = np.asarray(self.tokens, dtype=np.int64)

    def __len__(self):
        return int(self.tokens.shape[0])


@dataclass
class Corpus:
    vocabulary: Vocabulary
    documents: list
    dropped_ids: list = field(default_factory=list)

    @property
    def n_docs(self):
        return len(self.documents)

    @property
    def n_words(self):
        return len(self.vocabulary)

    def word_counts(self):
        """Corpus-wide occurrence count per word id, as a length-V array."""
        counts = np.zeros(len(self.vocabulary), dtype=np.int64)
        for doc in self.documents:
            np.add.at(counts, doc.tokens, 1)
        return counts


@dataclass
class WindowCounts:
    window_size: int
    total_windows: int
    unigram: dict  # word id -> number of windows containing the word
    pair: dict  # (i, j) with i < j -> number of windows containing both

    def pair_count(self, i, j):
        if i == j:
            return self.unigram.get(i, 0)
        key = (i, j) if i < j else (j, i)
        return self.pair.get(key, 0)


def tokenize(raw_text, config=CorpusConfig()):
    """Split raw text into filtered token strings.

    Lowercases (if configured), replaces non-alphanumeric characters with
    spaces, splits on whitespace, then applies the length and stopword
    filters.  May return an empty list.
    """
    text = raw_text.lower() if config.lowercase else raw_text
    tokens = _NON_ALNUM.split(text)
    out = []
    stop = config.stopwords or frozenset()
    for t in tokens:
        if len(t) < config.min_token_len:
            continue
        if t in stop:
            continue
        out.append(t)
    return out


def build_corpus(raw_docs, config=CorpusConfig()):
    """Tokenize raw documents and encode them against a filtered vocabulary.

    ``raw_docs`` is an iterable of (doc_id, raw_text) pairs.  The vocabulary
    keeps exactly the tokens whose document frequency df satisfies
    min_doc_freq <= df <= max_doc_fraction * D, sorted lexicographically.
    Documents emptied by the filters are dropped (with a warning) and listed
    in ``Corpus.dropped_ids``.
    """
    config.validate()
    pairs = [(str(doc_id), tokenize(text, config)) for doc_id, text in raw_docs]
    if not pairs:
        raise ValueError("build_corpus requires at least one document")

    df = Counter()
    for _, toks in pairs:
        df.update(set(toks))
    n_docs = len(pairs)
    max_df = config.max_doc_fraction * n_docs
    kept = sorted(t for t, c in df.items() if c >= config.min_doc_freq and c <= max_df)
    vocab = Vocabulary(kept)

    documents, dropped = [], []
    for doc_id, toks in pairs:
        ids = vocab.encode(toks, drop_unknown=True)
        if ids:
            documents.append(Document(doc_id, ids))
        else:
            dropped.append(doc_id)
    if dropped:
        logger.warning(
            "build_corpus dropped %d empty documents after filtering: %s",
            len(dropped),
            ", ".join(dropped[:10]) + ("..." if len(dropped) > 10 else ""),
        )
    if not documents:
        raise ValueError("all documents empty after filtering")
    return Corpus(vocab, documents, dropped)


def _restrict_to_train(train_docs, other_docs, vocabulary):
    """Rebuild the vocabulary from the training documents and re-encode both halves.

    Tokens absent from every training document are dropped from the other
    half (its documents may end up empty; they are kept so that the split
    stays an exhaustive partition).
    """
    seen = set()
    for doc in train_docs:
        seen.update(doc.tokens.tolist())
    old_terms = vocabulary.terms
    kept = sorted(seen)
    new_vocab = Vocabulary([old_terms[w] for w in kept])
    remap = {w: j for j, w in enumerate(kept)}

    def re_encode(docs):
        out = []
        for doc in docs:
            ids = [remap[w] for w in doc.tokens.tolist() if w in remap]
            out.append(Document(doc.id, ids))
        return out

    return new_vocab, re_encode(train_docs), re_encode(other_docs)


def split_corpus(corpus, train_fraction, seed):
    """Randomly partition documents into train/test corpora.

    The split uses floor(D * train_fraction) training documents with a
    minimum of one document on each side.  The vocabulary is rebuilt from
    the training half; test tokens outside it are dropped.
    """
    n_docs = corpus.n_docs
    if n_docs < 2:
        raise ValueError("split_corpus requires at least 2 documents")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly in (0, 1)")
    n_train = int(np.floor(n_docs * train_fraction))
    n_train = min(max(n_train, 1), n_docs - 1)

    perm = np.random.default_rng(seed).permutation(n_docs)
    train_idx = sorted(perm[:n_train].tolist())
    test_idx = sorted(perm[n_train:].tolist())
    train_docs = [corpus.documents[i] for i in train_idx]
    test_docs = [corpus.documents[i] for i in test_idx]

    vocab, train_docs, test_docs = _restrict_to_train(train_docs, test_docs, corpus.vocabulary)
    return Corpus(vocab, train_docs), Corpus(vocab, test_docs)


def kfold_split(corpus, folds, seed):
    """Yield (train, validation) corpus pairs for deterministic k-fold CV.

    Fold f's validation set is every folds-th document of a seeded
    permutation; as in split_corpus, each fold pair shares the vocabulary
    rebuilt from its training side.
    """
    n_docs = corpus.n_docs
    if folds < 2 or folds > n_docs:
        raise ValueError("folds must satisfy 2 <= folds <= D")
    perm = np.random.default_rng(seed).permutation(n_docs)
    for f in range(folds):
        valid_idx = sorted(perm[f::folds].tolist())
        valid_set = set(valid_idx)
        train_idx = [i for i in range(n_docs) if i not in valid_set]
        train_docs = [corpus.documents[i] for i in train_idx]
        valid_docs = [corpus.documents[i] for i in valid_idx]
        vocab, train_docs, valid_docs = _restrict_to_train(
            train_docs, valid_docs, corpus.vocabulary
        )
        yield Corpus(vocab, train_docs), Corpus(vocab, valid_docs)


def count_windows(corpus, window_size, target_words):
    """Boolean sliding-window co-occurrence counts over the target words.

    Every contiguous span of ``window_size`` tokens (step 1) is one window;
    documents shorter than the window contribute a single whole-document
    window.  unigram(w) counts windows containing w at least once, pair(i,j)
    counts windows containing both words.
    """
    if window_size < 2:
        raise ValueError("window_size must be >= 2")
    targets = sorted(set(int(w) for w in target_words))
    if not targets:
        raise ValueError("count_windows requires a non-empty target set")
    n_targets = len(targets)

    total = 0
    joint = np.zeros((n_targets, n_targets), dtype=np.int64)
    for doc in corpus.documents:
        n = len(doc)
        if n == 0:
            continue
        n_win = max(1, n - window_size + 1)
        total += n_win
        # presence[a, t]: does target a occur in window t
        presence = np.zeros((n_targets, n_win), dtype=np.int64)
        tokens = doc.tokens
        for a, w in enumerate(targets):
            hits = np.zeros(n, dtype=np.int64)
            hits[tokens == w] = 1
            if not hits.any():
                continue
            if n_win == 1:
                presence[a, 0] = 1
            else:
                cs = np.concatenate([[0], np.cumsum(hits)])
                presence[a] = (cs[window_size:] - cs[:-window_size]) > 0
        joint += presence @ presence.T

    unigram = {}
    pair = {}
    for a, w in enumerate(targets):
        if joint[a, a]:
            unigram[w] = int(joint[a, a])
        for b in range(a + 1, n_targets):
            if joint[a, b]:
                pair[(w, targets[b])] = int(joint[a, b])
    return WindowCounts(window_size, total, unigram, pair)


# ---------------------------------------------------------------------------
# On-disk formats


def read_raw_docs(path):
    """Load (doc_id, raw_text) pairs from a directory of files or a line file."""
    if os.path.isdir(path):
        names = sorted(
            n for n in os.listdir(path) if os.path.isfile(os.path.join(path, n))
        )
        if not names:
            raise ValueError("no files found in %s" % path)
        out = []
        for name in names:
            with open(os.path.join(path, name), encoding="utf-8") as fh:
                out.append((os.path.splitext(name)[0], fh.read()))
        return out
    with open(path, encoding="utf-8") as fh:
        return [
            ("line%06d" % (i + 1), line.rstrip("\n")) for i, line in enumerate(fh)
        ]


def write_vocabulary_tsv(corpus, path):
    """Write `word_id<TAB>term<TAB>document_frequency` rows."""
    df = Counter()
    for doc in corpus.documents:
        df.update(set(doc.tokens.tolist()))
    with open(path, "w", encoding="utf-8") as fh:
        for j, term in enumerate(corpus.vocabulary.terms):
            fh.write("%d\t%s\t%d\n" % (j, term, df.get(j, 0)))


def read_vocabulary_tsv(path):
    terms = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            wid, term, _df = line.rstrip("\n").split("\t")
            if int(wid) != len(terms):
                raise ValueError("vocabulary TSV word ids must be consecutive from 0")
            terms.append(term)
    return Vocabulary(terms)


def write_encoded_corpus(corpus, path):
    """Write one `doc_id<TAB>N_d<TAB>w_1 w_2 ...` line per document."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            ids = " ".join(str(w) for w in doc.tokens.tolist())
            fh.write("%s\t%d\t%s\n" % (doc.id, len(doc), ids))


def read_encoded_corpus(path, vocabulary):
    documents = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            doc_id, n_str, ids = (line.rstrip("\n").split("\t") + [""])[:3]
            tokens = [int(w) for w in ids.split()] if ids else []
            if len(tokens) != int(n_str):
                raise ValueError("token count mismatch for document %r" % doc_id)
            if tokens and max(tokens) >= len(vocabulary):
                raise ValueError("word id out of range for document %r" % doc_id)
            documents.append(Document(doc_id, tokens))
    if not documents:
        raise ValueError("encoded corpus %s holds no documents" % path)
    return Corpus(vocabulary, documents)
