"""Topic-quality and concentration evaluation.

Coherence: each topic's top-N words are scored with C_V, built from NPMI
statistics over boolean sliding windows.  Every word gets an N-vector of
NPMIs against the topic's word set, the topic vector is the sum of those
vectors, and C_V is the mean cosine similarity between word vectors and
topic vector.

Concentration: per-document topic entropies H(theta_d) with summary
statistics (sample variance, skewness, excess kurtosis) and a fixed-width
histogram.

Model selection: two-stage cross-validation, first the topic count by
held-out perplexity with no entropy penalty, then the penalty weight by
held-out coherence at the chosen topic count.
"""

import json
import logging
import math
from collections import namedtuple
from dataclasses import dataclass, field, replace

import numpy as np

from .corpus import count_windows, kfold_split
from .inference import fit, perplexity

logger = logging.getLogger(__name__)

NPMI_EPS = 1e-12
ENTROPY_BIN_WIDTH = 0.05
DEFAULT_TOP_N = 20
DEFAULT_WINDOW_SIZE = 110


@dataclass
class TopicTopWords:
    topic_id: int
    words: list  # word ids, descending topic weight

    def __post_init__(self):
        if len(self.words) < 2:
            raise ValueError("a topic needs at least 2 top words")
        if len(set(self.words)) != len(self.words):
            raise ValueError("top words must be distinct")


@dataclass
class CoherenceReport:
    per_topic: dict  # topic_id -> C_V in [-1, 1]
    mean_cv: float
    window_size: int
    top_n: int
    topics: list = field(default_factory=list)  # the TopicTopWords scored


@dataclass
class EntropyStats:
    entropies: np.ndarray  # H(gamma_d / sum gamma_d) per document
    mean: float
    variance: float  # n-1 denominator
    skewness: float
    excess_kurtosis: float
    K: int


GridRow = namedtuple("GridRow", "K lam fold metric_name value")


def entropy(dist):
    """Shannon entropy -sum p log p (natural log, 0 log 0 = 0) of a simplex point."""
    d = np.asarray(dist, dtype=np.float64)
    if d.ndim != 1 or d.size < 1:
        raise ValueError("entropy expects a 1-D distribution")
    if np.any(d < 0) or abs(float(d.sum()) - 1.0) > 1e-9:
        raise ValueError("distribution is not on the simplex")
    pos = d[d > 0].tolist()
    return -math.fsum(p * math.log(p) for p in pos)


def entropy_stats(per_doc_gamma):
    """Per-document entropies of the normalized gammas, with summary statistics.

    Variance uses the n-1 denominator; skewness and excess kurtosis are the
    central-moment ratios m3/m2^1.5 and m4/m2^2 - 3 (returned as 0 when the
    entropies are all equal).
    """
    if len(per_doc_gamma) == 0:
        raise ValueError("entropy_stats requires at least one document")
    first = np.asarray(per_doc_gamma[0], dtype=np.float64)
    K = first.shape[0]
    ents = []
    for g in per_doc_gamma:
        arr = np.asarray(g, dtype=np.float64)
        if arr.ndim != 1 or arr.shape[0] != K:
            raise ValueError("all gamma vectors must share one length")
        ents.append(entropy(arr / float(arr.sum())))
    e = np.asarray(ents)
    n = e.shape[0]
    mean = float(e.mean())
    d = e - mean
    variance = float(np.dot(d, d) / (n - 1)) if n > 1 else 0.0
    m2 = float(np.mean(d * d))
    if m2 > 0.0:
        skew = float(np.mean(d**3)) / m2**1.5
        kurt = float(np.mean(d**4)) / (m2 * m2) - 3.0
    else:
        skew, kurt = 0.0, 0.0
    return EntropyStats(e, mean, variance, skew, kurt, K)


def npmi(word_i, word_j, counts):
    """Normalized pointwise mutual information from sliding-window counts.

    Probabilities are window-occurrence fractions; 1e-12 is added inside
    each log argument and the result is clamped to [-1, 1].  A word paired
    with itself scores 1 when it occurs at all, and a pair present in every
    window scores 1 (the always-together limit).
    """
    if counts.total_windows <= 0:
        raise ValueError("counts hold no windows")
    total = float(counts.total_windows)
    c_i = counts.unigram.get(word_i, 0)
    if word_i == word_j and c_i > 0:
        return 1.0
    c_j = counts.unigram.get(word_j, 0)
    c_ij = counts.pair_count(word_i, word_j)
    if c_ij == counts.total_windows:
        return 1.0
    p_ij = c_ij / total
    num = math.log(p_ij + NPMI_EPS) - math.log((c_i / total) * (c_j / total) + NPMI_EPS)
    den = -math.log(p_ij + NPMI_EPS)
    return max(-1.0, min(1.0, num / den))


def _cosine(u, v):
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return max(-1.0, min(1.0, float(np.dot(u, v)) / (nu * nv)))


def cv_score(topic, counts):
    """C_V for one topic: mean cosine between per-word NPMI vectors and their sum.

    The counts must have been built with every top word tracked.
    """
    words = topic.words
    n = len(words)
    mat = np.empty((n, n))
    for a in range(n):
        for b in range(a, n):
            val = npmi(words[a], words[b], counts)
            mat[a, b] = val
            mat[b, a] = val
    topic_vec = mat.sum(axis=0)
    sims = [_cosine(mat[a], topic_vec) for a in range(n)]
    return float(math.fsum(sims) / n)


def coherence_report(model, reference_corpus, top_n=DEFAULT_TOP_N, window_size=DEFAULT_WINDOW_SIZE):
    """Score every topic's top words against a reference corpus.

    Window statistics are pooled over the union of all topics' top words,
    then each topic is scored with cv_score and the scores averaged.
    """
    if top_n < 2:
        raise ValueError("top_n must be >= 2")
    if top_n > model.V:
        raise ValueError("top_n %d exceeds vocabulary size %d" % (top_n, model.V))
    topics = []
    for k in range(model.K):
        order = np.argsort(-model.eta[k], kind="stable")[:top_n]
        topics.append(TopicTopWords(k, [int(w) for w in order]))
    union = sorted({w for t in topics for w in t.words})
    counts = count_windows(reference_corpus, window_size, union)
    per_topic = {t.topic_id: cv_score(t, counts) for t in topics}
    mean_cv = math.fsum(per_topic.values()) / len(per_topic)
    return CoherenceReport(per_topic, mean_cv, window_size, top_n, topics)


def grid_select(
    corpus,
    candidate_Ks,
    candidate_lambdas,
    folds,
    config,
    coherence_on="validation",
    top_n=DEFAULT_TOP_N,
    window_size=DEFAULT_WINDOW_SIZE,
):
    """Two-stage cross-validated selection of the topic count and penalty weight.

    Stage 1 picks K by mean held-out perplexity with the penalty off; stage
    2 picks lambda by mean coherence at that K.  Ties go to the smaller
    value.  Coherence probabilities come from the validation fold by
    default (coherence_on="train" switches to the training fold).  Returns
    (best K, best lambda, list of GridRow).
    """
    if folds < 2:
        raise ValueError("cross-validation needs folds >= 2")
    if not candidate_Ks or not candidate_lambdas:
        raise ValueError("candidate grids must be non-empty")
    if coherence_on not in ("validation", "train"):
        raise ValueError("coherence_on must be 'validation' or 'train'")
    splits = list(kfold_split(corpus, folds, config.seed))
    fits = {}

    def fitted(k, lam, fold_idx):
        key = (k, lam, fold_idx)
        if key not in fits:
            cfg = replace(config, K=k, lam=lam)
            fits[key] = (fit(splits[fold_idx][0], cfg), cfg)
        return fits[key]

    table = []
    k_means = {}
    for k in candidate_Ks:
        vals = []
        for f in range(folds):
            res, cfg = fitted(int(k), 0.0, f)
            pp = perplexity(splits[f][1], res.model, cfg)
            table.append(GridRow(int(k), 0.0, f, "perplexity", pp))
            vals.append(pp)
        k_means[int(k)] = math.fsum(vals) / folds
        logger.info("grid: K=%d mean perplexity %.4f", int(k), k_means[int(k)])
    best_k = min((int(k) for k in candidate_Ks), key=lambda k: (k_means[k], k))

    lam_means = {}
    for lam in candidate_lambdas:
        vals = []
        for f in range(folds):
            res, _ = fitted(best_k, float(lam), f)
            ref = splits[f][1] if coherence_on == "validation" else splits[f][0]
            rep = coherence_report(res.model, ref, top_n, window_size)
            table.append(GridRow(best_k, float(lam), f, "mean_cv", rep.mean_cv))
            vals.append(rep.mean_cv)
        lam_means[float(lam)] = math.fsum(vals) / folds
        logger.info("grid: lambda=%g mean C_V %.4f", lam, lam_means[float(lam)])
    best_lam = min((float(l) for l in candidate_lambdas), key=lambda l: (-lam_means[l], l))
    return best_k, best_lam, table


# ---------------------------------------------------------------------------
# Report files


def write_coherence_csv(report, vocabulary, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("topic_id,top_words,cv_score\n")
        for topic in report.topics:
            words = "|".join(vocabulary.terms[w] for w in topic.words)
            fh.write("%d,%s,%.17g\n" % (topic.topic_id, words, report.per_topic[topic.topic_id]))
        fh.write("mean,,%.17g\n" % report.mean_cv)


def write_entropy_csv(doc_ids, entropies, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("doc_id,entropy\n")
        for doc_id, ent in zip(doc_ids, entropies):
            fh.write("%s,%.17g\n" % (doc_id, ent))


def write_entropy_stats_json(stats, path):
    log_k = math.log(stats.K)
    n_bins = max(1, math.ceil(log_k / ENTROPY_BIN_WIDTH))
    edges = [i * ENTROPY_BIN_WIDTH for i in range(n_bins + 1)]
    counts, _ = np.histogram(stats.entropies, bins=edges)
    payload = {
        "mean": stats.mean,
        "variance": stats.variance,
        "skewness": stats.skewness,
        "excess_kurtosis": stats.excess_kurtosis,
        "K": stats.K,
        "histogram": {
            "bin_width": ENTROPY_BIN_WIDTH,
            "bins": edges,
            "counts": [int(c) for c in counts],
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def write_grid_csv(rows, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("K,lambda,fold,metric_name,value\n")
        for row in rows:
            fh.write(
                "%d,%.17g,%d,%s,%.17g\n"
                % (row.K, row.lam, row.fold, row.metric_name, row.value)
            )
