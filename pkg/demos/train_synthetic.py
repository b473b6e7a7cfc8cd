"""Train on synthetic data and watch the entropy penalty concentrate documents.

Generates a corpus from 5 planted word blocks (each document mixes 1-2 of
them), fits the model once with the penalty off and once with lambda=35,
and compares ELBO traces, per-document entropies, and top words.

Run:  python3 demos/train_synthetic.py
"""

import numpy as np

from cdtm import TrainConfig, entropy, entropy_stats, fit
from cdtm.corpus import Corpus, Document, Vocabulary


def planted_corpus(seed=11, n_docs=30, vocab_size=60, k_true=5):
    """Documents drawn from block-structured topics, 1-2 active blocks each."""
    rng = np.random.default_rng(seed)
    block = vocab_size // k_true
    topics = np.full((k_true, vocab_size), 0.01 / vocab_size)
    for k in range(k_true):
        topics[k, k * block : (k + 1) * block] += 0.99 / block
    topics /= topics.sum(axis=1, keepdims=True)

    vocab = Vocabulary(["word%03d" % j for j in range(vocab_size)])
    docs = []
    for d in range(n_docs):
        n_active = int(rng.integers(1, 3))
        active = rng.choice(k_true, size=n_active, replace=False)
        mix = rng.dirichlet(np.full(n_active, 5.0))
        word_p = mix @ topics[active]
        n = int(rng.integers(60, 150))
        docs.append(Document("doc%03d" % d, rng.choice(vocab_size, size=n, p=word_p)))
    return Corpus(vocab, docs)


def top_words(model, corpus, k, n=6):
    order = np.argsort(-model.eta[k])[:n]
    return " ".join(corpus.vocabulary.terms[w] for w in order)


def main():
    corpus = planted_corpus()
    print(
        "corpus: %d documents, %d vocabulary terms, %d tokens"
        % (corpus.n_docs, corpus.n_words, sum(len(d) for d in corpus.documents))
    )

    results = {}
    for lam in (0.0, 35.0):
        config = TrainConfig(K=5, lam=lam, seed=3, em_max_iters=25)
        res = fit(corpus, config)
        results[lam] = res
        trace = res.elbo_trace
        print(
            "\nlambda=%-4g  %d EM iterations (converged=%s)" % (lam, res.iterations_run, res.converged)
        )
        print("  ELBO: first %.2f -> last %.2f" % (trace[0].total, trace[-1].total))
        if lam > 0:
            print("  final penalty term: %.4f" % trace[-1].penalty_term)

    print("\nper-document topic entropy (normalized gamma):")
    for lam, res in results.items():
        stats = entropy_stats([vp.gamma for vp in res.per_doc])
        print(
            "  lambda=%-4g  mean %.4f  variance %.5f  min %.4f  max %.4f"
            % (lam, stats.mean, stats.variance, stats.entropies.min(), stats.entropies.max())
        )
    print("(smaller mean entropy = documents concentrated on fewer topics)")

    print("\nmost-probable documents' topic mixes, lambda=35:")
    res = results[35.0]
    for vp, doc in list(zip(res.per_doc, corpus.documents))[:5]:
        theta = vp.gamma / vp.gamma.sum()
        mix = " ".join("%.2f" % v for v in theta)
        print("  %s  theta=[%s]  H=%.3f" % (doc.id, mix, entropy(theta)))

    print("\ntop words per topic (lambda=35):")
    for k in range(5):
        print("  topic %d: %s" % (k, top_words(res.model, corpus, k)))


if __name__ == "__main__":
    main()
