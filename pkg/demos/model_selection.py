"""Two-stage cross-validated selection of the topic count and penalty weight.

Stage 1 scores each candidate K by held-out perplexity with the penalty
off; stage 2 fixes the winning K and scores each candidate lambda by mean
topic coherence.  The demo prints the full grid table and the selection.

Run:  python3 demos/model_selection.py
"""

import numpy as np

from cdtm import TrainConfig, grid_select
from cdtm.corpus import Corpus, Document, Vocabulary


def planted_corpus(seed=29, n_docs=24, vocab_size=40, k_true=4):
    rng = np.random.default_rng(seed)
    block = vocab_size // k_true
    topics = np.full((k_true, vocab_size), 0.01 / vocab_size)
    for k in range(k_true):
        topics[k, k * block : (k + 1) * block] += 0.99 / block
    topics /= topics.sum(axis=1, keepdims=True)
    vocab = Vocabulary(["term%02d" % j for j in range(vocab_size)])
    docs = []
    for d in range(n_docs):
        active = rng.choice(k_true, size=int(rng.integers(1, 3)), replace=False)
        mix = rng.dirichlet(np.full(len(active), 5.0))
        n = int(rng.integers(40, 90))
        docs.append(
            Document("doc%02d" % d, rng.choice(vocab_size, size=n, p=mix @ topics[active]))
        )
    return Corpus(vocab, docs)


def main():
    corpus = planted_corpus()
    config = TrainConfig(K=2, em_max_iters=10, seed=1)
    candidate_Ks = [2, 4]
    candidate_lambdas = [0.0, 20.0]

    best_k, best_lam, rows = grid_select(
        corpus,
        candidate_Ks,
        candidate_lambdas,
        folds=2,
        config=config,
        top_n=5,
        window_size=30,
    )

    print("grid results (stage 1 scores K at lambda=0, stage 2 scores lambda at the best K):")
    print("  %-4s %-8s %-5s %-12s %s" % ("K", "lambda", "fold", "metric", "value"))
    for row in rows:
        print(
            "  %-4d %-8g %-5d %-12s %.4f"
            % (row.K, row.lam, row.fold, row.metric_name, row.value)
        )

    k_means = {}
    for row in rows:
        if row.metric_name == "perplexity":
            k_means.setdefault(row.K, []).append(row.value)
    print("\nmean held-out perplexity by K:")
    for k, vals in sorted(k_means.items()):
        print("  K=%d  %.3f%s" % (k, np.mean(vals), "   <- selected" if k == best_k else ""))

    lam_means = {}
    for row in rows:
        if row.metric_name == "mean_cv":
            lam_means.setdefault(row.lam, []).append(row.value)
    print("\nmean C_V by lambda (at K=%d):" % best_k)
    for lam, vals in sorted(lam_means.items()):
        print("  lambda=%-4g %.4f%s" % (lam, np.mean(vals), "   <- selected" if lam == best_lam else ""))

    print("\nselected: K=%d, lambda=%g" % (best_k, best_lam))


if __name__ == "__main__":
    main()
