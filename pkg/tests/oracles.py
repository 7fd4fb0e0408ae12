"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written the slow, literal way and must not
import the code paths it verifies.
"""

from __future__ import annotations

import math

import numpy as np


def ap_pr_area(scores, relevant) -> float | None:
    """Area under the stepwise precision-recall curve.

    Sorts by score descending with ties broken by input position, walks every
    rank accumulating precision/recall, and integrates precision over recall
    increments.
    """
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    rel = [bool(relevant[i]) for i in order]
    total = sum(rel)
    if total == 0:
        return None
    tp = 0
    area = 0.0
    prev_recall = 0.0
    for k, r in enumerate(rel, start=1):
        if r:
            tp += 1
        precision = tp / k
        recall = tp / total
        area += (recall - prev_recall) * precision
        prev_recall = recall
    return area


def reversed_perfect_ap(num_docs: int, num_relevant: int) -> float:
    """Closed form for the worst ranking: all non-relevant docs first."""
    n, r = num_docs, num_relevant
    return sum(i / (n - r + i) for i in range(1, r + 1)) / r


def topk_translations(candidates, k):
    """Brute-force sort of (target, prob) pairs by (-prob, target), truncated."""
    return [t for t, _ in sorted(candidates, key=lambda c: (-c[1], c[0]))[:k]]


def balanced_sizes(n: int, k: int) -> list[int]:
    """Fold sizes for a balanced partition of n items into k folds."""
    base, extra = divmod(n, k)
    return sorted([base + 1] * extra + [base] * (k - extra), reverse=True)


def pegasos_reference(examples, y, lam, epochs, seed, shuffle=True, project=True,
                      dim=None, collect_norms=None):
    """Literal per-step Pegasos on dense vectors, one independent run per type.

    ``examples`` holds (indices, values, xsq) triples with the bias feature
    already appended; ``y`` is a (types, examples) matrix of +-1.  When
    ``collect_norms`` is a list, the post-projection norm of every type after
    every step is appended to it.
    """
    num_types, m = y.shape
    w = np.zeros((num_types, dim))
    rng = np.random.default_rng(seed)
    tau = 0
    for _ in range(epochs):
        order = rng.permutation(m) if shuffle else np.arange(m)
        for i in order:
            tau += 1
            eta = 1.0 / (lam * tau)
            idx, val, _ = examples[i]
            x = np.zeros(dim)
            x[idx] = val
            for t in range(num_types):
                margin = y[t, i] * float(w[t] @ x)
                w[t] = (1.0 - eta * lam) * w[t]
                if margin < 1.0:
                    w[t] = w[t] + eta * y[t, i] * x
                if project:
                    norm = float(np.linalg.norm(w[t]))
                    bound = 1.0 / math.sqrt(lam)
                    if norm > bound:
                        w[t] *= bound / norm
                if collect_norms is not None:
                    collect_norms.append(float(np.linalg.norm(w[t])))
    return w


def svm_objective_bruteforce(w, X, y, lam) -> float:
    """lam/2 * ||w_nobias||^2 + mean hinge over dense rows (bias col included in X)."""
    margins = y * (X @ w)
    hinge = np.maximum(0.0, 1.0 - margins)
    return 0.5 * lam * float(w[:-1] @ w[:-1]) + float(hinge.mean())


def batch_subgradient_best(X, y, lam, iters=3000, restarts=10, seed=0):
    """Best objective over several batch subgradient runs; the bias column of X
    is the last one and is excluded from the regularizer."""
    rng = np.random.default_rng(seed)
    m, d = X.shape
    best = math.inf
    for _ in range(restarts):
        w = rng.normal(scale=0.5, size=d)
        for t in range(1, iters + 1):
            margins = y * (X @ w)
            viol = margins < 1.0
            grad = lam * np.concatenate([w[:-1], [0.0]])
            if viol.any():
                grad = grad - (y[viol, None] * X[viol]).sum(axis=0) / m
            w = w - (1.0 / (lam * (t + 10.0))) * grad
            best = min(best, svm_objective_bruteforce(w, X, y, lam))
    return best
