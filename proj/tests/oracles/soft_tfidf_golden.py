#!/usr/bin/env python3
"""Writes the Soft-TFIDF golden table used by the unit tests.

Independent of the C++ code: Jaro-Winkler and the TF-IDF weighting are written
out here from their textbook definitions. The corpus for each row is the two
strings themselves and idf(t) = ln(1 + N / df(t)).
"""
import csv
import math
import re
import sys
from collections import Counter

CASES = [
    ("Mickey Beats", "Mickey Beets", 0.5),
    ("Joan Beats", "Joan Beats", 0.5),
    ("William Smith", "Smith, Bill", 0.8),
    ("12 Maple Avenue", "12 Maple Ave", 0.9),
    ("Susan Jones", "Samuel Johnson", 0.7),
]


def tokens(s):
    return [t.lower() for t in re.split(r"[\s,;/]+", s) if t]


def jaro(a, b):
    if not a and not b:
        return 1.0
    if not a or not b:
        return 0.0
    window = max(max(len(a), len(b)) // 2 - 1, 0)
    used_a = [False] * len(a)
    used_b = [False] * len(b)
    m = 0
    for i, ca in enumerate(a):
        for j in range(max(0, i - window), min(len(b), i + window + 1)):
            if not used_b[j] and b[j] == ca:
                used_a[i] = used_b[j] = True
                m += 1
                break
    if m == 0:
        return 0.0
    sa = [c for c, u in zip(a, used_a) if u]
    sb = [c for c, u in zip(b, used_b) if u]
    t = sum(x != y for x, y in zip(sa, sb)) // 2
    return (m / len(a) + m / len(b) + (m - t) / m) / 3.0


def jaro_winkler(a, b):
    j = jaro(a, b)
    if j <= 0.7:
        return j
    p = 0
    while p < 4 and p < len(a) and p < len(b) and a[p] == b[p]:
        p += 1
    return j + p * 0.1 * (1.0 - j)


def weights(bag, docs):
    n = len(docs)
    tf = Counter(bag)
    w = {t: c * math.log(1.0 + n / sum(t in d for d in docs)) for t, c in tf.items()}
    norm = math.sqrt(sum(v * v for v in w.values()))
    return {t: v / norm for t, v in w.items()}


def soft_tfidf(s1, s2, theta):
    t1, t2 = tokens(s1), tokens(s2)
    if not t1 or not t2:
        return 0.0
    docs = [set(t1), set(t2)]
    v1, v2 = weights(t1, docs), weights(t2, docs)
    score = 0.0
    for w in sorted(v1):
        best, partner = max(((1.0 if w == v else jaro_winkler(w, v), v) for v in sorted(v2)),
                            key=lambda x: x[0])
        if best >= theta:
            score += v1[w] * v2[partner] * best
    return min(max(score, 0.0), 1.0)


def cosine(s1, s2):
    t1, t2 = tokens(s1), tokens(s2)
    docs = [set(t1), set(t2)]
    v1, v2 = weights(t1, docs), weights(t2, docs)
    return sum(v1[t] * v2[t] for t in v1 if t in v2)


def main(path):
    with open(path, "w", newline="") as f:
        out = csv.writer(f, lineterminator="\n")
        out.writerow(["s1", "s2", "theta", "soft_tfidf", "cosine"])
        for s1, s2, theta in CASES:
            out.writerow([s1, s2, theta, repr(soft_tfidf(s1, s2, theta)), repr(cosine(s1, s2))])


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "soft_tfidf_golden.csv")
