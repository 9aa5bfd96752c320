"""Independent reference implementations used only by the tests.

Nothing here touches the digraph machinery: structures are generated by
plain recursion over concrete parts and filtered by direct predicates.
"""

from fractions import Fraction
from math import comb


def colors(kind, n, arg=None):
    if kind == "ordinary":
        return 1
    if kind == "ncolor":
        return n
    if kind == "multiset":
        return comb(n + arg - 1, arg - 1)
    if kind == "alphabet":
        return arg if n == 1 else 0
    raise ValueError(kind)


def compositions(n, kind="ordinary", arg=None):
    """All sequences of (size, color) summing to n."""
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for c in range(colors(kind, first, arg)):
            for rest in compositions(n - first, kind, arg):
                yield ((first, c),) + rest


def carlitz_ok(seq, k=1):
    return all(seq[i] != seq[j] for i in range(len(seq))
               for j in range(i + 1, min(len(seq), i + k + 1)))


def alternating_ok(seq):
    s = [p[0] for p in seq]
    if s == [1]:
        return False
    if any(a == b for a, b in zip(s, s[1:])):
        return False
    return all((b - a) * (c - b) < 0 for a, b, c in zip(s, s[1:], s[2:]))


def avoids(seq, pattern):
    L = len(pattern)
    return all(tuple(seq[i:i + L]) != pattern for i in range(len(seq) - L + 1))


def longest_run(seq, c):
    best = 0
    L = len(c)
    for i in range(len(seq)):
        k = 0
        while tuple(seq[i + k * L:i + (k + 1) * L]) == c:
            k += 1
        best = max(best, k)
    return best


def run_cdf(structs, c, k):
    return Fraction(sum(1 for a in structs if longest_run(a, c) < k), len(structs))
