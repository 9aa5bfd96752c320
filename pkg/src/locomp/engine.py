"""Size-graded walk counting over a compressed class digraph.

The digraph is handed to the engine as a :class:`Plan`.  Vertices are
grouped twice:

* by *in-group*: vertices whose admissible predecessors coincide.  The
  number of walk prefixes of total size ``t`` that may be extended by
  such a vertex is one array ``G[g][t]``.
* by *out-bucket*: vertices whose admissible successors coincide.  The
  number of walk prefixes of size ``s`` ending in the bucket is
  ``bucket[b][s]``.

A :class:`Member` is a set of vertices sharing in-group, out-bucket,
finish flag and target-occurrence count; its sizes are stored as
arithmetic segments with constant multiplicity, so the contribution of a
whole segment is one difference of strided prefix sums of ``G``.

Values carry ``d`` channels.  ``count`` mode has one channel; ``register``
mode keeps the distribution of a bounded occurrence counter; ``moments``
mode keeps (count, sum of occurrences, sum of squared occurrences).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

Segment = Tuple[int, int, int, int]  # first size, stride, count, multiplicity


@dataclass
class Member:
    group: int
    bucket: int          # -1 when no vertex of D continues from here
    finish: bool
    occ: int
    segments: List[Segment]


@dataclass
class Plan:
    n_groups: int
    n_buckets: int
    start: List[bool]
    # per in-group: (negated, bucket indices); negated means "all but"
    preds: List[Tuple[bool, List[int]]]
    members: List[Member]
    empty: bool = False
    # stride -> groups that need strided prefix sums
    strides: Dict[int, List[int]] = field(default_factory=dict)

    def finalize(self) -> "Plan":
        need: Dict[int, set] = {}
        for mem in self.members:
            for _, stride, _, _ in mem.segments:
                need.setdefault(stride, set()).add(mem.group)
        self.strides = {s: sorted(g) for s, g in sorted(need.items())}
        return self


def segments_from_sizes(sizes: Dict[int, int]) -> List[Segment]:
    """Greedy decomposition of ``{size: multiplicity}`` into arithmetic runs."""
    items = sorted((s, m) for s, m in sizes.items() if m)
    out: List[Segment] = []
    i = 0
    while i < len(items):
        first, mult = items[i]
        if i + 1 < len(items) and items[i + 1][1] == mult:
            stride = items[i + 1][0] - first
            j = i + 1
            while (j + 1 < len(items) and items[j + 1][1] == mult
                   and items[j + 1][0] - items[j][0] == stride):
                j += 1
            out.append((first, stride, j - i + 1, mult))
            i = j + 1
        else:
            out.append((first, 1, 1, mult))
            i += 1
    return out


def _mixer(mode: str, d: int, occ: int):
    """Linear map applied to a vertex contribution with ``occ`` hits."""
    if occ == 0:
        return None
    if mode == "register":
        cap = d - 1
        return [(j, min(j + occ, cap), 1) for j in range(d)]
    if mode == "moments":
        return [(0, 0, 1), (1, 1, 1), (2, 2, 1),
                (0, 1, occ), (1, 2, 2 * occ), (0, 2, occ * occ)]
    raise ValueError(f"occurrence counts need register or moments mode, got {mode}")


def run_plan(plan: Plan, n: int, mode: str = "count", cap: int = 32):
    """Per-channel arrays ``res[ch][s]`` for ``0 <= s <= n``.

    ``res[0]`` is the structure count in ``count`` mode; in ``register``
    mode ``res[j][s]`` counts structures of size s with ``min(occ, cap)``
    equal to j; in ``moments`` mode the three channels are the raw moments.
    """
    if mode == "count":
        d = 1
    elif mode == "register":
        if cap < 1:
            raise ValueError("register cap must be positive")
        d = cap + 1
    elif mode == "moments":
        d = 3
    else:
        raise ValueError(f"unknown mode {mode!r}")

    N = n + 1
    chans = range(d)
    G = [[[0] * N for _ in chans] for _ in range(plan.n_groups)]
    pref = {(g, st): [[0] * N for _ in chans]
            for st, gs in plan.strides.items() for g in gs}
    pref_by_group: Dict[int, List[Tuple[int, List[List[int]]]]] = {}
    for (g, st), arr in pref.items():
        pref_by_group.setdefault(g, []).append((st, arr))
    bucket = [[[0] * N for _ in chans] for _ in range(plan.n_buckets)]
    res = [[0] * N for _ in chans]

    members = [(m.group, m.bucket, m.finish, _mixer(mode, d, m.occ),
                [(first, st, cnt, mult, pref[(m.group, st)])
                 for first, st, cnt, mult in m.segments])
               for m in plan.members]
    preds = plan.preds
    any_neg = any(neg for neg, _ in preds)
    start = plan.start

    for s in range(N):
        # vertices ending exactly at total size s
        for g, b, fin, mix, segs in members:
            val = [0] * d
            hit = False
            for first, st, cnt, mult, P in segs:
                t0 = s - first
                if t0 < 0:
                    continue
                lo = t0 - cnt * st
                for ch in chans:
                    Pc = P[ch]
                    v = Pc[t0] - Pc[lo] if lo >= 0 else Pc[t0]
                    if v:
                        val[ch] += v * mult if mult != 1 else v
                        hit = True
            if not hit:
                continue
            if mix is not None:
                out = [0] * d
                for src, dst, coef in mix:
                    if val[src]:
                        out[dst] += coef * val[src]
                val = out
            if b >= 0:
                bk = bucket[b]
                for ch in chans:
                    if val[ch]:
                        bk[ch][s] += val[ch]
            if fin:
                for ch in chans:
                    if val[ch]:
                        res[ch][s] += val[ch]
        if any_neg:
            tot = [sum(bucket[b][ch][s] for b in range(plan.n_buckets)) for ch in chans]
        for g in range(plan.n_groups):
            neg, bl = preds[g]
            Gg = G[g]
            for ch in chans:
                v = sum(bucket[b][ch][s] for b in bl)
                if neg:
                    v = tot[ch] - v
                if s == 0 and ch == 0 and start[g]:
                    v += 1
                Gg[ch][s] = v
            for st, P in pref_by_group.get(g, ()):
                for ch in chans:
                    prev = P[ch][s - st] if s >= st else 0
                    P[ch][s] = prev + Gg[ch][s]
    if plan.empty:
        res[0][0] += 1
    return res
