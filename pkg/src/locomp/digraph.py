"""Class digraphs: construction, validation, regularity and walk checks.

Every structure of a locally restricted class is the concatenation of the
vertices along a walk from ``EPS_S`` to ``EPS_F``.  The infinite digraph is
truncated to vertices whose parts have size at most the budget ``B``; no
structure of size ``<= B`` can use a larger part, so all counts up to ``B``
are exact.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Tuple

import networkx as nx

from .engine import Member, Plan, segments_from_sizes
from .parts import ANY_COLOR, Part, PartSpec
from .rules import LocalRule

__all__ = [
    "Vertex",
    "EPS_S",
    "EPS_F",
    "DigraphError",
    "EnumerationTooLarge",
    "Digraph",
    "ClassDigraph",
    "ExplicitDigraph",
    "ValidationReport",
    "RegularityReport",
    "build_digraph",
    "validate",
    "check_regular",
    "check_unique_walks",
    "enumerate_structures",
    "iter_walk_structures",
    "default_enum_cap",
    "structure_key",
]


class DigraphError(ValueError):
    pass


class EnumerationTooLarge(RuntimeError):
    pass


def default_enum_cap() -> int:
    return int(os.environ.get("LOCOMP_ENUM_CAP", 2 ** 22))


class Vertex(NamedTuple):
    role: str            # "S", "R" or "F"
    parts: Tuple = ()

    @property
    def size(self) -> int:
        return sum(p.size for p in self.parts)

    def __str__(self):
        body = "".join(str(p) for p in self.parts) or "eps"
        return f"{self.role}:{body}"


EPS_S = Vertex("S", ())
EPS_F = Vertex("F", ())


def structure_key(parts) -> tuple:
    return (len(parts), tuple(p.sort_key for p in parts))


class Digraph:
    """Common surface of rule-built and explicit digraphs."""

    span: int
    budget: int

    def concrete_vertices(self, max_part: Optional[int] = None) -> List[Vertex]:
        raise NotImplementedError

    def has_arc(self, u: Vertex, v: Vertex) -> bool:
        raise NotImplementedError

    def counting_plan(self, n: int, target=None) -> Plan:
        raise NotImplementedError

    # shared helpers --------------------------------------------------
    def recurrent(self, max_part=None):
        return [v for v in self.concrete_vertices(max_part) if v.role == "R"]

    def start(self, max_part=None):
        return [v for v in self.concrete_vertices(max_part) if v.role == "S"]

    def finish(self, max_part=None):
        return [v for v in self.concrete_vertices(max_part) if v.role == "F"]

    def adjacency(self, max_part=None, max_size=None) -> Dict[Vertex, List[Vertex]]:
        verts = self.concrete_vertices(max_part)
        if max_size is not None:
            verts = [v for v in verts if v.size <= max_size]
        return {u: [v for v in verts if v != EPS_S and self.has_arc(u, v)]
                for u in verts if u != EPS_F}

    def to_networkx(self, max_part=None) -> nx.DiGraph:
        G = nx.DiGraph()
        adj = self.adjacency(max_part)
        G.add_nodes_from(self.concrete_vertices(max_part))
        for u, vs in adj.items():
            G.add_edges_from((u, v) for v in vs)
        return G


class ClassDigraph(Digraph):
    """Digraph of SEQ(P; D) generated from a part class and a local rule.

    Vertices are produced lazily from the rule; ``pinned`` lists parts that
    must keep their identity when the rule lumps parts together (pattern
    letters, the parts of a marked run, a counted target part).
    """

    def __init__(self, spec: PartSpec, rule: LocalRule, span: int, budget: int,
                 pinned: Iterable = ()):
        if span < 1 or budget < 1:
            raise DigraphError("span and budget must be positive")
        if budget < span:
            raise DigraphError(
                f"budget {budget} < span {span}: no recurrent vertex fits")
        rule.check(spec, span)
        self.spec = spec
        self.rule = rule
        self.span = span
        self.budget = budget
        self.pinned: FrozenSet = frozenset(pinned) | rule.pinned_parts()
        self._concrete: Dict[Optional[int], List[Vertex]] = {}

    def __repr__(self):
        return (f"ClassDigraph({self.spec!r}, {self.rule!r}, span={self.span}, "
                f"budget={self.budget})")

    def with_pinned(self, parts: Iterable) -> "ClassDigraph":
        extra = frozenset(p for p in parts if isinstance(p, Part))
        if extra <= self.pinned or not self.rule.lumps:
            return self
        return ClassDigraph(self.spec, self.rule, self.span, self.budget,
                            self.pinned | extra)

    # tokens and abstract vertices -------------------------------------
    def tokens(self, parts) -> tuple:
        rule, pinned = self.rule, self.pinned
        return tuple(rule.token(p, pinned) for p in parts)

    def abstract_parts(self, max_size: int):
        top = min(self.budget, max_size)
        if self.spec.max_size is not None:
            top = min(top, self.spec.max_size)
        out = []
        for size in range(1, top + 1):
            out.extend(self.rule.abstract_parts(self.spec, size, self.pinned))
        return out

    def abstract_vertices(self, max_total: Optional[int] = None):
        """Yield ``(role, parts, multiplicity)`` for every non-empty vertex."""
        rule, m = self.rule, self.span
        limit = self.budget * m if max_total is None else max_total
        aparts = self.abstract_parts(limit)
        atoks = [(p, mult, self.rule.token(p, self.pinned)) for p, mult in aparts]
        lengths = rule.role_lengths(m)
        want = sorted({L for ls in lengths.values() for L in ls})
        if not want:
            return
        maxlen = max(want)
        found: List[Tuple[tuple, int]] = []

        def grow(parts, toks, mult, size):
            if len(parts) in want:
                found.append((parts, toks, mult))
            if len(parts) == maxlen:
                return
            for p, pm, t in atoks:
                if size + p.size > limit:
                    break
                nt = toks + (t,)
                if rule.ok(nt):
                    grow(parts + (p,), nt, mult * pm, size + p.size)

        # atoks is sorted by size, so the size break above is safe
        atoks.sort(key=lambda x: x[0].size)
        grow((), (), 1, 0)
        for role in ("S", "R", "F"):
            ls = lengths.get(role, ())
            for parts, toks, mult in found:
                if len(parts) in ls and rule.vertex_ok(role, toks, m):
                    yield role, parts, mult

    def _expand(self, part):
        if getattr(part, "color", None) == ANY_COLOR:
            return [q for q in self.spec.parts(part.size) if q not in self.pinned]
        return [part]

    def concrete_vertices(self, max_part=None):
        key = max_part
        if key not in self._concrete:
            bound = self.budget if max_part is None else min(max_part, self.budget)
            verts = [EPS_S]
            for role, parts, _ in self.abstract_vertices():
                if any(p.size > bound for p in parts):
                    continue
                combos = [()]
                for p in parts:
                    combos = [c + (q,) for c in combos for q in self._expand(p)]
                verts.extend(Vertex(role, c) for c in combos)
            verts.append(EPS_F)
            self._concrete[key] = verts
        return self._concrete[key]

    def has_arc(self, u, v):
        if v == EPS_S or u == EPS_F:
            return False
        rule = self.rule
        return rule.key_arc(rule.out_key(u.role, self.tokens(u.parts)),
                            rule.in_key(v.role, self.tokens(v.parts)))

    # counting --------------------------------------------------------
    def counting_plan(self, n, target=None):
        rule = self.rule
        if target is not None and isinstance(target, Part) and rule.lumps \
                and target not in self.pinned:
            return self.with_pinned([target]).counting_plan(n, target)
        eps_out = rule.out_key("S", ())
        eps_in = rule.in_key("F", ())
        groups: Dict[object, int] = {}
        buckets: Dict[object, int] = {}
        mem_sizes: Dict[tuple, Dict[int, int]] = {}
        for role, parts, mult in self.abstract_vertices(max_total=n):
            toks = self.tokens(parts)
            ik = rule.in_key(role, toks)
            okey = rule.out_key(role, toks)
            g = groups.setdefault(ik, len(groups))
            b = buckets.setdefault(okey, len(buckets))
            fin = rule.key_arc(okey, eps_in)
            occ = 0 if target is None else sum(1 for p in parts if p == target)
            size = sum(p.size for p in parts)
            sizes = mem_sizes.setdefault((g, b, fin, occ), {})
            sizes[size] = sizes.get(size, 0) + mult
        gkeys = list(groups)
        bkeys = list(buckets)
        preds = []
        used = set()
        for ik in gkeys:
            allowed = [i for i, bk in enumerate(bkeys) if rule.key_arc(bk, ik)]
            used.update(allowed)
            preds.append(allowed)
        # drop buckets nobody reads from
        remap = {b: i for i, b in enumerate(sorted(used))}
        nb = len(remap)
        final_preds = []
        for allowed in preds:
            allowed = [remap[b] for b in allowed]
            if 2 * len(allowed) > nb:
                present = set(allowed)
                final_preds.append((True, [b for b in range(nb) if b not in present]))
            else:
                final_preds.append((False, allowed))
        members = [Member(g, remap.get(b, -1), fin, occ, segments_from_sizes(sz))
                   for (g, b, fin, occ), sz in mem_sizes.items()]
        plan = Plan(
            n_groups=len(gkeys),
            n_buckets=nb,
            start=[rule.key_arc(eps_out, ik) for ik in gkeys],
            preds=final_preds,
            members=members,
            empty=rule.key_arc(eps_out, eps_in),
        )
        return plan.finalize()


class ExplicitDigraph(Digraph):
    """Digraph given by explicit vertex and arc lists (tests, hand-built cases)."""

    def __init__(self, span: int, vertices: Iterable[Vertex], arcs: Iterable[Tuple[Vertex, Vertex]],
                 budget: Optional[int] = None):
        self.span = span
        verts = list(dict.fromkeys([EPS_S, *vertices, EPS_F]))
        self._vertices = verts
        self.arcs = frozenset((u, v) for u, v in arcs)
        sizes = [p.size for v in verts for p in v.parts]
        self.budget = budget if budget is not None else max(sizes, default=1)

    @classmethod
    def from_digraph(cls, D: Digraph, max_part=None) -> "ExplicitDigraph":
        adj = D.adjacency(max_part)
        arcs = [(u, v) for u, vs in adj.items() for v in vs]
        bound = D.budget if max_part is None else min(max_part, D.budget)
        return cls(D.span, D.concrete_vertices(max_part), arcs, budget=bound)

    def without_arcs(self, arcs) -> "ExplicitDigraph":
        drop = set(arcs)
        return ExplicitDigraph(self.span, self._vertices,
                               [a for a in self.arcs if a not in drop], self.budget)

    def concrete_vertices(self, max_part=None):
        if max_part is None:
            return list(self._vertices)
        return [v for v in self._vertices if all(p.size <= max_part for p in v.parts)]

    def has_arc(self, u, v):
        return (u, v) in self.arcs

    def counting_plan(self, n, target=None):
        verts = [v for v in self._vertices
                 if v not in (EPS_S, EPS_F) and v.size <= n]
        index = {v: i for i, v in enumerate(verts)}
        preds: List[List[int]] = [[] for _ in verts]
        for u, v in self.arcs:
            if u in index and v in index:
                preds[index[v]].append(index[u])
        members = []
        for i, v in enumerate(verts):
            occ = 0 if target is None else sum(1 for p in v.parts if p == target)
            members.append(Member(i, i, (v, EPS_F) in self.arcs, occ,
                                  [(v.size, 1, 1, 1)]))
        plan = Plan(
            n_groups=len(verts),
            n_buckets=len(verts),
            start=[(EPS_S, v) in self.arcs for v in verts],
            preds=[(False, sorted(p)) for p in preds],
            members=members,
            empty=(EPS_S, EPS_F) in self.arcs,
        )
        return plan.finalize()


def build_digraph(spec: PartSpec, rule: LocalRule, m: int, B: int) -> ClassDigraph:
    """Size-truncated class digraph with span ``m`` and part-size budget ``B``."""
    return ClassDigraph(spec, rule, m, B)


# ---------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    lengths: bool
    condition_a: bool
    condition_b: bool
    condition_c: bool
    witnesses: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.lengths and self.condition_a and self.condition_b and self.condition_c

    def as_dict(self):
        return {
            "lengths": self.lengths,
            "a": self.condition_a,
            "b": self.condition_b,
            "c": self.condition_c,
            "passed": self.passed,
            "witnesses": {k: _jsonable(v) for k, v in self.witnesses.items()},
        }


def _jsonable(obj):
    if isinstance(obj, Vertex):
        return str(obj)
    if isinstance(obj, (list, tuple, set, frozenset)):
        return [_jsonable(x) for x in obj]
    return obj


def validate(D: Digraph, max_part: Optional[int] = None) -> ValidationReport:
    """Check the three digraph conditions on the truncated vertex set."""
    verts = D.concrete_vertices(max_part)
    G = D.to_networkx(max_part)
    m = D.span
    S = [v for v in verts if v.role == "S"]
    R = [v for v in verts if v.role == "R"]
    F = [v for v in verts if v.role == "F"]
    w: Dict[str, object] = {}

    bad_len = [v for v in S + F if len(v.parts) >= m] + [v for v in R if len(v.parts) != m]
    if bad_len:
        w["bad_lengths"] = bad_len[:10]

    missing_s = [v for v in S if v != EPS_S and not G.has_edge(EPS_S, v)]
    s_to_r = any(G.has_edge(u, v) for u in S for v in R)
    if missing_s:
        w["start_without_arc"] = missing_s[:10]
    if not s_to_r:
        w["no_start_to_recurrent"] = True
    a = not missing_s and s_to_r

    missing_f = [v for v in F if v != EPS_F and not G.has_edge(v, EPS_F)]
    r_to_f = any(G.has_edge(u, v) for u in R for v in F)
    if missing_f:
        w["finish_without_arc"] = missing_f[:10]
    if not r_to_f:
        w["no_recurrent_to_finish"] = True
    b = not missing_f and r_to_f

    DR = G.subgraph(R)
    comps = [sorted(c, key=str) for c in nx.strongly_connected_components(DR)] if R else []
    strongly = len(comps) == 1
    big_enough = len(R) >= 2
    SF = G.subgraph(S + F)
    try:
        cycle = nx.find_cycle(SF)
    except nx.NetworkXNoCycle:
        cycle = None
    if not strongly:
        w["recurrent_components"] = comps[:10]
    if not big_enough:
        w["recurrent_count"] = len(R)
    if cycle is not None:
        w["start_finish_cycle"] = [e[0] for e in cycle]
    c = strongly and big_enough and cycle is None
    return ValidationReport(not bad_len, a, b, c, w)


@dataclass
class RegularityReport:
    cycle_gcd: int
    size_aperiodic: bool
    witness: Optional[tuple] = None

    @property
    def certified(self) -> bool:
        return self.cycle_gcd == 1 and self.size_aperiodic

    def as_dict(self):
        return {"cycle_gcd": self.cycle_gcd, "size_aperiodic": self.size_aperiodic,
                "certified": self.certified,
                "witness": _jsonable(self.witness) if self.witness else None}


def _cycle_gcd(G: nx.DiGraph) -> int:
    """gcd of directed cycle lengths, via BFS levels inside each SCC."""
    g = 0
    for comp in nx.strongly_connected_components(G):
        H = G.subgraph(comp)
        if H.number_of_edges() == 0:
            continue
        root = next(iter(comp))
        level = nx.single_source_shortest_path_length(H, root)
        for u, v in H.edges():
            g = math.gcd(g, level[u] + 1 - level[v])
    return abs(g)


def check_regular(D: Digraph, kmax: int, max_part: Optional[int] = None) -> RegularityReport:
    """Cycle-length gcd of D_R and a search for a size-aperiodic walk family.

    A gcd of 1 on the truncated digraph certifies the full class; anything
    else only means "not certified" because truncation removes walks.
    """
    G = D.to_networkx(max_part)
    R = [v for v in G.nodes if v.role == "R"]
    DR = G.subgraph(R)
    cg = _cycle_gcd(DR)
    succ = {v: list(DR.successors(v)) for v in R}
    for v0 in R:
        # reach[v] = set of walk sizes |v0| + ... + |v| over walks of k steps
        reach = {v0: {v0.size}}
        for k in range(1, kmax + 1):
            nxt: Dict[Vertex, set] = {}
            for u, sizes in reach.items():
                for v in succ[u]:
                    nxt.setdefault(v, set()).update(s + v.size for s in sizes)
            reach = nxt
            for vk, sizes in reach.items():
                lo = min(sizes)
                g = 0
                for s in sizes:
                    g = math.gcd(g, s - lo)
                if g == 1:
                    return RegularityReport(cg, True, (k, v0, vk))
    return RegularityReport(cg, False, None)


# ---------------------------------------------------------------------
# walk enumeration

def iter_walk_structures(D: Digraph, n: int, exact: bool = False) -> Iterator[tuple]:
    """Yield the structure of every eps_s -> eps_f walk of size <= n (or == n)."""
    adj = D.adjacency(max_part=n, max_size=n)
    stack = [(EPS_S, (), 0)]
    while stack:
        u, parts, size = stack.pop()
        for v in adj.get(u, ()):
            if v == EPS_F:
                if not exact or size == n:
                    yield parts
                continue
            s2 = size + v.size
            if s2 <= n:
                stack.append((v, parts + v.parts, s2))


def check_unique_walks(D: Digraph, n: int) -> bool:
    """True iff no structure of size <= n arises from two walks."""
    if n > D.budget:
        raise DigraphError(f"n={n} exceeds the budget {D.budget}")
    seen = set()
    for s in iter_walk_structures(D, n):
        if s in seen:
            return False
        seen.add(s)
    return True


def enumerate_structures(D: Digraph, n: int, cap: Optional[int] = None) -> List[tuple]:
    """All structures of size exactly ``n``, sorted by (length, parts)."""
    if n > D.budget and n > 0:
        raise DigraphError(f"n={n} exceeds the budget {D.budget}")
    cap = default_enum_cap() if cap is None else cap
    out = set()
    for s in iter_walk_structures(D, n, exact=True):
        out.add(s)
        if len(out) > cap:
            raise EnumerationTooLarge(f"more than {cap} structures of size {n}")
    return sorted(out, key=structure_key)
