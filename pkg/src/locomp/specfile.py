"""JSON class-definition files.

A file fixes a part class, a local rule, the span, the part-size budget
and optionally a marked subcomposition for run statistics::

    {"v": 1,
     "parts": {"kind": "ordinary"},
     "rule": {"kind": "carlitz", "k": 1},
     "span": 2, "budget": 64,
     "run": {"c": [[1, 0], [2, 0]]}}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .digraph import ClassDigraph
from .parts import Alphabet, Explicit, MultisetColor, NColor, Ordinary, Part, PartSpec
from .rules import Alternating, AvoidPatterns, CarlitzDistance, Free, LocalRule
from .runs import RunDescriptor

__all__ = ["SpecError", "ClassSpecFile", "parse", "serialize", "load"]

VERSION = 1


class SpecError(ValueError):
    pass


def _take(obj, where, required=(), optional=()):
    if not isinstance(obj, dict):
        raise SpecError(f"{where} must be an object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise SpecError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise SpecError(f"{where}: missing field(s) {missing}")
    return obj


def _int(v, where, lo=None):
    if not isinstance(v, int) or isinstance(v, bool):
        raise SpecError(f"{where} must be an integer")
    if lo is not None and v < lo:
        raise SpecError(f"{where} must be >= {lo}")
    return v


def _part(v, where) -> Part:
    if not (isinstance(v, list) and len(v) == 2):
        raise SpecError(f"{where} must be a [size, color] pair")
    return Part(_int(v[0], where + " size", 1), _int(v[1], where + " color", 0))


def _parts_from(d) -> PartSpec:
    kind = _take(d, "parts", required=("kind",), optional=("k", "N", "counts"))["kind"]
    if kind == "ordinary":
        _take(d, "parts", ("kind",))
        return Ordinary()
    if kind == "ncolor":
        _take(d, "parts", ("kind",))
        return NColor()
    if kind == "alphabet":
        _take(d, "parts", ("kind", "k"))
        return Alphabet(_int(d["k"], "parts.k", 1))
    if kind == "multiset":
        _take(d, "parts", ("kind", "N"))
        return MultisetColor(_int(d["N"], "parts.N", 1))
    if kind == "explicit":
        _take(d, "parts", ("kind", "counts"))
        counts = d["counts"]
        if not isinstance(counts, list):
            raise SpecError("parts.counts must be a list")
        try:
            return Explicit(tuple(_int(c, "parts.counts entry", 0) for c in counts))
        except ValueError as e:
            raise SpecError(str(e)) from None
    raise SpecError(f"unknown part class {kind!r}")


def _parts_to(p: PartSpec) -> dict:
    if isinstance(p, Ordinary):
        return {"kind": "ordinary"}
    if isinstance(p, NColor):
        return {"kind": "ncolor"}
    if isinstance(p, Alphabet):
        return {"kind": "alphabet", "k": p.k}
    if isinstance(p, MultisetColor):
        return {"kind": "multiset", "N": p.N}
    if isinstance(p, Explicit):
        return {"kind": "explicit", "counts": list(p.counts)}
    raise SpecError(f"cannot encode part class {p!r}")


def _rule_from(d) -> LocalRule:
    kind = _take(d, "rule", required=("kind",), optional=("k", "patterns"))["kind"]
    if kind == "free":
        _take(d, "rule", ("kind",))
        return Free()
    if kind == "carlitz":
        _take(d, "rule", ("kind",), ("k",))
        return CarlitzDistance(_int(d.get("k", 1), "rule.k", 1))
    if kind == "alternating":
        _take(d, "rule", ("kind",))
        return Alternating()
    if kind == "avoid":
        _take(d, "rule", ("kind", "patterns"))
        pats = d["patterns"]
        if not isinstance(pats, list) or not pats:
            raise SpecError("rule.patterns must be a non-empty list")
        out = []
        for i, pat in enumerate(pats):
            if not isinstance(pat, list) or not pat:
                raise SpecError(f"rule.patterns[{i}] must be a non-empty list")
            out.append(tuple(_part(q, f"rule.patterns[{i}]") for q in pat))
        return AvoidPatterns(out)
    raise SpecError(f"unknown rule {kind!r}")


def _rule_to(r: LocalRule) -> dict:
    if isinstance(r, Free):
        return {"kind": "free"}
    if isinstance(r, CarlitzDistance):
        return {"kind": "carlitz", "k": r.k}
    if isinstance(r, Alternating):
        return {"kind": "alternating"}
    if isinstance(r, AvoidPatterns):
        pats = sorted([[p.size, p.color] for p in pat] for pat in r.patterns)
        return {"kind": "avoid", "patterns": pats}
    raise SpecError(f"cannot encode rule {r!r}")


@dataclass(frozen=True)
class ClassSpecFile:
    parts: PartSpec
    rule: LocalRule
    span: int
    budget: int
    run: Optional[RunDescriptor] = None

    def digraph(self, budget: Optional[int] = None) -> ClassDigraph:
        """The class digraph, optionally with a different budget."""
        try:
            return ClassDigraph(self.parts, self.rule, self.span,
                                self.budget if budget is None else budget)
        except ValueError as e:
            raise SpecError(str(e)) from None

    def to_dict(self) -> dict:
        d = {"v": VERSION, "parts": _parts_to(self.parts), "rule": _rule_to(self.rule),
             "span": self.span, "budget": self.budget}
        if self.run is not None:
            d["run"] = {"c": [[p.size, p.color] for p in self.run.c]}
        return d


def from_dict(d) -> ClassSpecFile:
    _take(d, "spec", ("v", "parts", "rule", "span", "budget"), ("run",))
    if d["v"] != VERSION:
        raise SpecError(f"unsupported spec version {d['v']!r}")
    run = None
    if "run" in d:
        _take(d["run"], "run", ("c",))
        c = d["run"]["c"]
        if not isinstance(c, list) or not c:
            raise SpecError("run.c must be a non-empty list")
        run = RunDescriptor(tuple(_part(q, "run.c") for q in c))
    return ClassSpecFile(_parts_from(d["parts"]), _rule_from(d["rule"]),
                         _int(d["span"], "span", 1), _int(d["budget"], "budget", 1), run)


def parse(text: str) -> ClassSpecFile:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecError(f"malformed JSON: {e}") from None
    return from_dict(d)


def serialize(spec: ClassSpecFile) -> str:
    return json.dumps(spec.to_dict(), sort_keys=True, indent=2) + "\n"


def load(path) -> ClassSpecFile:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise SpecError(f"cannot read {path}: {e}") from None
    return parse(text)
