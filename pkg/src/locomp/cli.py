"""Command line: ``locomp {count,enumerate,validate,run-stats,asym,compare}``.

Exit codes: 0 success, 2 bad spec file, 3 budget or enumeration cap
exceeded (or too few coefficients to estimate from), 4 run-transform
hypothesis violated.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from typing import Dict, List, Optional, Tuple

from .asymptotics import (
    AsymptoticParams,
    EstimateError,
    allcomp_C,
    carlitz_C,
    carlitz_r,
    closed_form_r,
    estimate_A,
    estimate_C,
    estimate_r,
    thm2_cdf,
    thm2_mean,
)
from .counting import count_series
from .digraph import (
    DigraphError,
    EnumerationTooLarge,
    check_regular,
    check_unique_walks,
    enumerate_structures,
    validate,
)
from .parts import MultisetColor, NColor, Ordinary
from .rules import CarlitzDistance, Free, RuleError
from .runs import RunHypothesisError, build_run_class, run_cdf_table, xyx_witness
from .specfile import ClassSpecFile, SpecError, load

EXIT_SPEC, EXIT_CAP, EXIT_HYPOTHESIS = 2, 3, 4


class BudgetExceeded(RuntimeError):
    pass


# serialization ----------------------------------------------------------

def exact_str(v) -> object:
    """Integers stay integers; other rationals become "p/q" strings."""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return v


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def render(payload, fmt: str) -> str:
    """Rows (a list of dicts) or a flat report (a dict) as CSV or JSON."""
    if fmt == "json":
        return json.dumps(payload, indent=2) + "\n"
    rows = payload if isinstance(payload, list) else [
        {"key": k, "value": v} for k, v in payload.items()]
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(list(rows[0]))
        for row in rows:
            w.writerow([_cell(v) for v in row.values()])
    return buf.getvalue()


def _deviation(exact: Fraction, approx: float) -> Tuple[float, Optional[float]]:
    ex = float(exact)
    dev = abs(ex - approx)
    return dev, (dev / abs(ex) if ex else None)


def report_row(n, exact, approx: float, **extra) -> Dict[str, object]:
    dev, rel = _deviation(Fraction(exact), approx)
    row: Dict[str, object] = {"n": n}
    row.update(extra)
    row.update({"exact": exact_str(exact), "asymptotic": approx,
                "abs_dev": dev, "rel_dev": rel})
    return row


# shared helpers ---------------------------------------------------------

def _n_values(args, budget: int) -> List[int]:
    if args.n is not None and args.n_range is not None:
        raise SpecError("give either --n or --n-range, not both")
    if args.n_range is not None:
        try:
            lo, hi = (int(x) for x in args.n_range.split(":"))
        except ValueError:
            raise SpecError(f"--n-range must look like LO:HI, got {args.n_range!r}") from None
        if lo < 0 or hi < lo:
            raise SpecError(f"empty range {args.n_range}")
        ns = list(range(lo, hi + 1))
    elif args.n is not None:
        ns = [args.n]
    else:
        ns = list(range(0, budget + 1))
    if ns[-1] > budget:
        raise BudgetExceeded(f"n = {ns[-1]} exceeds the class-file budget {budget}")
    if ns[0] < 0:
        raise SpecError("n must be non-negative")
    return ns


def _single_n(args, budget: int, default: int) -> int:
    n = default if args.n is None else args.n
    if n < 0:
        raise SpecError("n must be non-negative")
    if n > budget:
        raise BudgetExceeded(f"n = {n} exceeds the class-file budget {budget}")
    return n


def closed_radius(spec: ClassSpecFile) -> Optional[float]:
    """Known radius of the class, when one is available."""
    p, rule = spec.parts, spec.rule
    if isinstance(rule, Free):
        if isinstance(p, Ordinary):
            return closed_form_r("free")
        if isinstance(p, NColor):
            return closed_form_r("ncolor")
        if isinstance(p, MultisetColor):
            return closed_form_r("multiset", p.N)
    if isinstance(rule, CarlitzDistance) and rule.k == 1 and isinstance(p, Ordinary):
        return carlitz_r()
    return None


def run_constant(spec: ClassSpecFile, D, nmax: int) -> Tuple[AsymptoticParams, str]:
    """(r, C) for run statistics: closed forms where known, else estimated."""
    rd = spec.run
    p, rule = spec.parts, spec.rule
    if isinstance(rule, Free) and isinstance(p, Ordinary):
        return AsymptoticParams(0.5, allcomp_C(rd.csize), rd.csize), "closed"
    c = rd.c
    if (isinstance(rule, CarlitzDistance) and rule.k == 1 and isinstance(p, Ordinary)
            and len(c) == 2 and c[0].size != c[1].size):
        r = carlitz_r()
        return AsymptoticParams(r, carlitz_C(c[0].size, c[1].size, r), rd.csize), "closed"
    r = closed_radius(spec)
    if r is None:
        r = estimate_r(count_series(D, nmax)).value
    Dp = build_run_class(D, rd)
    est = estimate_C(Dp, [rd.run(k) for k in range(1, nmax // rd.csize + 1)], nmax, r=r)
    return AsymptoticParams(r, est.value, rd.csize), "estimated"


def _need_run(spec: ClassSpecFile):
    if spec.run is None:
        raise SpecError("this command needs a \"run\" entry in the spec file")
    w = xyx_witness(spec.run.c)
    if w is not None:
        raise RunHypothesisError("c is not xyx-free", witness=w)


# commands ---------------------------------------------------------------

def cmd_count(spec: ClassSpecFile, args):
    ns = _n_values(args, spec.budget)
    counts = count_series(spec.digraph(), ns[-1])
    return [{"n": n, "count": counts[n]} for n in ns]


def cmd_enumerate(spec: ClassSpecFile, args):
    n = _single_n(args, spec.budget, min(spec.budget, 6))
    structs = enumerate_structures(spec.digraph(), n, cap=args.enum_cap)
    return [{"index": i, "structure": " ".join(map(str, s))} for i, s in enumerate(structs)]


def cmd_validate(spec: ClassSpecFile, args):
    # the concrete digraph is checked on parts up to the sample size only
    n = _single_n(args, spec.budget, min(spec.budget, 6))
    n = max(n, spec.span)
    D = spec.digraph()
    rep = validate(D, max_part=n)
    reg = check_regular(D, kmax=args.kmax or 8, max_part=n)
    out = {"sample_n": n}
    out.update({f"condition_{k}" if k in "abc" else k: v for k, v in rep.as_dict().items()})
    out.update(reg.as_dict())
    out["unique_walks"] = check_unique_walks(D, n)
    return out


def cmd_run_stats(spec: ClassSpecFile, args):
    _need_run(spec)
    n = _single_n(args, spec.budget, spec.budget)
    rd = spec.run
    kmax = args.kmax or max(1, min(16, n // rd.csize))
    D = spec.digraph(budget=max(n, spec.span))
    params, source = run_constant(spec, D, n)
    top = n // rd.csize
    cdf = run_cdf_table(D, rd, n, max(kmax, top), threads=args.threads)
    rows = []
    for k in range(1, kmax + 1):
        rows.append(report_row(n, cdf[k - 1], thm2_cdf(k, n, params), row="cdf", k=k))
    mean = sum((1 - p for p in cdf[:top]), Fraction(0))
    rows.append(report_row(n, mean, thm2_mean(n, params), row="mean", k=None))
    for row in rows:
        row["C"] = params.C
        row["C_source"] = source
    return rows


def cmd_asym(spec: ClassSpecFile, args):
    B = _single_n(args, spec.budget, min(spec.budget, 80))
    D = spec.digraph()
    series = count_series(D, B)
    r_est = estimate_r(series)
    r_closed = closed_radius(spec)
    r = r_closed if r_closed is not None else r_est.value
    out: Dict[str, object] = {"B": B, "r_est": r_est.value, "r_err": r_est.error,
                              "r_closed": r_closed}
    try:
        A = estimate_A(series, r)
        out.update({"A": A.value, "A_err": A.error})
    except EstimateError as e:
        out.update({"A": None, "A_err": None, "A_note": str(e)})
    if spec.run is not None:
        _need_run(spec)
        params, source = run_constant(spec, D, B)
        out.update({"csize": params.csize, "C": params.C, "C_source": source})
    return out


def cmd_compare(spec: ClassSpecFile, args):
    ns = _n_values(args, spec.budget)
    D = spec.digraph()
    B = spec.budget
    series = count_series(D, B)
    r = closed_radius(spec)
    if r is None:
        r = estimate_r(series).value
    A = estimate_A(series, r).value
    return [report_row(n, series[n], A * r ** (-n)) for n in ns]


COMMANDS = {
    "count": cmd_count,
    "enumerate": cmd_enumerate,
    "validate": cmd_validate,
    "run-stats": cmd_run_stats,
    "asym": cmd_asym,
    "compare": cmd_compare,
}


def _version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "unknown"


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="locomp", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {_version()}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--spec", required=True, help="class definition (JSON)")
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--n-range", default=None, metavar="LO:HI")
        p.add_argument("--kmax", type=int, default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None)
        p.add_argument("--enum-cap", type=int, default=None)
        p.add_argument("--threads", type=int, default=1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load(args.spec)
        payload = COMMANDS[args.command](spec, args)
    except RunHypothesisError as e:
        print(f"error: {e}", file=sys.stderr)
        if e.witness is not None:
            x, y = ("".join(map(str, part)) for part in e.witness)
            print(f"witness: x={x} y={y}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (BudgetExceeded, EnumerationTooLarge, EstimateError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except (SpecError, RuleError, DigraphError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SPEC
    text = render(payload, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
