"""Growth constants and the asymptotic run-length laws.

Every logarithm in the run-length formulas is taken to base ``1/r``; the
conversions live in :func:`log_base` and :func:`log_e` so that natural
logarithms never leak into those formulas.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, NamedTuple, Optional, Sequence

from .counting import ExactDistribution, count_series, expected_occurrences
from .digraph import Digraph

__all__ = [
    "EULER_GAMMA",
    "Estimate",
    "EstimateError",
    "AsymptoticParams",
    "CEstimate",
    "log_base",
    "log_e",
    "estimate_r",
    "estimate_A",
    "residual_slope",
    "carlitz_r",
    "carlitz_sum",
    "closed_form_r",
    "allcomp_C",
    "carlitz_C",
    "estimate_C",
    "complex_gamma",
    "oscillation_sum",
    "oscillation_P",
    "thm2_cdf",
    "thm2_mean",
    "thm2_gnk",
    "poisson_pmf",
    "poisson_tv",
]

EULER_GAMMA = 0.577216


class EstimateError(ValueError):
    pass


class Estimate(NamedTuple):
    value: float
    error: float


def log_e(r: float) -> float:
    """log e to base 1/r."""
    if not 0 < r < 1:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    return 1.0 / math.log(1.0 / r)


def log_base(x: float, r: float) -> float:
    """Logarithm of x to base 1/r."""
    return math.log(x) * log_e(r)


# growth constants ----------------------------------------------------

def _trailing(coeffs: Sequence[int], need: int) -> List[int]:
    tail: List[int] = []
    for a in reversed(list(coeffs)):
        if a == 0:
            break
        tail.append(a)
    tail.reverse()
    if len(tail) < need:
        raise EstimateError(
            f"need at least {need} trailing non-zero coefficients, have {len(tail)}")
    return tail


def _aitken(xs: Sequence[float]) -> List[float]:
    out = []
    for x0, x1, x2 in zip(xs, xs[1:], xs[2:]):
        d2 = x2 - 2 * x1 + x0
        out.append(x2 if d2 == 0 else x2 - (x2 - x1) ** 2 / d2)
    return out


def estimate_r(series: Sequence[int]) -> Estimate:
    """Radius from the ratios a_n/a_(n+1), with one Aitken step.

    The error indicator is the gap between the last two accelerated values.
    """
    tail = _trailing(series, 16)
    ratios = [a / b for a, b in zip(tail, tail[1:])]
    acc = _aitken(ratios)
    return Estimate(acc[-1], abs(acc[-1] - acc[-2]))


def estimate_A(series: Sequence[int], r: float, rtol: float = 1e-3) -> Estimate:
    """Limit of a_n r^n, accelerated; raises when the tail is not Cauchy to ``rtol``."""
    tail = _trailing(series, 16)
    n0 = len(series) - len(tail)
    lr = math.log(r)
    vals = [math.exp(math.log(a) + (n0 + i) * lr) for i, a in enumerate(tail)]
    acc = _aitken(vals)
    est = Estimate(acc[-1], abs(acc[-1] - acc[-2]))
    if not est.value > 0 or est.error > rtol * est.value:
        raise EstimateError(f"a_n r^n does not settle: {est}")
    return est


def residual_slope(series: Sequence[int], r: float, A: float, window: int = 16) -> float:
    """Least-squares slope of log|a_n r^n / A - 1| over the last ``window`` terms.

    A negative slope is the geometric error decay of the growth law; the
    decay rate itself is not estimated.
    """
    tail = _trailing(series, window)
    n0 = len(series) - len(tail)
    pts = []
    for i, a in enumerate(tail[-window:]):
        n = n0 + len(tail) - window + i
        res = abs(math.exp(math.log(a) + n * math.log(r)) / A - 1)
        if res > 0:
            pts.append((n, math.log(res)))
    if len(pts) < 2:
        return -math.inf
    mx = sum(p[0] for p in pts) / len(pts)
    my = sum(p[1] for p in pts) / len(pts)
    return (sum((x - mx) * (y - my) for x, y in pts)
            / sum((x - mx) ** 2 for x, _ in pts))


def carlitz_sum(r: float, tol: float = 1e-16):
    """``(S, tail)``: partial sum of r^j/(1+r^j) and a bound on what is left."""
    s, j, t = 0.0, 1, r
    while t / (1 - r) > tol:
        s += t / (1 + t)
        j += 1
        t *= r
    return s, t / (1 - r)


def carlitz_r(tol: float = 1e-12) -> float:
    """Root in (0, 1) of sum_j r^j/(1+r^j) = 1, by bisection."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = 0.5, 0.6
    while hi - lo > tol:
        mid = (lo + hi) / 2
        s, tail = carlitz_sum(mid, tol / 4)
        if s + tail / 2 < 1:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def closed_form_r(tag: str, N: Optional[int] = None) -> float:
    """Radius for ``free``, ``ncolor`` and ``multiset`` (with N ball colors)."""
    if tag == "free":
        return 0.5
    if tag == "ncolor":
        return (3 - math.sqrt(5)) / 2
    if tag == "multiset":
        if N is None or N < 1:
            raise ValueError("multiset needs N >= 1")
        return 1 - 2 ** (-1 / N)
    raise ValueError(f"no closed-form radius for {tag!r}")


def allcomp_C(csize: int) -> float:
    if csize < 1:
        raise ValueError("csize must be positive")
    return 0.5 * (1 - 2.0 ** (-csize)) ** 2


def carlitz_C(a: int, b: int, r: float, tol: float = 1e-16) -> float:
    if a == b:
        raise ValueError("Carlitz run constants need a != b")
    if a < 1 or b < 1:
        raise ValueError("part sizes must be positive")
    denom, j, t = 0.0, 1, r
    # tail of j r^j/(1+r^j)^2 is at most sum_{i>=j} i r^i
    while t * (j / (1 - r) + r / (1 - r) ** 2) > tol:
        denom += j * t / (1 + t) ** 2
        j += 1
        t *= r
    return (1 - r ** (a + b)) ** 2 / ((1 + r ** a) * (1 + r ** b)) / denom


@dataclass
class CEstimate:
    value: float
    r: float
    window: List[int]
    samples: Dict[int, float] = field(default_factory=dict)

    def __float__(self):
        return self.value


def estimate_C(D: Digraph, free_set: Sequence, nmax: int,
               r: Optional[float] = None) -> CEstimate:
    """Average of E(zeta_k(nmax)) / (nmax r^|l_k|) over mid-range k.

    ``free_set`` lists parts of distinct sizes; only the K parts with
    |l_k| <= log(nmax) take part, and the window is k in [K/3, 2K/3]
    (1-based), discarding pre-asymptotic small parts and rare large ones.
    """
    parts = sorted(free_set, key=lambda p: p.size)
    sizes = [p.size for p in parts]
    if len(set(sizes)) != len(sizes):
        raise ValueError("parts of the free set must have distinct sizes")
    if r is None:
        r = estimate_r(count_series(D, nmax)).value
    top = log_base(nmax, r)
    usable = [p for p in parts if p.size <= top]
    K = len(usable)
    lo, hi = max(1, math.ceil(K / 3)), (2 * K) // 3
    if lo > hi:
        raise EstimateError(f"averaging window is empty (K = {K})")
    samples = {}
    for k in range(lo, hi + 1):
        p = usable[k - 1]
        v = float(expected_occurrences(D, p, nmax)) / nmax
        samples[k] = v * r ** (-p.size)
    return CEstimate(sum(samples.values()) / len(samples), r, list(range(lo, hi + 1)), samples)


# complex gamma and the oscillation function -----------------------------

_LANCZOS_G = 7
_LANCZOS = (
    0.99999999999980993, 676.5203681218851, -1259.1392167224028,
    771.32342877765313, -176.61502916214059, 12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _log_gamma(z: complex) -> complex:
    # Lanczos in logarithmic form, valid for Re z >= 1/2
    z = z - 1
    x = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        x += c / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def complex_gamma(z: complex) -> complex:
    """Gamma function on the complex plane (Lanczos plus reflection)."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise ValueError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1 - z))
    return cmath.exp(_log_gamma(z))


def _oscillation_terms(k: int, x: float, csize: int, r: float, L: Optional[int],
                       L_cap: int = 16):
    le = log_e(r)
    # reduce log x modulo the period before forming phases
    phase = (log_base(x, r) % csize) / csize
    scale = max(1.0, math.gamma(k)) if k >= 1 else 1.0
    terms = []
    ell = 1
    while True:
        if L is not None and ell > L:
            break
        t = 2 * math.pi * ell * le / csize
        g = complex_gamma(complex(k, t))
        if L is None and (abs(g) * le / csize < 1e-15 * scale or ell > L_cap):
            break
        w = cmath.exp(-2j * math.pi * ell * phase)
        terms.append(g * w)
        terms.append(g.conjugate() * w.conjugate())
        ell += 1
    return le / csize, terms


def oscillation_sum(k: int, x: float, csize: int, r: float,
                    L: Optional[int] = None) -> complex:
    """Symmetric truncated Gamma series as a complex number (real up to rounding)."""
    if L is not None and L < 1:
        raise ValueError("truncation L must be at least 1")
    if k < 0 or csize < 1 or not x > 0:
        raise ValueError("need k >= 0, csize >= 1 and x > 0")
    pref, terms = _oscillation_terms(k, x, csize, r, L)
    return pref * sum(terms, 0j)


def oscillation_P(k: int, x: float, csize: int, r: float, L: Optional[int] = None) -> float:
    """P_k(x): periodic fluctuation of the run-length laws.

    Without ``L`` the sum stops once the next Gamma term falls below
    1e-15 (relative to Gamma(k) for k >= 1), or after 16 pairs.
    """
    return oscillation_sum(k, x, csize, r, L).real


# run-length laws --------------------------------------------------------

@dataclass
class AsymptoticParams:
    r: float
    C: float
    csize: int = 1
    A: Optional[float] = None
    diagnostics: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0 < self.r < 1:
            raise ValueError("r must lie in (0, 1)")
        if not self.C > 0:
            raise ValueError("C must be positive")
        if self.A is not None and not self.A > 0:
            raise ValueError("A must be positive")
        if self.csize < 1:
            raise ValueError("csize must be positive")

    @property
    def scale(self) -> float:
        """r^|c|: the run-length decay per copy of c."""
        return self.r ** self.csize

    def x(self, n: float) -> float:
        return self.C * n / (1 - self.scale)


def thm2_cdf(k: float, n: float, params: AsymptoticParams) -> float:
    """exp(-C n r^(k|c|) / (1 - r^|c|)), the limiting law of P(R_n < k)."""
    return math.exp(-params.x(n) * params.r ** (k * params.csize))


def thm2_mean(n: float, params: AsymptoticParams) -> float:
    x, cs, r = params.x(n), params.csize, params.r
    return (log_base(x, r) / cs + EULER_GAMMA * log_e(r) / cs - 0.5
            - oscillation_P(0, x, cs, r))


def thm2_gnk(k: int, n: float, params: AsymptoticParams) -> float:
    """Limiting probability that exactly k runs reach the maximum length."""
    if k < 1:
        raise ValueError("g_n(k) needs k >= 1")
    x, cs, r = params.x(n), params.csize, params.r
    q = (1 - params.scale) ** k
    return q / math.factorial(k) * oscillation_P(k, x, cs, r) + q * log_e(r) / (k * cs)


def poisson_pmf(j: int, mu: float) -> float:
    if j < 0:
        return 0.0
    return math.exp(j * math.log(mu) - mu - math.lgamma(j + 1))


def poisson_tv(dist: ExactDistribution, mu: float, tail: float = 1e-12) -> float:
    """Total variation distance between ``dist`` and Poisson(mu).

    A capped top value of ``dist`` is compared with the Poisson tail mass
    at and above the cap.
    """
    if not mu > 0:
        raise ValueError("mu must be positive")
    p = {j: float(v) for j, v in dist.as_dict().items()}
    cap = dist.capped_at
    top = max(p) if p else 0
    diff = 0.0
    seen = 0.0
    j = 0
    while True:
        if cap is not None and j == cap:
            rest = max(0.0, 1.0 - seen)
            diff += abs(p.get(j, 0.0) - rest)
            return diff / 2
        q = poisson_pmf(j, mu)
        seen += q
        diff += abs(p.get(j, 0.0) - q)
        j += 1
        if j > top and j > mu and 1.0 - seen < tail:
            break
    diff += max(0.0, 1.0 - seen)
    return diff / 2
