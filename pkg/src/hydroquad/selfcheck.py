"""Oracle suites that re-derive the library's results by independent routes."""
from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .constants import PhysicalConstants, get_constants
from .kepler import fourier_oracle, fourier_triple
from .levels import Level
from .quantum import (
    QuadrupoleTensor,
    angular_average_oracle,
    e2_allowed,
    m_resolved_rate,
    qm_rate,
    qm_rate_lsj,
    quadrupole_tensor,
    transition_omega,
)
from .semiclassical import e2_rate_rescaled
from .specfun import big_context, wigner_3j, wigner_6j

__all__ = [
    "SuiteResult",
    "SUITES",
    "run_selfcheck",
    "fourier_deviation",
    "angular_oracle_deviation",
    "m_sum_deviations",
    "lsj_deviation",
    "wigner_orthogonality_deviation",
    "random_e2_pairs",
    "e2_transitions",
]

FOURIER_EPS = (0.1, 0.3, 0.5, 0.7, 0.9, 0.99)


@dataclass(frozen=True)
class SuiteResult:
    name: str
    max_deviation: float
    tolerance: float
    seconds: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<22} max deviation {self.max_deviation:.3e}"
                f"  (tolerance {self.tolerance:.0e})  {self.seconds:7.2f} s")


def _rel(a: float, b: float, floor: float = 0.0) -> float:
    scale = max(abs(b), floor)
    return abs(a - b) / scale if scale else abs(a - b)


def fourier_deviation(k_max: int = 40, eps_values=FOURIER_EPS) -> float:
    """Max relative deviation closed form vs quadrature; the 1e-14 absolute floor
    appears as a 1e-5 floor on the relative scale at the 1e-9 contract."""
    worst = 0.0
    for eps in eps_values:
        for k in range(1, k_max + 1):
            f = fourier_triple(k, eps)
            o = fourier_oracle(k, eps)
            for a, b in ((f.A, o.A), (f.B, o.B), (f.C, o.C)):
                worst = max(worst, _rel(a, b, floor=1e-5))
    return worst


def e2_transitions(n_max: int) -> list[tuple[int, int, int, int]]:
    """Every E2-allowed (n, l) -> (n', l') with n' < n <= n_max."""
    out = []
    for n in range(2, n_max + 1):
        for l in range(n):
            for n2 in range(1, n):
                for l2 in (l - 2, l, l + 2):
                    if 0 <= l2 < n2 and e2_allowed(l, l2):
                        out.append((n, l, n2, l2))
    return out


def random_e2_pairs(count: int, n_max: int = 6, seed: int = 20240917) -> list[tuple[Level, Level]]:
    rng = random.Random(seed)
    pool = e2_transitions(n_max)
    pairs = []
    while len(pairs) < count:
        n, l, n2, l2 = rng.choice(pool)
        m = rng.randint(-l, l)
        choices = [m2 for m2 in range(-l2, l2 + 1) if abs(m2 - m) <= 2]
        pairs.append((Level(n, l, m=m), Level(n2, l2, m=rng.choice(choices))))
    return pairs


def angular_oracle_deviation(count: int = 50, constants: PhysicalConstants | None = None,
                             seed: int = 20240917) -> float:
    c = constants or get_constants()
    worst = 0.0
    for ini, fin in random_e2_pairs(count, seed=seed):
        closed = m_resolved_rate(ini, fin, c).rate
        q = quadrupole_tensor(ini, fin)
        oracle = angular_average_oracle(q, transition_omega(ini.n, fin.n, 1, c), c)
        worst = max(worst, _rel(closed, oracle, floor=1e-300))
    # generic complex symmetric tensors as well, not just physical ones
    rng = np.random.default_rng(seed)
    for _ in range(count):
        a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        q = QuadrupoleTensor.from_matrix(a + a.T)
        closed = q.averaged_square()
        oracle = angular_average_oracle(q, 1.0, c) / (c.alpha / c.c**4 * c.bohr_radius**4)
        worst = max(worst, _rel(closed, oracle))
    return worst


def m_sum_deviations(n_max: int = 8, constants: PhysicalConstants | None = None) -> tuple[float, float]:
    """(closed-form deviation, m-independence spread) over all E2 transitions."""
    c = constants or get_constants()
    worst_sum = 0.0
    worst_spread = 0.0
    for n, l, n2, l2 in e2_transitions(n_max):
        per_m = []
        for m in range(-l, l + 1):
            ini = Level(n, l, m=m)
            s = math.fsum(
                m_resolved_rate(ini, Level(n2, l2, m=m2), c).rate
                for m2 in range(max(-l2, m - 2), min(l2, m + 2) + 1)
            )
            per_m.append(s)
        ref = qm_rate(n, l, n2, l2, 1, c).rate
        avg = math.fsum(per_m) / (2 * l + 1)
        worst_sum = max(worst_sum, _rel(avg, ref))
        worst_spread = max(worst_spread, (max(per_m) - min(per_m)) / ref)
    return worst_sum, worst_spread


def lsj_deviation(n_max: int = 8, constants: PhysicalConstants | None = None) -> float:
    """Degeneracy-weighted fine-structure average against the l-level rate."""
    c = constants or get_constants()
    worst = 0.0
    half = Fraction(1, 2)
    for n, l, n2, l2 in e2_transitions(n_max):
        total = 0.0
        for j in (l - half, l + half):
            if j < half:
                continue
            for j2 in (l2 - half, l2 + half):
                if j2 < half:
                    continue
                w = (2 * j + 1) / (2 * (2 * l + 1))
                total += float(w) * qm_rate_lsj(n, l, j, n2, l2, j2, 1, c).rate
        worst = max(worst, _rel(total, qm_rate(n, l, n2, l2, 1, c).rate))
    return worst


def _halves(top: int):
    return [Fraction(v, 2) for v in range(0, 2 * top + 1)]


def wigner_orthogonality_deviation(j_max: int = 6, six_j_max: Fraction | int = 3) -> float:
    """3j normalization checked in exact rationals; 6j orthogonality at 60 digits."""
    worst = 0.0
    js = _halves(j_max)
    for j1, j2 in itertools.product(js, repeat=2):
        j3 = abs(j1 - j2)
        while j3 <= j1 + j2:
            m3 = -j3
            while m3 <= j3:
                total = Fraction(0)
                m1 = -j1
                while m1 <= j1:
                    m2 = -m1 - m3
                    if abs(m2) <= j2:
                        total += (2 * j3 + 1) * wigner_3j(j1, j2, j3, m1, m2, m3).square
                    m1 += 1
                worst = max(worst, float(abs(total - 1)))
                m3 += 1
            j3 += 1
    top = Fraction(six_j_max)
    vals = [v for v in _halves(int(math.ceil(top))) if v <= top]
    with big_context(60) as ctx:
        def big(w):
            return w.sign * ctx.sqrt(ctx.mpf(w.square.numerator) / w.square.denominator)

        for a, b, c, d in itertools.product(vals, repeat=4):
            xs = [x for x in _halves(2 * int(math.ceil(top))) if abs(a - b) <= x <= a + b and (a + b + x).denominator == 1
                  and abs(c - d) <= x <= c + d and (c + d + x).denominator == 1]
            if not xs:
                continue
            es = [e for e in vals if (a + e + d).denominator == 1 and abs(a - d) <= e <= a + d
                  and (b + c + e).denominator == 1 and abs(b - c) <= e <= b + c]
            for e, f in itertools.product(es, repeat=2):
                total = ctx.fsum((2 * x + 1) * (2 * e + 1) * big(wigner_6j(a, b, x, c, d, e))
                                 * big(wigner_6j(a, b, x, c, d, f)) for x in xs)
                worst = max(worst, float(abs(total - (1 if e == f else 0))))
    return worst


def _constants_suite(c: PhysicalConstants) -> float:
    return max(c.consistency_errors().values())


def _anchor_suite(c: PhysicalConstants) -> float:
    """Absolute miss (s^-1) of the 3d -> 1s quantum and rescaled rates against 594 and 201."""
    qm = qm_rate(3, 2, 1, 0, 1, c).rate
    scl = e2_rate_rescaled(Level(3, 2), 2, -2, c).rate
    return max(abs(qm - 594.0), abs(scl - 201.0))


SUITES: dict[str, tuple[Callable[[PhysicalConstants], float], float]] = {
    "constants": (_constants_suite, 1e-12),
    "anchors_3d_1s": (_anchor_suite, 1.0),
    "fourier_oracle": (lambda c: fourier_deviation(), 1e-9),
    "angular_oracle": (lambda c: angular_oracle_deviation(constants=c), 1e-6),
    "m_sum_closed_form": (lambda c: m_sum_deviations(constants=c)[0], 1e-10),
    "m_independence": (lambda c: m_sum_deviations(constants=c)[1], 1e-10),
    "lsj_average": (lambda c: lsj_deviation(constants=c), 1e-12),
    "wigner_orthogonality": (lambda c: wigner_orthogonality_deviation(), 1e-40),
}


def run_selfcheck(constants: PhysicalConstants | None = None,
                  suites: list[str] | None = None) -> list[SuiteResult]:
    c = constants or get_constants()
    out = []
    for name in suites or list(SUITES):
        fn, tol = SUITES[name]
        t0 = time.perf_counter()
        dev = fn(c)
        out.append(SuiteResult(name, dev, tol, time.perf_counter() - t0))
    return out
