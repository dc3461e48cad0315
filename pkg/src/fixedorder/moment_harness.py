"""The smoothed first moment of L(1/2 + alpha, chi) over the order-j family.

    sum_q sum_chi L(1/2 + alpha, chi) Phi(q/Q)   against   C_j Q Phi-hat(1).

Mellin inversion puts the pole of A_j(s, 1/2 + alpha) at s = 1 against
Phi-hat(1) = int Phi(t) dt; the value at 0 is reported beside it.  A second
pole of A_j at s = 1/2 + 1/j - alpha contributes a term of relative size
Q^{-(1/2 - 1/j + alpha)}, which dominates the deviation at desk scale.
"""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .characters import admissible_conductors, characters_of_conductor
from .constants import ConstantBundle, main_constant
from .dds_identities import SmoothWeight, mellin_hat, weight
from .lfun import l_values_of_conductor
from .parallel import serial_map

NONVANISHING_SCALE = 1e-6
QUADRATURE_ERROR = 1e-10


@dataclass(frozen=True)
class ConductorValues:
    """L(s, chi) for every family character of one conductor, in enumeration order."""

    q: int
    values: np.ndarray
    bounds: np.ndarray
    conjugate_index: np.ndarray


def conductor_values(job: tuple[int, int, complex]) -> ConductorValues:
    j, q, s = job
    chars = characters_of_conductor(j, q)
    lv = l_values_of_conductor(s, chars)
    index = {c.n: i for i, c in enumerate(chars)}
    conj = np.array([index[c.conjugate().n] for c in chars], dtype=np.int64)
    return ConductorValues(
        q,
        np.array([v.value for v in lv], dtype=complex),
        np.array([v.abs_error_bound for v in lv], dtype=float),
        conj,
    )


class LValueCache:
    """Per-conductor L-values keyed by (j, s), shared across a scan grid."""

    def __init__(self) -> None:
        self._store: dict[tuple[int, complex, int], ConductorValues] = {}

    def fetch(self, j: int, s: complex, qs: Sequence[int], mapper: Callable = serial_map) -> list[ConductorValues]:
        s = complex(s)
        missing = [q for q in qs if (j, s, q) not in self._store]
        for cv in mapper(conductor_values, [(j, q, s) for q in missing]):
            self._store[(j, s, cv.q)] = cv
        return [self._store[(j, s, q)] for q in qs]

    def __len__(self) -> int:
        return len(self._store)


@dataclass(frozen=True)
class FamilySum:
    value: complex
    error_bound: float
    abs_mass: float
    char_count: int
    nonvanishing_count: int


def weighted_family_sum(j: int, s, conductors: Sequence[int], weight_fn: Callable[[np.ndarray], np.ndarray],
                        mapper: Callable = serial_map, cache: LValueCache | None = None) -> FamilySum:
    """sum over characters of the given conductors of L(s, chi) * weight_fn(q).

    All reductions go through math.fsum, which is correctly rounded, so the
    result is independent of how the work was split.
    """
    cache = cache if cache is not None else LValueCache()
    blocks = cache.fetch(j, complex(s), list(conductors), mapper)
    re, im, mass, err = [], [], [], []
    count = nonzero = 0
    for cv in blocks:
        wq = float(weight_fn(np.array([cv.q], dtype=float))[0])
        t = cv.values * wq
        re.extend(t.real.tolist())
        im.extend(t.imag.tolist())
        mass.extend(np.abs(t).tolist())
        err.extend((cv.bounds * abs(wq)).tolist())
        count += len(cv.values)
        nonzero += int(np.count_nonzero(np.abs(cv.values) > NONVANISHING_SCALE * cv.q ** -0.25))
    return FamilySum(complex(math.fsum(re), math.fsum(im)), math.fsum(err), math.fsum(mass), count, nonzero)


# -- one experiment -------------------------------------------------------------------

@dataclass(frozen=True)
class MomentRow:
    j: int
    Q: float
    alpha: float
    phi: str
    lhs: float
    main_term: float
    ratio: float
    char_count: int
    nonvanishing_count: int
    wall_time: float
    lhs_error: float = 0.0
    main_term_error: float = 0.0
    imag_part: float = 0.0
    abs_mass: float = 0.0
    mellin_point: float = 1.0
    main_term_at_zero: float = 0.0
    ratio_at_zero: float = 0.0

    CSV_COLUMNS = ("j", "Q", "alpha", "phi", "lhs", "main_term", "ratio", "char_count",
                   "nonvanishing_count", "wall_time")

    def as_dict(self) -> dict:
        return asdict(self)


@lru_cache(maxsize=64)
def _bundle(j: int, alpha: float) -> ConstantBundle:
    return main_constant(j, alpha)


@lru_cache(maxsize=64)
def _mellin(phi: SmoothWeight, s: float) -> float:
    return mellin_hat(phi, s).real


def _check(Q: float, alpha: float) -> None:
    if Q < 10:
        raise ValueError("need Q >= 10")
    if not 0 <= alpha < 0.5:
        raise ValueError("alpha must lie in [0, 1/2)")


def conductors_in_support(j: int, Q: float, phi: SmoothWeight) -> list[int]:
    a, b = phi.support
    return [q for q in admissible_conductors(j, math.ceil(b * Q)) if a * Q < q < b * Q]


def first_moment(j: int, Q: float, alpha: float = 0.0, phi: SmoothWeight | str = "default",
                 mapper: Callable = serial_map, cache: LValueCache | None = None,
                 mellin_point: float = 1.0) -> MomentRow:
    _check(Q, alpha)
    phi = weight(phi) if isinstance(phi, str) else phi
    start = time.perf_counter()
    fs = weighted_family_sum(j, 0.5 + alpha, conductors_in_support(j, Q, phi),
                             lambda q: phi(q / Q), mapper, cache)
    bundle = _bundle(j, float(alpha))
    hat = _mellin(phi, float(mellin_point))
    hat0 = _mellin(phi, 0.0)
    main = bundle.C_j * Q * hat
    main0 = bundle.C_j * Q * hat0
    main_err = bundle.error_bound * Q * hat + bundle.C_j * Q * QUADRATURE_ERROR
    return MomentRow(
        j=j, Q=float(Q), alpha=float(alpha), phi=phi.name,
        lhs=fs.value.real, main_term=main, ratio=fs.value.real / main,
        char_count=fs.char_count, nonvanishing_count=fs.nonvanishing_count,
        wall_time=time.perf_counter() - start,
        lhs_error=fs.error_bound, main_term_error=main_err,
        imag_part=fs.value.imag, abs_mass=fs.abs_mass,
        mellin_point=float(mellin_point),
        main_term_at_zero=main0, ratio_at_zero=fs.value.real / main0,
    )


# -- scans ------------------------------------------------------------------------------

def predicted_error_exponent(j: int, alpha: float) -> float:
    return (2 * j + 1 - 2 * j * alpha) / (2 * j + 2)


def secondary_pole(j: int, alpha: float) -> float:
    return 0.5 + 1 / j - alpha


@dataclass(frozen=True)
class ScanResult:
    rows: list[MomentRow]
    exponent: float
    exponent_stderr: float
    predicted_exponent: float
    secondary_exponent: float
    deviations: list[float] = field(default_factory=list)

    @property
    def deviation_decreased(self) -> bool:
        return self.deviations[-1] <= self.deviations[0]

    def plot_points(self) -> list[tuple[float, float]]:
        return [(math.log(r.Q), math.log(abs(r.lhs - r.main_term))) for r in self.rows]


def fit_exponent(Qs: Sequence[float], gaps: Sequence[float]) -> tuple[float, float]:
    """Slope and its standard error for log|gap| against log Q."""
    fit = stats.linregress(np.log(Qs), np.log(np.abs(gaps)))
    return float(fit.slope), float(fit.stderr)


def scan(j: int, Q_list: Sequence[float], alpha: float = 0.0, phi: SmoothWeight | str = "default",
         mapper: Callable = serial_map, cache: LValueCache | None = None,
         mellin_point: float = 1.0) -> ScanResult:
    Q_list = list(Q_list)
    if len(Q_list) < 3:
        raise ValueError("a scan needs at least three values of Q")
    if any(b <= a for a, b in zip(Q_list, Q_list[1:])):
        raise ValueError("Q values must be strictly ascending")
    cache = cache if cache is not None else LValueCache()
    rows = [first_moment(j, Q, alpha, phi, mapper, cache, mellin_point) for Q in Q_list]
    slope, err = fit_exponent([r.Q for r in rows], [r.lhs - r.main_term for r in rows])
    return ScanResult(
        rows=rows, exponent=slope, exponent_stderr=err,
        predicted_exponent=predicted_error_exponent(j, alpha),
        secondary_exponent=secondary_pole(j, alpha),
        deviations=[abs(r.ratio - 1) for r in rows],
    )


@dataclass(frozen=True)
class TwoTermFit:
    leading: float
    secondary: float
    C_j: float

    @property
    def relative_gap(self) -> float:
        return abs(self.leading - self.C_j) / self.C_j


def two_term_fit(rows: Sequence[MomentRow], phi: SmoothWeight | str = "default") -> TwoTermFit:
    """Least squares lhs ~ a Q Phi-hat(1) + b Q^e Phi-hat(e), e = 1/2 + 1/j - alpha."""
    phi = weight(phi) if isinstance(phi, str) else phi
    j, alpha = rows[0].j, rows[0].alpha
    e = secondary_pole(j, alpha)
    Q = np.array([r.Q for r in rows])
    design = np.c_[Q * _mellin(phi, 1.0), Q**e * _mellin(phi, e)]
    (a, b), *_ = np.linalg.lstsq(design, np.array([r.lhs for r in rows]), rcond=None)
    return TwoTermFit(float(a), float(b), _bundle(j, float(alpha)).C_j)


# -- nonvanishing and pairing ---------------------------------------------------------

@dataclass(frozen=True)
class NonvanishingReport:
    j: int
    Q: float
    count: int
    total: int
    proportion: float
    reference: float


def nonvanishing_report(j: int, Q: float, alpha: float = 0.0, mapper: Callable = serial_map,
                        cache: LValueCache | None = None) -> NonvanishingReport:
    """Characters of conductor <= Q with |L(1/2 + alpha)| above 1e-6 q^{-1/4}."""
    _check(Q, alpha)
    fs = weighted_family_sum(j, 0.5 + alpha, admissible_conductors(j, int(Q)), np.ones_like, mapper, cache)
    total = fs.char_count
    return NonvanishingReport(j, float(Q), fs.nonvanishing_count, total,
                              fs.nonvanishing_count / total if total else 0.0, Q ** (6 / 7))


def conjugate_pair_gap(j: int, Q: float, alpha: float = 0.0, phi: SmoothWeight | str = "default",
                       cache: LValueCache | None = None) -> float:
    """Relative gap between the full sum and 2 Re of the sum over one member per conjugate pair."""
    phi = weight(phi) if isinstance(phi, str) else phi
    cache = cache if cache is not None else LValueCache()
    blocks = cache.fetch(j, complex(0.5 + alpha), conductors_in_support(j, Q, phi))
    full, half, mass = [], [], []
    for cv in blocks:
        wq = float(phi(cv.q / Q))
        t = cv.values * wq
        rep = np.arange(len(t)) < cv.conjugate_index
        full.extend(t.real.tolist())
        half.extend((2 * t[rep].real).tolist())
        mass.extend(np.abs(t).tolist())
    return abs(math.fsum(full) - math.fsum(half)) / max(math.fsum(mass), 1e-300)
