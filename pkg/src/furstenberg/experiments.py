"""Batch experiments: equidistribution scans, round-trip reports, character audits.

Everything here is deterministic given its inputs (and seed); floats are
written with ``repr`` so output files compare byte for byte.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np
from sympy import primerange

from .characters import (
    GroupElement,
    MeasureCharacter,
    cndm_bounds,
    conjugation_violations,
    gram_min_eigenvalue,
    recoverability_check,
)
from .dynamics import Measure, convex_combination, is_invariant, maxr, uniform_orbit_measure
from .errors import ConfigError, MeasureSpecError, NotInvariantError
from .exactnum import CyclotomicPoint, sixadic_normalize
from .harmonic import _coefficients, vague_distance
from .herglotz import R_LADDER, CaratheodoryFunction, cauchy_extract_taylor, radial_measure_coefficients, taylor_of_measure

__all__ = [
    "SCAN_HEADER",
    "dumps",
    "ScanConfig",
    "ScanRow",
    "parse_measure_spec",
    "random_group_elements",
    "random_pairs",
    "run_character_audit",
    "run_equidistribution_scan",
    "run_roundtrip_report",
    "scan_csv",
]

log = logging.getLogger(__name__)

SCAN_HEADER = ("p", "orbit_size", "maxr", "sup_coeff", "vague_dist", "cndm_lo", "cndm_hi")


@dataclass(frozen=True)
class ScanConfig:
    prime_min: int = 5
    prime_max: int = 2000
    L: int = 16
    r_ladder: tuple[float, ...] = R_LADDER
    output_path: Optional[str] = None
    parallelism: int = 1

    def __post_init__(self):
        object.__setattr__(self, "r_ladder", tuple(float(r) for r in self.r_ladder))
        if self.prime_min < 1 or self.prime_max < 1:
            raise ConfigError("prime bounds must be positive")
        if self.prime_min > self.prime_max:
            raise ConfigError(f"prime_min {self.prime_min} exceeds prime_max {self.prime_max}")
        if self.L < 1:
            raise ConfigError("window L must be at least 1")
        if not all(0 < r < 1 for r in self.r_ladder):
            raise ConfigError("radial ladder values must lie in (0, 1)")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be at least 1")


@dataclass(frozen=True)
class ScanRow:
    p: int
    orbit_size: int
    maxr: int
    sup_coeff: float
    vague_dist: float
    cndm_lo: int
    cndm_hi: int

    def cells(self) -> list[str]:
        return [str(self.p), str(self.orbit_size), str(self.maxr), repr(self.sup_coeff),
                repr(self.vague_dist), str(self.cndm_lo), str(self.cndm_hi)]


def _scan_prime(args: tuple[int, int]) -> ScanRow:
    p, L = args
    mu = uniform_orbit_measure(CyclotomicPoint(1, p))
    # coefficients at multiples of p are identically 1 and say nothing about equidistribution
    ells = np.array([l for l in range(1, L + 1) if l % p])
    coeffs = _coefficients(mu, ells) if len(ells) else np.zeros(1)
    lo, hi = cndm_bounds(mu)
    return ScanRow(
        p=p,
        orbit_size=mu.support_size,
        maxr=maxr(mu),
        sup_coeff=float(np.max(np.abs(coeffs))),
        vague_dist=vague_distance(mu, Measure.lebesgue(), L),
        cndm_lo=lo,
        cndm_hi=hi,
    )


def scan_csv(rows: Sequence[ScanRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAN_HEADER)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()


def run_equidistribution_scan(config: ScanConfig) -> list[ScanRow]:
    """One row per prime p in [prime_min, prime_max] with gcd(p, 6) = 1, sorted by p.

    The rows are also written as CSV to ``config.output_path`` when set.
    The file is opened before any work starts so a bad path fails fast.
    """
    out = open(config.output_path, "w", newline="") if config.output_path else None
    try:
        primes = [int(p) for p in primerange(config.prime_min, config.prime_max + 1) if gcd(int(p), 6) == 1]
        if not primes:
            log.warning("no primes coprime to 6 in [%d, %d]", config.prime_min, config.prime_max)
        work = [(p, config.L) for p in primes]
        if config.parallelism > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
                rows = list(pool.map(_scan_prime, work, chunksize=8))
        else:
            rows = [_scan_prime(w) for w in work]
        rows.sort(key=lambda row: row.p)
        if out is not None:
            out.write(scan_csv(rows))
    finally:
        if out is not None:
            out.close()
    return rows


_POINT = r"(\d+)\s*/\s*(\d+)"
_TERM = re.compile(rf"\s*(orbit|delta)\s+{_POINT}\s*")
_WEIGHTED = re.compile(rf"\s*([0-9/.]+)\s*\*\s*(orbit|delta)\s+{_POINT}\s*")


def _term_measure(kind: str, m: str, r: str) -> Measure:
    try:
        point = CyclotomicPoint(int(m), int(r))
    except ValueError as exc:
        raise MeasureSpecError(str(exc)) from exc
    return uniform_orbit_measure(point) if kind == "orbit" else Measure.delta(point)


def parse_measure_spec(text: str) -> Measure:
    """Parse ``lebesgue``, ``orbit m/r``, ``delta m/r`` or ``mix w1*orbit m1/r1 + ...``.

    Weights are exact rationals and must sum to 1.
    """
    text = text.strip()
    if text == "lebesgue":
        return Measure.lebesgue()
    match = _TERM.fullmatch(text)
    if match:
        return _term_measure(*match.groups())
    if text.startswith("mix "):
        parts = []
        for term in text[4:].split("+"):
            match = _WEIGHTED.fullmatch(term)
            if match is None:
                raise MeasureSpecError(f"cannot parse mixture term {term.strip()!r}")
            w, kind, m, r = match.groups()
            try:
                weight = Fraction(w)
            except (ValueError, ZeroDivisionError) as exc:
                raise MeasureSpecError(f"bad weight {w!r}") from exc
            parts.append((_term_measure(kind, m, r), weight))
        try:
            return convex_combination(parts)
        except ValueError as exc:
            raise MeasureSpecError(str(exc)) from exc
    raise MeasureSpecError(f"cannot parse measure specification {text!r}")


def _invariant_measure(spec: str) -> Measure:
    mu = parse_measure_spec(spec)
    if not is_invariant(mu):
        raise NotInvariantError(f"{spec!r} is not ×(2,3)-invariant")
    return mu


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def run_roundtrip_report(measure_spec: str, L: int, r_ladder: Sequence[float] = R_LADDER) -> dict:
    """Compare four routes to μ̂(l), l = 1..L: exact, Taylor, Cauchy quadrature, radial quadrature."""
    if L < 1:
        raise ConfigError("window L must be at least 1")
    mu = _invariant_measure(measure_spec)
    psi = CaratheodoryFunction.from_measure(mu)
    ells = np.arange(1, L + 1)
    exact = _coefficients(mu, ells)
    taylor = taylor_of_measure(mu, L).coeffs[1:] / 2
    cauchy = np.array([cauchy_extract_taylor(psi, int(l)) for l in ells]) / 2
    radial = {}
    for r in r_ladder:
        window = radial_measure_coefficients(psi, r, L)
        radial[repr(float(r))] = np.array([window[int(l)] for l in ells]) / r**ells
    rows = []
    for i, l in enumerate(ells):
        rows.append({
            "l": int(l),
            "exact": _pair(exact[i]),
            "taylor": _pair(taylor[i]),
            "cauchy": _pair(cauchy[i]),
            "radial": {key: _pair(vals[i]) for key, vals in radial.items()},
        })
    return {
        "measure": measure_spec,
        "L": L,
        "r_ladder": [float(r) for r in r_ladder],
        "rows": rows,
        "max_discrepancy": {
            "taylor": float(np.max(np.abs(taylor - exact))),
            "cauchy": float(np.max(np.abs(cauchy - exact))),
            "radial": {key: float(np.max(np.abs(vals - exact))) for key, vals in radial.items()},
        },
    }


def _random_element(rng: np.random.Generator, shift: int, height: int) -> GroupElement:
    # half the draws land in the fiber (j = k = 0) where measure characters are nonzero
    if rng.random() < 0.5:
        j = k = 0
    else:
        j, k = (int(x) for x in rng.integers(-shift, shift + 1, size=2))
    num = int(rng.integers(-height, height + 1))
    e2, e3 = (int(x) for x in rng.integers(0, 3, size=2))
    return GroupElement(j, k, sixadic_normalize(num, e2, e3))


def random_group_elements(rng: np.random.Generator, count: int, shift: int = 2, height: int = 6) -> list[GroupElement]:
    """``count`` distinct elements with |j|, |k| <= shift and fiber coordinates num/(2^a 3^b), |num| <= height, a, b <= 2."""
    if count > (2 * shift + 1) ** 2 * (2 * height + 1):
        raise ConfigError(f"cannot draw {count} distinct elements at this size")
    seen: dict[GroupElement, None] = {}
    while len(seen) < count:
        seen.setdefault(_random_element(rng, shift, height), None)
    return list(seen)


def random_pairs(rng: np.random.Generator, count: int, shift: int = 2, height: int = 6) -> list[tuple[GroupElement, GroupElement]]:
    return [(_random_element(rng, shift, height), _random_element(rng, shift, height)) for _ in range(count)]


def run_character_audit(measure_spec: str, gram_size: int = 12, seed: int = 0, tol: float = 1e-10, pairs: int = 1000) -> dict:
    """Positive-definiteness, conjugation invariance, recoverability and cndm of χ^μ."""
    if gram_size < 1:
        raise ConfigError("gram size must be at least 1")
    if tol <= 0:
        raise ConfigError("tol must be positive")
    mu = _invariant_measure(measure_spec)
    chi = MeasureCharacter(mu)
    rng = np.random.default_rng(seed)
    F = random_group_elements(rng, gram_size)
    return {
        "measure": measure_spec,
        "seed": seed,
        "gram_size": gram_size,
        "gram_min_eig": gram_min_eigenvalue(chi, F),
        "conj_violations": conjugation_violations(chi, random_pairs(rng, pairs), tol),
        "recoverable": recoverability_check(chi, tol=tol),
        "cndm": None if mu.is_lebesgue else list(cndm_bounds(mu)),
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"
