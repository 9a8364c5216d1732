"""The Herglotz correspondence between measures and Carathéodory functions.

Measures go to functions exactly (a finite kernel sum for atomic measures);
functions go back to measures through quadrature on circles inside the disk.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .dynamics import Measure
from .errors import BoundInapplicableError, DomainError, InsufficientNodesError
from .exactnum import CyclotomicPoint
from .harmonic import CoefficientWindow, _coefficients, _phases

__all__ = [
    "CaratheodoryFunction",
    "TaylorTruncation",
    "R_LADDER",
    "cauchy_extract_taylor",
    "cauchy_nodes",
    "compact_uniform_distance",
    "difference_tail_bound",
    "evaluation_trace",
    "herglotz_kernel",
    "is_times_n_circular",
    "psi_of_measure",
    "radial_measure_coefficients",
    "radial_nodes",
    "spiral_points",
    "tail_sup_bound",
    "taylor_of_measure",
]

R_LADDER = (0.9, 0.99, 0.999)

Evaluator = Callable[[complex], complex]

_CHUNK = 1 << 21


def _check_disk(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if z.size and np.max(np.abs(z)) >= 1:
        raise DomainError("evaluation point outside the open unit disk")
    return z


def herglotz_kernel(omega: CyclotomicPoint, z: complex) -> complex:
    """(ω + z)/(ω - z)."""
    z = complex(_check_disk(z))
    w = complex(omega)
    return (w + z) / (w - z)


@dataclass(frozen=True, eq=False)
class TaylorTruncation:
    """Taylor coefficients a(0..N) of a holomorphic function on the disk."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        object.__setattr__(self, "coeffs", c)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("need at least the constant coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if abs(c[0] - 1) > 1e-9:
            raise ValueError(f"a(0) = {c[0]}, expected 1")

    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, l: int) -> complex:
        return complex(self.coeffs[l])

    def __call__(self, z):
        # Horner
        z = np.asarray(z, dtype=complex)
        acc = np.zeros_like(z)
        for a in self.coeffs[::-1]:
            acc = acc * z + a
        return acc

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for l, c in enumerate(self.coeffs):
            w.writerow([l, repr(float(c.real)), repr(float(c.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TaylorTruncation":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        if [int(r[0]) for r in rows] != list(range(len(rows))):
            raise ValueError("CSV rows must cover l = 0..N in order")
        return cls(np.array([complex(float(r[1]), float(r[2])) for r in rows]))


def _kernel_sum(mu: Measure, z: np.ndarray) -> np.ndarray:
    x = _phases(mu, [1])[:, 0]
    omegas = np.exp(2j * np.pi * x)
    w = mu.float_weights()
    flat = z.reshape(-1)
    out = np.empty(flat.shape, dtype=complex)
    step = max(1, _CHUNK // max(1, len(omegas)))
    for s in range(0, len(flat), step):
        zz = flat[s : s + step]
        out[s : s + step] = w @ ((omegas[:, None] + zz) / (omegas[:, None] - zz))
    return out.reshape(z.shape)


class CaratheodoryFunction:
    """Holomorphic ψ on the disk with Re ψ > 0 and ψ(0) = 1.

    Three kinds: the constant 1, a finite kernel sum Σ w_j H(ω_j, ·) backed
    by an atomic measure, or a truncated Taylor series.
    """

    __slots__ = ("kind", "measure", "series")

    def __init__(self, kind: str, measure: Optional[Measure] = None, series: Optional[TaylorTruncation] = None):
        if kind not in ("constant", "kernel_sum", "taylor"):
            raise ValueError(f"unknown kind {kind!r}")
        self.kind = kind
        self.measure = measure
        self.series = series

    @classmethod
    def constant(cls) -> "CaratheodoryFunction":
        return cls("constant")

    @classmethod
    def from_measure(cls, mu: Measure) -> "CaratheodoryFunction":
        if mu.is_lebesgue:
            return cls.constant()
        return cls("kernel_sum", measure=mu)

    @classmethod
    def kernel_sum(cls, atoms) -> "CaratheodoryFunction":
        return cls("kernel_sum", measure=Measure.atomic(atoms))

    @classmethod
    def from_taylor(cls, series: TaylorTruncation) -> "CaratheodoryFunction":
        if np.max(np.abs(series.coeffs[1:]), initial=0.0) > 2 + 1e-9:
            raise ValueError("Taylor coefficients of a Carathéodory function are bounded by 2")
        return cls("taylor", series=series)

    def __call__(self, z):
        z = _check_disk(z)
        if self.kind == "constant":
            out = np.ones_like(z)
        elif self.kind == "kernel_sum":
            out = _kernel_sum(self.measure, z)
        else:
            out = self.series(z)
        return complex(out) if out.ndim == 0 else out

    def taylor(self, N: int) -> TaylorTruncation:
        """Coefficients a(0..N); a Taylor-form function cannot go past its own order."""
        if self.kind == "constant":
            c = np.zeros(N + 1, dtype=complex)
            c[0] = 1
            return TaylorTruncation(c)
        if self.kind == "kernel_sum":
            return taylor_of_measure(self.measure, N)
        if N > self.series.N:
            raise ValueError(f"series only known up to order {self.series.N}")
        return TaylorTruncation(self.series.coeffs[: N + 1])

    def __repr__(self) -> str:
        if self.kind == "constant":
            return "CaratheodoryFunction.constant()"
        if self.kind == "kernel_sum":
            return f"CaratheodoryFunction.from_measure({self.measure!r})"
        return f"CaratheodoryFunction.from_taylor(<order {self.series.N}>)"


def psi_of_measure(mu: Measure, z):
    """ψ^μ(z) = ∫ H(ω, z) dμ(ω)."""
    return CaratheodoryFunction.from_measure(mu)(z)


def taylor_of_measure(mu: Measure, N: int) -> TaylorTruncation:
    """a(0) = 1 and a(l) = 2 μ̂(l) for 1 <= l <= N."""
    c = 2 * _coefficients(mu, np.arange(0, N + 1))
    c[0] = 1
    return TaylorTruncation(c)


def _evaluate(f: Evaluator, z: np.ndarray) -> np.ndarray:
    """Apply ``f`` to an array, falling back to pointwise calls for scalar-only callables."""
    try:
        out = np.asarray(f(z), dtype=complex)
    except (TypeError, ValueError):
        out = None
    if out is None or out.shape not in (z.shape, ()):
        return np.array([complex(f(complex(v))) for v in z.reshape(-1)]).reshape(z.shape)
    return np.broadcast_to(out, z.shape)


def _pow2_at_least(n: int) -> int:
    return 1 << max(0, math.ceil(math.log2(max(n, 1))))


def cauchy_nodes(l: int) -> int:
    """Default node count for coefficient l: aliasing stays below 4 * 2**-48."""
    return _pow2_at_least(48 * l)


def cauchy_extract_taylor(f: Evaluator, l: int, nodes: Optional[int] = None) -> complex:
    """Taylor coefficient a_f(l) by the trapezoidal rule on |z| = 2^(-1/l).

    The rule aliases: it returns Σ_{j>=0} a(l + j*nodes) ρ^(j*nodes) with
    ρ = 2^(-1/l), so the error is about |a| * 2^(-nodes/l).
    """
    if l < 1:
        raise ValueError("l must be a positive integer")
    if nodes is None:
        nodes = cauchy_nodes(l)
    if nodes < 8 * l:
        raise InsufficientNodesError(f"need at least {8 * l} nodes for coefficient {l}, got {nodes}")
    rho = 2.0 ** (-1.0 / l)
    k = np.arange(nodes)
    t = k / nodes
    z = rho * np.exp(2j * np.pi * t)
    vals = _evaluate(f, z)
    # z^-l = rho^-l * exp(-2πi l k / nodes), with the phase reduced exactly
    phase = ((l * k) % nodes) / nodes
    return complex(np.mean(vals * np.exp(-2j * np.pi * phase)) * rho ** (-l))


def radial_nodes(r: float, L: int) -> int:
    """Default node count so the aliased terms r^(nodes - L) fall below 1e-16."""
    need = L + math.ceil(math.log(1e-16) / math.log(r))
    return _pow2_at_least(max(8 * L, need))


def radial_measure_coefficients(f: Evaluator, r: float, L: int, nodes: Optional[int] = None) -> CoefficientWindow:
    """Fourier window of the density Re f(r e^{iθ}) dλ by the trapezoidal rule.

    For a Carathéodory f the exact values are (r^l / 2) a_f(l) for l > 0 and
    1 at l = 0.
    """
    if not 0 < r < 1:
        raise DomainError(f"radius {r} outside (0, 1)")
    if nodes is None:
        nodes = radial_nodes(r, L)
    if nodes < 8 * L:
        raise InsufficientNodesError(f"need at least {8 * L} nodes, got {nodes}")
    k = np.arange(nodes)
    z = r * np.exp(2j * np.pi * k / nodes)
    density = _evaluate(f, z).real
    ells = np.arange(0, L + 1)
    phase = np.outer(ells, k) % nodes / nodes
    pos = np.exp(-2j * np.pi * phase) @ density / nodes
    vals = np.concatenate((np.conj(pos[:0:-1]), pos))
    return CoefficientWindow(L, vals)


def spiral_points(samples: int, radius: float = 0.9) -> np.ndarray:
    """Deterministic golden-angle spiral filling the disk of the given radius."""
    k = np.arange(samples)
    golden = (3 - math.sqrt(5)) / 2
    return radius * np.sqrt((k + 0.5) / samples) * np.exp(2j * np.pi * ((k * golden) % 1.0))


def is_times_n_circular(psi: CaratheodoryFunction, n: int, samples: int = 64, tol: float = 1e-9) -> bool:
    """Check ψ(z^n) = (1/n) Σ_k ψ(e^{2πik/n} z) and, when coefficients are known, a(l) = a(nl).

    Both tests must pass.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    z = spiral_points(samples)
    if psi.kind == "taylor":
        # compare modulo z^(N+1): a truncated series is only circular up to its order
        a = psi.series.coeffs
        stretched = np.zeros_like(a)
        stretched[::n] = a[: len(stretched[::n])]
        lhs = TaylorTruncation(stretched)(z)
    else:
        lhs = psi(z**n)
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    rhs = np.mean([psi(w * z) for w in roots], axis=0)
    if np.max(np.abs(lhs - rhs)) > tol:
        return False
    if psi.kind == "kernel_sum":
        # 2k coefficients pin down a difference of two measures on k atoms each
        top = max(16, 2 * psi.measure.support_size)
        a = psi.taylor(n * top).coeffs
    elif psi.kind == "taylor":
        a = psi.series.coeffs
        top = psi.series.N // n
    else:
        return True
    ells = np.arange(0, top + 1)
    return bool(np.max(np.abs(a[ells] - a[n * ells])) <= tol)


def tail_sup_bound(series: TaylorTruncation, r: float) -> float:
    """Certified bound Σ_{l<=N} |a(l)| + 4 r^(N+1)/(1 - r) on sup_{|z|<r} |f|.

    Valid when every Taylor coefficient, including the unknown tail, has
    modulus at most 4.
    """
    if not 0 < r < 1:
        raise DomainError(f"radius {r} outside (0, 1)")
    mod = np.abs(series.coeffs)
    if np.any(mod > 4):
        raise BoundInapplicableError("a Taylor coefficient exceeds 4")
    return float(mod.sum() + 4 * r ** (series.N + 1) / (1 - r))


def difference_tail_bound(psi1: CaratheodoryFunction, psi2: CaratheodoryFunction, r: float) -> Optional[float]:
    """Certified bound on sup_{|z|<=r} |ψ1 - ψ2| from the difference series.

    Uses Σ_{l<=N} |d(l)| r^l + 4 r^(N+1)/(1 - r); every coefficient of a
    difference of two Carathéodory functions is at most 4 in modulus.
    Returns None if a known coefficient breaks that assumption.
    """
    if not 0 < r < 1:
        raise DomainError(f"radius {r} outside (0, 1)")
    if "taylor" in (psi1.kind, psi2.kind):
        N = min(p.series.N for p in (psi1, psi2) if p.kind == "taylor")
    else:
        N = max(1, math.ceil(math.log(1e-12) / math.log(r)))
    diff = np.abs(psi1.taylor(N).coeffs - psi2.taylor(N).coeffs)
    if np.any(diff > 4):
        return None
    return float(diff @ r ** np.arange(N + 1) + 4 * r ** (N + 1) / (1 - r))


def compact_uniform_distance(
    psi1: CaratheodoryFunction, psi2: CaratheodoryFunction, r: float, grid: int = 64
) -> float:
    """max |ψ1 - ψ2| over a polar grid of the closed disk of radius r.

    The outermost ring sits exactly on |z| = r, where the maximum modulus
    of the holomorphic difference is attained.  Pair with
    :func:`difference_tail_bound` for a certified upper bound.
    """
    if not 0 < r < 1:
        raise DomainError(f"radius {r} outside (0, 1)")
    if grid < 1:
        raise ValueError("grid must be positive")
    radii = r * np.arange(1, grid + 1) / grid
    angles = np.exp(2j * np.pi * np.arange(grid) / grid)
    z = np.outer(radii, angles)
    return float(np.max(np.abs(psi1(z) - psi2(z))))


def evaluation_trace(f: Evaluator, points) -> str:
    """JSON list of ``[[Re z, Im z], [Re f(z), Im f(z)]]`` pairs, for debugging evaluators."""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    vals = _evaluate(f, z)
    return json.dumps([[[a.real, a.imag], [b.real, b.imag]] for a, b in zip(z, vals)])
