"""Fourier coefficients of measures and what can be read off from them."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.linalg import eigvalsh, toeplitz

from .dynamics import _SAFE, Measure, _to_object
from .errors import InvalidWindowError

__all__ = [
    "CoefficientWindow",
    "RANK_TOL",
    "fourier_coefficient",
    "fourier_window",
    "invariance_window_check",
    "toeplitz_support_rank",
    "vague_distance",
]

RANK_TOL = 1e-8


def _phases(mu: Measure, ells: np.ndarray) -> np.ndarray:
    """Fractional angles ``(m * l mod r) / r`` in [-1/2, 1/2), shape (atoms, len(ells)).

    The residue is formed exactly before any floating point division.
    """
    m, r = mu._m, mu._r
    ells = [int(l) for l in ells]
    top = int(r.max())
    small = m.dtype == np.int64 and r.dtype == np.int64 and top * top < _SAFE
    if small:
        el = np.array(ells, dtype=np.int64)[None, :] % r[:, None]
        res = (m[:, None] * el) % r[:, None]
        x = res / r[:, None]
    else:
        mo, ro = _to_object(m), _to_object(r)
        res = np.empty((len(m), len(ells)), dtype=object)
        for j, l in enumerate(ells):
            res[:, j] = (mo * (l % ro)) % ro
        x = np.array(
            [[float(Fraction(int(a), int(b))) for a in row] for row, b in zip(res, ro)],
            dtype=float,
        ).reshape(len(m), len(ells))
    return np.where(x >= 0.5, x - 1.0, x)


def _coefficients(mu: Measure, ells) -> np.ndarray:
    ells = np.atleast_1d(np.asarray(ells, dtype=object))
    if mu.is_lebesgue:
        return np.array([1.0 + 0j if l == 0 else 0j for l in ells])
    x = _phases(mu, ells)
    return mu.float_weights() @ np.exp(-2j * np.pi * x)


def fourier_coefficient(mu: Measure, l: int) -> complex:
    """μ̂(l) = ∫ e^{-ilθ} dμ(e^{iθ})."""
    return complex(_coefficients(mu, [int(l)])[0])


@dataclass(frozen=True, eq=False)
class CoefficientWindow:
    """Fourier coefficients μ̂(l) for l = -L..L (``values[l + L]``)."""

    L: int
    values: np.ndarray

    def __post_init__(self):
        if self.L < 0 or len(self.values) != 2 * self.L + 1:
            raise InvalidWindowError("window must hold 2L+1 coefficients")

    def __getitem__(self, l: int) -> complex:
        if abs(l) > self.L:
            raise IndexError(f"coefficient {l} outside window of radius {self.L}")
        return complex(self.values[l + self.L])

    @property
    def ells(self) -> np.ndarray:
        return np.arange(-self.L, self.L + 1)

    def validate(self, tol: float = 1e-9) -> None:
        """Raise :class:`InvalidWindowError` unless this looks like a probability measure."""
        v = self.values
        if abs(v[self.L] - 1) > tol:
            raise InvalidWindowError(f"coefficient at 0 is {v[self.L]}, expected 1")
        if np.max(np.abs(v - np.conj(v[::-1]))) > tol:
            raise InvalidWindowError("window is not conjugate symmetric")
        if np.max(np.abs(v)) > 1 + tol:
            raise InvalidWindowError("coefficient modulus exceeds 1")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for l, c in zip(self.ells, self.values):
            w.writerow([int(l), repr(float(c.real)), repr(float(c.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CoefficientWindow":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        ells = [int(r[0]) for r in rows]
        L = max(ells)
        if ells != list(range(-L, L + 1)):
            raise InvalidWindowError("CSV rows must cover l = -L..L in order")
        vals = np.array([complex(float(r[1]), float(r[2])) for r in rows])
        return cls(L, vals)


def fourier_window(mu: Measure, L: int) -> CoefficientWindow:
    pos = _coefficients(mu, np.arange(0, L + 1))
    vals = np.concatenate((np.conj(pos[:0:-1]), pos))
    return CoefficientWindow(L, vals)


def invariance_window_check(mu: Measure, n: int, L: int, tol: float) -> bool:
    """True iff |μ̂(l) - μ̂(nl)| <= tol for every |l| <= L.

    Coefficients of a real measure are conjugate symmetric, so l >= 0 is
    enough.  For an atomic measure with k atoms this decides invariance
    once L >= 2k - 1 (the difference measure has at most 2k atoms).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    ells = np.arange(0, L + 1)
    a = _coefficients(mu, ells)
    b = _coefficients(mu, ells * n)
    return bool(np.max(np.abs(a - b)) <= tol)


def vague_distance(mu: Measure, nu: Measure, L: int) -> float:
    """Σ_{|l|<=L} 2^{-|l|} |μ̂(l) - ν̂(l)|, a pseudometric for the vague topology."""
    ells = np.arange(0, L + 1)
    diff = np.abs(_coefficients(mu, ells) - _coefficients(nu, ells))
    weights = np.where(ells == 0, 1.0, 2.0) * 0.5**ells
    return float(weights @ diff)


def toeplitz_support_rank(window: CoefficientWindow, rel_tol: float = RANK_TOL) -> Optional[int]:
    """Atom count read off the Toeplitz moment matrices T_d = [μ̂(l-m)]_{l,m=0..d}.

    This is the smallest d for which T_d is singular, or None when no
    T_d with d <= L is singular (the support is larger than the window can
    resolve).  For k <= L atoms the largest section T_L has rank exactly k,
    so d is found as the numerical rank of T_L: the number of eigenvalues
    above ``rel_tol`` times the largest.  Testing each small section on its
    own is far worse conditioned when atoms sit close together.
    """
    window.validate()
    # column holds μ̂(0..L); row holds μ̂(0), μ̂(-1), ...
    col = window.values[window.L:]
    ev = eigvalsh(toeplitz(col, np.conj(col)))
    rank = int(np.count_nonzero(ev > rel_tol * ev[-1]))
    return rank if rank <= window.L else None
