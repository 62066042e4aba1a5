"""Seeded random unitaries, states and Hamiltonians for property checks."""

from __future__ import annotations

import numpy as np

from .equilibrium import DensityOperator
from .spectral import HermitianOperator


def _rng(rng):
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def random_unitary(dim: int, rng=None) -> np.ndarray:
    """Haar unitary from the QR of a complex Gaussian matrix (phases fixed by diag(R))."""
    rng = _rng(rng)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, rng=None, scale: float = 1.0, real: bool = False) -> HermitianOperator:
    rng = _rng(rng)
    a = rng.standard_normal((dim, dim))
    if not real:
        a = a + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator(scale * 0.5 * (a + a.conj().T))


def random_spectrum(dim: int, rng=None) -> np.ndarray:
    """Normalized squared-Gaussian probabilities, descending."""
    rng = _rng(rng)
    w = rng.standard_normal(dim) ** 2
    return np.sort(w / w.sum())[::-1]


def random_density(dim: int, rng=None, rank: int | None = None) -> DensityOperator:
    rng = _rng(rng)
    rank = dim if rank is None else rank
    w = np.zeros(dim)
    w[:rank] = random_spectrum(rank, rng)
    u = random_unitary(dim, rng)
    return DensityOperator((u * w) @ u.conj().T)


def random_pure(dim: int, rng=None) -> DensityOperator:
    rng = _rng(rng)
    psi = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return DensityOperator.pure(psi)


def random_levels(dim: int, rng=None, low: float = 0.0, high: float = 10.0) -> np.ndarray:
    rng = _rng(rng)
    return np.sort(rng.uniform(low, high, size=dim))
