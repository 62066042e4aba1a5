"""Dense Hermitian eigendecomposition and spectral matrix functions.

Eigenvectors inside a degenerate block are basis-dependent. The ordering
rule below makes them deterministic for a fixed input, but code elsewhere
in the package only relies on basis-independent quantities (spectra,
traces, expectation values).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

HERMITIAN_TOL = 1e-12


def _asymmetry(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


@dataclass(frozen=True)
class HermitianOperator:
    """Dense complex Hermitian matrix (Hamiltonian or observable).

    The symmetry tolerance is ``HERMITIAN_TOL`` times ``max(1, max|H_ij|)``
    so that stiff finite-difference operators are not rejected for
    rounding in their large entries.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"Hermitian operator needs a square matrix with dim >= 1, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("Hermitian operator has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(m))))
        asym = _asymmetry(m)
        if asym > HERMITIAN_TOL * scale:
            raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
        # symmetrize away sub-tolerance rounding so downstream math is exact
        m = 0.5 * (m + m.conj().T)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_real(self) -> bool:
        return not np.any(self.matrix.imag)

    def __matmul__(self, other):
        other = other.matrix if isinstance(other, HermitianOperator) else other
        return self.matrix @ other


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _degenerate_blocks(w: np.ndarray, tol: float):
    start = 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            yield start, i
            start = i


def _canonicalize(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Fix phases and order degenerate blocks deterministically.

    Each column is rotated so its first significant component is real and
    positive; inside a degenerate block columns are stably sorted by the
    index of that component.
    """
    v = v.copy()
    n = v.shape[0]
    lead = np.empty(v.shape[1], dtype=int)
    for j in range(v.shape[1]):
        col = v[:, j]
        mag = np.abs(col)
        idx = int(np.argmax(mag > 1e-8 * mag.max())) if n else 0
        lead[j] = idx
        ph = col[idx] / abs(col[idx])
        v[:, j] = col / ph
    tol = 1e-10 * (1.0 + float(np.max(np.abs(w))))
    for a, b in _degenerate_blocks(w, tol):
        if b - a > 1:
            order = np.argsort(lead[a:b], kind="stable")
            v[:, a:b] = v[:, a:b][:, order]
    return v


def eigh(h: HermitianOperator | np.ndarray) -> SpectralDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors of ``h``.

    >>> eigh(HermitianOperator([[0, 1], [1, 0]])).eigenvalues
    array([-1.,  1.])
    """
    if not isinstance(h, HermitianOperator):
        h = HermitianOperator(h)
    m = h.matrix.real if h.is_real else h.matrix
    w, v = np.linalg.eigh(m)
    v = _canonicalize(w, v.astype(complex))
    w = np.array(w, dtype=float)
    w.setflags(write=False)
    v.setflags(write=False)
    return SpectralDecomposition(w, v)


def eigvalsh(h: HermitianOperator | np.ndarray) -> np.ndarray:
    if not isinstance(h, HermitianOperator):
        h = HermitianOperator(h)
    m = h.matrix.real if h.is_real else h.matrix
    return np.linalg.eigvalsh(m)


def spectral_map(h: HermitianOperator | np.ndarray, f: Callable[[np.ndarray], np.ndarray]) -> HermitianOperator:
    """Return ``V diag(f(λ)) V†`` for the eigendecomposition of ``h``.

    ``f`` must be a real-valued ufunc-like callable. Raises ``ValueError``
    naming the eigenvalue if ``f`` is not finite there (e.g. ``log`` of an
    exact zero).
    """
    dec = eigh(h)
    with np.errstate(all="ignore"):
        fw = np.asarray(f(dec.eigenvalues))
    if fw.shape != dec.eigenvalues.shape:
        fw = np.array([f(x) for x in dec.eigenvalues])
    bad = ~np.isfinite(fw) | (np.abs(np.imag(fw)) > 0)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ValueError(f"function undefined or non-finite at eigenvalue {float(dec.eigenvalues[i])!r} (index {i})")
    fw = np.real(fw).astype(float)
    v = dec.eigenvectors
    return HermitianOperator((v * fw) @ v.conj().T)


def expm_h(h: HermitianOperator | np.ndarray) -> HermitianOperator:
    return spectral_map(h, np.exp)


def logm_h(h: HermitianOperator | np.ndarray) -> HermitianOperator:
    return spectral_map(h, np.log)
