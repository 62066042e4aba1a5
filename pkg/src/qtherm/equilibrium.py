"""Canonical stable-equilibrium states and the entropy functional S = -k Tr[rho ln rho].

Level lists come in two flavours. A *complete* list is the whole spectrum
of a finite system (a spin ladder, a discretized well) and admits negative
inverse temperatures; plain sequences and operators are complete by
default. A *truncated* list (a box spectrum cut at some energy, or any
list passed with ``complete=False``) stands for an unbounded spectrum, so
only beta >= 0 is allowed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.optimize import brentq
from scipy.special import logsumexp

from .hamiltonians import BoxSpectrum
from .spectral import HermitianOperator, SpectralDecomposition, eigh

DENSITY_TOL = 1e-10
CLAMP = 1e-300


def as_levels(spectrum, complete: bool | None = None):
    """Normalize a spectrum-like input to ``(energies, complete, eigenvectors)``.

    Accepts a :class:`BoxSpectrum` (always truncated), a
    :class:`SpectralDecomposition` or :class:`HermitianOperator`, or a
    plain sequence of energies. The last three are taken as the complete
    spectrum of a finite system unless ``complete=False``.
    """
    vecs = None
    if isinstance(spectrum, BoxSpectrum):
        if complete:
            raise ValueError("a box spectrum is a truncation of an unbounded spectrum")
        return spectrum.energies, False, None
    if isinstance(spectrum, HermitianOperator):
        spectrum = eigh(spectrum)
    if isinstance(spectrum, SpectralDecomposition):
        e, vecs = spectrum.eigenvalues, spectrum.eigenvectors
        is_complete = True if complete is None else complete
    else:
        e = np.asarray(spectrum, dtype=float).ravel()
        is_complete = True if complete is None else complete
    if e.size == 0 or not np.all(np.isfinite(e)):
        raise ValueError("level list must be non-empty and finite")
    return e, is_complete, vecs


class DensityOperator:
    """Trace-one Hermitian operator with spectrum in [0, 1] (rho >= rho^2)."""

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density operator must be square, got shape {m.shape}")
        asym = float(np.max(np.abs(m - m.conj().T)))
        if asym > DENSITY_TOL:
            raise ValueError(f"density operator is not Hermitian: max asymmetry {asym:.3e}")
        m = 0.5 * (m + m.conj().T)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > DENSITY_TOL:
            raise ValueError(f"density operator trace is {tr!r}, expected 1")
        m.setflags(write=False)
        self.matrix = m
        w = self.eigenvalues
        if w[0] < -DENSITY_TOL or w[-1] > 1 + DENSITY_TOL:
            raise ValueError(f"density operator eigenvalues leave [0, 1]: min {w[0]:.3e}, max {w[-1]:.3e}")

    @classmethod
    def pure(cls, psi) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def from_occupations(cls, p, basis=None) -> "DensityOperator":
        p = np.asarray(p, dtype=float)
        if basis is None:
            return cls(np.diag(p))
        v = np.asarray(basis)
        return cls((v * p) @ v.conj().T)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        m = self.matrix
        return np.linalg.eigvalsh(m.real if not np.any(m.imag) else m)

    def __repr__(self):
        return f"DensityOperator(dim={self.dim})"


def _occupation_entropy(p: np.ndarray) -> float:
    p = np.where(p < CLAMP, 0.0, p)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def _check_probabilities(p: np.ndarray) -> np.ndarray:
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise ValueError("occupations must be a non-empty finite vector")
    if p.min() < -DENSITY_TOL:
        raise ValueError(f"negative occupation {p.min():.3e}")
    s = float(p.sum())
    if abs(s - 1.0) > 1e-8:
        raise ValueError(f"occupations sum to {s!r}, expected 1")
    return np.clip(p, 0.0, None)


def entropy(rho, k: float = 1.0) -> float:
    """Entropy -k Tr[rho ln rho], with 0 ln 0 = 0.

    ``rho`` may be a :class:`DensityOperator`, a square matrix, a
    :class:`CanonicalState`, or a 1-D occupation vector (the eigenvalues of
    a state diagonal in some known basis).

    >>> round(entropy([0.5, 0.5]), 12) == round(math.log(2), 12)
    True
    """
    if isinstance(rho, CanonicalState):
        return rho.entropy if k == rho.k else rho.entropy / rho.k * k
    if isinstance(rho, DensityOperator):
        w = rho.eigenvalues
    else:
        a = np.asarray(rho)
        if a.ndim == 1:
            w = a.astype(float)
        elif a.ndim == 2:
            w = DensityOperator(a).eigenvalues
        else:
            raise ValueError(f"cannot interpret array of shape {a.shape} as a state")
    w = _check_probabilities(np.asarray(w, dtype=float))
    return k * _occupation_entropy(w)


@dataclass(frozen=True)
class CanonicalState:
    """p_i = exp(-beta e_i) / Z over a level list.

    ``log_occupations`` is kept alongside ``occupations`` so ratios of tiny
    occupations stay exact; ``eigenvectors`` is set when the levels came
    from an operator.
    """

    beta: float
    energies: np.ndarray
    occupations: np.ndarray
    log_occupations: np.ndarray
    log_partition: float
    energy: float
    entropy: float
    complete: bool
    k: float = 1.0
    eigenvectors: np.ndarray | None = None

    @property
    def temperature(self) -> float:
        return math.inf if self.beta == 0 else 1.0 / (self.k * self.beta)

    @property
    def inverse_temperature(self) -> float:
        """1/T = k * beta."""
        return self.k * self.beta

    @property
    def variance(self) -> float:
        return float(np.sum(self.occupations * (self.energies - self.energy) ** 2))

    def density_matrix(self) -> DensityOperator:
        return DensityOperator.from_occupations(self.occupations, self.eigenvectors)


def _log_weights(e: np.ndarray, beta: float):
    """Shifted log-weights -beta (e - e_ref) and the reference level."""
    ref = e.min() if beta >= 0 else e.max()
    return -beta * (e - ref), ref


def canonical_state(spectrum, beta: float, *, complete: bool | None = None, k: float = 1.0) -> CanonicalState:
    """Canonical (Gibbs) state at inverse temperature ``beta`` = 1/kT.

    ``beta = +inf`` (or ``-inf`` for complete spectra) gives the uniform
    mixture over the ground (or top) degenerate block.
    """
    e, is_complete, vecs = as_levels(spectrum, complete)
    beta = float(beta)
    if math.isnan(beta):
        raise ValueError("beta is NaN")
    if beta < 0 and not is_complete:
        raise ValueError("negative temperature requires upper energy limit (complete, bounded spectrum)")
    if math.isinf(beta):
        target = e.min() if beta > 0 else e.max()
        tol = 1e-12 * (1.0 + abs(target))
        mask = np.abs(e - target) <= tol
        p = mask / mask.sum()
        with np.errstate(divide="ignore"):
            logp = np.log(p)
        log_z = math.nan
        energy = float(np.sum(p * e))
        s = k * math.log(mask.sum())
    else:
        lw, ref = _log_weights(e, beta)
        lse = float(logsumexp(lw))
        logp = lw - lse
        p = np.exp(logp)
        log_z = -beta * ref + lse
        energy = float(np.sum(p * e))
        # -sum p ln p with ln p exact; underflowed p contribute zero
        s = k * float(-np.sum(np.where(p > CLAMP, p * logp, 0.0)))
    p.setflags(write=False)
    logp.setflags(write=False)
    return CanonicalState(beta, e, p, logp, log_z, energy, s, is_complete, k, vecs)


def canonical_energy(e: np.ndarray, beta: float) -> float:
    lw, _ = _log_weights(e, beta)
    w = np.exp(lw - lw.max())
    return float(np.dot(w, e) / w.sum())


def _energy_variance(e: np.ndarray, beta: float) -> tuple[float, float]:
    lw, _ = _log_weights(e, beta)
    w = np.exp(lw - lw.max())
    w /= w.sum()
    mean = float(np.dot(w, e))
    return mean, float(np.dot(w, (e - mean) ** 2))


def energy_range(spectrum, complete: bool | None = None) -> tuple[float, float]:
    """Open interval of energies reachable by canonical states of ``spectrum``."""
    e, is_complete, _ = as_levels(spectrum, complete)
    hi = float(e.max()) if is_complete else float(e.mean())
    return float(e.min()), hi


def beta_for_energy(spectrum, target_energy: float, *, complete: bool | None = None) -> float:
    """Inverse temperature whose canonical state has mean energy ``target_energy``.

    E(beta) is strictly decreasing, so a bracketed root search is safe. The
    bracket starts at +-700/spread and widens if the target hugs an end of
    the spectrum; a few Newton steps (dE/dbeta = -Var E) polish the root.
    """
    e, is_complete, _ = as_levels(spectrum, complete)
    lo, hi = float(e.min()), float(e.max())
    spread = hi - lo
    mean = float(e.mean())
    upper = hi if is_complete else mean
    target = float(target_energy)
    if spread == 0 or not (lo < target < upper):
        raise ValueError(f"target energy {target!r} outside the achievable open range ({lo!r}, {upper!r})")
    if target == mean:
        return 0.0
    if target > mean and not is_complete:
        raise ValueError("negative temperature requires upper energy limit (complete, bounded spectrum)")
    sign = 1.0 if target < mean else -1.0
    bmax = 700.0 / spread
    f = lambda b: canonical_energy(e, b) - target
    while sign * f(sign * bmax) > 0:
        bmax *= 2.0
        if bmax > 1e300:
            raise ValueError(f"target energy {target!r} too close to the spectrum edge")
    a, b = sorted((0.0, sign * bmax))
    beta = brentq(f, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    for _ in range(3):
        mean_e, var = _energy_variance(e, beta)
        if var <= 0:
            break
        step = (mean_e - target) / var
        nb = beta + step
        if not (a <= nb <= b):
            break
        if abs(canonical_energy(e, nb) - target) >= abs(mean_e - target):
            break
        beta = nb
    resid = abs(canonical_energy(e, beta) - target)
    if resid > 1e-9 * spread:
        raise ValueError(f"beta search did not converge: residual {resid:.3e}")
    return float(beta)


def entropy_at_energy(spectrum, energy: float, *, complete: bool | None = None, k: float = 1.0) -> tuple[float, float]:
    """Stable-equilibrium entropy S(E) and its beta along the canonical family.

    The first-order correction k*beta*(E - E(beta)) removes the leftover
    root-finding residual, which matters when S(E) is differenced.
    """
    e, is_complete, _ = as_levels(spectrum, complete)
    beta = beta_for_energy(e, energy, complete=is_complete)
    st = canonical_state(e, beta, complete=is_complete, k=k)
    return st.entropy + k * beta * (energy - st.energy), beta


@dataclass(frozen=True)
class ScaledFamily:
    """Level list whose every level scales as V**(-2/3) (isotropic box scaling)."""

    reference_levels: np.ndarray
    reference_volume: float
    complete: bool = False

    def levels_at(self, volume: float) -> np.ndarray:
        if not volume > 0:
            raise ValueError(f"volume must be positive, got {volume!r}")
        return np.asarray(self.reference_levels, dtype=float) * (volume / self.reference_volume) ** (-2.0 / 3.0)

    @classmethod
    def from_box(cls, spectrum: BoxSpectrum) -> "ScaledFamily":
        return cls(spectrum.energies, spectrum.shape.volume(), False)


@dataclass(frozen=True)
class DerivativeProperties:
    beta: float
    inverse_temperature: float
    pressure: float


def _richardson(f, x: float, h: float) -> float:
    """Central difference refined once by Richardson extrapolation (error O(h^4))."""
    d1 = (f(x + h) - f(x - h)) / (2 * h)
    d2 = (f(x + h / 2) - f(x - h / 2)) / h
    return (4 * d2 - d1) / 3


def fundamental_derivatives(
    family: ScaledFamily,
    energy: float,
    volume: float,
    rel_step: float = 1e-4,
    k: float = 1.0,
) -> DerivativeProperties:
    """1/T = (dS/dE)_V and p = T (dS/dV)_E by central differences of S(E, V).

    The E step is ``rel_step`` times the distance from E to the nearest end
    of the achievable range, the V step ``rel_step`` times V; each central
    difference gets one Richardson refinement.
    """
    s = lambda en, vol: entropy_at_energy(family.levels_at(vol), en, complete=family.complete, k=k)[0]
    levels = family.levels_at(volume)
    # the energy origin is arbitrary: scale the step by the distance to the nearest edge
    lo, hi = energy_range(levels, family.complete)
    h_e = rel_step * min(energy - lo, hi - energy) if lo < energy < hi else rel_step * (hi - lo)
    h_v = rel_step * volume
    try:
        beta = beta_for_energy(levels, energy, complete=family.complete)
        ds_de = _richardson(lambda x: s(x, volume), energy, h_e)
        ds_dv = _richardson(lambda v: s(energy, v), volume, h_v)
    except ValueError as exc:
        raise ValueError(f"probe step drives E or V out of range: {exc}") from None
    pressure = math.nan if beta == 0 else ds_dv / (k * beta)
    return DerivativeProperties(beta, ds_de, pressure)


def mean_momentum(rho, p_op) -> float:
    """Tr[rho P]; real for a Hermitian pair."""
    if isinstance(rho, CanonicalState):
        rho = rho.density_matrix()
    r = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    p = p_op.matrix if isinstance(p_op, HermitianOperator) else np.asarray(p_op)
    if r.shape != p.shape:
        raise ValueError(f"dimension mismatch: state {r.shape} vs observable {p.shape}")
    val = complex(np.sum(r * p.T))
    scale = max(1.0, float(np.abs(r).sum() * np.abs(p).max()))
    if abs(val.imag) > 1e-10 * scale:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}; inputs are not a Hermitian pair")
    return val.real


@dataclass
class WitnessReport:
    energy: float
    beta: float
    canonical_entropy: float
    margins: np.ndarray
    seed: int | None

    @property
    def min_margin(self) -> float:
        return float(self.margins.min()) if self.margins.size else math.inf

    @property
    def all_positive(self) -> bool:
        return bool(np.all(self.margins > 0))


def feasible_direction(e: np.ndarray, idx) -> np.ndarray:
    """Direction on three levels preserving sum(p) and sum(p*e)."""
    i, j, l = idx
    d = np.array([e[j] - e[l], e[l] - e[i], e[i] - e[j]], dtype=float)
    if not np.any(d):
        raise ValueError("three equal levels admit no distinguishing direction")
    return d / np.abs(d).max()


def perturbation_margin(p: np.ndarray, idx, d: np.ndarray, t: float) -> float:
    """S(p) - S(p + t d) on the three touched levels (others cancel exactly)."""
    pi = p[list(idx)]
    q = pi + t * d

    def xlogx(x):
        return np.where(x > CLAMP, x * np.log(np.where(x > CLAMP, x, 1.0)), 0.0)

    return float(np.sum(xlogx(q)) - np.sum(xlogx(pi)))


def max_entropy_witness(
    spectrum, energy: float, trials: int, seed: int | None = 0, *, complete: bool | None = None, k: float = 1.0
) -> WitnessReport:
    """Probe that the canonical state maximizes entropy at fixed energy.

    Each trial moves mass among three random levels along the unique
    direction that keeps both normalization and mean energy, by a random
    fraction of the largest step that keeps occupations nonnegative.
    """
    e, is_complete, _ = as_levels(spectrum, complete)
    if e.size < 3:
        raise ValueError("a two-level state is fixed by its energy; need at least 3 levels")
    beta = beta_for_energy(e, energy, complete=is_complete)
    st = canonical_state(e, beta, complete=is_complete, k=k)
    p = st.occupations
    rng = np.random.default_rng(seed)
    margins = np.empty(trials)
    n = 0
    while n < trials:
        idx = tuple(rng.choice(e.size, size=3, replace=False))
        try:
            d = feasible_direction(e, idx)
        except ValueError:
            continue
        d = d * rng.choice((-1.0, 1.0))
        neg = d < 0
        tmax = float(np.min(p[list(idx)][neg] / -d[neg]))
        t = tmax * rng.uniform(0.05, 1.0)
        if t <= 0:
            continue
        margins[n] = k * perturbation_margin(p, idx, d, t)
        n += 1
    return WitnessReport(float(energy), beta, st.entropy, margins, seed)
