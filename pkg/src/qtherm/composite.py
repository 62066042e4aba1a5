"""Two-phase composites: H = H_s (x) I + I (x) H_c, product states, escaping tendencies."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import CanonicalState, as_levels, entropy_at_energy
from .spectral import HermitianOperator

DENSE_DIM_CAP = 4096
RATIO_FULL_LIMIT = 10_000
SAME_TEMPERATURE_TOL = 1e-9


def compose_hamiltonians(h_s: HermitianOperator, h_c: HermitianOperator) -> HermitianOperator:
    dim = h_s.dim * h_c.dim
    if dim > DENSE_DIM_CAP:
        raise ValueError(
            f"composite dimension {dim} exceeds the dense cap {DENSE_DIM_CAP}; "
            "compose the level lists with compose_levels instead"
        )
    i_s, i_c = np.eye(h_s.dim), np.eye(h_c.dim)
    return HermitianOperator(np.kron(h_s.matrix, i_c) + np.kron(i_s, h_c.matrix))


@dataclass(frozen=True)
class CompositeSpectrum:
    """Pair energies e_i + eps_j; ``energies[i, j]`` for level i of s and j of c."""

    levels_s: np.ndarray
    levels_c: np.ndarray

    @property
    def energies(self) -> np.ndarray:
        return self.levels_s[:, None] + self.levels_c[None, :]

    @property
    def pairs(self) -> list[tuple[int, int, float]]:
        en = self.energies
        return [(i, j, float(en[i, j])) for i in range(en.shape[0]) for j in range(en.shape[1])]


def compose_levels(spec_s, spec_c) -> CompositeSpectrum:
    e_s, _, _ = as_levels(spec_s, True)
    e_c, _, _ = as_levels(spec_c, True)
    return CompositeSpectrum(np.asarray(e_s, float), np.asarray(e_c, float))


@dataclass(frozen=True)
class CompositeOccupations:
    """Occupations p_ij of a product state over level pairs."""

    occupations: np.ndarray  # (n_s, n_c)
    state_s: CanonicalState
    state_c: CanonicalState

    @property
    def spectrum(self) -> CompositeSpectrum:
        return CompositeSpectrum(self.state_s.energies, self.state_c.energies)

    @property
    def entropy(self) -> float:
        p = self.occupations
        k = self.state_s.k
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = np.where(p > 0, p * np.log(p), 0.0)
        return float(-k * terms.sum())

    @property
    def energy(self) -> float:
        return float(np.sum(self.occupations * self.spectrum.energies))


def product_state(rho_s: CanonicalState, rho_c: CanonicalState) -> CompositeOccupations:
    if rho_s.k != rho_c.k:
        raise ValueError("subsystems use different Boltzmann constants")
    p = np.outer(rho_s.occupations, rho_c.occupations)
    p.setflags(write=False)
    return CompositeOccupations(p, rho_s, rho_c)


def gibbs_ratio_residual(
    occ: CompositeOccupations,
    temperature: float,
    *,
    k: float | None = None,
    max_pairs: int = RATIO_FULL_LIMIT,
    seed: int = 0,
) -> float:
    """Max over index pairs of |ln(p_ij/p_kl) - [(e_k-e_i) + (eps_l-eps_j)]/kT|.

    All pairs are checked when there are at most ``max_pairs`` of them;
    otherwise ``max_pairs`` seeded samples are drawn.
    """
    k = occ.state_s.k if k is None else k
    p = np.asarray(occ.occupations)
    if np.any(p <= 0):
        i, j = map(int, np.argwhere(p <= 0)[0])
        raise ValueError(f"zero occupation at pair ({i}, {j}); log ratio undefined")
    e_s, e_c = occ.state_s.energies, occ.state_c.energies
    n_s, n_c = p.shape
    flat_p = np.log(p).ravel()
    flat_e = (e_s[:, None] + e_c[None, :]).ravel()
    m = flat_p.size
    if m * m <= max_pairs:
        a, b = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
        a, b = a.ravel(), b.ravel()
    else:
        rng = np.random.default_rng(seed)
        a = rng.integers(0, m, size=max_pairs)
        b = rng.integers(0, m, size=max_pairs)
    lhs = flat_p[a] - flat_p[b]
    rhs = (flat_e[b] - flat_e[a]) / (k * temperature)
    return float(np.max(np.abs(lhs - rhs)))


class Flow(enum.Enum):
    A_TO_B = "A_to_B"
    B_TO_A = "B_to_A"
    NONE = "none"


def total_entropy_change(state_a: CanonicalState, state_b: CanonicalState, delta: float) -> float:
    """S_A(E_A - delta) + S_B(E_B + delta) - S_A(E_A) - S_B(E_B) along each canonical family."""
    k = state_a.k
    s_a = entropy_at_energy(state_a.energies, state_a.energy - delta, complete=state_a.complete, k=k)[0]
    s_b = entropy_at_energy(state_b.energies, state_b.energy + delta, complete=state_b.complete, k=k)[0]
    return s_a + s_b - state_a.entropy - state_b.entropy


def flow_direction(state_a: CanonicalState, state_b: CanonicalState, exchange: float | None = None) -> Flow:
    """Direction of spontaneous energy (and entropy) flow between two stable states.

    Decided by which small energy transfer raises S_A + S_B. Comparing the
    two directions cancels the second-order (curvature) term.
    """
    if abs(state_a.inverse_temperature - state_b.inverse_temperature) < SAME_TEMPERATURE_TOL:
        return Flow.NONE
    if exchange is None:
        spread = lambda s: float(s.energies.max() - s.energies.min())
        exchange = 1e-6 * min(spread(state_a), spread(state_b))
    forward = total_entropy_change(state_a, state_b, exchange)
    backward = total_entropy_change(state_a, state_b, -exchange)
    if forward == backward:
        return Flow.NONE
    return Flow.A_TO_B if forward > backward else Flow.B_TO_A


def flow_by_temperature_rule(state_a: CanonicalState, state_b: CanonicalState) -> Flow:
    """A -> B iff 1/T_A < 1/T_B, for either sign of temperature."""
    da = state_a.inverse_temperature - state_b.inverse_temperature
    if abs(da) < SAME_TEMPERATURE_TOL:
        return Flow.NONE
    return Flow.A_TO_B if da < 0 else Flow.B_TO_A


def mutual_equilibrium(state_a: CanonicalState, state_b: CanonicalState, mu_a=None, mu_b=None) -> str:
    """Classify two phases as in ``"full"``, ``"partial"`` or ``"none"`` mutual equilibrium.

    Partial means equal temperatures with unequal total potentials, e.g. a
    solvent and an insoluble colloid whose cross potentials are -inf.
    """
    if flow_by_temperature_rule(state_a, state_b) is not Flow.NONE:
        return "none"
    if mu_a is None or mu_b is None:
        return "full"
    mu_a = np.atleast_1d(np.asarray(mu_a, dtype=float))
    mu_b = np.atleast_1d(np.asarray(mu_b, dtype=float))
    if mu_a.shape != mu_b.shape:
        raise ValueError("total potential vectors differ in length")
    same = [
        (math.isinf(x) and math.isinf(y) and x == y) or (math.isfinite(x) and math.isfinite(y) and abs(x - y) <= 1e-9 * max(1.0, abs(x)))
        for x, y in zip(mu_a, mu_b)
    ]
    return "full" if all(same) else "partial"
