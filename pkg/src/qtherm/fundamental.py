"""Closed-form fundamental relations S(E, n, V) and the properties they imply.

Reduced units m = h = k = 1 unless a different ``c0`` or ``k`` is passed.
``c0`` multiplies m/h^2 inside the ideal-gas logarithm; the box energy
convention hbar^2 pi^2 / 2m = 1 corresponds to ``c0 = BOX_C0 = 1/8``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .equilibrium import entropy_at_energy
from .hamiltonians import BoxShape, box_spectrum

NEG_INF = float("-inf")  # total potential of an absent constituent
BOX_C0 = 1.0 / 8.0


def _positive(**kw):
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"{name} must be positive and finite, got {v!r}")


def ideal_gas_entropy(E: float, n: float, V: float, c0: float = 1.0, k: float = 1.0) -> float:
    """Sackur-Tetrode entropy S = k n [ln((V/n) (4 pi c0 E / 3n)^{3/2}) + 5/2]."""
    _positive(E=E, n=n, V=V)
    return k * n * (math.log(V / n) + 1.5 * math.log(4 * math.pi * c0 * E / (3 * n)) + 2.5)


def ideal_gas_energy(S: float, n: float, V: float, c0: float = 1.0, k: float = 1.0) -> float:
    """Inverse of :func:`ideal_gas_entropy` in E at fixed (n, V)."""
    _positive(n=n, V=V)
    return (3 * n / (4 * math.pi * c0)) * ((n / V) * math.exp(S / (k * n) - 2.5)) ** (2.0 / 3.0)


@dataclass(frozen=True)
class PropertyBundle:
    inverse_temperature: float
    pressure: float
    total_potentials: tuple[float, ...]

    @property
    def temperature(self) -> float:
        return math.inf if self.inverse_temperature == 0 else 1.0 / self.inverse_temperature


@dataclass(frozen=True)
class FundamentalRelation:
    """``kind`` is ``"ideal_gas"`` (params c0) or ``"spin_lattice"`` (params N, gap)."""

    kind: str
    params: dict = field(default_factory=dict)
    k: float = 1.0

    def __post_init__(self):
        if self.kind not in ("ideal_gas", "spin_lattice"):
            raise ValueError(f"unknown fundamental relation kind {self.kind!r}")

    @classmethod
    def ideal_gas(cls, c0: float = 1.0, k: float = 1.0) -> "FundamentalRelation":
        return cls("ideal_gas", {"c0": c0}, k)

    @classmethod
    def spin_lattice(cls, N: float, gap: float, k: float = 1.0) -> "FundamentalRelation":
        _positive(N=N, gap=gap)
        return cls("spin_lattice", {"N": N, "gap": gap}, k)

    def entropy(self, E: float, n: float = 1.0, V: float = 1.0) -> float:
        if self.kind == "ideal_gas":
            return ideal_gas_entropy(E, n, V, self.params.get("c0", 1.0), self.k)
        N, gap = self.params["N"], self.params["gap"]
        return spin_fundamental(N, gap, E / (N * gap), self.k)[0]

    def properties(self, E: float, n: float, V: float) -> PropertyBundle:
        if self.kind != "ideal_gas":
            S, inv_t = spin_fundamental(self.params["N"], self.params["gap"], E / (self.params["N"] * self.params["gap"]), self.k)
            return PropertyBundle(inv_t, 0.0, ())
        _positive(E=E, n=n, V=V)
        k = self.k
        inv_t = 1.5 * k * n / E
        T = 1.0 / inv_t
        return PropertyBundle(inv_t, T * k * n / V, (total_potential(self, E, n, V),))


def total_potential(rel: FundamentalRelation, E: float, n: float, V: float) -> float:
    """mu = -T (dS/dn)_{E,V} from the closed form; ``NEG_INF`` when n == 0."""
    if rel.kind != "ideal_gas":
        raise ValueError("total potentials are defined here for the ideal-gas relation only")
    if n == 0:
        return NEG_INF
    _positive(E=E, n=n, V=V)
    k = rel.k
    S = rel.entropy(E, n, V)
    T = 2 * E / (3 * n * k)
    return -T * (S / n - 2.5 * k)


def total_potential_at_temperature(rel: FundamentalRelation, T: float, n: float, V: float) -> float:
    """mu at fixed (T, V): substitutes E = (3/2) n k T."""
    if n == 0:
        return NEG_INF
    return total_potential(rel, 1.5 * n * rel.k * T, n, V)


def total_potential_from_energy(rel: FundamentalRelation, E: float, n: float, V: float, rel_step: float = 1e-4) -> float:
    """mu = (dE/dn)_{S,V} by central differences of the inverted relation."""
    S = rel.entropy(E, n, V)
    c0 = rel.params.get("c0", 1.0)
    h = rel_step * n
    return (ideal_gas_energy(S, n + h, V, c0, rel.k) - ideal_gas_energy(S, n - h, V, c0, rel.k)) / (2 * h)


def spin_fundamental(N: float, gap: float, filling: float, k: float = 1.0) -> tuple[float, float]:
    """(S, 1/T) of N independent two-level spins with fraction ``filling`` excited.

    1/T runs from +inf at filling 0+ through 0 at 1/2 to -inf at 1-.
    """
    f = float(filling)
    if not (0.0 < f < 1.0):
        raise ValueError(f"filling must lie strictly inside (0, 1), got {f!r}")
    _positive(N=N, gap=gap)
    g = 1.0 - f
    s = -k * N * (f * math.log(f) + g * math.log(g))
    inv_t = (k / gap) * (math.log(g) - math.log(f))
    return s, inv_t


def spin_curve(N: float, gap: float, fillings, k: float = 1.0) -> np.ndarray:
    """Rows (filling, E, S, 1/T)."""
    rows = []
    for f in fillings:
        s, inv_t = spin_fundamental(N, gap, f, k)
        rows.append((f, f * N * gap, s, inv_t))
    return np.array(rows)


def ideal_gas_curve(energies, n: float, V: float, c0: float = 1.0, k: float = 1.0) -> np.ndarray:
    """Rows (E, S, 1/T, p, mu)."""
    rel = FundamentalRelation.ideal_gas(c0, k)
    rows = []
    for E in energies:
        b = rel.properties(E, n, V)
        rows.append((E, rel.entropy(E, n, V), b.inverse_temperature, b.pressure, b.total_potentials[0]))
    return np.array(rows)


def classical_box_entropy(E: float, V: float, k: float = 1.0) -> float:
    """Single distinguishable particle in a box: S/k = ln(V / lambda^3) + 3/2.

    In box units the thermal wavelength is lambda = 2 sqrt(beta/pi) with
    beta = 3 / (2E).
    """
    _positive(E=E, V=V)
    beta = 1.5 / E
    lam = 2.0 * math.sqrt(beta / math.pi)
    return k * (math.log(V / lam**3) + 1.5)


@dataclass(frozen=True)
class BoxGasComparison:
    energy: float
    volume: float
    quantum_entropy: float
    classical_entropy: float
    tail_weight: float
    thermal_levels: int

    @property
    def relative_deviation(self) -> float:
        return abs(self.quantum_entropy - self.classical_entropy) / abs(self.classical_entropy)


def quantum_box_entropy(E: float, shape: BoxShape, tail_tol: float = 1e-8, k: float = 1.0):
    """Canonical entropy of one particle in ``shape`` at mean energy E.

    The cutoff grows until the Weyl tail at the solved beta is below
    ``tail_tol``. Returns ``(S, beta, spectrum)``.
    """
    e0 = shape.ground_energy()
    if not E > e0:
        raise ValueError(f"energy {E!r} is not above the ground level {e0!r}")
    width = 12.0 * (E - e0)
    while True:
        spec = box_spectrum(shape, max_energy=e0 + width)
        try:
            S, beta = entropy_at_energy(spec, E, k=k)
        except ValueError:
            width *= 2.0
            continue
        if spec.tail_weight(beta) < tail_tol:
            return S, beta, spec
        width *= 1.5


def thermal_level_count(spec, beta: float) -> int:
    """Levels within kT of the ground level."""
    return int(np.count_nonzero(beta * (spec.energies - spec.energies[0]) <= 1.0))


def semiclassical_box_vs_ideal_gas(E: float, V: float, shape: BoxShape | None = None, tail_tol: float = 1e-8, k: float = 1.0) -> BoxGasComparison:
    """Quantum canonical box entropy against the classical particle-in-a-box entropy.

    ``shape`` defaults to the cube of volume V; it is rescaled to volume V
    if given.
    """
    _positive(E=E, V=V)
    if shape is None:
        shape = BoxShape(1.0, 1.0, 1.0)
    shape = shape.scaled((V / shape.volume()) ** (1.0 / 3.0))
    S_q, beta, spec = quantum_box_entropy(E, shape, tail_tol, k)
    tail = spec.tail_weight(beta)
    if not tail < tail_tol:
        raise ValueError(f"tail weight {tail:.2e} exceeds {tail_tol:.0e}; raise the cutoff")
    return BoxGasComparison(E, V, S_q, classical_box_entropy(E, V, k), tail, thermal_level_count(spec, beta))
