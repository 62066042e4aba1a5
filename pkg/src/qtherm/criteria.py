"""Executable checks of the nine entropy criteria for S = -k Tr[rho ln rho].

Failures are reported in the :class:`CriteriaReport`, never raised.
Criterion 3's "irreversible process" is stood in for by dephasing in the
energy eigenbasis (no equation of motion is modelled); criterion 2 can
only be evidenced, not proven, by sampling.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .composite import compose_levels
from .ensembles import random_density, random_hermitian, random_levels, random_pure, random_unitary
from .equilibrium import (
    DensityOperator,
    ScaledFamily,
    canonical_state,
    entropy,
    entropy_at_energy,
    fundamental_derivatives,
    max_entropy_witness,
)
from .fundamental import semiclassical_box_vs_ideal_gas
from .hamiltonians import BoxShape, box_spectrum_for_beta
from .spectral import eigh

CRITERIA_NAMES = (
    "invariant under unitary evolution",
    "defined for every system and state",
    "invariant in reversible adiabatic processes, increasing in irreversible ones",
    "additive",
    "nonnegative, zero exactly on projectors",
    "unique value at stable equilibrium",
    "concave smooth S(E) at stable equilibrium",
    "equal temperature and pressure in mutual stable equilibrium",
    "reduces to ideal-gas relations",
)

GAS_DEVIATION_TOL = 0.05
GAS_ENERGY = 400.0  # >= 10^3 thermally occupied box levels


def dephase(rho, basis) -> DensityOperator:
    """Drop the off-diagonal elements of ``rho`` in the orthonormal ``basis`` (columns)."""
    v = np.asarray(basis, dtype=complex)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValueError("basis must be a square matrix of column vectors")
    err = float(np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0]))))
    if err > 1e-10:
        raise ValueError(f"basis is not orthonormal: max |V^H V - I| = {err:.3e}")
    r = rho.matrix if isinstance(rho, DensityOperator) else np.asarray(rho)
    if r.shape != v.shape:
        raise ValueError(f"dimension mismatch: state {r.shape} vs basis {v.shape}")
    diag = np.real(np.einsum("ij,jk,ki->i", v.conj().T, r, v))
    return DensityOperator((v * diag) @ v.conj().T)


@dataclass
class CriterionResult:
    number: int
    name: str
    status: str
    witness: dict = field(default_factory=dict)
    note: str = ""


@dataclass
class CriteriaReport:
    seed: int
    dims: tuple[int, ...]
    trials: int
    results: list[CriterionResult]

    @property
    def all_pass(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def __getitem__(self, number: int) -> CriterionResult:
        return self.results[number - 1]

    def to_dict(self) -> dict:
        return {
            "command": "criteria",
            "seed": self.seed,
            "dims": list(self.dims),
            "trials": self.trials,
            "all_pass": self.all_pass,
            "criteria": [asdict(r) for r in self.results],
        }

    def to_text(self) -> str:
        lines = [f"entropy criteria (seed {self.seed}, dims {list(self.dims)}, trials {self.trials})"]
        for r in self.results:
            w = ", ".join(f"{k}={v:.3e}" if isinstance(v, float) else f"{k}={v}" for k, v in r.witness.items())
            lines.append(f"  ({r.number}) {r.status.upper():5s} {r.name}: {w}")
        lines.append("ALL PASS" if self.all_pass else "SOME CRITERIA FAILED")
        return "\n".join(lines)


def _result(n, ok, witness, note=""):
    return CriterionResult(n, CRITERIA_NAMES[n - 1], "pass" if ok else "fail", witness, note)


def _c1_unitary(dims, trials, rng):
    worst = 0.0
    for d in dims:
        for _ in range(trials):
            rho = random_density(d, rng)
            u = random_unitary(d, rng)
            worst = max(worst, abs(entropy(u @ rho.matrix @ u.conj().T) - entropy(rho)))
    return _result(1, worst < 1e-9, {"max_deviation": worst})


def _c2_totality(dims, trials, rng):
    values = []
    cases = 0
    for d in dims:
        for _ in range(trials):
            values.append(entropy(random_density(d, rng)))
            values.append(entropy(random_pure(d, rng)))
            values.append(entropy(random_density(d, rng, rank=max(1, d // 2))))
            cases += 3
        # degenerate and nearly singular spectra
        p = np.full(d, 1.0 / d)
        values.append(entropy(p))
        q = np.full(d, 1e-300)
        q[0] = 1.0 - (d - 1) * 1e-300
        values.append(entropy(q))
        cases += 2
    values.append(entropy(np.array([[1.0]])))
    cases += 1
    v = np.array(values)
    ok = bool(np.all(np.isfinite(v)) and np.all(v >= -1e-12))
    return _result(2, ok, {"states_evaluated": cases, "max_entropy": float(v.max()), "min_entropy": float(v.min())}, "evidence only: totality shown on sampled ensembles and edge cases")


def _c3_adiabatic(dims, trials, rng):
    worst_rev = 0.0
    worst_dephase = math.inf
    for d in dims:
        for _ in range(trials):
            h = random_hermitian(d, rng)
            dec = eigh(h)
            t = rng.uniform(0.1, 5.0)
            u = (dec.eigenvectors * np.exp(-1j * dec.eigenvalues * t)) @ dec.eigenvectors.conj().T
            rho = random_density(d, rng)
            s0 = entropy(rho)
            worst_rev = max(worst_rev, abs(entropy(u @ rho.matrix @ u.conj().T) - s0))
            worst_dephase = min(worst_dephase, entropy(dephase(rho, dec.eigenvectors)) - s0)
    ok = worst_rev < 1e-9 and worst_dephase >= -1e-12
    return _result(
        3,
        ok,
        {"max_unitary_change": worst_rev, "min_dephasing_increase": worst_dephase},
        "energy-basis dephasing stands in for irreversible processes",
    )


def _c4_additive(dims, trials, rng):
    worst = 0.0
    for d in dims:
        for _ in range(trials):
            d2 = int(rng.integers(2, 9))
            if d * d2 > 256:
                d2 = max(2, 256 // d)
            a, b = random_density(d, rng), random_density(d2, rng)
            ab = np.kron(a.matrix, b.matrix)
            worst = max(worst, abs(entropy(ab) - entropy(a) - entropy(b)))
    return _result(4, worst < 1e-10, {"max_deviation": worst})


def _c5_projectors(dims, trials, rng):
    max_pure = 0.0
    min_any = math.inf
    min_mixed = math.inf
    for d in dims:
        for _ in range(trials):
            s = entropy(random_pure(d, rng))
            max_pure = max(max_pure, s)
            min_any = min(min_any, s)
            rho = random_density(d, rng)
            s = entropy(rho)
            min_any = min(min_any, s)
            if rho.eigenvalues[-1] < 1 - 1e-10:
                min_mixed = min(min_mixed, s)
    ok = max_pure < 1e-10 and min_any >= -1e-12 and min_mixed >= 1e-10
    return _result(5, ok, {"max_pure_entropy": max_pure, "min_entropy": min_any, "min_mixed_entropy": min_mixed})


def _c6_unique(dims, trials, rng):
    worst = math.inf
    for d in dims:
        if d < 3:
            continue
        e = random_levels(d, rng)
        target = float(rng.uniform(e[0] + 0.1 * (e.mean() - e[0]), e.mean()))
        rep = max_entropy_witness(e, target, trials * 10, int(rng.integers(2**31)), complete=True)
        worst = min(worst, rep.min_margin)
    return _result(6, worst > 0, {"min_entropy_margin": worst}, "random energy- and trace-preserving perturbations of the canonical state")


def _c7_concave(dims, rng):
    worst = -math.inf
    for d in dims:
        e = random_levels(d, rng)
        lo, hi = e[0], e[-1]
        grid = np.linspace(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo), 50)
        s = np.array([entropy_at_energy(e, x, complete=True)[0] for x in grid])
        worst = max(worst, float(np.max(s[2:] - 2 * s[1:-1] + s[:-2])))
    return _result(7, worst <= 1e-8, {"max_second_difference": worst})


def _c8_mutual(dims, rng):
    worst_t = 0.0
    for d in dims:
        e_a, e_b = random_levels(d, rng), random_levels(int(rng.integers(2, 9)), rng)
        beta = float(rng.uniform(0.2, 2.0))
        vals = []
        for levels in (e_a, e_b, compose_levels(e_a, e_b).energies.ravel()):
            E = canonical_state(levels, beta, complete=True).energy
            props = fundamental_derivatives(ScaledFamily(levels, 1.0, True), E, 1.0)
            vals.append(props.inverse_temperature)
        worst_t = max(worst_t, max(abs(v - beta) / beta for v in vals))
    beta = 0.05
    spec = box_spectrum_for_beta(BoxShape(1.0, 1.0, 1.0), beta)
    fam = ScaledFamily.from_box(spec)
    E = canonical_state(spec, beta).energy
    p_a = fundamental_derivatives(fam, E, 1.0).pressure
    p_b = fundamental_derivatives(ScaledFamily.from_box(box_spectrum_for_beta(BoxShape(1.0, 1.0, 1.0), beta)), E, 1.0).pressure
    p_exact = 2.0 / 3.0 * E
    worst_p = max(abs(p_a - p_b), abs(p_a - p_exact)) / p_exact
    ok = worst_t < 1e-5 and worst_p < 1e-4
    return _result(8, ok, {"max_temperature_mismatch": worst_t, "max_pressure_mismatch": worst_p})


def _c9_ideal_gas():
    cmp = semiclassical_box_vs_ideal_gas(GAS_ENERGY, 1.0)
    return _result(
        9,
        cmp.relative_deviation < GAS_DEVIATION_TOL,
        {"energy": GAS_ENERGY, "relative_deviation": cmp.relative_deviation, "thermal_levels": cmp.thermal_levels, "tail_weight": cmp.tail_weight},
        "single particle in a cube vs classical particle-in-a-box entropy",
    )


def run_criteria_suite(dims=(2, 3, 4, 8, 16), trials: int = 20, seed: int = 42) -> CriteriaReport:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 or d > 64 for d in dims):
        raise ValueError(f"dims must lie in [2, 64], got {list(dims)}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    checks = [
        lambda: _c1_unitary(dims, trials, rng),
        lambda: _c2_totality(dims, trials, rng),
        lambda: _c3_adiabatic(dims, trials, rng),
        lambda: _c4_additive(dims, trials, rng),
        lambda: _c5_projectors(dims, trials, rng),
        lambda: _c6_unique(dims if max(dims) >= 3 else dims + (3,), trials, rng),
        lambda: _c7_concave(dims, rng),
        lambda: _c8_mutual(dims, rng),
        _c9_ideal_gas,
    ]
    results = []
    for n, check in enumerate(checks, 1):
        try:
            results.append(check())
        except Exception as exc:  # reported, not raised
            results.append(CriterionResult(n, CRITERIA_NAMES[n - 1], "fail", {"error": str(exc)}, "check raised"))
    return CriteriaReport(seed, dims, trials, results)
