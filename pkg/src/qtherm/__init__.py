"""qtherm: canonical stable-equilibrium states, entropy criteria and shape-change reallocation."""

from .composite import (
    CompositeOccupations,
    CompositeSpectrum,
    Flow,
    compose_hamiltonians,
    compose_levels,
    gibbs_ratio_residual,
    flow_direction,
    mutual_equilibrium,
    product_state,
)
from .criteria import CriteriaReport, dephase, run_criteria_suite
from .equilibrium import (
    CanonicalState,
    DensityOperator,
    ScaledFamily,
    beta_for_energy,
    canonical_state,
    entropy,
    entropy_at_energy,
    fundamental_derivatives,
    max_entropy_witness,
    mean_momentum,
)
from .fundamental import (
    NEG_INF,
    FundamentalRelation,
    ideal_gas_entropy,
    semiclassical_box_vs_ideal_gas,
    spin_fundamental,
    total_potential,
)
from .hamiltonians import (
    BoxShape,
    BoxSpectrum,
    GridWell,
    box_spectrum,
    fd_well,
    momentum_operator,
    spin_system,
)
from .shape import (
    ReallocationTrace,
    ShapeTrajectory,
    entropy_gap,
    isochoric_family,
    semiclassical_scan,
    trajectory_run,
)
from .spectral import HermitianOperator, SpectralDecomposition, eigh, spectral_map

__version__ = "0.1.0"
