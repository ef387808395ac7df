"""Exact workbench for combinatorial cubes over the integers and prime
fields: enumeration, set arithmetic with multiplicities, additive and
multiplicative energies, structural decompositions, incidence counts, and
seeded growth experiments.
"""

from .cube import (
    ADDITIVE,
    MULTIPLICATIVE,
    CubeSpec,
    FiniteSet,
    enumerate_cube,
    is_proper,
    is_symmetric,
    split_balanced,
    subcube,
    symmetry_witness,
)
from .energy import (
    CubeEnergyBounds,
    EnergyReport,
    cube_energy_bounds,
    ek_closed_form,
    energy_k,
    energy_pair,
    energy_tk,
    partition_count,
    tk_closed_form,
)
from .experiments import (
    ExperimentRecord,
    conjecture_probe,
    energy_bound_trial,
    growth_trial,
    random_cube,
    random_proper_cube,
    run_campaign,
)
from .floors import GROWTH_FLOORS, clears_floor
from .incidence import (
    Line,
    LineSet,
    Plane,
    PlaneSet,
    count_incidences_2d,
    count_incidences_3d,
    max_collinear,
)
from .numeric import (
    DEFAULT_MAGNITUDE_CAP,
    INTEGERS,
    PRIME_FIELD,
    AmbientRing,
    CapExceededError,
    is_prime,
)
from .setops import (
    DIFF,
    PROD,
    RATIO,
    SUM,
    CorrelationTable,
    MultiplicityMap,
    correlation,
    iterate_prod,
    iterate_sum,
    pairwise,
    pairwise_set,
    pairwise_size,
)
from .structure import (
    SDDecomposition,
    Verdict,
    energy_lower_check,
    gmr_check,
    olmezov_sides,
    sd_decompose,
    sd_popularity_ok,
    shifted_intersection_count,
)

__version__ = "0.1.0"

__all__ = [
    "ADDITIVE",
    "MULTIPLICATIVE",
    "INTEGERS",
    "PRIME_FIELD",
    "SUM",
    "DIFF",
    "PROD",
    "RATIO",
    "DEFAULT_MAGNITUDE_CAP",
    "GROWTH_FLOORS",
    "AmbientRing",
    "CapExceededError",
    "CorrelationTable",
    "CubeEnergyBounds",
    "CubeSpec",
    "EnergyReport",
    "ExperimentRecord",
    "FiniteSet",
    "Line",
    "LineSet",
    "MultiplicityMap",
    "Plane",
    "PlaneSet",
    "SDDecomposition",
    "Verdict",
    "clears_floor",
    "conjecture_probe",
    "correlation",
    "count_incidences_2d",
    "count_incidences_3d",
    "cube_energy_bounds",
    "ek_closed_form",
    "energy_bound_trial",
    "energy_k",
    "energy_lower_check",
    "energy_pair",
    "energy_tk",
    "enumerate_cube",
    "gmr_check",
    "growth_trial",
    "is_prime",
    "is_proper",
    "is_symmetric",
    "iterate_prod",
    "iterate_sum",
    "max_collinear",
    "olmezov_sides",
    "pairwise",
    "pairwise_set",
    "pairwise_size",
    "partition_count",
    "random_cube",
    "random_proper_cube",
    "run_campaign",
    "sd_decompose",
    "sd_popularity_ok",
    "shifted_intersection_count",
    "split_balanced",
    "subcube",
    "symmetry_witness",
    "tk_closed_form",
]
