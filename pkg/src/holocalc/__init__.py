"""Entire-function calculus on matrices and bounded chain complexes.

The package evaluates f(T) for entire f along two independent routes (direct
tail-bounded partial sums, and integration of an lp-bounded tower measure
against the orbit n -> sqrt(a_n) T^n), provides a classical eigendecomposition
oracle to check them against, and verifies degreewise that applying f to a
chain endomorphism commutes with passing to homology.
"""

from .chains import (
    ChainComplex,
    ChainEndo,
    CompatReport,
    HomologyBasis,
    func_calc_chain,
    homology_basis,
    induced_on_homology,
    validate,
    verify_homology_compat,
)
from .matfunc import (
    ConvergenceReport,
    func_calc_series,
    func_calc_via_measure,
    oracle_eigen,
    orbit_map,
    spectral_norm,
)
from .measure import (
    LevelMeasure,
    TowerMeasure,
    dirac,
    dirac_tower,
    lp_norm,
    pair,
    pushforward,
    series_measure,
)
from .series import (
    ConvergenceError,
    PowerSeries,
    RatioReport,
    eval_scalar,
    power_ratio_check,
    ratio_test,
    root_test,
)
from .tower import INFINITY, TowerPoint, level_points, project

__all__ = [
    "ChainComplex",
    "ChainEndo",
    "CompatReport",
    "ConvergenceError",
    "ConvergenceReport",
    "HomologyBasis",
    "INFINITY",
    "LevelMeasure",
    "PowerSeries",
    "RatioReport",
    "TowerMeasure",
    "TowerPoint",
    "dirac",
    "dirac_tower",
    "eval_scalar",
    "func_calc_chain",
    "func_calc_series",
    "func_calc_via_measure",
    "homology_basis",
    "induced_on_homology",
    "level_points",
    "lp_norm",
    "oracle_eigen",
    "orbit_map",
    "pair",
    "power_ratio_check",
    "project",
    "pushforward",
    "ratio_test",
    "root_test",
    "series_measure",
    "spectral_norm",
    "validate",
    "verify_homology_compat",
]

__version__ = "0.1.0"
