"""Laws of the asymmetric telegraph process and their validation tooling.

A particle leaves the origin moving right at speed c1 or left at speed
c2, reversing direction at Poisson epochs.  This package evaluates the
exact laws of the running maximum and of the position (conditional on
the reversal count and unconditional), simulates trajectories, and
cross-checks everything against independent oracles: nested quadrature,
Poisson mixtures, Monte Carlo, and finite-difference residuals of the
governing Euler-Poisson-Darboux-type equations.
"""

from .epd import (
    EpdSpec,
    Family,
    GridSpec,
    ResidualStudy,
    differential_system_residual,
    epd_residual,
    first_order_chain_residual,
    operator_coefficients,
)
from .errors import (
    CapacityError,
    DomainError,
    QuadratureError,
    SeriesTruncationError,
)
from .maximum import (
    a_triangle,
    max_cdf,
    max_cdf_minus_count,
    max_cdf_minus_unconditional,
    max_cdf_plus_count,
    max_cdf_plus_unconditional,
    max_pdf,
    max_pdf_minus_count,
    max_pdf_plus_count,
    max_point_mass_plus,
    minus_plus_cdf_gap,
    pdf_peak_minus_n3,
    pdf_peak_plus_n3,
    symmetric_cdf_generating_function,
    zero_mass_count,
    zero_mass_count_exact,
    zero_mass_count_from_triangle,
    zero_mass_unconditional,
)
from .params import LawValue, MaxQuery, MotionParams, PositionQuery, Velocity
from .position import (
    nonhomogeneous_position_pdf,
    position_atoms,
    position_pdf,
    position_pdf_given_count,
)
from .simulate import (
    EmpiricalMaxCdf,
    PathBatch,
    PathSample,
    RngStream,
    assemble_path,
    empirical_max_cdf,
    sample_maxima,
    sample_path,
    sample_path_epd_rate,
    sample_path_given_count,
    simulate_batch,
)
from .special import (
    SeriesConfig,
    SeriesResult,
    bessel_i,
    bessel_series_scaled,
    binomial,
    log_gamma,
)
from .validate import (
    CheckResult,
    KsReport,
    MixtureGap,
    ks_report,
    mixture_crosscheck,
    nested_integral_cdf_plus,
    poisson_mixture_cdf,
    run_validation,
)

__version__ = "0.1.0"
