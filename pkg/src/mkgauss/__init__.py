"""Mann-Kendall tau under autocorrelation.

Exact finite-sample variance of the tau statistic for stationary Gaussian
series, AR(1)/SMA/ARMA simulation, Shapiro-Wilk normality testing,
asymptotic limit values along parameter-scaled sequences, and practical
criteria deciding when the Gaussian approximation of the normalized tau is
trustworthy.
"""

from .asymptotics import (
    AsymptoticVariance,
    IdentityReport,
    QuadratureConfig,
    SMA_LIMIT_VALUE,
    ar1_lower_bound,
    lemma_identity_checks,
    prop1_sum,
    r_kernel,
    sma_limit_value,
    var_limit_quadrature,
)
from .case_study import (
    CaseStudyBatch,
    CaseStudyRow,
    StationRecord,
    TABLE1_STATIONS,
    ci_upper,
    detrend,
    lag1_autocorr,
    read_station_csv,
    run_case_study,
    theil_sen_slope,
    write_case_study_csv,
)
from .criteria import (
    ALPHA_THRESHOLD,
    DecisionReport,
    K_TOT_THRESHOLD,
    alpha,
    decide_ar1,
    decide_sma,
    k_tot,
    log10_k_tot,
)
from .errors import (
    DegeneracyError,
    NumericError,
    ParameterError,
    QuadratureError,
    TieError,
)
from .mann_kendall import (
    TauResult,
    VarianceResult,
    normalized_tau,
    pair_diff_corr,
    tau,
    tau_batch,
    tau_fast,
    var_tau_exact,
)
from .montecarlo import (
    GridConfig,
    GridResult,
    GridRow,
    HistogramResult,
    IsolinePoint,
    empirical_tau_sample,
    isoline_data,
    report_asymptotics,
    run_grid,
    tau_histogram,
    write_grid_csv,
    write_histogram_csv,
)
from .processes import (
    AcfSpec,
    Ar1Params,
    ArmaParams,
    LimitRhoSpec,
    SmaParams,
    TimeSeries,
    acf_eval,
    gen_ar1,
    gen_arma,
    gen_sma,
    limit_rho_eval,
)
from .seeding import derive_seed, make_rng, splitmix64
from .shapiro_wilk import SwResult, rejection_rate, shapiro_wilk

__version__ = "0.1.0"
