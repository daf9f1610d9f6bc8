"""vgkit: the variance-gamma distribution and its Levy-process toolkit.

Layers: special functions (:mod:`vgkit.specfun`), the distribution itself
(:mod:`vgkit.distribution`, :mod:`vgkit.moments`), samplers
(:mod:`vgkit.sampling`), estimators (:mod:`vgkit.estimation`), the VG
process (:mod:`vgkit.process`), option pricing (:mod:`vgkit.pricing`),
exact laws from multivariate statistics (:mod:`vgkit.statlinks`), the
acceptance checks (:mod:`vgkit.acceptance`) and a batch CLI
(:mod:`vgkit.cli`).
"""

from .distribution import (
    BibbySorensen,
    BoundDirection,
    GeneratingFunctionValues,
    KotzKP,
    MadanSeneta2,
    PdfRegime,
    TailInfo,
    VgParams,
    affine_transform,
    cdf,
    cdf_values,
    cf,
    cgf,
    convert_params,
    convolve,
    expected_value,
    generating_functions,
    invert_params,
    levy_density,
    logpdf,
    mgf,
    mgf_strip,
    pdf,
    pdf_asymptotic,
    pdf_even_r,
    quantile,
    survival_tail,
)
from .estimation import (
    CollapsedFitError,
    DataSet,
    EcmState,
    FitMethod,
    FitResult,
    LightTailsError,
    SingularLikelihoodError,
    ecm_cm_step,
    ecm_e_step,
    ecm_fit,
    ecm_initial_state,
    mle_fit,
    mom_general,
    mom_symmetric,
    negative_log_likelihood,
)
from .moments import (
    ModeMethod,
    ModeResult,
    MomentSet,
    absolute_moment,
    central_moment_u_poly,
    central_moments,
    cumulants,
    median,
    median_conjecture_bounds,
    mode,
    moments_summary,
    raw_moment_hyp2f1,
    raw_moments,
    stein_residual,
)
from .pricing import (
    DampingInfeasibleError,
    MartingaleInfeasibleError,
    ModelKind,
    PricingInputs,
    VgStockModel,
    black_scholes_call,
    call_cf_inversion,
    call_gamma_quadrature,
    log_return_params,
    omega,
    simulate_stock,
)
from .process import (
    GammaDifferenceDecomposition,
    PathGrid,
    VgProcessParams,
    gamma_difference_decomposition,
    increment_params,
    process_cf,
    process_levy_density,
    process_moments,
    simulate_gamma_process,
    simulate_path_gamma_difference,
    simulate_path_subordinator,
)
from .sampling import (
    RngStream,
    SampleBatch,
    SampleMethod,
    sample_gamma,
    sample_vg_gamma_difference,
    sample_vg_integer_reps,
    sample_vg_normal_gamma,
    selfdec_check_sample,
)
from .specfun import EvalScale, NonConvergenceError
from .statlinks import (
    BivariateNormalSpec,
    WishartSpec,
    bartlett_sample,
    product_normal_params,
    sample_cov_params,
    wishart_offdiag_params,
)

__version__ = "0.1.0"
