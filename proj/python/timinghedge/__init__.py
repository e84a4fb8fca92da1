"""Semi-static hedging of barrier options: timing risk, hedging errors,
parametrix series. Thin re-export of the C++ extension."""

from _timinghedge import (  # noqa: F401
    BarrierContract,
    GbmParams,
    McConfig,
    McEstimate,
    UndefinedRatioError,
    carr_picron_residual,
    first_passage_cdf,
    he1,
    he1_components,
    he1_mc,
    he2,
    hedge_portfolio_mc,
    knockout_price_mc,
    lamperti_transform,
    normal_cdf,
    parametrix_identity_residual,
    ratio_gamma,
    s_op1_closed_form,
    series_bound,
    series_bound_cq_constant_model,
    sweep_surface,
)

__all__ = [
    "BarrierContract",
    "GbmParams",
    "McConfig",
    "McEstimate",
    "UndefinedRatioError",
    "carr_picron_residual",
    "first_passage_cdf",
    "he1",
    "he1_components",
    "he1_mc",
    "he2",
    "hedge_portfolio_mc",
    "knockout_price_mc",
    "lamperti_transform",
    "normal_cdf",
    "parametrix_identity_residual",
    "ratio_gamma",
    "s_op1_closed_form",
    "series_bound",
    "series_bound_cq_constant_model",
    "sweep_surface",
]
