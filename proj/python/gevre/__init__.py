"""Block-maxima extreme value analysis with GEV and random location effects."""

from gevre._core import (
    BlockRecord,
    BlockSeries,
    ChainDraws,
    DataError,
    GevParams,
    McmcConfig,
    MleFit,
    NumericalError,
    ReturnLevelReport,
    block_series,
    build_report,
    cdf,
    coverage_check,
    empirical_percentile,
    extract_block_maxima,
    fit_mcmc,
    gev_mean,
    log_pdf,
    mle_fit,
    quantile,
    read_block_series,
    return_level,
    return_level_ci,
    return_level_posterior,
    sample,
    simulate_panel,
    summarize_blocks,
    summarize_chain,
    support,
)

__all__ = [
    "BlockRecord",
    "BlockSeries",
    "ChainDraws",
    "DataError",
    "GevParams",
    "McmcConfig",
    "MleFit",
    "ReturnLevelReport",
    "NumericalError",
    "block_series",
    "build_report",
    "cdf",
    "coverage_check",
    "empirical_percentile",
    "extract_block_maxima",
    "fit_mcmc",
    "gev_mean",
    "log_pdf",
    "mle_fit",
    "quantile",
    "read_block_series",
    "return_level",
    "return_level_ci",
    "return_level_posterior",
    "sample",
    "simulate_panel",
    "summarize_blocks",
    "summarize_chain",
    "support",
]

__version__ = "0.1.0"
