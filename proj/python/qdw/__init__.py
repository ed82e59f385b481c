"""Disordered one-dimensional quantum walk laboratory.

Thin Python surface over the C++ core: exact evolution, Fourier-space spectra,
the limit density and the Monte Carlo convergence harness.
"""

from ._qdw import (  # noqa: F401
    UsageError,
    __version__,
    bias_coefficient,
    dispersion,
    distribution,
    eigensystem,
    evolve,
    finite_diff_velocity_check,
    flat_band_report,
    fourier_evolve,
    fourier_operator,
    group_velocity,
    konno_density,
    limit_cdf,
    limit_density,
    limit_moment,
    make_coin,
    moment_convergence,
    monte_carlo_run,
    return_probability,
    run_cli,
    sample_disorder,
    sample_initial_qubit,
    split_coin,
)
