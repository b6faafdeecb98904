"""Outage and effective-capacity analysis of relay-assisted retransmission links."""

from ._core import (
    __version__,
    companion_matrix,
    ec_sweep,
    effective_capacity,
    erlang_cdf,
    outage,
    outage_mc,
    shifted_exp_product_cdf,
    simulate_service,
    snr_from_db,
    snr_to_db,
    spectral_radius,
    two_erlang_sum_cdf,
)

__all__ = [
    "__version__",
    "companion_matrix",
    "ec_sweep",
    "effective_capacity",
    "erlang_cdf",
    "outage",
    "outage_mc",
    "shifted_exp_product_cdf",
    "simulate_service",
    "snr_from_db",
    "snr_to_db",
    "spectral_radius",
    "two_erlang_sum_cdf",
]
