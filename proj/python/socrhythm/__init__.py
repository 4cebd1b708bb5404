"""Weekly social rhythms, weighted contact networks and a coupled-oscillator simulator."""

from ._core import (
    Error,
    build_week_network,
    detect_communities,
    dft168,
    extract_rhythms,
    lock_condition_two,
    parse_events,
    powerlaw_mle,
    retained_bins,
    rhythm_of_week,
    run_two_oscillator,
    similarity,
    simulate,
    weighted_clustering,
    weighted_distances,
    welch_t,
)

__all__ = [
    "Error",
    "build_week_network",
    "detect_communities",
    "dft168",
    "extract_rhythms",
    "lock_condition_two",
    "parse_events",
    "powerlaw_mle",
    "retained_bins",
    "rhythm_of_week",
    "run_two_oscillator",
    "similarity",
    "simulate",
    "weighted_clustering",
    "weighted_distances",
    "welch_t",
]
