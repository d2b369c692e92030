"""Distillation-based Bell-diagonal state estimation."""

from ._core import (  # noqa: F401
    Basis,
    BellVector,
    Candidate,
    ExperimentConfig,
    ExperimentLog,
    NoiseModel,
    Party,
    PartyNoise,
    Protocol,
    StatisticModel,
    __version__,
    apply_memory_noise,
    arbitrary_state_bound,
    bell_required_rounds,
    bell_sample_bound,
    consumed_pairs,
    dephase,
    depolarize,
    distilled_fidelity_noiseless,
    estimate_bell,
    estimate_bell_noiseless,
    estimate_werner,
    estimate_werner_depolarized,
    estimate_werner_noiseless,
    expected_statistic,
    hoeffding_tail,
    noiseless_success,
    noisy_success,
    quadratic_coefficients,
    read_log_file,
    rotate_bilateral_rx,
    run_experiment,
    sample_generation_delay,
    tomography_bell_delta,
    tomography_bell_up_probs,
    tomography_werner_delta,
    tomography_werner_samples,
    trace_distance,
    werner_required_rounds,
    werner_sample_bound,
    werner_vector,
    write_log_file,
    x_to_q,
)
