"""Impatient coupon collector: Stirling asymptotics, conditioned sampling,
limiting completion curves, and random accessible automata."""

from .errors import (BackendWindowError, NumericsError, QuadratureError,
                     ResourceCapError)
from .specialfn import (SaddleParams, f_drift, g_theta, lambert_w0, rate_j,
                        saddle_params, tail_h, xi_of_lambda, xi_via_lambertw)
from .stirling import (ExactBackend, LogDPBackend, SaddleBackend,
                       StirlingBackend, chi, load_rows, psi_log,
                       psi_log_forms, ratio_r, saddle_diagnostics, save_rows,
                       stirling_exact, surjection_log_probability,
                       transition_error)
from .curve import (Curve, curve_to_csv, envelope, lambda_along,
                    patient_curve, solve_completion_curve, strip_clearance)
from .sampler import (Trajectory, auto_backend, conditioned_paths, prefix_law,
                      rejection_paths, rejection_sample, sample_conditioned,
                      sample_patient, sup_distance, sup_distance_batch,
                      sup_distances_of, trajectory_to_csv)
from .automata import (BoxedDiagram, bfs_accessible, binomial_ci, dyck_check,
                       estimate_accessibility, estimate_middle_crossing,
                       exact_accessible_count, korshunov_constant,
                       korshunov_report, pollaczek_crossing,
                       simulate_walk_max, structure_from_diagram,
                       surjection_to_diagram)

__version__ = "0.1.0"

__all__ = [
    "BackendWindowError", "NumericsError", "QuadratureError", "ResourceCapError",
    "SaddleParams", "f_drift", "g_theta", "lambert_w0", "rate_j",
    "saddle_params", "tail_h", "xi_of_lambda", "xi_via_lambertw",
    "ExactBackend", "LogDPBackend", "SaddleBackend", "StirlingBackend",
    "chi", "load_rows", "psi_log", "psi_log_forms", "ratio_r",
    "saddle_diagnostics", "save_rows", "stirling_exact",
    "surjection_log_probability", "transition_error",
    "Curve", "curve_to_csv", "envelope", "lambda_along", "patient_curve",
    "solve_completion_curve", "strip_clearance",
    "Trajectory", "auto_backend", "conditioned_paths", "prefix_law",
    "rejection_paths", "rejection_sample", "sample_conditioned",
    "sample_patient", "sup_distance", "sup_distance_batch",
    "sup_distances_of", "trajectory_to_csv",
    "BoxedDiagram", "bfs_accessible", "binomial_ci", "dyck_check",
    "estimate_accessibility", "estimate_middle_crossing",
    "exact_accessible_count", "korshunov_constant", "korshunov_report",
    "pollaczek_crossing", "simulate_walk_max", "structure_from_diagram",
    "surjection_to_diagram",
    "__version__",
]
