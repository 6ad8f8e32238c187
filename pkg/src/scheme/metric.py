import numpy as np

from core.exceptions import MetricError


def update_metric(u_next, u_prev) -> float:
    """Normalized L1 update: sum |u_next - u_prev| / sum |u_prev|."""
    u_next = np.asarray(u_next, dtype=float)
    u_prev = np.asarray(u_prev, dtype=float)
    if u_next.shape != u_prev.shape:
        raise ValueError("iterates must have equal lengths")
    denominator = np.sum(np.abs(u_prev))
    if denominator == 0.0:
        raise MetricError("normalized update undefined: previous iterate is identically zero")
    return float(np.sum(np.abs(u_next - u_prev)) / denominator)
