import csv
import logging
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple, Union

from core.config import settings
from core.exceptions import MetricError, SchemeDivergenceError
from distancefield import DistanceIndex
from gridding import LevelSetState, NodeSet
from rbf import Factorization, Interpolant, KernelSpec, assemble, fit

from .metric import update_metric
from .models import SchemeConfig
from .stepper import step

logger = logging.getLogger(__name__)

StepCallback = Callable[[LevelSetState, Interpolant], None]


def run(
    nodes: NodeSet,
    idx: Optional[DistanceIndex],
    kernel: KernelSpec,
    cfg: SchemeConfig,
    u0: LevelSetState,
    callback: Optional[StepCallback] = None,
    factorization: Optional[Factorization] = None,
) -> Tuple[LevelSetState, List[float]]:
    """
    Iterate the scheme from u0.

    The interpolation matrix is factorized once (or `factorization` is reused)
    and each iteration refits, steps and records the normalized update E1.
    `callback(state, interpolant)` sees the initial state and every later
    iterate together with its reconstruction.

    Returns:
        Final state and the E1 history (entry k belongs to iteration k + 1)

    Raises:
        SchemeDivergenceError, MetricError: with `state` and `history` of the
            last good iterate attached
    """
    if len(u0.values) != nodes.interior_count:
        raise ValueError(
            f"initial values cover {len(u0.values)} nodes, node set has {nodes.interior_count}"
        )
    if len(u0.anchor_values) != nodes.anchor_count:
        raise ValueError("anchor values do not match the node set")

    fact = factorization if factorization is not None else assemble(nodes, kernel)
    state = u0
    itp = fit(fact, state.full_values)
    if callback is not None:
        callback(state, itp)

    logger.info(
        "Running up to %d iterations on %d nodes (dt=%g, %s form)",
        cfg.max_iterations,
        nodes.count,
        cfg.dt,
        cfg.form,
    )
    while state.iteration < cfg.max_iterations:
        try:
            nxt = step(state, itp, idx, cfg)
            e1 = update_metric(nxt.values, state.values)
        except SchemeDivergenceError as e:
            e.state = state
            e.history = list(state.history)
            raise
        except MetricError as e:
            e.state = state
            e.history = list(state.history)
            raise

        state = nxt.record(e1)
        itp = fit(fact, state.full_values)
        if callback is not None:
            callback(state, itp)

        if state.iteration % settings.PROGRESS_EVERY == 0:
            logger.info(
                "Iteration %d/%d | E1 %.6e", state.iteration, cfg.max_iterations, e1
            )
        if e1 < cfg.tolerance:
            logger.info(
                "Converged at iteration %d (E1 %.3e < %g)", state.iteration, e1, cfg.tolerance
            )
            break

    return state, list(state.history)


def write_history(history: Sequence[float], path: Union[str, Path]) -> None:
    """Write "iteration,E1" rows, iterations counted from 1."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "E1"])
        for k, e1 in enumerate(history, start=1):
            writer.writerow([k, repr(float(e1))])
