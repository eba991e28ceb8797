"""
The four-phase solver: orient edges, orient corners, position corners,
position edges, each phase driven greedily by its own Q-network.
"""
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional

import numpy as np
import pandas as pd

import config
from qube.cube_core import CubeState, is_solved
from qube.ddqn import PhaseConfig, greedy_rollout
from qube.errors import DimensionError, InvariantViolation, QubeError
from qube.hamiltonian import CoefficientSet
from qube.neural import MLPModel, load_model
from qube.rubik_group import Move, apply_sequence, phase_action_set, scramble

logger = logging.getLogger(__name__)

MoveCallback = Callable[[int, Move, CubeState], None]


@dataclass
class SolveResult:
    """
    Attributes:
        phase_moves: Moves taken per phase, in phase order
        phase_success: Whether each attempted phase reached its ground state
        final_state: State after the last attempted phase
        failure_phase: First phase that hit its step cap, if any
    """
    initial_state: CubeState
    phase_moves: Dict[int, List[Move]] = field(default_factory=dict)
    phase_success: Dict[int, bool] = field(default_factory=dict)
    final_state: Optional[CubeState] = None
    failure_phase: Optional[int] = None

    @property
    def moves(self) -> List[Move]:
        return [m for phase in sorted(self.phase_moves) for m in self.phase_moves[phase]]

    @property
    def total_moves(self) -> int:
        return sum(len(m) for m in self.phase_moves.values())

    @property
    def success(self) -> bool:
        return self.failure_phase is None and self.final_state is not None and is_solved(self.final_state)


def default_configs(overrides: Optional[Mapping[int, Mapping]] = None) -> Dict[int, PhaseConfig]:
    overrides = overrides or {}
    return {phase: PhaseConfig.for_phase(phase, **dict(overrides.get(phase, {}))) for phase in config.PHASES}


def _check_models(models: Mapping[int, MLPModel], configs: Mapping[int, PhaseConfig]) -> None:
    for phase in config.PHASES:
        if phase not in models or phase not in configs:
            raise DimensionError(f"Missing model or config for phase {phase}")
        model, cfg = models[phase], configs[phase]
        if tuple(model.layer_dims) != cfg.layer_dims:
            raise DimensionError(f"Phase {phase} model has dims {model.layer_dims}, expected {cfg.layer_dims}")
        if model.phase not in (0, phase):
            raise DimensionError(f"Model tagged for phase {model.phase} supplied as phase {phase}")


def solve(state: CubeState, models: Mapping[int, MLPModel], configs: Mapping[int, PhaseConfig],
          scramble_len: Optional[int] = None, coeffs: Optional[CoefficientSet] = None,
          on_move: Optional[MoveCallback] = None) -> SolveResult:
    """
    Run the four phases greedily.

    Args:
        state: State to solve
        models: Phase -> trained Q-network
        configs: Phase -> PhaseConfig (step-cap rule, action set)
        scramble_len: Length the step caps are computed from; defaults to
            each phase's max_scramble
        coeffs: Hamiltonian coefficients
        on_move: Called as ``on_move(phase, move, state_after)``

    Returns:
        SolveResult; a phase that hits its cap stops the run
    """
    _check_models(models, configs)
    result = SolveResult(initial_state=state)
    for phase in config.PHASES:
        cfg = configs[phase]
        cap = cfg.max_steps(scramble_len if scramble_len is not None else cfg.max_scramble)
        callback = None if on_move is None else (lambda move, s, p=phase: on_move(p, move, s))
        moves, state, ok = greedy_rollout(models[phase], cfg, state, cap, coeffs, callback)
        result.phase_moves[phase] = moves
        result.phase_success[phase] = ok
        if not ok:
            result.failure_phase = phase
            logger.debug(f"Phase {phase} hit its cap of {cap} moves")
            break
    result.final_state = state
    if result.failure_phase is None and not is_solved(state):
        result.failure_phase = config.PHASES[-1]
    return result


# =============================================================================
# Evaluation
# =============================================================================

@dataclass
class EpisodeOutcome:
    index: int
    scramble_len: int
    phase_success: Dict[int, bool]
    success: bool
    moves: int


@dataclass
class EvalReport:
    """Per-scramble-length success fractions; phase fractions are conditional on reaching the phase."""
    table: pd.DataFrame
    outcomes: List[EpisodeOutcome]

    @property
    def total_success(self) -> float:
        if not self.outcomes:
            return 0.0
        return sum(o.success for o in self.outcomes) / len(self.outcomes)

    def phase_success(self, phase: int) -> float:
        reached = [o for o in self.outcomes if phase in o.phase_success]
        return sum(o.phase_success[phase] for o in reached) / len(reached) if reached else 0.0

    def to_csv(self, path: str) -> None:
        self.table.to_csv(path, index=False, float_format="%.6f")


def _summarize(outcomes: List[EpisodeOutcome]) -> pd.DataFrame:
    rows = []
    lengths = sorted({o.scramble_len for o in outcomes})
    for length in lengths:
        group = [o for o in outcomes if o.scramble_len == length]
        row = {"scramble_len": length, "episodes": len(group)}
        for phase in config.PHASES:
            reached = [o.phase_success[phase] for o in group if phase in o.phase_success]
            row[f"phase{phase}_success"] = float(np.mean(reached)) if reached else 0.0
        row["total_success"] = float(np.mean([o.success for o in group]))
        solved_moves = [o.moves for o in group if o.success]
        row["mean_moves"] = float(np.mean(solved_moves)) if solved_moves else 0.0
        rows.append(row)
    return pd.DataFrame(rows, columns=config.EVAL_COLUMNS)


def _run_episode(index: int, seed: int, min_scramble: int, max_scramble: int,
                 models: Mapping[int, MLPModel], configs: Mapping[int, PhaseConfig],
                 coeffs: Optional[CoefficientSet]) -> EpisodeOutcome:
    rng = np.random.default_rng([seed, index])
    length = min_scramble + index % (max_scramble - min_scramble + 1)
    start, _ = scramble(rng, phase_action_set(1), length)
    result = solve(start, models, configs, scramble_len=length, coeffs=coeffs)
    if result.success and not is_solved(apply_sequence(start, result.moves)):
        raise InvariantViolation(f"Episode {index}: replaying the reported solution does not solve the cube")
    return EpisodeOutcome(index, length, dict(result.phase_success), result.success, result.total_moves)


def evaluate_full(models: Mapping[int, MLPModel], configs: Mapping[int, PhaseConfig],
                  n: int = config.DEFAULT_EVAL_EPISODES, max_scramble: int = config.DEFAULT_MAX_SCRAMBLE,
                  seed: int = 0, min_scramble: int = config.DEFAULT_MIN_SCRAMBLE,
                  workers: int = config.DEFAULT_EVAL_WORKERS,
                  coeffs: Optional[CoefficientSet] = None) -> EvalReport:
    """
    Solve ``n`` scrambles drawn from the twelve quarter turns, sweeping the
    scramble length over ``min_scramble..max_scramble``.

    Episode ``i`` draws from ``default_rng([seed, i])``, so the report does
    not depend on the worker count.
    """
    if min_scramble < 1 or max_scramble < min_scramble:
        raise ValueError(f"Bad scramble range {min_scramble}..{max_scramble}")
    _check_models(models, configs)
    logger.info(f"Evaluating {n} episodes, scrambles {min_scramble}..{max_scramble}, {workers} workers")

    def run(i: int) -> EpisodeOutcome:
        return _run_episode(i, seed, min_scramble, max_scramble, models, configs, coeffs)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(run, range(n)))
    else:
        outcomes = [run(i) for i in range(n)]
    report = EvalReport(_summarize(outcomes), outcomes)
    logger.info(f"Total success {report.total_success:.3f}")
    return report


def model_path(models_dir: str, phase: int) -> str:
    return os.path.join(models_dir, config.MODEL_FILE_TEMPLATE.format(phase=phase))


def load_phase_models(models_dir: str) -> Dict[int, MLPModel]:
    """Load ``phase1.qube`` .. ``phase4.qube`` from a directory."""
    models = {}
    for phase in config.PHASES:
        path = model_path(models_dir, phase)
        if not os.path.exists(path):
            raise QubeError(f"Missing model file for phase {phase}: {path}")
        models[phase] = load_model(path, phase)
    return models
