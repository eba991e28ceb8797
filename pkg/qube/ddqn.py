"""
Per-phase DDQN training: scrambles, epsilon-greedy rollouts, replay memory and
double-Q updates.
"""
import logging
from dataclasses import asdict, dataclass, fields, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

import config
from qube.cube_core import OBSERVATION_SIZES, CubeState, observe
from qube.errors import ConfigError, DimensionError, InvalidPhaseError, InvariantViolation, NonFiniteError, QubeError
from qube.hamiltonian import CoefficientSet, PhaseHamiltonian, energy, prefix_ground
from qube.neural import (
    AdamState,
    MLPModel,
    TrainingBatch,
    forward,
    init_model,
    sgd_step,
    sync,
    td_targets,
)
from qube.rubik_group import Move, apply, phase_action_set, scramble

logger = logging.getLogger(__name__)

MAX_RESCRAMBLES = 1000
STEP_RULES = ("plus5", "times2")


@dataclass(frozen=True)
class PhaseConfig:
    """Hyperparameters of one training phase."""
    phase: int
    learning_rate: float = config.DEFAULT_LEARNING_RATE
    random_action_decay: float = 0.9995
    premium: float = config.DEFAULT_PREMIUM
    target_update_every: int = config.DEFAULT_TARGET_UPDATE_EVERY
    batch_size: int = config.DEFAULT_BATCH_SIZE
    memory_size: int = config.DEFAULT_MEMORY_SIZE
    min_scramble: int = config.DEFAULT_MIN_SCRAMBLE
    max_scramble: int = config.DEFAULT_MAX_SCRAMBLE
    gamma: float = config.DEFAULT_GAMMA
    epsilon_floor: float = config.DEFAULT_EPSILON_FLOOR
    step_rule: str = "plus5"
    log_every: int = config.DEFAULT_LOG_EVERY
    check_invariants: bool = True

    def __post_init__(self):
        if self.phase not in config.PHASES:
            raise InvalidPhaseError(self.phase)
        self.validate()

    @classmethod
    def for_phase(cls, phase: int, **overrides) -> "PhaseConfig":
        """Defaults of the phase's hyperparameter table, with overrides applied."""
        if phase not in config.PHASES:
            raise InvalidPhaseError(phase)
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigError(f"Unknown phase settings: {sorted(unknown)}")
        values = dict(config.PHASE_HYPERPARAMETERS[phase])
        values.update(overrides)
        return cls(phase=phase, **values)

    @classmethod
    def field_names(cls) -> List[str]:
        return [f.name for f in fields(cls) if f.name != "phase"]

    def with_overrides(self, **overrides) -> "PhaseConfig":
        return replace(self, **overrides)

    def validate(self) -> None:
        problems = []
        if self.learning_rate <= 0:
            problems.append("learning_rate must be > 0")
        if not 0 < self.random_action_decay < 1:
            problems.append("random_action_decay must be in (0, 1)")
        if not 0 <= self.epsilon_floor < 1:
            problems.append("epsilon_floor must be in [0, 1)")
        if not 0 <= self.gamma < 1:
            problems.append("gamma must be in [0, 1)")
        if self.min_scramble < 1:
            problems.append("min_scramble must be >= 1")
        if self.max_scramble < self.min_scramble:
            problems.append("max_scramble must be >= min_scramble")
        if self.batch_size < 1 or self.memory_size < 1:
            problems.append("batch_size and memory_size must be >= 1")
        if self.target_update_every < 1 or self.log_every < 1:
            problems.append("target_update_every and log_every must be >= 1")
        if self.step_rule not in STEP_RULES:
            problems.append(f"step_rule must be one of {STEP_RULES}")
        if problems:
            raise ConfigError(f"Phase {self.phase}: " + "; ".join(problems))

    @property
    def action_set(self) -> Tuple[Move, ...]:
        return phase_action_set(self.phase)

    @property
    def hamiltonian(self) -> PhaseHamiltonian:
        return PhaseHamiltonian.for_phase(self.phase)

    @property
    def layer_dims(self) -> Tuple[int, int, int, int]:
        dims = config.LAYER_DIMS[self.phase]
        return (OBSERVATION_SIZES[self.phase], dims[1], dims[2], len(self.action_set))

    def max_steps(self, scramble_len: int) -> int:
        """Step cap of an episode: scrambles + 5, or scrambles * 2 for the times2 rule."""
        if self.step_rule == "times2":
            return 2 * scramble_len
        return scramble_len + 5


class ReplayBuffer:
    """Fixed-capacity FIFO of transitions stored in preallocated arrays."""

    def __init__(self, capacity: int, obs_dim: int):
        self.capacity = capacity
        self.observations = np.zeros((capacity, obs_dim))
        self.next_observations = np.zeros((capacity, obs_dim))
        self.actions = np.zeros(capacity, dtype=np.int64)
        self.rewards = np.zeros(capacity)
        self.terminals = np.zeros(capacity, dtype=bool)
        self._next = 0
        self._size = 0

    def __len__(self) -> int:
        return self._size

    def push(self, obs: np.ndarray, action: int, reward: float, next_obs: np.ndarray, terminal: bool) -> None:
        i = self._next
        self.observations[i] = obs
        self.actions[i] = action
        self.rewards[i] = reward
        self.next_observations[i] = next_obs
        self.terminals[i] = terminal
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> TrainingBatch:
        """Uniform draw without replacement."""
        if batch_size > self._size:
            raise ValueError(f"Cannot sample {batch_size} from {self._size} transitions")
        idx = rng.choice(self._size, size=batch_size, replace=False)
        return TrainingBatch(
            self.observations[idx],
            self.actions[idx],
            self.rewards[idx],
            self.next_observations[idx],
            self.terminals[idx],
        )


@dataclass
class EpisodeStats:
    episode: int
    scramble_len: int
    steps: int
    solved: bool
    cum_reward: float
    final_energy: float
    epsilon: float

    def as_row(self) -> dict:
        return asdict(self)


@dataclass
class PhaseEvaluation:
    episodes: int
    success_rate: float
    mean_steps: float
    mean_steps_solved: float


def epsilon(step: int, decay: float, floor: float) -> float:
    """Exploration probability ``max(floor, decay ** step)``."""
    return max(floor, decay ** step)


def select_action(qvals: np.ndarray, eps: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy choice; ties go to the lowest index."""
    if len(qvals) == 0:
        raise ValueError("Empty q-value vector")
    if rng.random() < eps:
        return int(rng.integers(len(qvals)))
    return int(np.argmax(qvals))


def draw_scramble(cfg: PhaseConfig, rng: np.random.Generator,
                  scramble_range: Optional[Tuple[int, int]] = None) -> Tuple[CubeState, List[Move]]:
    """
    Scramble with the phase's own action set, redrawing while the result is
    already a phase ground state.
    """
    low, high = scramble_range or (cfg.min_scramble, cfg.max_scramble)
    if low < 1:
        raise ValueError(f"Scramble lengths start at 1, got {low}")
    for _ in range(MAX_RESCRAMBLES):
        length = int(rng.integers(low, high + 1))
        state, moves = scramble(rng, cfg.action_set, length)
        if energy(state, cfg.hamiltonian) != 0:
            return state, moves
    raise QubeError(f"Phase {cfg.phase}: {MAX_RESCRAMBLES} scrambles in a row landed on the ground state")


def greedy_rollout(model: MLPModel, cfg: PhaseConfig, state: CubeState, max_steps: int,
                   coeffs: Optional[CoefficientSet] = None,
                   on_move: Optional[Callable[[Move, CubeState], None]] = None) -> Tuple[List[Move], CubeState, bool]:
    """
    Follow the greedy policy until the phase ground state or the step cap.

    Returns:
        Tuple of (moves taken, final state, reached ground)
    """
    actions = cfg.action_set
    if model.input_dim != OBSERVATION_SIZES[cfg.phase] or model.output_dim != len(actions):
        raise _dims_error(model, cfg)
    moves: List[Move] = []
    if energy(state, cfg.hamiltonian, coeffs) == 0:
        return moves, state, True
    for _ in range(max_steps):
        move = actions[int(np.argmax(forward(model, observe(state, cfg.phase))))]
        state = apply(state, move)
        moves.append(move)
        if on_move is not None:
            on_move(move, state)
        if energy(state, cfg.hamiltonian, coeffs) == 0:
            return moves, state, True
    return moves, state, False


def _dims_error(model: MLPModel, cfg: PhaseConfig) -> DimensionError:
    return DimensionError(
        f"Model {model.layer_dims} does not fit phase {cfg.phase} "
        f"({OBSERVATION_SIZES[cfg.phase]} inputs, {len(cfg.action_set)} actions)"
    )


class PhaseTrainer:
    """
    Online/target networks, optimizer and replay memory of one phase.

    ``total_steps`` counts environment steps over the whole run and drives
    the epsilon schedule.
    """

    def __init__(self, cfg: PhaseConfig, rng: np.random.Generator,
                 coeffs: Optional[CoefficientSet] = None, online: Optional[MLPModel] = None):
        self.cfg = cfg
        self.rng = rng
        self.coeffs = coeffs or CoefficientSet.default()
        self.online = online if online is not None else init_model(cfg.layer_dims, rng, cfg.phase)
        if tuple(self.online.layer_dims) != cfg.layer_dims:
            raise _dims_error(self.online, cfg)
        self.target = self.online.copy()
        self.adam = AdamState.for_model(self.online)
        self.buffer = ReplayBuffer(cfg.memory_size, self.online.input_dim)
        self.total_steps = 0
        self.episodes = 0
        self.syncs = 0
        self.last_loss: Optional[float] = None

    def _learn(self) -> None:
        batch = self.buffer.sample(self.cfg.batch_size, self.rng)
        targets = td_targets(self.online, self.target, batch, self.cfg.gamma)
        self.last_loss = sgd_step(self.online, self.adam, batch, targets, self.cfg.learning_rate)

    def run_episode(self) -> EpisodeStats:
        cfg = self.cfg
        actions = cfg.action_set
        state, moves = draw_scramble(cfg, self.rng)
        cap = cfg.max_steps(len(moves))
        obs = observe(state, cfg.phase)
        steps, cum_reward, solved = 0, 0.0, False
        e = energy(state, cfg.hamiltonian, self.coeffs)
        eps = epsilon(self.total_steps, cfg.random_action_decay, cfg.epsilon_floor)

        while steps < cap:
            eps = epsilon(self.total_steps, cfg.random_action_decay, cfg.epsilon_floor)
            a = select_action(forward(self.online, obs), eps, self.rng)
            state = apply(state, actions[a])
            e = energy(state, cfg.hamiltonian, self.coeffs)
            solved = e == 0
            r = float(cfg.premium) if solved else -float(e)
            if not np.isfinite(r):
                logger.error(f"Non-finite reward {r} in phase {cfg.phase}, episode {self.episodes + 1}")
                raise NonFiniteError(f"Non-finite reward {r}")
            if cfg.check_invariants and not prefix_ground(state, cfg.phase):
                raise InvariantViolation(
                    f"Phase {cfg.phase} action {actions[a].name} left the ground state of an earlier phase"
                )
            next_obs = observe(state, cfg.phase)
            self.buffer.push(obs, a, r, next_obs, solved)
            self.total_steps += 1
            steps += 1
            cum_reward += r
            if len(self.buffer) >= cfg.batch_size:
                self._learn()
            obs = next_obs
            if solved:
                break

        self.episodes += 1
        if self.episodes % cfg.target_update_every == 0:
            sync(self.target, self.online)
            self.syncs += 1
            logger.debug(f"Phase {cfg.phase}: target synced after episode {self.episodes}")
        return EpisodeStats(
            episode=self.episodes,
            scramble_len=len(moves),
            steps=steps,
            solved=solved,
            cum_reward=cum_reward,
            final_energy=float(e),
            epsilon=eps,
        )


def train_phase(cfg: PhaseConfig, rng: np.random.Generator, episode_budget: int,
                coeffs: Optional[CoefficientSet] = None,
                progress: Optional[Callable[[EpisodeStats], None]] = None,
                stop_at: Optional[float] = None) -> Tuple[MLPModel, pd.DataFrame]:
    """
    Train one phase agent.

    Args:
        cfg: Phase hyperparameters
        rng: Seeded generator driving every random draw
        episode_budget: Number of episodes to run
        coeffs: Hamiltonian coefficients
        progress: Called with the stats of every finished episode
        stop_at: Stop early once a full moving window reaches this success rate

    Returns:
        Tuple of (online model, per-episode metrics with METRICS_COLUMNS)
    """
    if episode_budget < 1:
        raise ValueError(f"Episode budget must be >= 1, got {episode_budget}")
    if stop_at is not None and not 0.0 < stop_at <= 1.0:
        raise ValueError(f"stop_at must be in (0, 1], got {stop_at}")
    trainer = PhaseTrainer(cfg, rng, coeffs)
    rows = []
    window: List[bool] = []
    logger.info(f"Training phase {cfg.phase} for {episode_budget} episodes, dims {cfg.layer_dims}")
    for _ in range(episode_budget):
        stats = trainer.run_episode()
        rows.append(stats.as_row())
        window.append(stats.solved)
        if len(window) > config.MOVING_WINDOW:
            window.pop(0)
        if progress is not None:
            progress(stats)
        if stats.episode % cfg.log_every == 0:
            logger.info(
                f"Phase {cfg.phase} episode {stats.episode}: moving success {np.mean(window):.3f}, "
                f"epsilon {stats.epsilon:.4f}, loss {trainer.last_loss}"
            )
        if stop_at is not None and len(window) == config.MOVING_WINDOW and np.mean(window) >= stop_at:
            logger.info(f"Phase {cfg.phase}: moving success {np.mean(window):.3f} after {stats.episode} episodes, stopping")
            break
    metrics = pd.DataFrame(rows, columns=config.METRICS_COLUMNS)
    return trainer.online, metrics


def evaluate_phase(model: MLPModel, cfg: PhaseConfig, n_episodes: int,
                   scramble_range: Optional[Tuple[int, int]], rng: np.random.Generator,
                   coeffs: Optional[CoefficientSet] = None) -> PhaseEvaluation:
    """Greedy success rate and step counts over fresh scrambles."""
    solved_steps: List[int] = []
    all_steps: List[int] = []
    for _ in range(n_episodes):
        state, moves = draw_scramble(cfg, rng, scramble_range)
        taken, _, ok = greedy_rollout(model, cfg, state, cfg.max_steps(len(moves)), coeffs)
        all_steps.append(len(taken))
        if ok:
            solved_steps.append(len(taken))
    return PhaseEvaluation(
        episodes=n_episodes,
        success_rate=len(solved_steps) / n_episodes if n_episodes else 0.0,
        mean_steps=float(np.mean(all_steps)) if all_steps else 0.0,
        mean_steps_solved=float(np.mean(solved_steps)) if solved_steps else 0.0,
    )


def moving_success(solved: Sequence[bool], window: int = config.MOVING_WINDOW) -> pd.Series:
    return pd.Series(solved, dtype=float).rolling(window, min_periods=1).mean()
