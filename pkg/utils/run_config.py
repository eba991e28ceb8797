"""
Key-value run configuration (``key = value`` lines, ``#`` comments).

Recognised keys:
    phaseN.<field>      any PhaseConfig field, e.g. ``phase3.random_action_decay = 0.999995``
    J.mode              diagonal | uniform | file
    B.mode              ones | file
    J.edges.file, J.corners.file, B.edges.file, B.corners.file,
    B.edge_spin.file, B.corner_spin.file
                        whitespace-separated matrices, relative to the config file
"""
import configparser
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import config
from qube.ddqn import PhaseConfig
from qube.errors import ConfigError
from qube.hamiltonian import COEFFICIENT_FILES, CoefficientSet

logger = logging.getLogger(__name__)

_SECTION = "run"
_PHASE_KEY = re.compile(r"^phase(\d+)\.(\w+)$")
_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


@dataclass
class RunConfig:
    phases: Dict[int, PhaseConfig] = field(default_factory=dict)
    coeffs: CoefficientSet = field(default_factory=CoefficientSet.default)
    source: Optional[str] = None

    def phase(self, phase: int) -> PhaseConfig:
        return self.phases[phase]


def _convert(raw: str, like: Any, key: str) -> Any:
    try:
        if isinstance(like, bool):
            value = raw.strip().lower()
            if value in _TRUE:
                return True
            if value in _FALSE:
                return False
            raise ValueError(raw)
        if isinstance(like, int):
            return int(raw)
        if isinstance(like, float):
            return float(raw)
    except ValueError:
        raise ConfigError(f"Cannot parse {key} = {raw!r} as {type(like).__name__}") from None
    return raw.strip()


def parse_run_config(text: str, base_dir: str = ".", source: Optional[str] = None) -> RunConfig:
    """
    Parse config text into phase configs and coefficients.

    Raises:
        ConfigError: On unknown keys, unparsable values or bad modes
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string(f"[{_SECTION}]\n{text}", source=source or "<config>")
    except configparser.Error as e:
        raise ConfigError(f"Malformed config: {e}") from e

    overrides: Dict[int, Dict[str, Any]] = {phase: {} for phase in config.PHASES}
    j_mode, b_mode = "diagonal", "ones"
    files: Dict[str, str] = {}
    phase_fields = PhaseConfig.field_names()

    for key, raw in parser.items(_SECTION):
        match = _PHASE_KEY.match(key)
        if match:
            phase, name = int(match.group(1)), match.group(2)
            if phase not in config.PHASES or name not in phase_fields:
                raise ConfigError(f"Unknown config key: {key}")
            like = getattr(PhaseConfig.for_phase(phase), name)
            overrides[phase][name] = _convert(raw, like, key)
        elif key == "J.mode":
            j_mode = raw.strip()
        elif key == "B.mode":
            b_mode = raw.strip()
        elif key in COEFFICIENT_FILES:
            files[key] = os.path.join(base_dir, raw.strip())
        else:
            raise ConfigError(f"Unknown config key: {key}")

    phases = {phase: PhaseConfig.for_phase(phase, **overrides[phase]) for phase in config.PHASES}
    coeffs = CoefficientSet.from_config(j_mode, b_mode, files)
    return RunConfig(phases, coeffs, source)


def load_run_config(path: Optional[str] = None) -> RunConfig:
    """Read a config file; ``None`` gives the defaults."""
    if path is None:
        return parse_run_config("")
    if not os.path.exists(path):
        raise ConfigError(f"Config file not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    logger.info(f"Loaded run config from {path}")
    return parse_run_config(text, os.path.dirname(os.path.abspath(path)), path)
