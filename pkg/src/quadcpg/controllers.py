"""Scripted command sources and a black-box search over constant commands.

Any callable mapping an Observation to a raw 8-vector can drive the
environment; the PolicyAdapter protocol below is the contract an
external learned policy plugs into.  The search is a desk-scale stand-in
for policy optimization: it samples constant (mu, omega) commands shared
across limbs, with the phase structure fixed to a trot.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import List, Optional, Protocol, Sequence, Tuple

from .environment import QuadrupedEnv
from .oscillator import (MU_MAX, MU_MIN, OMEGA_MAX_HZ, OMEGA_MIN_HZ,
                         TROT_PHASES, CpgConfig)
from .registry import RobotDescriptor


class PolicyAdapter(Protocol):
    """Observation (49 reals) -> raw action (8 reals).

    Outputs must be finite; the environment clamps them regardless.  An
    adapter may expose `initial_phases` to request specific oscillator
    phase offsets at reset.
    """

    def __call__(self, observation) -> Sequence[float]: ...


class ConstantCommandPolicy:
    """Emits the same in-limits command every step, trot phases at reset."""

    initial_phases = TROT_PHASES

    def __init__(self, mu: float, omega: float):
        self._action = (mu,) * 4 + (omega,) * 4

    def __call__(self, observation) -> Tuple[float, ...]:
        return self._action


def open_loop_trot(mu: float, omega: float) -> ConstantCommandPolicy:
    """Constant-command trot baseline.

    Out-of-limit arguments are rejected rather than clamped so baseline
    results always reflect the requested command.
    """
    if not (MU_MIN <= mu <= MU_MAX):
        raise ValueError(f"mu={mu} outside [{MU_MIN}, {MU_MAX}]")
    if not (OMEGA_MIN_HZ <= omega <= OMEGA_MAX_HZ):
        raise ValueError(f"omega={omega} outside [{OMEGA_MIN_HZ}, {OMEGA_MAX_HZ}] Hz")
    return ConstantCommandPolicy(mu, omega)


def evaluate_constant_command(robot: RobotDescriptor, mu: float, omega: float,
                              horizon: int, seed: int = 0,
                              cpg_config: Optional[CpgConfig] = None) -> float:
    """Episodic return of a constant command over `horizon` control steps."""
    env = QuadrupedEnv(robot, cpg_config=cpg_config)
    obs = env.reset(seed=seed, initial_phases=TROT_PHASES)
    action = (mu,) * 4 + (omega,) * 4
    total = 0.0
    for _ in range(horizon):
        obs, reward, done, _ = env.step(action)
        total += reward
        if done:
            break
    return total


@dataclass
class SearchResult:
    """Outcome of a random search over the clamped command box."""

    best_mu: float
    best_omega: float
    best_return: float
    samples: List[Tuple[float, float, float]]  # (mu, omega, return)

    @property
    def best_so_far(self) -> List[float]:
        out, best = [], float("-inf")
        for _, _, ret in self.samples:
            best = max(best, ret)
            out.append(best)
        return out

    def to_json(self, path: str) -> None:
        doc = {
            "best": {"mu": self.best_mu, "omega": self.best_omega,
                     "return": self.best_return},
            "samples": [{"mu": m, "omega": o, "return": r}
                        for m, o, r in self.samples],
            "best_so_far": self.best_so_far,
        }
        with open(path, "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


def search_constant_command(robot: RobotDescriptor, budget: int, seed: int = 0,
                            horizon: int = 100,
                            cpg_config: Optional[CpgConfig] = None) -> SearchResult:
    """Uniform random search over the (mu, omega) command box.

    Commands are shared across limbs, phases fixed to a trot.  The
    argmax is deterministic for a given seed; ties break toward the
    lowest sample index, so evaluation order cannot change the result.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    rng = random.Random(seed)
    candidates = [(rng.uniform(MU_MIN, MU_MAX), rng.uniform(OMEGA_MIN_HZ, OMEGA_MAX_HZ))
                  for _ in range(budget)]

    samples: List[Tuple[float, float, float]] = []
    best_idx, best_return = 0, float("-inf")
    for idx, (mu, omega) in enumerate(candidates):
        ret = evaluate_constant_command(robot, mu, omega, horizon, seed=seed,
                                        cpg_config=cpg_config)
        samples.append((mu, omega, ret))
        if ret > best_return:
            best_idx, best_return = idx, ret
    best_mu, best_omega = candidates[best_idx]
    return SearchResult(best_mu, best_omega, best_return, samples)
