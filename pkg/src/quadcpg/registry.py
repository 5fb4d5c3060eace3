"""Robot registry: the 16 built-in quadruped descriptors plus user files.

Built-in rows carry the published per-robot gait parameters (heights and
stride lengths in cm, converted to SI meters once at load).  Leg link
lengths and hip placements are not part of those rows; defaults are
derived proportionally from each robot's nominal height and can be
overridden per robot in a user registry file.

Registry files are YAML::

    schema_version: 1
    robots:
      - name: MyBot
        height_cm: 30.0
        mass_kg: 12.0
        l_step_cm: 13.0
        l_clrnc_cm: 7.0
        l_pntr_cm: 1.0
        x_offset_cm: 0.0
        dof: 12
        morphology: 1        # 1, 2, 3 or the morphology name
        kp: 100.0
        kd: 2.7
        geometry:            # optional, defaults derived from height
          hip_offsets: [[x, y, z], ...]   # FR, FL, RR, RL
          link_lengths: [l1, l2]          # or [l1, l2, l3] for 16 DoF
          y_nominal: 0.024

Entries in a user file are merged over the built-ins by name.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import yaml

from .foot_trajectory import PfParams
from .kinematics import ELBOW_DOWN, ELBOW_UP, LegGeometry

MORPH_ELBOW_UP_ALL = "elbow_up_all"
MORPH_MIXED = "elbow_up_front_down_hind"
MORPH_ANIMAL = "animal_like"

_MORPH_BY_CODE = {1: MORPH_ELBOW_UP_ALL, 2: MORPH_MIXED, 3: MORPH_ANIMAL}
_CODE_BY_MORPH = {v: k for k, v in _MORPH_BY_CODE.items()}

#: Leg span (sum of link lengths) relative to nominal standing height.
#: Legs are longer than the standing height so the robot stands with bent
#: knees and the nominal stride stays inside the workspace.
LEG_SPAN_FACTOR = 1.35

#: Default hip placement and lateral offset relative to nominal height.
HIP_X_FACTOR = 0.25
HIP_Y_FACTOR = 0.08
ABD_OFFSET_FACTOR = 0.08

#: PPO settings reported with the original training setup.  Documentation
#: only: nothing in this package consumes them.
PPO_DEFAULTS = {
    "batch_size": 98304,
    "minibatch_size": 24576,
    "n_epochs": 5,
    "clip_range": 0.2,
    "entropy_coefficient": 0.01,
    "discount_factor": 0.99,
    "gae_discount_factor": 0.95,
    "kl_divergence_target": 0.01,
    "learning_rate": "adaptive",
    "nn_layers": [512, 256, 128],
    "activation": "elu",
    "framework": "torch",
    "training_samples": 14.0e7,
}


class RegistryError(ValueError):
    """Registry file could not be parsed or a descriptor is invalid."""


class UnknownRobotError(KeyError):
    """Lookup of a robot name not present in the registry."""


# name, height_cm, l_step_cm, l_clrnc_cm, l_pntr_cm, x_offset_cm,
# dof, morphology code, mass_kg, kp, kd
_BUILTIN_ROWS = (
    ("Little Dog",   19.0,  5.0, 4.7, 0.5,  1.1, 12, 2,   2.9,   20.0,   0.3),
    ("Spot-Micro",   18.3,  5.0, 3.7, 0.5,  1.0, 12, 1,   4.8,   20.0,   0.3),
    ("Solo",         25.0, 10.0, 5.0, 0.5,  3.7, 12, 2,   2.5,   20.0,   0.3),
    ("Mini-Cheetah", 30.0, 13.0, 7.0, 1.0,  0.0, 12, 1,   8.4,  100.0,   2.7),
    ("A1",           30.0, 13.0, 7.0, 1.0,  0.0, 12, 1,  12.0,  100.0,   2.7),
    ("Go1",          30.0, 13.0, 7.0, 1.0,  0.0, 12, 1,  12.0,  100.0,   2.7),
    ("Aliengo",      42.0, 16.0, 7.0, 1.0,  0.0, 12, 1,  20.6,  100.0,   2.7),
    ("Laikago",      40.0, 16.0, 7.0, 1.0,  0.0, 12, 1,  25.0,  100.0,   2.7),
    ("Anymal-B",     48.0, 17.0, 7.0, 0.0, 10.0, 12, 2,  30.0,  430.0,  20.7),
    ("Anymal-C",     52.0, 18.0, 7.0, 1.0, 12.0, 12, 2,  52.1,  430.0,  20.7),
    ("Spot",         57.0, 20.0, 9.0, 1.0,  0.0, 12, 1,  30.0,  430.0,  20.7),
    ("B1",           57.0, 18.0, 9.0, 1.0,  0.0, 12, 1,  52.7,  430.0,  20.7),
    ("HYQ",          63.0, 20.0, 9.0, 1.0,  8.7, 12, 2,  86.7,  430.0,  20.7),
    ("Dog1",         30.0, 13.0, 7.0, 1.0,  0.0, 16, 3,  13.8,  100.0,   2.7),
    ("Dog2",         57.0, 18.0, 7.0, 1.0,  0.0, 16, 3,  56.0,  200.0,  10.7),
    ("Dog3",        100.0, 36.0, 9.0, 2.0,  0.0, 16, 3, 200.0, 1400.0, 140.7),
)


@dataclass(frozen=True)
class RobotDescriptor:
    """One robot: gait parameters, morphology, geometry and PD gains."""

    name: str
    height_nominal: float  # m
    mass: float            # kg
    dof_total: int         # 12 or 16
    morphology: str
    pf: PfParams
    legs: Tuple[LegGeometry, LegGeometry, LegGeometry, LegGeometry]
    kp: float              # PD position gain, N*m/rad, uniform over joints
    kd: float              # PD damping gain, N*m*s/rad

    def __post_init__(self):
        name = self.name
        if not name:
            raise RegistryError("robot name must be non-empty")
        if not self.mass > 0.0:
            raise RegistryError(f"{name}: mass must be positive, got {self.mass}")
        if not self.kp > 0.0:
            raise RegistryError(f"{name}: kp must be positive, got {self.kp}")
        if self.kd < 0.0:
            raise RegistryError(f"{name}: kd must be >= 0, got {self.kd}")
        if self.morphology not in _CODE_BY_MORPH:
            raise RegistryError(f"{name}: unknown morphology {self.morphology!r}")
        if self.dof_total not in (12, 16):
            raise RegistryError(f"{name}: dof_total must be 12 or 16, got {self.dof_total}")
        if (self.dof_total == 16) != (self.morphology == MORPH_ANIMAL):
            raise RegistryError(
                f"{name}: morphology {self.morphology!r} inconsistent with "
                f"dof_total {self.dof_total} (16 DoF <=> {MORPH_ANIMAL})")
        if len(self.legs) != 4:
            raise RegistryError(f"{name}: expected 4 legs, got {len(self.legs)}")
        for leg in self.legs:
            if 4 * leg.dof != self.dof_total:
                raise RegistryError(
                    f"{name}: leg dof {leg.dof} inconsistent with dof_total "
                    f"{self.dof_total}")

    @property
    def leg_dof(self) -> int:
        return self.dof_total // 4

    @property
    def morphology_code(self) -> int:
        return _CODE_BY_MORPH[self.morphology]


def default_legs(height_m: float, dof_total: int, morphology: str,
                 link_lengths: Optional[Sequence[float]] = None,
                 hip_offsets: Optional[Sequence[Sequence[float]]] = None,
                 y_nominal: Optional[float] = None):
    """Build the four leg geometries, deriving defaults from the height."""
    span = LEG_SPAN_FACTOR * height_m
    if link_lengths is None:
        if dof_total == 16:
            link_lengths = (0.45 * span, 0.35 * span, 0.20 * span)
        else:
            link_lengths = (0.5 * span, 0.5 * span)
    link_lengths = tuple(float(l) for l in link_lengths)
    if hip_offsets is None:
        hx = HIP_X_FACTOR * height_m
        hy = HIP_Y_FACTOR * height_m
        hip_offsets = ((hx, -hy, 0.0), (hx, hy, 0.0),
                       (-hx, -hy, 0.0), (-hx, hy, 0.0))
    if y_nominal is None:
        y_nominal = ABD_OFFSET_FACTOR * height_m
    y_nominal = float(y_nominal)

    legs = []
    for i, hip in enumerate(hip_offsets):
        is_left = i in (1, 3)   # FR, FL, RR, RL
        is_front = i in (0, 1)
        if morphology == MORPH_MIXED and not is_front:
            knee = ELBOW_DOWN
        else:
            knee = ELBOW_UP
        legs.append(LegGeometry(
            hip_offset=tuple(float(v) for v in hip),
            abd_offset=y_nominal if is_left else -y_nominal,
            link_lengths=link_lengths,
            knee_config=knee,
        ))
    return tuple(legs)


def _descriptor_from_entry(entry: Dict) -> RobotDescriptor:
    """Build and validate one descriptor from a registry-file entry."""
    try:
        name = str(entry["name"])
    except (KeyError, TypeError):
        raise RegistryError(f"robot entry missing 'name': {entry!r}") from None

    def field(key, cast=float):
        if key not in entry:
            raise RegistryError(f"{name}: missing field {key!r}")
        try:
            return cast(entry[key])
        except (TypeError, ValueError):
            raise RegistryError(
                f"{name}: field {key!r} has invalid value {entry[key]!r}") from None

    height_m = field("height_cm") / 100.0
    if height_m <= 0.0 or not math.isfinite(height_m):
        raise RegistryError(f"{name}: height_cm must be positive")
    dof = field("dof", int)
    morph_raw = entry.get("morphology")
    if isinstance(morph_raw, int) or (isinstance(morph_raw, str) and morph_raw.isdigit()):
        morphology = _MORPH_BY_CODE.get(int(morph_raw))
    else:
        morphology = morph_raw if morph_raw in _CODE_BY_MORPH else None
    if morphology is None:
        raise RegistryError(f"{name}: unknown morphology {morph_raw!r}")

    geometry = entry.get("geometry") or {}
    try:
        legs = default_legs(
            height_m, dof, morphology,
            link_lengths=geometry.get("link_lengths"),
            hip_offsets=geometry.get("hip_offsets"),
            y_nominal=geometry.get("y_nominal"),
        )
        pf = PfParams(
            h=height_m,
            l_step=field("l_step_cm") / 100.0,
            l_clrnc=field("l_clrnc_cm") / 100.0,
            l_pntr=field("l_pntr_cm") / 100.0,
            x_off=field("x_offset_cm") / 100.0,
            z_off=float(entry.get("z_offset_cm", 0.0)) / 100.0,
            y_nominal=abs(legs[0].abd_offset),
        )
        return RobotDescriptor(
            name=name,
            height_nominal=height_m,
            mass=field("mass_kg"),
            dof_total=dof,
            morphology=morphology,
            pf=pf,
            legs=legs,
            kp=field("kp"),
            kd=field("kd"),
        )
    except RegistryError:
        raise
    except ValueError as exc:
        raise RegistryError(f"{name}: {exc}") from None


def _entry_from_descriptor(robot: RobotDescriptor) -> Dict:
    """Inverse of _descriptor_from_entry, with explicit geometry."""
    return {
        "name": robot.name,
        "height_cm": robot.height_nominal * 100.0,
        "mass_kg": robot.mass,
        "l_step_cm": robot.pf.l_step * 100.0,
        "l_clrnc_cm": robot.pf.l_clrnc * 100.0,
        "l_pntr_cm": robot.pf.l_pntr * 100.0,
        "x_offset_cm": robot.pf.x_off * 100.0,
        "z_offset_cm": robot.pf.z_off * 100.0,
        "dof": robot.dof_total,
        "morphology": robot.morphology_code,
        "kp": robot.kp,
        "kd": robot.kd,
        "geometry": {
            "hip_offsets": [list(leg.hip_offset) for leg in robot.legs],
            "link_lengths": list(robot.legs[0].link_lengths),
            "y_nominal": abs(robot.legs[0].abd_offset),
        },
    }


class Registry:
    """Immutable, name-indexed collection of robot descriptors."""

    ppo_defaults = PPO_DEFAULTS

    def __init__(self, robots: Sequence[RobotDescriptor]):
        self._robots: List[RobotDescriptor] = list(robots)
        self._by_name = {r.name.lower(): r for r in self._robots}

    def __len__(self):
        return len(self._robots)

    def __iter__(self):
        return iter(self._robots)

    @property
    def robots(self) -> List[RobotDescriptor]:
        return list(self._robots)

    def names(self) -> List[str]:
        return [r.name for r in self._robots]

    def get(self, name: str) -> RobotDescriptor:
        """Case-insensitive exact-name lookup."""
        robot = self._by_name.get(name.lower())
        if robot is None:
            raise UnknownRobotError(
                f"unknown robot {name!r}; available: {', '.join(self.names())}")
        return robot


def builtin_registry() -> Registry:
    """The 16 built-in robots, no files required."""
    robots = []
    for (name, h, lstep, lclr, lpntr, xoff, dof, morph, mass, kp, kd) in _BUILTIN_ROWS:
        robots.append(_descriptor_from_entry({
            "name": name, "height_cm": h, "mass_kg": mass,
            "l_step_cm": lstep, "l_clrnc_cm": lclr, "l_pntr_cm": lpntr,
            "x_offset_cm": xoff, "dof": dof, "morphology": morph,
            "kp": kp, "kd": kd,
        }))
    return Registry(robots)


def load_registry(path: Optional[str] = None) -> Registry:
    """Load the registry; a user file adds to / overrides the built-ins."""
    base = builtin_registry()
    if path is None:
        return base
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise RegistryError(f"cannot read registry file {path!r}: {exc}") from None
    except yaml.YAMLError as exc:
        raise RegistryError(f"cannot parse registry file {path!r}: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("robots"), list):
        raise RegistryError(
            f"registry file {path!r} must contain a top-level 'robots' list")

    merged = {r.name.lower(): r for r in base}
    order = [r.name.lower() for r in base]
    for entry in doc["robots"]:
        if not isinstance(entry, dict):
            raise RegistryError(f"robot entry must be a mapping, got {entry!r}")
        robot = _descriptor_from_entry(entry)
        key = robot.name.lower()
        if key not in merged:
            order.append(key)
        merged[key] = robot
    return Registry([merged[k] for k in order])


def save_registry(registry: Registry, path: str) -> None:
    """Write every descriptor (with explicit geometry) to a YAML file."""
    doc = {"schema_version": 1,
           "robots": [_entry_from_descriptor(r) for r in registry]}
    with open(path, "w") as fh:
        yaml.safe_dump(doc, fh, sort_keys=False)


def get_robot(name: str, registry: Optional[Registry] = None) -> RobotDescriptor:
    """Look up one robot, defaulting to the built-in registry."""
    return (registry or builtin_registry()).get(name)
