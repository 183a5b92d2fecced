"""Interpolated annealing Hamiltonian H(s) = (1-s) H_D + s H_T.

The driver H_D is -c * A(G) for a regular driver graph G, with c = 1/d
under the per-degree normalization (driver ground energy -1) or c = 1
when unnormalized (ground energy -d).  The target H_T is diagonal.
Application is matrix-free: a sparse matvec plus a pointwise product,
never an N x N dense matrix.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .graph import Graph, graph_from_json, graph_to_json

__all__ = [
    "Normalization",
    "TargetSpectrum",
    "AnnealInstance",
    "apply_h",
    "driver_ground_energy",
    "instance_to_json",
    "instance_from_json",
]


class Normalization(enum.Enum):
    """Driver scaling convention."""

    PER_D = "per_d"        # H_D = -(1/d) A_G, ground energy -1
    NONE = "none"          # H_D = -A_G, ground energy -d


@dataclass(frozen=True)
class TargetSpectrum:
    """Diagonal target energies indexed by basis state."""

    energies: np.ndarray
    ground_index: int = field(init=False)
    mean_energy: float = field(init=False)

    def __post_init__(self):
        e = np.ascontiguousarray(self.energies, dtype=np.float64)
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "ground_index", int(np.argmin(e)))
        # compensated summation; N can reach 2**24
        object.__setattr__(self, "mean_energy", math.fsum(e) / len(e))

    @property
    def n(self) -> int:
        return len(self.energies)

    def ground_energy(self) -> float:
        return float(self.energies[self.ground_index])

    def sorted_energies(self) -> np.ndarray:
        return np.sort(self.energies)

    def gap(self) -> float:
        """E_1^T - E_0^T over the sorted spectrum (0 if degenerate ground)."""
        e = self.sorted_energies()
        return float(e[1] - e[0])


@dataclass(frozen=True)
class AnnealInstance:
    """Driver graph + diagonal target + normalization convention."""

    driver: Graph
    target: TargetSpectrum
    normalization: Normalization = Normalization.PER_D

    def __post_init__(self):
        if self.driver.n != self.target.n:
            raise ValidationError(
                f"driver has {self.driver.n} nodes, target {self.target.n} energies")
        if self.normalization is Normalization.PER_D:
            if self.driver.d is None or not np.all(self.driver.degrees() == self.driver.d):
                raise ValidationError("per-degree normalization needs a regular driver")

    @property
    def n(self) -> int:
        return self.driver.n

    def driver_scale(self) -> float:
        """The coefficient c in H_D = -c A_G."""
        if self.normalization is Normalization.PER_D:
            return 1.0 / self.driver.d
        return 1.0


def apply_h(inst: AnnealInstance, s: float, x: np.ndarray) -> np.ndarray:
    """y = H(s) x, computed as -(1-s) c (A x) + s (E * x)."""
    if not (0.0 <= s <= 1.0):
        raise ValidationError(f"schedule point s={s} outside [0, 1]")
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (inst.n,):
        raise ValidationError(f"vector length {x.shape} != {inst.n}")
    c = inst.driver_scale()
    y = inst.target.energies * x
    y *= s
    if s < 1.0:
        y += (-(1.0 - s) * c) * inst.driver.adjacency_matvec(x)
    return y


def driver_ground_energy(inst: AnnealInstance) -> float:
    """-1 under per-degree normalization, -d unnormalized (regular driver)."""
    d = inst.driver.d
    if d is None or not np.all(inst.driver.degrees() == d):
        raise ValidationError("driver ground energy defined for regular drivers only")
    if inst.normalization is Normalization.PER_D:
        return -1.0
    return -float(d)


def instance_to_json(inst: AnnealInstance, energies_obj=None) -> dict:
    """Instance JSON; `energies_obj` may replace the explicit energy list
    with a generator description such as {"toy": {...}} or {"wmis": {...}}."""
    return {
        "schema": 1,
        "graph": graph_to_json(inst.driver),
        "energies": (energies_obj if energies_obj is not None
                     else [float(e) for e in inst.target.energies]),
        "normalization": inst.normalization.value,
    }


def instance_from_json(obj: dict) -> AnnealInstance:
    graph = graph_from_json(obj["graph"])
    energies = obj["energies"]
    if isinstance(energies, dict):
        # generator descriptions are resolved by qpt_bounds.instances
        from .instances import resolve_generator_energies
        energies = resolve_generator_energies(energies)
    target = TargetSpectrum(np.asarray(energies, dtype=np.float64))
    return AnnealInstance(graph, target, Normalization(obj["normalization"]))
