"""First-order degenerate-perturbation machinery: energies of localized /
delocalized states, the conductance and degree bounds on the crossing
location s*, the delocalized-global crossing s', and the three-way
instance classification.

Bound arithmetic is done in exact rationals (conductance enters as a
Fraction; floats convert losslessly), so classification comparisons are
never decided by rounding.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import ValidationError
from .graph import (Graph, NodeSet, conductance, connected_components,
                    induced_subgraph, max_degree_in)
from .hamiltonian import AnnealInstance, Normalization

__all__ = [
    "LocalMinimum",
    "Classification",
    "BoundsReport",
    "local_minimum",
    "e_deloc",
    "e_global",
    "e_local_bounds",
    "s_star_bounds",
    "s_prime",
    "classify",
    "no_qpt_condition_conductance",
    "no_qpt_condition_gap",
    "build_report",
    "report_to_json",
]


@dataclass(frozen=True)
class LocalMinimum:
    """A (nearly) degenerate node subset with its graph quantities."""

    v: NodeSet
    e_v_target: float          # representative energy (minimum over the set)
    phi: Fraction              # conductance of v in the parent graph
    dmax: int                  # max degree of the induced subgraph
    lambda_v: Optional[float] = None
    symmetry_bound: Optional[float] = None


def local_minimum(g: Graph, v, energies: np.ndarray,
                  epsilon: float = 0.01) -> LocalMinimum:
    """Build a LocalMinimum from a node set, validating connectivity of the
    induced subgraph and near-degeneracy of the member energies.

    Members must lie within `epsilon` of each other; the representative
    energy is the minimum over the set.  Sets inducing a disconnected
    subgraph must be split into components by the caller.
    """
    nodes = NodeSet(frozenset(int(i) for i in v), g) if not isinstance(v, NodeSet) else v
    if len(nodes) == 0:
        raise ValidationError("empty local minimum")
    sub, ids = induced_subgraph(g, nodes)
    if len(connected_components(sub)) != 1:
        raise ValidationError(
            "induced subgraph is disconnected; split the set by components")
    evals = np.asarray(energies, dtype=np.float64)[ids]
    spread = float(evals.max() - evals.min())
    if spread > epsilon * (1 + 1e-9) + 1e-15:
        raise ValidationError(
            f"member energies span {spread:.3g} > epsilon {epsilon:.3g}")
    return LocalMinimum(
        v=nodes,
        e_v_target=float(evals.min()),
        phi=conductance(g, nodes),
        dmax=max_degree_in(g, nodes),
    )


def _scale(convention: Normalization, d: int) -> float:
    """Driver magnitude c in H_D = -c A_G: 1/d normalized, 1 unnormalized."""
    return 1.0 / d if convention is Normalization.PER_D else 1.0


def e_deloc(inst: AnnealInstance, s: float) -> float:
    """First-order energy of the delocalized state: -c(1-s) + s <E_T>,
    with c the driver ground magnitude (1 normalized, d unnormalized)."""
    c = 1.0 if inst.normalization is Normalization.PER_D else float(inst.driver.d)
    return -c * (1.0 - s) + s * inst.target.mean_energy


def e_global(inst: AnnealInstance, s: float) -> float:
    """First-order energy of the state localized in the global minimum."""
    e = inst.target.sorted_energies()
    if e[1] - e[0] <= 0.0:
        raise ValidationError(
            "degenerate target ground state: model it as a LocalMinimum")
    return s * float(e[0])


def e_local_bounds(lm: LocalMinimum, s: float, d: int,
                   convention: Normalization = Normalization.PER_D
                   ) -> tuple[float, float]:
    """Lower/upper bounds on the energy of the state localized in the set,
    from the principal-eigenvalue sandwich d - phi <= lambda <= d_max."""
    phi = float(lm.phi)
    if convention is Normalization.PER_D:
        lower = -(1.0 - s) * lm.dmax / d + s * lm.e_v_target
        upper = (1.0 - s) * (phi / d - 1.0) + s * lm.e_v_target
    else:
        lower = -(1.0 - s) * lm.dmax + s * lm.e_v_target
        upper = (1.0 - s) * (phi - d) + s * lm.e_v_target
    return lower, upper


def s_star_bounds(lm: LocalMinimum, d: int, delta_e_t,
                  convention: Normalization = Normalization.PER_D,
                  use_symmetry: bool = False) -> tuple[Fraction, Fraction]:
    """Conductance (lower) and degree (upper) bounds on the crossing
    location of the local and global level, as exact rationals.

    With `use_symmetry` and a symmetry bound present, the upper bound uses
    the improved principal-eigenvalue estimate instead of d_max.
    """
    det = Fraction(delta_e_t)
    if det <= 0:
        raise ValidationError("delta_e_t must be positive (non-degenerate ground)")
    lam_lo = Fraction(d) - lm.phi
    lam_hi = Fraction(lm.dmax)
    if use_symmetry and lm.symmetry_bound is not None:
        lam_hi = min(lam_hi, Fraction(lm.symmetry_bound))
    scale = det * d if convention is Normalization.PER_D else det
    lower = lam_lo / (lam_lo + scale)
    upper = lam_hi / (lam_hi + scale)
    return lower, upper


def s_prime(inst: AnnealInstance) -> Fraction:
    """Crossing of the delocalized and global-minimum energies."""
    mean = Fraction(inst.target.mean_energy)
    e0 = Fraction(inst.target.ground_energy())
    if mean <= e0:
        raise ValidationError("flat target spectrum: <E_T> must exceed E_0^T")
    if inst.normalization is Normalization.PER_D:
        return 1 / (1 + mean - e0)
    d = Fraction(inst.driver.d)
    return d / (d + mean - e0)


class Classification(enum.Enum):
    QPT = "qpt"
    NO_QPT = "no_qpt"
    UNDECIDABLE = "undecidable"


def classify(s_prime_val, lower, upper) -> Classification:
    """Three-way call from the crossing bounds.

    Exact boundary ties carry no first-order information and resolve to
    UNDECIDABLE.
    """
    sp = Fraction(s_prime_val)
    lo, hi = Fraction(lower), Fraction(upper)
    if sp > hi:
        return Classification.NO_QPT
    if sp < lo:
        return Classification.QPT
    return Classification.UNDECIDABLE


def _target_ratio(inst: AnnealInstance) -> float:
    e = inst.target.sorted_energies()
    mean = inst.target.mean_energy
    if e[0] == mean:
        raise ValidationError("mean target energy equals the ground energy")
    return (float(e[1]) - mean) / (float(e[0]) - mean)


def no_qpt_condition_conductance(inst: AnnealInstance, phi0) -> bool:
    """Sufficient no-QPT condition in terms of the driver-graph Cheeger
    constant: (E_1^T - <E_T>)/(E_0^T - <E_T>) < phi_0/d."""
    return _target_ratio(inst) < float(Fraction(phi0) / inst.driver.d)


def no_qpt_condition_gap(inst: AnnealInstance, delta_e_d: float) -> bool:
    """Same condition stated via the driver spectral gap: LHS < dE_D/2."""
    return _target_ratio(inst) < delta_e_d / 2.0


@dataclass(frozen=True)
class BoundsReport:
    """Everything the classification needs, plus provenance extras."""

    s_star_lower: Fraction
    s_star_upper: Fraction
    s_prime: Fraction
    classification: Classification
    delta_e_t: float
    phi: Fraction
    dmax: int
    s_star_upper_sym: Optional[Fraction] = None
    ndpt_s_cross: Optional[float] = None
    extras: dict = field(default_factory=dict)


def build_report(inst: AnnealInstance, lm: LocalMinimum,
                 use_symmetry: bool = False,
                 ndpt_s_cross: Optional[float] = None) -> BoundsReport:
    """Assemble the bounds report for an instance and its local minimum.

    delta_e_t is the first-order level separation: the representative
    energy of the set minus the target ground energy.
    """
    d = inst.driver.d
    delta_e_t = lm.e_v_target - inst.target.ground_energy()
    lo, hi = s_star_bounds(lm, d, delta_e_t, inst.normalization,
                           use_symmetry=False)
    hi_sym = None
    if use_symmetry and lm.symmetry_bound is not None:
        _, hi_sym = s_star_bounds(lm, d, delta_e_t, inst.normalization,
                                  use_symmetry=True)
    sp = s_prime(inst)
    cls = classify(sp, lo, hi_sym if hi_sym is not None else hi)
    return BoundsReport(
        s_star_lower=lo, s_star_upper=hi, s_prime=sp, classification=cls,
        delta_e_t=float(delta_e_t), phi=lm.phi, dmax=lm.dmax,
        s_star_upper_sym=hi_sym, ndpt_s_cross=ndpt_s_cross)


def report_to_json(rep: BoundsReport) -> dict:
    out = {
        "schema": 1,
        "s_star": [float(rep.s_star_lower), float(rep.s_star_upper)],
        "s_star_sym": (None if rep.s_star_upper_sym is None
                       else float(rep.s_star_upper_sym)),
        "s_prime": float(rep.s_prime),
        "class": rep.classification.value,
        "phi": f"{rep.phi.numerator}/{rep.phi.denominator}",
        "dmax": rep.dmax,
        "delta_e_t": rep.delta_e_t,
        "ndpt_s_cross": rep.ndpt_s_cross,
    }
    out.update(rep.extras)
    return out
