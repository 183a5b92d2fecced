"""Experiment families: toy landscapes on random regular graphs, and a
15-qubit weighted-maximum-independent-set (WMIS) Ising instance with a
combinatorially known local minimum.

The WMIS problem graph has 6 solution nodes of weight w_G = 1 (mutually
independent, each adjacent to all local nodes) and 9 local nodes of
weight w_L < 2 forming three triangles; all couplings are J = 2.  Qubit
convention: bit 0 <-> sigma^z = +1 <-> node selected in the independent
set (so the local-minimum states have one qubit in |0> per triangle).
The construction is gated behind verify_wmis_counts, which recomputes
every quoted quantity from first principles.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .bounds import LocalMinimum, local_minimum
from .errors import GenerationError, ParameterError, ValidationError
from .graph import (Graph, NodeSet, conductance, connected_components,
                    edge_boundary, hypercube, induced_subgraph,
                    max_degree_in, random_regular)
from .hamiltonian import AnnealInstance, Normalization, TargetSpectrum
from .symmetry import equitable_partition, gershgorin_bound, quotient_matrix

__all__ = [
    "ToyParams",
    "WmisParams",
    "LabeledInstance",
    "gen_toy",
    "build_wmis",
    "wmis_local_min_set",
    "wmis_energies",
    "verify_wmis_counts",
    "resolve_generator_energies",
    "WMIS_QUBITS",
]

WMIS_QUBITS = 15
_SOLUTION_NODES = tuple(range(6))
_TRIANGLES = ((6, 7, 8), (9, 10, 11), (12, 13, 14))


@dataclass(frozen=True)
class ToyParams:
    """Parameters of the random-landscape generator (defaults match the
    reference experiment: 256 nodes, degree 8, degeneracy lift 0.01)."""

    n: int = 256
    d: int = 8
    epsilon: float = 0.01
    target_v_size: Optional[int] = None    # sampled in [8, 48] when None
    seed: int = 0

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "epsilon": self.epsilon,
                "target_v_size": self.target_v_size, "seed": self.seed}

    @classmethod
    def from_json(cls, obj: dict) -> "ToyParams":
        return cls(n=int(obj.get("n", 256)), d=int(obj.get("d", 8)),
                   epsilon=float(obj.get("epsilon", 0.01)),
                   target_v_size=(None if obj.get("target_v_size") is None
                                  else int(obj["target_v_size"])),
                   seed=int(obj.get("seed", 0)))


@dataclass(frozen=True)
class WmisParams:
    """WMIS weights; the coupling exceeds every node weight as the
    independent-set encoding requires."""

    w_l: float = 1.8
    w_g: float = 1.0
    j: float = 2.0

    def __post_init__(self):
        if not (0.0 < self.w_l < 2.0 * self.w_g):
            raise ParameterError(f"need 0 < w_l < 2*w_g, got w_l={self.w_l}")
        if self.j <= min(self.w_g, self.w_l):
            raise ParameterError("coupling must exceed the smaller node weight")

    def to_json(self) -> dict:
        return {"w_l": self.w_l, "w_g": self.w_g, "j": self.j}

    @classmethod
    def from_json(cls, obj: dict) -> "WmisParams":
        return cls(w_l=float(obj.get("w_l", 1.8)),
                   w_g=float(obj.get("w_g", 1.0)),
                   j=float(obj.get("j", 2.0)))


@dataclass(frozen=True)
class LabeledInstance:
    """An anneal instance together with its labelled minima."""

    instance: AnnealInstance
    global_node: int
    local_min: LocalMinimum
    provenance: dict = field(default_factory=dict)


def gen_toy(p: ToyParams) -> LabeledInstance:
    """Random energy landscape on a random d-regular graph: a narrow
    non-degenerate global minimum and a wide nearly degenerate local
    minimum grown as far away from it as possible.

    Deterministic per seed.  The background energies (nodes outside the
    two minima) are 0, anchoring E_0^T = -1 and <E_T> near 0.
    """
    master = np.random.default_rng(p.seed)
    graph_seed = int(master.integers(2**63))
    g = random_regular(p.n, p.d, graph_seed)
    global_node, v0 = _farthest_pair(g)
    forbidden = set(int(j) for j in g.neighbors(global_node))
    forbidden.add(global_node)
    if v0 in forbidden:
        raise GenerationError("local seed node collides with the global minimum")
    target_size = (p.target_v_size if p.target_v_size is not None
                   else int(master.integers(8, 49)))
    if target_size < 1:
        raise ParameterError("target_v_size must be >= 1")
    members = {v0}
    while len(members) < target_size:
        frontier = set()
        for i in members:
            frontier.update(int(j) for j in g.neighbors(i))
        frontier -= members
        frontier -= forbidden
        if not frontier:
            raise GenerationError(
                f"local minimum growth blocked at size {len(members)}")
        pick = sorted(frontier)[int(master.integers(len(frontier)))]
        members.add(pick)
    delta_e_t = float(master.uniform(0.0, 1.0))
    while delta_e_t == 0.0:
        delta_e_t = float(master.uniform(0.0, 1.0))
    energies = np.zeros(p.n)
    energies[global_node] = -1.0
    for i in members:
        energies[i] = -1.0 + delta_e_t + p.epsilon
    energies[v0] = -1.0 + delta_e_t
    lm = local_minimum(g, members, energies, epsilon=p.epsilon)
    inst = AnnealInstance(g, TargetSpectrum(energies), Normalization.PER_D)
    provenance = {
        "schema": 1,
        "generator": "toy",
        "params": p.to_json(),
        "graph_seed": graph_seed,
        "global_node": int(global_node),
        "v0": int(v0),
        "v": sorted(int(i) for i in members),
        "v_size": len(members),
        "delta_e_t": delta_e_t,
        "phi": f"{lm.phi.numerator}/{lm.phi.denominator}",
        "dmax": lm.dmax,
        "background_energy": 0.0,
        "ndpt_degenerate": p.epsilon == 0.0,
    }
    return LabeledInstance(inst, int(global_node), lm, provenance)


def _farthest_pair(g: Graph):
    from .graph import bfs_farthest_pair
    return bfs_farthest_pair(g)


def _wmis_problem_edges() -> list[tuple[int, int]]:
    edges = []
    for tri in _TRIANGLES:
        edges += [(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])]
    for s in _SOLUTION_NODES:
        for tri in _TRIANGLES:
            edges += [(s, t) for t in tri]
    return sorted(tuple(sorted(e)) for e in edges)


def wmis_energies(p: WmisParams) -> np.ndarray:
    """Diagonal Ising energies over all 2^15 basis states:
    H_T = sum_i h_i sigma_i^z + sum_(ij) J sigma_i^z sigma_j^z with
    h_i = J deg(i) - 2 w(i)."""
    edges = _wmis_problem_edges()
    deg = np.zeros(WMIS_QUBITS)
    for i, j in edges:
        deg[i] += 1
        deg[j] += 1
    w = np.array([p.w_g] * 6 + [p.w_l] * 9)
    h = p.j * deg - 2.0 * w
    z = np.arange(1 << WMIS_QUBITS, dtype=np.int64)
    spins = 1.0 - 2.0 * ((z[:, None] >> np.arange(WMIS_QUBITS)) & 1)
    energies = spins @ h
    for i, j in edges:
        energies += p.j * spins[:, i] * spins[:, j]
    return energies


def _state_from_selected(selected) -> int:
    """Basis index with the given nodes selected (bit 0) and all others
    unselected (bit 1)."""
    z = (1 << WMIS_QUBITS) - 1
    for i in selected:
        z &= ~(1 << i)
    return z


def wmis_ground_state() -> int:
    return _state_from_selected(_SOLUTION_NODES)


def wmis_local_min_set() -> tuple[list[int], dict]:
    """The 135 basis states of the local-minimum set and their classes.

    class a: one selected local per triangle (27 states, the shallow
    minima); class b: two selected in one triangle, one in each other
    (81); class c: none in one triangle, one in each other (27).
    """
    tri_single = [[(i,) for i in tri] for tri in _TRIANGLES]
    tri_pair = [[(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])]
                for tri in _TRIANGLES]
    members = []
    classes = {"a": [], "b": [], "c": []}

    def add(label, parts):
        sel = tuple(i for part in parts for i in part)
        z = _state_from_selected(sel)
        members.append(z)
        classes[label].append(z)

    for p0 in tri_single[0]:
        for p1 in tri_single[1]:
            for p2 in tri_single[2]:
                add("a", (p0, p1, p2))
    for heavy in range(3):
        others = [t for t in range(3) if t != heavy]
        for pair in tri_pair[heavy]:
            for q0 in tri_single[others[0]]:
                for q1 in tri_single[others[1]]:
                    add("b", (pair, q0, q1))
    for empty in range(3):
        others = [t for t in range(3) if t != empty]
        for q0 in tri_single[others[0]]:
            for q1 in tri_single[others[1]]:
                add("c", (q0, q1))
    return sorted(members), classes


def build_wmis(p: WmisParams) -> LabeledInstance:
    """15-qubit WMIS anneal instance (hypercube driver, unnormalized),
    with the local minimum labelled; fails if the construction does not
    reproduce the expected counts."""
    energies = wmis_energies(p)
    driver = hypercube(WMIS_QUBITS)
    inst = AnnealInstance(driver, TargetSpectrum(energies), Normalization.NONE)
    members, classes = wmis_local_min_set()
    v = NodeSet(frozenset(members), driver)
    e_v = float(min(energies[z] for z in classes["a"]))
    lm = LocalMinimum(
        v=v, e_v_target=e_v,
        phi=conductance(driver, v),
        dmax=max_degree_in(driver, v),
    )
    li = LabeledInstance(
        inst, wmis_ground_state(), lm,
        provenance={
            "schema": 1,
            "generator": "wmis",
            "params": p.to_json(),
            "global_node": wmis_ground_state(),
            "v": members,
            "classes": {k: sorted(vv) for k, vv in classes.items()},
            "phi": f"{lm.phi.numerator}/{lm.phi.denominator}",
            "dmax": lm.dmax,
        })
    report = verify_wmis_counts(li)
    if not report.all_passed:
        raise GenerationError(
            "WMIS construction failed count verification:\n" + report.summary())
    return li


@dataclass(frozen=True)
class CountCheck:
    name: str
    passed: bool
    expected: object
    actual: object


@dataclass(frozen=True)
class VerifyReport:
    checks: list

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        return "\n".join(
            f"{'PASS' if c.passed else 'FAIL'} {c.name}: "
            f"expected {c.expected}, got {c.actual}"
            for c in self.checks)

    def to_json(self) -> dict:
        return {"schema": 1, "all_passed": self.all_passed,
                "checks": [{"name": c.name, "passed": c.passed,
                            "expected": str(c.expected), "actual": str(c.actual)}
                           for c in self.checks]}


def verify_wmis_counts(li: LabeledInstance) -> VerifyReport:
    """Recompute |V|, |dV|, d_max(V), the quotient matrix and Delta E_T
    from first principles and diff against the quoted values."""
    g = li.instance.driver
    energies = li.instance.target.energies
    v = li.local_min.v
    checks = []

    def check(name, expected, actual, ok=None):
        checks.append(CountCheck(name, bool(expected == actual if ok is None else ok),
                                 expected, actual))

    check("|V|", 135, len(v))
    check("|dV|", 1539, edge_boundary(g, v))
    check("d_max(V)", 9, max_degree_in(g, v))

    sub, ids = induced_subgraph(g, v)
    check("G(V) connected", 1, len(connected_components(sub)))
    part = equitable_partition(sub)
    check("class sizes", [27, 27, 81], part.sizes())
    q = quotient_matrix(sub, part)
    gersh = gershgorin_bound(q)
    expected_gersh = 2.0 * np.sqrt(3.0) + 3.0
    check("gershgorin", expected_gersh, gersh,
          ok=abs(gersh - expected_gersh) < 1e-12)
    root12 = float(2 * np.sqrt(3.0))
    expected_sets = sorted([sorted([0.0, root12, 3.0]),
                            sorted([0.0, 0.0, root12]),
                            sorted([0.0, 0.0, 3.0])])
    actual_sets = sorted(sorted(row) for row in q.entries.tolist())
    rows_match = (np.shape(expected_sets) == np.shape(actual_sets)
                  and np.allclose(expected_sets, actual_sets, atol=1e-12))
    check("quotient rows", expected_sets, actual_sets, ok=rows_match)

    order = np.argsort(energies, kind="stable")
    e0 = float(energies[order[0]])
    check("unique ground", 1, int(np.sum(energies == e0)))
    check("ground state index", li.global_node, int(order[0]))
    # delta_e_t of the bounds is the separation of the local-minimum level
    # (the degenerate class-a energy) from the ground level; for small w_l
    # single-qubit excitations of the solution sit below it, so this is
    # not always the raw sorted gap
    p = WmisParams.from_json(li.provenance.get("params", {}))
    expected_det = 4.0 * (6.0 * p.w_g - 3.0 * p.w_l)
    a_states = li.provenance.get("classes", {}).get("a", [])
    e_a = float(min(energies[z] for z in a_states))
    check("delta_e_t", expected_det, e_a - e0,
          ok=abs((e_a - e0) - expected_det) < 1e-12)
    check("class-a degenerate", 0.0,
          float(max(energies[z] for z in a_states)) - e_a,
          ok=float(max(energies[z] for z in a_states)) - e_a < 1e-12)
    check("class-a is lowest in V", e_a,
          float(min(energies[z] for z in li.local_min.v.members)),
          ok=abs(e_a - float(min(energies[z] for z in li.local_min.v.members))) < 1e-12)
    return VerifyReport(checks)


def resolve_generator_energies(obj: dict) -> np.ndarray:
    """Expand a generator description ({"toy": {...}} or {"wmis": {...}})
    into the explicit energy list."""
    if "toy" in obj:
        return gen_toy(ToyParams.from_json(obj["toy"])).instance.target.energies
    if "wmis" in obj:
        return wmis_energies(WmisParams.from_json(obj["wmis"]))
    raise ValidationError(f"unknown energies generator {sorted(obj)}")
