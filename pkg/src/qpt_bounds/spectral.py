"""Lowest eigenpairs of H(s), schedule sweeps, and adjacency principal
eigenvalues.

Dense LAPACK diagonalization is the trusted oracle up to N = 2048; above
that a Lanczos iteration with full reorthogonalization works off the
matrix-free matvec.  The two paths are compared against each other in the
test suite, so they must stay independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
import scipy.linalg as sla

from .errors import NumericalError, ValidationError
from .graph import Graph
from .hamiltonian import AnnealInstance, apply_h

__all__ = [
    "SpectrumPoint",
    "AnnealSweep",
    "lowest_two",
    "lanczos_lowest_two",
    "sweep",
    "principal_eigenvalue",
    "fidelity_jump",
    "golden_section",
    "sweep_to_csv",
    "DENSE_CUTOFF",
    "DEGENERACY_TOL",
]

DENSE_CUTOFF = 2048
DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class SpectrumPoint:
    """Spectral data of H(s) at one schedule value."""

    s: float
    e0: float
    e1: float
    fidelity: float
    de0_ds: float
    degenerate: bool = False

    @property
    def gap(self) -> float:
        return self.e1 - self.e0


@dataclass(frozen=True)
class AnnealSweep:
    """Spectrum profile over a schedule grid with the refined gap minimum."""

    points: list
    s_min: float
    g_min: float

    def grid(self) -> np.ndarray:
        return np.array([p.s for p in self.points])

    def gaps(self) -> np.ndarray:
        return np.array([p.gap for p in self.points])

    def fidelities(self) -> np.ndarray:
        return np.array([p.fidelity for p in self.points])


def _dense_h(inst: AnnealInstance, s: float) -> np.ndarray:
    c = inst.driver_scale()
    h = (-(1.0 - s) * c) * inst.driver.adjacency().toarray()
    h[np.diag_indices_from(h)] += s * inst.target.energies
    return h


def _dense_lowest_two(inst: AnnealInstance, s: float):
    h = _dense_h(inst, s)
    vals, vecs = sla.eigh(h, subset_by_index=[0, 1])
    return float(vals[0]), float(vals[1]), vecs[:, 0].copy(), vecs[:, 1].copy()


def _start_vector(n: int, seed: int) -> np.ndarray:
    """Normalized all-ones plus a small seeded perturbation; the noise
    guards against starting exactly orthogonal to a symmetry sector."""
    rng = np.random.default_rng(seed)
    v = np.ones(n)
    p = rng.standard_normal(n)
    v += (1e-2 / np.linalg.norm(p)) * p * math.sqrt(n)
    return v / np.linalg.norm(v)


def lanczos_lowest_two(matvec: Callable[[np.ndarray], np.ndarray], n: int,
                       seed: int = 0, tol: float = 1e-10,
                       maxiter: int = 600,
                       v0: Optional[np.ndarray] = None):
    """Two lowest eigenpairs of a symmetric operator by Lanczos with full
    reorthogonalization.

    Returns (e0, e1, vec0, vec1).  Raises NumericalError with the residual
    norms if the Ritz residuals fail to reach `tol` (relative to the
    spectral scale) within `maxiter` iterations.
    """
    if n < 2:
        raise ValidationError("operator dimension must be at least 2")
    maxiter = min(maxiter, n)
    if v0 is None:
        q = _start_vector(n, seed)
    else:
        q = np.asarray(v0, dtype=np.float64).copy()
        q /= np.linalg.norm(q)
    Q = np.empty((maxiter, n))
    alphas = np.empty(maxiter)
    betas = np.empty(maxiter)
    rng = np.random.default_rng(seed + 1)
    theta = None
    res = (np.inf, np.inf)
    j = 0
    while j < maxiter:
        Q[j] = q
        u = matvec(q)
        alphas[j] = q @ u
        u -= alphas[j] * q
        if j > 0:
            u -= betas[j - 1] * Q[j - 1]
        # full reorthogonalization, applied twice
        for _ in range(2):
            u -= Q[: j + 1].T @ (Q[: j + 1] @ u)
        b = np.linalg.norm(u)
        k = j + 1
        if k >= 2:
            theta, y = sla.eigh_tridiagonal(
                alphas[:k], betas[: k - 1], select="i", select_range=(0, 1))
            scale = max(abs(theta[0]), abs(theta[1]), 1.0e-30)
            res = (abs(b * y[-1, 0]), abs(b * y[-1, 1]))
            if max(res) <= tol * scale:
                j += 1
                break
        if b <= 1e-14 * max(1.0, abs(alphas[j])):
            # invariant subspace: continue in the orthogonal complement
            # (true coupling to the old block is zero)
            u = rng.standard_normal(n)
            for _ in range(2):
                u -= Q[: j + 1].T @ (Q[: j + 1] @ u)
            b = np.linalg.norm(u)
            if b <= 1e-14:
                j += 1
                break
            betas[j] = 0.0
        else:
            betas[j] = b
        q = u / b
        j += 1
    if theta is None:
        raise NumericalError("Lanczos could not build a 2-dim Krylov space")
    k = j
    theta, y = sla.eigh_tridiagonal(
        alphas[:k], betas[: k - 1], select="i", select_range=(0, 1))
    scale = max(abs(theta[0]), abs(theta[1]), 1.0e-30)
    if max(res) > tol * scale and k == maxiter:
        raise NumericalError(
            f"Lanczos did not converge in {maxiter} iterations",
            residuals=res)
    vec0 = Q[:k].T @ y[:, 0]
    vec1 = Q[:k].T @ y[:, 1]
    vec0 /= np.linalg.norm(vec0)
    vec1 /= np.linalg.norm(vec1)
    return float(theta[0]), float(theta[1]), vec0, vec1


def _sign_fix(v: np.ndarray) -> np.ndarray:
    i = int(np.argmax(np.abs(v)))
    return -v if v[i] < 0 else v


def _lowest_two_full(inst: AnnealInstance, s: float, seed: int = 0,
                     v0: Optional[np.ndarray] = None):
    if inst.n <= DENSE_CUTOFF:
        e0, e1, u0, u1 = _dense_lowest_two(inst, s)
    else:
        if v0 is not None:
            # across an anti-crossing a warm start can be nearly orthogonal
            # to the new ground state; blending in the default start vector
            # keeps a guaranteed overlap
            v0 = v0 / np.linalg.norm(v0) + 0.01 * _start_vector(inst.n, seed)
        e0, e1, u0, u1 = lanczos_lowest_two(
            lambda x: apply_h(inst, s, x), inst.n, seed=seed, v0=v0)
    return e0, e1, _sign_fix(u0), _sign_fix(u1)


def lowest_two(inst: AnnealInstance, s: float, seed: int = 0):
    """Two lowest eigenvalues of H(s) and the normalized ground vector."""
    if inst.n < 2:
        raise ValidationError("need N >= 2")
    e0, e1, u0, _ = _lowest_two_full(inst, s, seed=seed)
    return e0, e1, u0


def _point(inst: AnnealInstance, s: float, seed: int,
           v0: Optional[np.ndarray] = None):
    e0, e1, u0, u1 = _lowest_two_full(inst, s, seed=seed, v0=v0)
    gi = inst.target.ground_index
    degenerate = (e1 - e0) < DEGENERACY_TOL
    if degenerate:
        # first-order theory predicts exact crossings; project on the pair
        fidelity = float(u0[gi] ** 2 + u1[gi] ** 2)
    else:
        fidelity = float(u0[gi] ** 2)
    c = inst.driver_scale()
    de0_ds = float(u0 @ (inst.target.energies * u0)
                   + c * (u0 @ inst.driver.adjacency_matvec(u0)))
    return SpectrumPoint(float(s), e0, e1, fidelity, de0_ds, degenerate), u0


def golden_section(f: Callable[[float], float], a: float, b: float,
                   xtol: float = 1e-4) -> tuple[float, float]:
    """Minimize a unimodal function on [a, b]; returns (x_min, f(x_min))."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    h = b - a
    c, d = b - inv_phi * h, a + inv_phi * h
    fc, fd = f(c), f(d)
    while h > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - inv_phi * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + inv_phi * h
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def sweep(inst: AnnealInstance, grid, seed: int = 0,
          refine_tol: float = 1e-4) -> AnnealSweep:
    """Spectrum profile over a schedule grid, with the location of the
    minimal gap refined by golden-section search inside the bracketing
    grid cells."""
    grid = np.asarray(sorted(float(s) for s in grid))
    if grid.size < 2:
        raise ValidationError("grid needs at least 2 points")
    if grid[0] < 0.0 or grid[-1] > 1.0:
        raise ValidationError("grid outside [0, 1]")
    points = []
    prev = None
    best_vec = None
    best_gap = np.inf
    for s in grid:
        pt, prev = _point(inst, s, seed, v0=prev if inst.n > DENSE_CUTOFF else None)
        points.append(pt)
        if pt.gap < best_gap:
            best_gap, best_vec = pt.gap, prev
    gaps = np.array([p.gap for p in points])
    i = int(np.argmin(gaps))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    warm = best_vec

    def gap_at(s: float) -> float:
        e0, e1, _, _ = _lowest_two_full(inst, s, seed=seed,
                                        v0=warm if inst.n > DENSE_CUTOFF else None)
        return e1 - e0

    if hi > lo:
        s_min, g_min = golden_section(gap_at, lo, hi, xtol=refine_tol)
        if gaps[i] < g_min:
            s_min, g_min = float(grid[i]), float(gaps[i])
    else:
        s_min, g_min = float(grid[i]), float(gaps[i])
    return AnnealSweep(points, float(s_min), float(g_min))


def principal_eigenvalue(g: Graph, seed: int = 0):
    """Largest adjacency eigenvalue and its eigenvector.

    The vector is sign-fixed; for a connected graph it can be chosen
    entrywise non-negative (Perron-Frobenius).
    """
    if g.n == 0:
        raise ValidationError("empty graph")
    if g.n == 1:
        return 0.0, np.ones(1)
    if g.n <= DENSE_CUTOFF:
        a = g.adjacency().toarray()
        vals, vecs = sla.eigh(a, subset_by_index=[g.n - 1, g.n - 1])
        return float(vals[0]), _sign_fix(vecs[:, 0].copy())
    adj = g.adjacency()
    e0, _, v0, _ = lanczos_lowest_two(lambda x: -(adj @ x), g.n, seed=seed)
    return -e0, _sign_fix(v0)


def fidelity_jump(swp: AnnealSweep, threshold: float) -> Optional[float]:
    """Location of the largest single-cell fidelity increase if it exceeds
    the threshold (the s value where the higher fidelity is first attained),
    else None."""
    fid = swp.fidelities()
    if len(fid) < 2:
        return None
    diffs = np.diff(fid)
    k = int(np.argmax(diffs))
    if diffs[k] > threshold:
        return float(swp.points[k + 1].s)
    return None


def sweep_to_csv(swp: AnnealSweep) -> str:
    """CSV text: header + one row per grid point, 12 significant digits."""
    lines = ["s,e0,e1,gap,fidelity,de0_ds"]
    for p in swp.points:
        lines.append(",".join(f"{x:.12g}" for x in
                              (p.s, p.e0, p.e1, p.gap, p.fidelity, p.de0_ds)))
    return "\n".join(lines) + "\n"
