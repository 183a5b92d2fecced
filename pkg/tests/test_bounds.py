"""Crossing bounds, classification and the no-transition conditions."""

from fractions import Fraction

import numpy as np
import pytest

from qpt_bounds.bounds import (Classification, LocalMinimum, build_report,
                               classify, e_deloc, e_global, e_local_bounds,
                               local_minimum, no_qpt_condition_conductance,
                               no_qpt_condition_gap, s_prime, s_star_bounds)
from qpt_bounds.errors import ValidationError
from qpt_bounds.graph import (NodeSet, cheeger_constant, conductance,
                              hypercube, induced_subgraph, max_degree_in,
                              random_regular)
from qpt_bounds.hamiltonian import (AnnealInstance, Normalization,
                                    TargetSpectrum)
from qpt_bounds.spectral import principal_eigenvalue


def make_lm(g, members, e_v=0.0, lam_hat=None):
    ns = NodeSet(frozenset(members), g)
    return LocalMinimum(v=ns, e_v_target=e_v, phi=conductance(g, ns),
                        dmax=max_degree_in(g, ns), symmetry_bound=lam_hat)


def pit_instance(g, e0_at=0, e_v_at=(), e_v=-0.5, norm=Normalization.PER_D):
    e = np.zeros(g.n)
    e[e0_at] = -1.0
    for i in e_v_at:
        e[i] = e_v
    return AnnealInstance(g, TargetSpectrum(e), norm)


class TestEnergies:
    def test_e_deloc_normalized(self):
        inst = pit_instance(hypercube(3))
        assert e_deloc(inst, 0.0) == pytest.approx(-1.0)
        mean = inst.target.mean_energy
        assert e_deloc(inst, 0.5) == pytest.approx(-0.5 + 0.5 * mean)

    def test_e_deloc_zero_mean(self):
        e = np.array([-1.0, 1.0, 0.5, -0.5])
        inst = AnnealInstance(hypercube(2), TargetSpectrum(e))
        assert e_deloc(inst, 0.5) == pytest.approx(-0.5)

    def test_e_deloc_unnormalized_uses_d(self):
        inst = pit_instance(hypercube(3), norm=Normalization.NONE)
        assert e_deloc(inst, 0.0) == pytest.approx(-3.0)

    def test_e_global_line(self):
        inst = pit_instance(hypercube(3))
        assert e_global(inst, 0.0) == 0.0
        assert e_global(inst, 0.5) == pytest.approx(-0.5)

    def test_e_global_degenerate_rejected(self):
        g = hypercube(2)
        e = np.array([-1.0, -1.0, 0.0, 0.0])
        inst = AnnealInstance(g, TargetSpectrum(e))
        with pytest.raises(ValidationError):
            e_global(inst, 0.3)


class TestELocalBounds:
    def test_regular_subgraph_equality(self):
        # a 2-face of the 3-cube induces a 4-cycle: regular, phi = d - 2
        g = hypercube(3)
        lm = make_lm(g, [0, 1, 2, 3], e_v=-0.5)
        for s in np.linspace(0, 1, 7):
            lo, hi = e_local_bounds(lm, s, d=3)
            assert lo == pytest.approx(hi, abs=1e-12)

    def test_s1_pins_target_energy(self):
        g = hypercube(3)
        lm = make_lm(g, [0, 1], e_v=-0.7)
        lo, hi = e_local_bounds(lm, 1.0, d=3)
        assert lo == pytest.approx(-0.7) and hi == pytest.approx(-0.7)

    def test_wmis_numbers_unnormalized(self):
        g = hypercube(4)  # placeholder parent; quantities injected directly
        lm = LocalMinimum(v=NodeSet(frozenset([0]), g), e_v_target=-103.2,
                          phi=Fraction(1539, 135), dmax=9)
        lo, hi = e_local_bounds(lm, 0.5, d=15, convention=Normalization.NONE)
        assert lo == pytest.approx(-0.5 * 9 + 0.5 * -103.2, abs=1e-12)
        assert hi == pytest.approx(0.5 * (11.4 - 15) + 0.5 * -103.2, abs=1e-12)


class TestSStarBounds:
    def test_hand_example(self):
        g = hypercube(4)
        lm = LocalMinimum(v=NodeSet(frozenset([0]), g), e_v_target=0.0,
                          phi=Fraction(2), dmax=7)
        lo, hi = s_star_bounds(lm, d=8, delta_e_t=1)
        assert lo == Fraction(3, 7)      # 0.75/1.75
        assert hi == Fraction(7, 15)

    def test_limit_small_gap(self):
        g = hypercube(4)
        lm = LocalMinimum(v=NodeSet(frozenset([0]), g), e_v_target=0.0,
                          phi=Fraction(2), dmax=7)
        lo, hi = s_star_bounds(lm, d=8, delta_e_t=1e-12)
        assert float(lo) > 0.999999
        assert float(hi) > 0.999999

    def test_wmis_values(self):
        g = hypercube(4)
        lm = LocalMinimum(v=NodeSet(frozenset([0]), g), e_v_target=0.0,
                          phi=Fraction(1539, 135), dmax=9,
                          symmetry_bound=2 * np.sqrt(3) + 3)
        lo, hi = s_star_bounds(lm, d=15, delta_e_t=2.4,
                               convention=Normalization.NONE)
        assert float(lo) == pytest.approx(0.6, abs=1e-12)
        _, hi_sym = s_star_bounds(lm, d=15, delta_e_t=2.4,
                                  convention=Normalization.NONE,
                                  use_symmetry=True)
        lam = 2 * np.sqrt(3) + 3
        assert float(hi_sym) == pytest.approx(lam / (lam + 2.4), abs=1e-12)

    def test_invalid_gap(self):
        g = hypercube(2)
        lm = make_lm(g, [0])
        with pytest.raises(ValidationError):
            s_star_bounds(lm, d=2, delta_e_t=0.0)

    def test_monotone_in_phi_and_gap(self):
        g = hypercube(4)

        def lower(phi, det):
            lm = LocalMinimum(v=NodeSet(frozenset([0]), g), e_v_target=0.0,
                              phi=Fraction(phi), dmax=4)
            return s_star_bounds(lm, d=8, delta_e_t=det)[0]

        # decreasing in phi, increasing as the gap shrinks
        assert lower(1, 1) > lower(2, 1) > lower(3, 1)
        assert lower(2, Fraction(1, 2)) > lower(2, 1) > lower(2, 2)


class TestSandwich:
    def test_exact_crossing_inside_bounds(self):
        # the first-order crossing from the true lambda_V must sit between
        # the conductance and degree bounds
        rng = np.random.default_rng(20)
        checked = 0
        trial = 0
        while checked < 500:
            trial += 1
            n = int(rng.choice([16, 24, 32, 48, 64]))
            d = int(rng.choice([3, 4, 5, 6, 7, 8]))
            if (n * d) % 2 or d >= n:
                continue
            g = random_regular(n, d, seed=1000 + trial)
            k = int(rng.integers(2, max(3, n // 3)))
            members = _grow_connected(g, int(rng.integers(n)), k, rng)
            lm = make_lm(g, members)
            det = float(rng.uniform(0.05, 2.0))
            lo, hi = s_star_bounds(lm, d=d, delta_e_t=det)
            sub, _ = induced_subgraph(g, members)
            lam, _ = principal_eigenvalue(sub)
            s_exact = lam / (lam + d * det) if lam > 0 else 0.0
            assert float(lo) - 1e-9 <= s_exact <= float(hi) + 1e-9
            checked += 1


def _grow_connected(g, start, size, rng):
    members = {start}
    while len(members) < size:
        frontier = sorted(set(int(j) for i in members for j in g.neighbors(i))
                          - members)
        if not frontier:
            break
        members.add(frontier[int(rng.integers(len(frontier)))])
    return members


class TestSPrime:
    def test_half(self):
        e = np.array([-1.0, 1.0, 0.5, -0.5])
        inst = AnnealInstance(hypercube(2), TargetSpectrum(e))
        assert s_prime(inst) == Fraction(1, 2)

    def test_one_third(self):
        # <E_T> = 1, E_0 = -1 -> 1/3
        e = np.array([-1.0, 5.0, 1.0, -1.0])
        g = hypercube(2)
        inst = AnnealInstance(g, TargetSpectrum(e))
        assert s_prime(inst) == Fraction(1, 3)

    def test_flat_rejected(self):
        inst = AnnealInstance(hypercube(2), TargetSpectrum(np.zeros(4)))
        with pytest.raises(ValidationError):
            s_prime(inst)

    def test_unnormalized_uses_d(self):
        e = np.array([-1.0, 1.0, 0.5, -0.5])
        inst = AnnealInstance(hypercube(2), TargetSpectrum(e),
                              Normalization.NONE)
        assert s_prime(inst) == Fraction(2, 3)   # d/(d + 1) with d=2


class TestClassify:
    def test_rules(self):
        assert classify(0.9, 0.4, 0.6) is Classification.NO_QPT
        assert classify(0.3, 0.4, 0.6) is Classification.QPT
        assert classify(0.5, 0.4, 0.6) is Classification.UNDECIDABLE

    def test_boundary_ties_undecidable(self):
        assert classify(Fraction(3, 5), Fraction(2, 5), Fraction(3, 5)) \
            is Classification.UNDECIDABLE
        assert classify(Fraction(2, 5), Fraction(2, 5), Fraction(3, 5)) \
            is Classification.UNDECIDABLE

    def test_scale_consistency(self):
        # scaling the target energies, delta_e_t and the driver magnitude
        # together by lam > 0 leaves every classification input unchanged
        # (all the formulas are ratios); checked in exact rationals
        rng = np.random.default_rng(21)
        g = random_regular(32, 4, seed=22)
        for _ in range(10):
            e = rng.standard_normal(32)
            e[int(rng.integers(32))] -= 2.0
            inst = AnnealInstance(g, TargetSpectrum(e), Normalization.NONE)
            members = _grow_connected(g, int(rng.integers(32)), 5, rng)
            lm = make_lm(g, members)
            det = Fraction(float(rng.uniform(0.1, 1.0)))
            lam = Fraction(float(rng.uniform(0.5, 3.0)))
            d = Fraction(4)
            phi = lm.phi
            lo, hi = s_star_bounds(lm, 4, det, Normalization.NONE)
            lo_scaled = (lam * (d - phi)) / (lam * (d - phi) + lam * det)
            hi_scaled = (lam * lm.dmax) / (lam * lm.dmax + lam * det)
            assert lo_scaled == lo and hi_scaled == hi
            mean = Fraction(inst.target.mean_energy)
            e0 = Fraction(inst.target.ground_energy())
            sp = s_prime(inst)
            sp_scaled = (lam * d) / (lam * d + lam * mean - lam * e0)
            assert sp_scaled == sp
            assert classify(sp_scaled, lo_scaled, hi_scaled) is \
                classify(sp, lo, hi)


class TestLocalMinimumBuilder:
    def test_recomputes_quantities(self):
        g = random_regular(24, 4, seed=23)
        members = _grow_connected(g, 0, 6, np.random.default_rng(3))
        e = np.zeros(24)
        for i in members:
            e[i] = -0.5
        lm = local_minimum(g, members, e, epsilon=0.01)
        assert lm.phi == conductance(g, members)
        assert lm.dmax == max_degree_in(g, members)
        assert lm.e_v_target == -0.5

    def test_disconnected_rejected(self):
        g = hypercube(3)
        with pytest.raises(ValidationError):
            local_minimum(g, [0, 7], np.zeros(8), epsilon=0.1)

    def test_wide_energy_range_rejected(self):
        g = hypercube(3)
        e = np.zeros(8)
        e[1] = 0.5
        with pytest.raises(ValidationError):
            local_minimum(g, [0, 1], e, epsilon=0.01)


class TestNoQptConditions:
    def test_arithmetic_example(self):
        # LHS (E1-<E>)/(E0-<E>) = 0.9, phi0/d = 0.5 -> condition false
        e = np.zeros(16)
        e[0], e[1] = -1.0, -0.9
        e -= np.mean(e)          # shift so <E_T> = 0
        inst = AnnealInstance(hypercube(4), TargetSpectrum(e))
        assert not no_qpt_condition_conductance(inst, Fraction(2))

    def test_e1_at_mean_true(self):
        e = np.zeros(16)
        e[0] = -1.0
        e -= np.mean(e)
        # now E1 = <E_T>; any positive phi0 satisfies the condition
        inst = AnnealInstance(hypercube(4), TargetSpectrum(e))
        assert no_qpt_condition_conductance(inst, Fraction(1, 100))

    def test_gap_form_hypercube(self):
        # driver gap of the normalized n_q-cube is 2/n_q
        g = hypercube(4)
        c = 1.0 / 4
        a = g.adjacency().toarray()
        vals = np.linalg.eigvalsh(-c * a)
        delta_d = vals[1] - vals[0]
        assert delta_d == pytest.approx(0.5, abs=1e-10)
        e = np.zeros(16)
        e[0] = -1.0
        e[1:] = 1.0 / 15.0       # mean zero, E1 - <E> small
        inst = AnnealInstance(g, TargetSpectrum(e))
        lhs = (1.0 / 15.0) / (-1.0)
        assert lhs < 0.25
        assert no_qpt_condition_gap(inst, delta_d)

    def test_boundary_strict(self):
        e = np.zeros(16)
        e[0] = -1.0
        e -= np.mean(e)
        inst = AnnealInstance(hypercube(4), TargetSpectrum(e))
        ratio = (float(np.sort(e)[1]) - 0.0) / (float(np.sort(e)[0]) - 0.0)
        assert not no_qpt_condition_gap(inst, 2 * ratio)

    def test_rearranged_form_equivalence(self):
        # with E0 = -1 and <E> = 0 the condition reads 1 - dE_D/2 < dE_T
        rng = np.random.default_rng(24)
        g = hypercube(3)
        c = 1.0 / 3
        vals = np.linalg.eigvalsh(-c * g.adjacency().toarray())
        delta_d = float(vals[1] - vals[0])
        for _ in range(20):
            det = float(rng.uniform(0.0, 1.5))
            e = np.full(8, (1.0 - (-1.0 + det)) / 7.0)
            e[0] = -1.0
            e[1] = -1.0 + det
            e[2:] = (1.0 + (1.0 - det)) / 6.0
            e[2:] -= (e.sum()) / 6.0  # enforce mean exactly 0 on the rest
            inst = AnnealInstance(g, TargetSpectrum(e))
            assert abs(inst.target.mean_energy) < 1e-12
            expected = (1.0 - delta_d / 2.0) < det
            assert no_qpt_condition_gap(inst, delta_d) == expected

    def test_cheeger_implication(self):
        # gap-form true implies the conductance form with the upper Cheeger
        # bound phi0 >= d*dE_D/2
        for seed in range(5):
            g = random_regular(12, 4, seed=seed)
            phi0 = cheeger_constant(g)
            c = 1.0 / 4
            vals = np.linalg.eigvalsh(-c * g.adjacency().toarray())
            delta_d = float(vals[1] - vals[0])
            rng = np.random.default_rng(seed)
            e = rng.standard_normal(12)
            e[0] = e.min() - 1.0
            inst = AnnealInstance(g, TargetSpectrum(e))
            if no_qpt_condition_gap(inst, delta_d):
                assert no_qpt_condition_conductance(inst, phi0)


class TestBuildReport:
    def test_report_fields_and_json(self):
        from qpt_bounds.bounds import report_to_json
        g = random_regular(32, 4, seed=30)
        rng = np.random.default_rng(31)
        members = _grow_connected(g, 5, 6, rng)
        e = np.zeros(32)
        e[0] = -1.0
        for i in members:
            e[i] = -0.4
        if 0 in members:
            return
        inst = AnnealInstance(g, TargetSpectrum(e))
        lm = local_minimum(g, members, e, epsilon=0.01)
        rep = build_report(inst, lm)
        assert 0 <= rep.s_star_lower <= rep.s_star_upper <= 1
        assert rep.delta_e_t == pytest.approx(0.6)
        obj = report_to_json(rep)
        assert obj["class"] in {"qpt", "no_qpt", "undecidable"}
        assert obj["s_star"][0] <= obj["s_star"][1]
        assert "/" in obj["phi"]
