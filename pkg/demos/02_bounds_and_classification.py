"""From a labelled energy landscape to crossing bounds and the three-way
classification (transition / no transition / undecidable).

Run: python demos/02_bounds_and_classification.py
"""

from qpt_bounds import (Classification, ToyParams, build_report, e_deloc,
                        e_global, e_local_bounds, gen_toy)

for seed in (6, 7, 23):
    li = gen_toy(ToyParams(seed=seed))
    inst, lm = li.instance, li.local_min
    rep = build_report(inst, lm)

    print(f"seed {seed}: |V|={len(lm.v)}, phi={lm.phi}, d_max={lm.dmax}, "
          f"dE_T={rep.delta_e_t:.3f}")
    print(f"  crossing bounds  s* in [{float(rep.s_star_lower):.4f}, "
          f"{float(rep.s_star_upper):.4f}]")
    print(f"  deloc->global    s' = {float(rep.s_prime):.4f}")
    print(f"  classification   {rep.classification.value}")

    # the underlying first-order energies at mid-anneal
    s = 0.5
    lo, hi = e_local_bounds(lm, s, inst.driver.d)
    print(f"  at s=0.5: E_deloc={e_deloc(inst, s):+.4f}  "
          f"E_global={e_global(inst, s):+.4f}  "
          f"E_local in [{lo:+.4f}, {hi:+.4f}]")
    if rep.classification is Classification.QPT:
        print("  -> the local level crosses the global one while it is the "
              "ground state: expect a sharp gap minimum between the bounds")
    print()
