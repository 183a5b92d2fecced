"""Exact diagonalization along the schedule for one instance with a
first-order transition and one without: gap profile, fidelity jump, and
how the observed gap minimum lands inside the predicted interval.

Run: python demos/03_toy_profiles.py            (about half a minute)
"""

import numpy as np

from qpt_bounds import (ToyParams, build_report, fidelity_jump, gen_toy,
                        predict_crossing_ndpt, sweep)

GRID = np.linspace(0.0, 1.0, 401)

for seed, label in ((6, "transition"), (7, "no transition")):
    li = gen_toy(ToyParams(seed=seed))
    rep = build_report(li.instance, li.local_min)
    swp = sweep(li.instance, GRID, seed=seed)
    jump = fidelity_jump(swp, threshold=0.5)
    ndpt = predict_crossing_ndpt(li)

    print(f"seed {seed} ({label}, classified {rep.classification.value}):")
    print(f"  bounds        [{float(rep.s_star_lower):.4f}, "
          f"{float(rep.s_star_upper):.4f}]")
    print(f"  gap minimum   s_min={swp.s_min:.4f}, g_min={swp.g_min:.2e}")
    print(f"  fidelity jump {jump if jump is not None else 'none (smooth)'}")
    print(f"  2nd-order NDPT prediction: {ndpt.s_cross:.4f} "
          f"(off by {abs(ndpt.s_cross - swp.s_min):.4f})")
    print(f"  fidelity: {swp.points[0].fidelity:.4f} at s=0 -> "
          f"{swp.points[-1].fidelity:.4f} at s=1")
    print()

print("the transition instance pins its gap minimum inside the bounds;")
print("the smooth instance has a much larger minimal gap, and its minimum")
print("is unrelated to the (never-realized) local-global crossing.")
