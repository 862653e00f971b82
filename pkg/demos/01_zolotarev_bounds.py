"""How fast can a rational function be small on [a, b] and large on the unit circle?

Three certified upper bounds on Z_2k([a, b], circle) are compared as a
moves towards b = 10.  Near the circle (a = 1.2) and for higher degree the
reduction-based bound is the tightest; once [a, b] sits well away from the
circle the one-pole bound wins by orders of magnitude.
"""
from sylvlift.zolotarev import (CircleIntervalConfig, Interval, z_circle_bound_corollary,
                                z_circle_bound_simple, z_circle_bound_theorem,
                                z_exact_intervals)

print("Two real intervals first: Z_k([0,1], [2,3]) for k = 1..4")
for k in range(1, 5):
    print(f"  k={k}: {z_exact_intervals(k, Interval(0, 1), Interval(2, 3)).value:.3e}")

print("\nInterval against the circle, b = 10 (all three bound Z_2k)")
print(f"{'a':>5} {'k':>2} {'reduction':>11} {'closed form':>11} {'one pole':>11}")
for a in (1.2, 2.0, 5.0, 9.0):
    cfg = CircleIntervalConfig.from_endpoints(a, 10.0)
    for k in (1, 3):
        print(f"{a:5.1f} {k:2d} {z_circle_bound_theorem(k, cfg).value:11.3e} "
              f"{z_circle_bound_corollary(k, cfg).value:11.3e} "
              f"{z_circle_bound_simple(2 * k, cfg).value:11.3e}")
