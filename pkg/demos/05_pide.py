"""An integro-differential equation solved in linear time.

int_0^x t u(t, y) dt + u_yy = f on the unit square, with exact solution
u = x^4 y^3 (1 - y).  The discrete Sylvester equation has a semiseparable
A and a tridiagonal B, so each fADI step costs O(n), and the number of
steps for a fixed accuracy does not grow with n.
"""
import time

import numpy as np

from sylvlift.pide import exact_worked_solution, solve_pide, table1, worked_example

print("measured relative error / certified bound")
for n, k, err, bound, ratio in table1((10, 100, 1000)):
    print(f"  n={n:5d} k={k}  error {err:.3e}  bound {bound:.3e}  ratio {ratio:.9f}")

print("\n    n   steps   seconds   max |U - u|")
for n in (250, 500, 1000, 2000, 4000):
    p = worked_example(n)
    t0 = time.perf_counter()
    sol = solve_pide(p, 1e-7, use_simple=True, track_residual=False)
    dt = time.perf_counter() - t0
    err = "" if n > 1000 else (
        f"{np.abs(sol.dense() - exact_worked_solution(*np.meshgrid(p.grid, p.grid, indexing='ij'))).max():.2e}")
    print(f"{n:5d}   {sol.iterations:5d}   {dt:7.3f}   {err}")
