"""Lifting a Sylvester equation through a unitary dilation.

U_{n,A} is unitary and its top-left block of U^k is A^k for k < n.  The
stacked solution Y keeps X on top and nearly solves U Y - Y B = J C; the
exact solution Z of the lifted equation is within gamma^2 ||D X|| of Y.
"""
import numpy as np

from sylvlift.dilation import finite_unitary_dilation, lift_finite, lift_truncated_infinite
from sylvlift.sylvester import solve_kron

rng = np.random.default_rng(1)
q1, _ = np.linalg.qr(rng.standard_normal((3, 3)))
q2, _ = np.linalg.qr(rng.standard_normal((3, 3)))
a = (q1 * [1.0, 0.6, 0.2]) @ q2
b = np.diag([1.5, 2.5, 4.0])
c = rng.standard_normal((3, 3))
x = solve_kron(a, b, c)

u = finite_unitary_dilation(a, 4)
print(f"||U^T U - I|| = {np.abs(u.u.T @ u.u - np.eye(12)).max():.1e}")
print(f"||top(U^3) - A^3|| = {np.linalg.norm(u.compression(3) - np.linalg.matrix_power(a, 3)):.1e}")

print("\n n   ||Y - Z||    gamma^2 ||D X||")
for n in (2, 3, 5, 8):
    lift = lift_finite(a, b, c, x, n)
    print(f"{n:2d}   {lift.y_minus_z:.3e}   {lift.bound:.3e}")

tl = lift_truncated_infinite(a, b, c, x, 8)
print(f"\ninfinite lift, 8 blocks: worst component residual {tl.max_residual:.1e}, "
      f"omitted tail <= {tl.tail_bound:.2e}")
