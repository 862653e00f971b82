"""Singular value decay, with and without normality.

Normal coefficients with separated spectra force geometric decay of the
solution's singular values.  For a non-normal contraction A the dilation
argument still gives decay, at half the rate.  Separation of spectra alone
is not enough: the last example has rank-one C and X = I.
"""
import numpy as np

from sylvlift.decay import bt_decay_check, fastdecay_check
from sylvlift.dilation import counterexample_instance
from sylvlift.sylvester import solve_kron

rng = np.random.default_rng(2)
n = 20
c = np.outer(rng.standard_normal(n), rng.standard_normal(n))

a_diag, b_diag = rng.uniform(-1, 1, n), rng.uniform(2, 4, n)
x = solve_kron(np.diag(a_diag), np.diag(b_diag), c)
rep = bt_decay_check(a_diag, b_diag, c, x, k_max=8, l_max=1)
print("normal coefficients: index, s_i(X), bound")
for idx, bound in rep.bound_curve[:6]:
    print(f"  {idx:2d}  {rep.singular_values[idx - 1]:.3e}  {bound:.3e}")

amat = rng.standard_normal((n, n))
amat /= np.linalg.norm(amat, 2)
q, _ = np.linalg.qr(rng.standard_normal((n, n)))
bmat = (q * rng.uniform(2, 4, n)) @ q.T
x = solve_kron(amat, 0.5 * (bmat + bmat.T), c)
rep = fastdecay_check(c, x, 2.0, 4.0, k_max=5, l_max=1)
print("\nnon-normal A: index, s_i(X), bound")
for idx, bound in rep.bound_curve:
    print(f"  {idx:2d}  {rep.singular_values[idx - 1]:.3e}  {bound:.3e}")

ce = counterexample_instance(5)
print(f"\nno decay: rank(C) = 1, s(X) = {np.linalg.svd(ce.x, compute_uv=False)}")
