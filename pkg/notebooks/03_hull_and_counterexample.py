# %% [markdown]
# # Maximum modulus on the convex hull
#
# On Omega_3 a quadratic with unimodular values on the group can exceed 1 on
# the hull.  Odd orders admit a partial bound via nonnegative hull weights.

# %%
import numpy as np

from cyclobh import GroupParams, evaluate, random_polynomial, sup_norm
from cyclobh.maxmod import build_dn_system, hull_coefficients, hull_sup_estimate, n3_counterexample

p, z0 = n3_counterexample()
print("sup on group", sup_norm(p).value, " |p(z0)|", abs(evaluate(p, (z0,))), " (1+2sqrt3)/4 =",
      (1 + 2 * np.sqrt(3)) / 4)

for N_small in (2, 3, 4):
    s = build_dn_system(N_small)
    w = hull_coefficients(s, s.epsilon0 * np.exp(0.3j))
    print(f"order {s.order}: ||D^-1|| = {s.inverse_inf_norm:.3f}, eps0 = {s.epsilon0:.4f}, "
          f"min weight on the rim {w.min():.3f}")

f = random_polynomial(GroupParams(5, 2), 2, 1.0, "complex_gaussian", 3)
r = hull_sup_estimate(f, samples_per_edge=32)
print("random quadratic on Omega_5^2: hull/group ratio", round(r.ratio, 4))
