# %% [markdown]
# # Learning from samples, juntas, and qudit observables

# %%
from cyclobh import GroupParams, random_polynomial, sup_norm
from cyclobh.bh import bh_quotient
from cyclobh.hw import HWObservable, hw_analyze, hw_bh_quotient, random_observable
from cyclobh.learning import chernoff_sample_size, junta_approximate, learning_error_curve

P = GroupParams(3, 5)
f = random_polynomial(P, 2, 0.3, "complex_gaussian", 11)
f = f / sup_norm(f).value
bh = max(bh_quotient(f, 2).quotient, 1.0)
size = chernoff_sample_size(0.3, 0.2, 2, 3, 5, bh)
print(f"measured quotient {bh:.3f}; M_b = {size.M_b}, b = {size.b:.2e}, headline M = {size.M}")

curve = learning_error_curve(f, 2, M_grid=[50, 200, 800, 3200], b=0.02, trials=10)
print(curve.summary_csv())

j = junta_approximate(f, 2, 0.3, bh)
print(f"junta on {j.k} coordinates (bound {j.k_bound:.3g}), L2 error {j.l2_error:.3f}")

# %% [markdown]
# Observables on qudits expand in the shift/phase basis X^l Z^m.

# %%
A = random_observable(3, 2, 2, 0.5, seed=4)
assert hw_analyze(A.to_dense(), 3, 2).coeff_array().size == len(A)
print(hw_bh_quotient(A, 2).to_json())
print(hw_bh_quotient(HWObservable(3, 1, {((0,), (0,)): 1, ((1,), (0,)): 1}), 1).quotient)
