# %% [markdown]
# # Searching for large Bohnenblust-Hille quotients
#
# The quotient ||a||_{2d/(d+1)} / ||f||_sup is maximised by coordinate
# ascent with restarts.  The explicit upper bound is huge by comparison.

# %%
from cyclobh import GroupParams
from cyclobh.bh import bh_constant_search
from cyclobh.bounds import cyclic_bh_bound

for d in (1, 2, 3):
    for n in (2, 3):
        rep = bh_constant_search(GroupParams(3, n), d, 3000, "coordinate_ascent", seed=d * 10 + n)
        print(f"d={d} n={n}: best quotient {rep.best_quotient:.4f}  bound {cyclic_bh_bound(d, 3):.3g}")
