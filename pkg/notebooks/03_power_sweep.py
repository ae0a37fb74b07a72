# %% [markdown]
# # Drive-power dependence at w = Omega
#
# The standard budget trades shot noise against back action and bottoms out
# at the SQL. The cancelled budget only loses shot noise as the power grows.

# %%
import numpy as np

from cqnc_budget.presets import fig2
from cqnc_budget.spectra import sql_reference
from cqnc_budget.sweeps import default_power_config, find_min_power, power_sweep

p = fig2()
series = power_sweep(default_power_config(p))
P = series.axis_values
for k in range(0, len(P), 50):
    row = "  ".join(f"{n}={series.channel_values[n][k]:.4g}" for n in series.channel_values)
    print(f"P={P[k]:.3e} W  {row}")

# %%
best = find_min_power(p, "standard")
print("standard optimum:", best)
print("analytic P_SQL  :", float(sql_reference(p.omega_m, p).p_sql))

# %% [markdown]
# The added-noise channel keeps falling until the edge of the band, so the
# search reports a boundary result. The power at which each gain gets within
# 1% of its floor shows the effect of the OPA instead.

# %%
for gain in (0.1, 0.3):
    q = p.replace(opa_gain=gain * p.kappa)
    print(gain, find_min_power(q, "added"))
    a = power_sweep(default_power_config(q, channels=("added", "cqnc")))
    near = a.channel_values["added"] <= 1.01 * a.channel_values["cqnc"]
    print(f"  within 1% of the floor from {a.axis_values[np.argmax(near)]:.3e} W")
