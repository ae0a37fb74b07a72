# %% [markdown]
# # Responses of the three subsystems
#
# The mechanics, the cavity (with its intracavity OPA) and the QD ensemble
# each respond to a drive at signal frequency w through a complex
# susceptibility. This script evaluates them for the fig2 parameter set.

# %%
import numpy as np

from cqnc_budget.model import susceptibilities
from cqnc_budget.presets import fig2
from cqnc_budget.sweeps import hz

p = fig2()
print(f"Omega/2pi = {hz(p.omega_m):.4g} Hz, kappa/2pi = {hz(p.kappa):.4g} Hz")
print(f"g/2pi at {p.power * 1e3:.0f} mW = {hz(p.g):.6g} Hz, nbar = {p.nbar:.4g}")

# %% [markdown]
# The mechanical response peaks just below Omega and is Q = Omega/gamma_m
# times larger there than at DC.

# %%
w = np.linspace(0.5, 1.5, 11) * p.omega_m
s = susceptibilities(w, p)
for wi, chi in zip(w, s.chi_m):
    print(f"w/Omega = {wi / p.omega_m:.2f}   |chi_m| = {abs(chi):10.4g}")

# %% [markdown]
# The QD response chi'_S has the opposite sign to chi_m near resonance. That
# sign is what lets the cavity-QD coupling cancel the back action.

# %%
ratio = s.chi_s_prime / s.chi_m
print("chi'_S / chi_m across the band:")
print(np.round(ratio.real, 8))

# %% [markdown]
# The OPA splits the cavity into an amplified (lambda_+) and a de-amplified
# (lambda_-) quadrature.

# %%
for gain in (0.0, 0.1, 0.2):
    q = p.replace(opa_gain=gain * p.kappa)
    r = susceptibilities(p.omega_m, q)
    print(f"G = {gain:.1f} kappa   kappa|lambda_+|/2 = {abs(r.lambda_plus) * q.kappa / 2:.4f}"
          f"   kappa|lambda_-|/2 = {abs(r.lambda_minus) * q.kappa / 2:.4f}")
