"""Which eigenvalue convention do Haar corners follow?

Samples sigma_min(M_r)^2 of the r x r corner of a Haar unitary matrix and
scores two readings against the beta = 2 Jacobi law with a = 0, b = n - 2r:
the squared singular value itself, and that value divided by beta.
"""
import numpy as np

from betajacobi.experiments import ks_critical_value, ks_statistic
from betajacobi.rmt_sampler import sample_batch

n, r, N = 40, 10, 5000
batch = sample_batch(dict(n=n, r=r, field="complex"), "raw", N, 2024, model="haar")
law = lambda lam: 1 - (1 - lam) ** (r * (n - r))
crit = ks_critical_value(N)
for label, values in (("unscaled", batch.values), ("x / beta", batch.values / 2)):
    d = ks_statistic(values, law)
    print(f"{label:9s} KS {d:.4f}  critical {crit:.4f}  {'match' if d < crit else 'reject'}")
print("mean sigma_min^2:", np.mean(batch.values), " law mean:", 1 / (r * (n - r) + 1))
