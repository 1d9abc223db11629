"""Private channels: the 2M-unitary channel, the full monomial group and attenuation."""
import numpy as np

from fpqc import channels, gaussian, metrics

M = 3
state = gaussian.random_gaussian_state(M, "pure", seed=3)
rho = state.density()
print("input distance to 1/d:", metrics.distance_to_mms(rho, 1))

# averaging over all 4^M monomials randomizes exactly
full = channels.fpqc_full(M)
print("full group output distance:", metrics.distance_to_mms(channels.apply(full, rho), 1))

# the 2M-unitary channel contracts the covariance by (M-2)/M
two_m = channels.fpqc_paper(M)
out = channels.apply(two_m, rho)
dev = np.abs(gaussian.covariance_of(out) - (M - 2) / M * state.covariance()).max()
print("deviation from (M-2)/M contraction:", dev)

# at M = 2 the covariance vanishes but the parity part survives
two = gaussian.random_gaussian_state(2, "pure", seed=3).density()
out2 = channels.apply(channels.fpqc_paper(2), two)
print("M=2 covariance after channel:", np.abs(gaussian.covariance_of(out2)).max())
print("M=2 distance to 1/4:", metrics.distance_to_mms(out2, 1))

# random subsets interpolate between the two
for n in (1, 4, 16, 64):
    ch = channels.fpqc_random_subset(M, n, seed=n)
    print(f"|U| = {n:3d}: distance {metrics.distance_to_mms(channels.apply(ch, rho), 1):.4f}")

# attenuation with xi in [0, 1] is completely positive; outside it need not be
ok = channels.AttenuationChannel(1, (0.3, 0.8))
bad = channels.AttenuationChannel(1, (1.5, 1.5), strict=False)
print("xi = (0.3, 0.8):", channels.choi_cp_check(ok))
print("xi = (1.5, 1.5):", channels.choi_cp_check(bad))

verdict = metrics.pqc_test(full, [state], epsilon=1e-6)
print(verdict)
