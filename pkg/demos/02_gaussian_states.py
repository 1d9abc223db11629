"""Gaussian states: normal forms, covariance round trips and entropy."""
import numpy as np

from fpqc import gaussian

rng = np.random.default_rng(1)
M = 3

# a random skew-symmetric generator and its block normal form
r = rng.standard_normal((2 * M, 2 * M))
gamma = r - r.T
nf = gaussian.normal_form(gamma)
print("block values:", np.round(nf.spectrum, 4))
print("reconstruction residual:", np.abs(nf.reconstruct() - gamma).max())

# the thermal state of that generator has mode spectra tanh(block values)
state = gaussian.state_from_generator(gamma)
print("state spectra:", np.round(state.lam, 4), "== tanh:", np.round(np.tanh(nf.spectrum), 4))

# covariance from the dense density agrees with the closed form
rho = state.density()
print("covariance mismatch:", np.abs(gaussian.covariance_of(rho) - state.covariance()).max())

# and the state can be rebuilt from its covariance alone
again = gaussian.state_from_covariance(state.covariance())
print("density mismatch after round trip:", np.abs(again.density() - rho).max())

print("entropy (bits):", round(state.entropy(), 6), " purity:", round(state.purity(), 6))

pure = gaussian.random_gaussian_state(M, "pure", seed=7)
print("random pure state entropy:", pure.entropy(), " purity:", pure.purity())
