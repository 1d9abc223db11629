"""How many random monomials does it take to randomize three modes?"""

from fpqc import experiments

cfg = experiments.ExperimentConfig(modes=3, subset_sizes=(1, 4, 16, 64), trials=50, num_states=100, seed=0)
result = experiments.sweep_cardinality(cfg)

print(f"{'|U|':>5} {'median max':>11} {'q90':>8} {'pass frac':>9}")
for row in result.rows:
    print(f"{row.subset_size:5d} {row.median_max_distance:11.4g} {row.q90:8.4g} {row.pass_fraction:9.2f}")
# the maximum over 100 sampled states is only a lower bound on the sup over all states

conc = experiments.concentration_experiment(
    experiments.ExperimentConfig(modes=3, subset_sizes=(16, 64), trials=2000, seed=0), [0.1, 0.2, 0.4]
)
for row in conc.rows:
    print(f"|U|={row.subset_size:3d} t={row.t:.1f}: tail {row.tail_frequency:.4f} <= {row.bound:.4f} + {row.slack:.4f}")
for a in conc.audits:
    print(f"|U|={a.subset_size:3d}: largest one-swap change {a.max_bounded_difference:.5f} (limit {a.limit:.5f})")

experiments.export(result, "sweep.csv", "csv")
print("wrote sweep.csv")
