"""Closed-form cardinality bounds next to what the simulator measures."""
import json

from fpqc import bounds

print("prop2 threshold (eps=0.1, M=10, c=1):", bounds.prop2_threshold(0.1, 10, 1).threshold)
print("net size ln (eps=0.5, M=2):", bounds.net_log_cardinality(0.5, 2))

# the union bound over the net is never below one for small epsilon
for eps in (0.1, 0.5, 9.9):
    fb = bounds.final_log_probability(eps, 2, 9)
    print(f"eps={eps}: inner={fb.inner:+.4f}  ln P={fb.log_probability:+.3f}  below one: {fb.below_one}")

report = bounds.union_bound_grid_check()
print(f"grid points with ln P < 0: {len(report.checked) - len(report.failures)} of {len(report.checked)}")

print(json.dumps(bounds.evaluate_all(bounds.BoundQuery(epsilon=0.2, modes=3, cardinality=64, t=0.2)), indent=1))
