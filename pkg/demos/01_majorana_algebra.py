"""Majorana operators from Jordan-Wigner strings, and exact monomial products."""
import numpy as np

from fpqc import majorana as mj

M = 2

# c_1 .. c_4 as Pauli strings
for k in range(1, 2 * M + 1):
    print(f"c_{k} =", mj.jordan_wigner(k, M))

# the anticommutation relations, checked densely
c = mj.majorana_matrices(M)
err = max(
    np.abs(mj.anticommutator(c[k], c[l]) - 2 * (k == l) * np.eye(2**M)).max()
    for k in range(2 * M)
    for l in range(2 * M)
)
print("max CAR error:", err)

# monomial products carry exact Z4 phases, no floating point involved
a = mj.majorana(1, M) * mj.majorana(2, M)
b = mj.majorana(2, M) * mj.majorana(1, M)
print("c1 c2 =", mj.phase_label(a.phase), mj.bits_to_str(a.bits))
print("c2 c1 =", mj.phase_label(b.phase), mj.bits_to_str(b.bits))

# |0><0| = (1 - i c1 c2)/2 on a single mode
one = mj.majorana_matrices(1)
print("(1 - i c1 c2)/2 =\n", np.real((np.eye(2) - 1j * one[0] @ one[1]) / 2))

# the channel unitaries i*pi*c_l flip the sign of c_l and nothing else
U = mj.fpqc_unitary(1, M).to_dense()
for k in range(2 * M):
    sign = np.real(np.trace(U @ c[k] @ U.conj().T @ c[k])) / 2**M
    print(f"U_1 c_{k + 1} U_1^dag = {sign:+.0f} c_{k + 1}")

print("serialized:", mj.fpqc_unitary(3, M).to_json())
