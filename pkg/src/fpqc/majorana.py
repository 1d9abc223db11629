"""Majorana operators, Jordan-Wigner Pauli strings and monomial algebra.

Phases are stored exactly as an integer ``k`` meaning ``i**k`` (mod 4), so the
monomial algebra never touches floating point. Dense matrices are produced
only on request and only up to a fixed mode budget.

Conventions: qubit 1 is the most significant tensor factor, ``|0>`` is the
``+1`` eigenvector of Z and Y is the standard ``[[0, -i], [i, 0]]``. With
these, ``c_1 = X``, ``c_2 = Y`` for one mode and ``|0><0| = (1 - i c_1 c_2)/2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np

DEFAULT_DENSE_BUDGET = 10

_PHASE_LABELS = ("+1", "+i", "-1", "-i")
_PHASE_VALUES = (1, 1j, -1, -1j)

_PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# single-qubit products: (a, b) -> (phase exponent, letter) with a*b = i**k * letter
_PAULI_PRODUCT = {}
for _a in "IXYZ":
    _PAULI_PRODUCT[("I", _a)] = (0, _a)
    _PAULI_PRODUCT[(_a, "I")] = (0, _a)
    _PAULI_PRODUCT[(_a, _a)] = (0, "I")
for _a, _b, _c in (("X", "Y", "Z"), ("Y", "Z", "X"), ("Z", "X", "Y")):
    _PAULI_PRODUCT[(_a, _b)] = (1, _c)
    _PAULI_PRODUCT[(_b, _a)] = (3, _c)


class DenseBudgetError(ValueError):
    """Raised when a dense realization would exceed the mode budget."""


def phase_label(k: int) -> str:
    return _PHASE_LABELS[k % 4]


def phase_from_label(label: str) -> int:
    try:
        return _PHASE_LABELS.index(label)
    except ValueError:
        raise ValueError(f"unknown phase label {label!r}") from None


def phase_value(k: int) -> complex:
    return _PHASE_VALUES[k % 4]


def check_budget(modes: int, budget: int = DEFAULT_DENSE_BUDGET) -> None:
    if modes > budget:
        raise DenseBudgetError(
            f"dense realization of {modes} modes exceeds the budget of {budget} modes"
        )


@dataclass(frozen=True)
class PauliString:
    """``i**phase`` times a tensor product of single-qubit Paulis."""

    modes: int
    letters: str
    phase: int = 0

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("modes must be positive")
        if len(self.letters) != self.modes or set(self.letters) - set("IXYZ"):
            raise ValueError(f"letters must be {self.modes} characters from IXYZ")
        object.__setattr__(self, "phase", self.phase % 4)

    def __mul__(self, other: "PauliString") -> "PauliString":
        if other.modes != self.modes:
            raise ValueError("mode mismatch")
        k = self.phase + other.phase
        out = []
        for a, b in zip(self.letters, other.letters):
            dk, c = _PAULI_PRODUCT[(a, b)]
            k += dk
            out.append(c)
        return PauliString(self.modes, "".join(out), k)

    def to_dense(self, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
        check_budget(self.modes, budget)
        mat = np.array([[phase_value(self.phase)]], dtype=complex)
        for letter in self.letters:
            mat = np.kron(mat, _PAULI_MATRICES[letter])
        return mat

    def __str__(self):
        return f"{phase_label(self.phase)}*{self.letters}"


@dataclass(frozen=True)
class MajoranaMonomial:
    """``i**phase * c_1^b_1 c_2^b_2 ... c_2M^b_2M`` in ascending index order."""

    modes: int
    bits: tuple
    phase: int = 0

    def __post_init__(self):
        if self.modes < 1:
            raise ValueError("modes must be positive")
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != 2 * self.modes or set(bits) - {0, 1}:
            raise ValueError(f"bits must be a 0/1 sequence of length {2 * self.modes}")
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, modes: int) -> "MajoranaMonomial":
        return cls(modes, (0,) * (2 * modes))

    @classmethod
    def from_index(cls, modes: int, index: int, phase: int = 0) -> "MajoranaMonomial":
        """Monomial whose bit ``b_k`` is binary digit ``k - 1`` of ``index``."""
        if not 0 <= index < 4**modes:
            raise ValueError("index out of range")
        return cls(modes, tuple((index >> k) & 1 for k in range(2 * modes)), phase)

    @property
    def index(self) -> int:
        return sum(b << k for k, b in enumerate(self.bits))

    @property
    def degree(self) -> int:
        return sum(self.bits)

    def __mul__(self, other: "MajoranaMonomial") -> "MajoranaMonomial":
        return multiply(self, other)

    def scaled(self, k: int) -> "MajoranaMonomial":
        """Multiply by ``i**k``."""
        return MajoranaMonomial(self.modes, self.bits, self.phase + k)

    def adjoint(self) -> "MajoranaMonomial":
        # reversing d anticommuting factors costs (-1)**(d(d-1)/2); conj(i**k) = i**-k
        d = self.degree
        return MajoranaMonomial(self.modes, self.bits, -self.phase + 2 * (d * (d - 1) // 2))

    def hermitian(self) -> "MajoranaMonomial":
        """Same bits, phase chosen from {+1, +i} so that the operator is Hermitian."""
        d = self.degree
        return MajoranaMonomial(self.modes, self.bits, (d * (d - 1) // 2) % 2)

    def to_pauli(self) -> PauliString:
        out = PauliString(self.modes, "I" * self.modes, self.phase)
        for k, b in enumerate(self.bits, start=1):
            if b:
                out = out * jordan_wigner(k, self.modes)
        return out

    def to_dense(self, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
        check_budget(self.modes, budget)
        return dense_monomial(self.modes, self.index, self.phase).copy()

    def to_json(self) -> dict:
        return {"M": self.modes, "bits": format(self.index, "x"), "phase": phase_label(self.phase)}

    @classmethod
    def from_json(cls, data: dict) -> "MajoranaMonomial":
        return cls.from_index(int(data["M"]), int(data["bits"], 16), phase_from_label(data["phase"]))


@lru_cache(maxsize=8192)
def _cached_dense_monomial(modes: int, index: int, phase: int) -> np.ndarray:
    mat = MajoranaMonomial.from_index(modes, index, phase).to_pauli().to_dense(modes)
    mat.setflags(write=False)
    return mat


def dense_monomial(modes: int, index: int, phase: int = 0) -> np.ndarray:
    """Dense ``i**phase c(b)``; read-only and memoized for up to 6 modes."""
    if modes <= 6:
        return _cached_dense_monomial(modes, index, phase % 4)
    return MajoranaMonomial.from_index(modes, index, phase).to_pauli().to_dense(modes)


def jordan_wigner(k: int, modes: int) -> PauliString:
    """Majorana ``c_k`` as a Pauli string: Z on earlier qubits, X (odd k) or Y (even k)."""
    if not 1 <= k <= 2 * modes:
        raise ValueError(f"Majorana index {k} outside 1..{2 * modes}")
    j = (k + 1) // 2
    letter = "X" if k % 2 else "Y"
    return PauliString(modes, "Z" * (j - 1) + letter + "I" * (modes - j))


def majorana(k: int, modes: int) -> MajoranaMonomial:
    if not 1 <= k <= 2 * modes:
        raise ValueError(f"Majorana index {k} outside 1..{2 * modes}")
    bits = [0] * (2 * modes)
    bits[k - 1] = 1
    return MajoranaMonomial(modes, tuple(bits))


def multiply(a: MajoranaMonomial, b: MajoranaMonomial) -> MajoranaMonomial:
    """Exact product of two monomials.

    Each factor of ``b`` is moved left past the factors of ``a`` with a larger
    index, one sign per transposition; repeated factors then square to 1.
    """
    if a.modes != b.modes:
        raise ValueError("mode mismatch")
    swaps = 0
    above = 0  # number of a-factors with index greater than the current one
    for ai, bi in zip(reversed(a.bits), reversed(b.bits)):
        if bi:
            swaps += above
        above += ai
    bits = tuple(x ^ y for x, y in zip(a.bits, b.bits))
    return MajoranaMonomial(a.modes, bits, a.phase + b.phase + 2 * (swaps % 2))


def parity_operator(modes: int) -> MajoranaMonomial:
    """``(-1)**M c_1 c_2 ... c_2M``."""
    if modes < 1:
        raise ValueError("modes must be positive")
    return MajoranaMonomial(modes, (1,) * (2 * modes), 2 * (modes % 2))


def fpqc_unitary(ell: int, modes: int) -> MajoranaMonomial:
    """``U_ell = i * pi * c_ell``; conjugation flips the sign of ``c_ell`` only."""
    return multiply(parity_operator(modes).scaled(1), majorana(ell, modes))


def all_monomials(modes: int, hermitian: bool = False) -> Iterator[MajoranaMonomial]:
    for index in range(4**modes):
        m = MajoranaMonomial.from_index(modes, index)
        yield m.hermitian() if hermitian else m


def to_dense(op: Union[MajoranaMonomial, PauliString], budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    return op.to_dense(budget)


@lru_cache(maxsize=16)
def majorana_matrices(modes: int, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Stack of dense ``c_1 .. c_2M``, shape ``(2M, 2**M, 2**M)``; read-only."""
    stack = np.array([jordan_wigner(k, modes).to_dense(budget) for k in range(1, 2 * modes + 1)])
    stack.setflags(write=False)
    return stack


@lru_cache(maxsize=8)
def monomial_table(modes: int) -> tuple:
    """Sparse action of every canonical monomial ``c(b)`` (phase +1).

    Returns ``(flips, values)`` with shapes ``(4**M,)`` and ``(4**M, 2**M)`` such that
    ``c(b)[j ^ flips[b], j] == values[b, j]`` and every other entry is zero.
    Monomials are indexed as in :meth:`MajoranaMonomial.from_index`.
    """
    check_budget(modes, 6)
    d = 2**modes
    cols = np.arange(d)
    # bit of qubit q (1-based, most significant first) in basis index j
    qbits = np.array([(cols >> (modes - q)) & 1 for q in range(1, modes + 1)])
    flips = np.zeros(4**modes, dtype=np.int64)
    values = np.empty((4**modes, d), dtype=complex)
    for m in all_monomials(modes):
        p = m.to_pauli()
        val = np.full(d, phase_value(p.phase), dtype=complex)
        flip = 0
        for q, letter in enumerate(p.letters):
            c = qbits[q]
            sign = 1 - 2 * c
            if letter in "XY":
                flip |= 1 << (modes - 1 - q)
            if letter == "Y":
                val = val * (1j * sign)
            elif letter == "Z":
                val = val * sign
        flips[m.index] = flip
        values[m.index] = val
    flips.setflags(write=False)
    values.setflags(write=False)
    return flips, values


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b + b @ a


def bits_to_str(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)
