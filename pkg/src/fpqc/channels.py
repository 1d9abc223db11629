"""Attenuation channels, random-unitary (Kraus) channels and CP/TP diagnostics.

All channel maps are linear and act on the trailing two axes, so they accept
a single operator ``(d, d)`` or a batch ``(..., d, d)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from .majorana import (
    DEFAULT_DENSE_BUDGET,
    MajoranaMonomial,
    dense_monomial,
    check_budget,
    fpqc_unitary,
    monomial_table,
    phase_from_label,
    phase_label,
)

EXPANSION_BUDGET = 6
CHOI_BUDGET = 4


def _modes_of(op: np.ndarray) -> int:
    d = op.shape[-1]
    modes = d.bit_length() - 1
    if op.shape[-2] != d or 2**modes != d or modes < 1:
        raise ValueError("operator must be square with dimension 2**M, M >= 1")
    return modes


@dataclass(frozen=True)
class MonomialExpansion:
    """Coefficients ``alpha_b = Tr(c(b)^dag X)`` indexed by ``MajoranaMonomial.index``.

    ``X = 2**-M * sum_b alpha_b c(b)``. ``coefficients`` may carry leading batch axes.
    """

    modes: int
    coefficients: np.ndarray

    def coefficient(self, bits: Sequence[int]) -> complex:
        return self.coefficients[..., MajoranaMonomial(self.modes, tuple(bits)).index]

    def to_dict(self, tol: float = 0.0) -> dict:
        """``{bit string: alpha}`` for a single (unbatched) expansion."""
        out = {}
        for index, alpha in enumerate(self.coefficients):
            if abs(alpha) > tol:
                bits = MajoranaMonomial.from_index(self.modes, index).bits
                out["".join(map(str, bits))] = complex(alpha)
        return out

    def reconstruct(self) -> np.ndarray:
        flips, values = monomial_table(self.modes)
        d = 2**self.modes
        alpha = self.coefficients
        out = np.zeros(alpha.shape[:-1] + (d, d), dtype=complex)
        cols = np.arange(d)
        for x in range(d):
            sel = np.flatnonzero(flips == x)
            # entries (j ^ x, j) of every monomial with this flip pattern
            out[..., cols ^ x, cols] = alpha[..., sel] @ values[sel]
        return out / d


def expand(rho: np.ndarray) -> MonomialExpansion:
    rho = np.asarray(rho, dtype=complex)
    modes = _modes_of(rho)
    check_budget(modes, EXPANSION_BUDGET)
    flips, values = monomial_table(modes)
    cols = np.arange(2**modes)
    gathered = rho[..., flips[:, None] ^ cols[None, :], cols[None, :]]
    return MonomialExpansion(modes, np.sum(values.conj() * gathered, axis=-1))


@dataclass(frozen=True)
class AttenuationChannel:
    """Damps each monomial ``c(b)`` by the product of ``xi_k`` over ``b_k = 1``.

    ``strict=False`` admits coefficients outside [0, 1], e.g. to probe CP failures.
    """

    modes: int
    xi: tuple
    strict: bool = True

    def __post_init__(self):
        xi = tuple(float(x) for x in self.xi)
        if len(xi) != 2 * self.modes:
            raise ValueError(f"need {2 * self.modes} attenuation coefficients")
        if self.strict and any(not 0.0 <= x <= 1.0 for x in xi):
            raise ValueError("attenuation coefficients must lie in [0, 1]")
        object.__setattr__(self, "xi", xi)

    @cached_property
    def factors(self) -> np.ndarray:
        idx = np.arange(4**self.modes)
        out = np.ones(len(idx))
        for k, x in enumerate(self.xi):
            out = np.where((idx >> k) & 1, out * x, out)
        return out

    def to_json(self) -> dict:
        return {"kind": "attenuation", "M": self.modes, "xi": list(self.xi)}


def apply_attenuation(ch: AttenuationChannel, rho: np.ndarray) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if _modes_of(rho) != ch.modes:
        raise ValueError("dimension mismatch")
    ex = expand(rho)
    return MonomialExpansion(ch.modes, ex.coefficients * ch.factors).reconstruct()


@dataclass(frozen=True)
class RandomUnitaryChannel:
    """``rho -> sum_l w_l U_l rho U_l^dag`` with monomial unitaries ``U_l``."""

    modes: int
    kraus: tuple
    kind: str = "random_unitary"
    budget: int = field(default=DEFAULT_DENSE_BUDGET, compare=False)

    def __post_init__(self):
        kraus = tuple((float(w), u) for w, u in self.kraus)
        if not kraus:
            raise ValueError("channel needs at least one Kraus operator")
        if any(w <= 0 for w, _ in kraus):
            raise ValueError("weights must be positive")
        if abs(sum(w for w, _ in kraus) - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1")
        if any(u.modes != self.modes for _, u in kraus):
            raise ValueError("mode mismatch among Kraus operators")
        object.__setattr__(self, "kraus", kraus)
        if self.modes <= self.budget:
            u = self.unitaries
            eye = np.eye(2**self.modes)
            if np.max(np.abs(u @ u.conj().swapaxes(-1, -2) - eye)) > 1e-12:
                raise ValueError("Kraus operator is not unitary")

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.kraus])

    @cached_property
    def unitaries(self) -> np.ndarray:
        """Dense stack ``(n, d, d)``; built once, read-only."""
        check_budget(self.modes, self.budget)
        stack = np.array([dense_monomial(u.modes, u.index, u.phase) for _, u in self.kraus])
        stack.setflags(write=False)
        return stack

    def __len__(self):
        return len(self.kraus)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "M": self.modes,
            "kraus": [
                {"bits": format(u.index, "x"), "phase": phase_label(u.phase), "weight": w}
                for w, u in self.kraus
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "RandomUnitaryChannel":
        modes = int(data["M"])
        kraus = [
            (k["weight"], MajoranaMonomial.from_index(modes, int(k["bits"], 16), phase_from_label(k["phase"])))
            for k in data["kraus"]
        ]
        return cls(modes, tuple(kraus), kind=data.get("kind", "random_unitary"))


def uniform_channel(monomials: Sequence[MajoranaMonomial], kind: str = "random_unitary") -> RandomUnitaryChannel:
    monomials = list(monomials)
    w = 1.0 / len(monomials)
    return RandomUnitaryChannel(monomials[0].modes, tuple((w, m) for m in monomials), kind=kind)


def fpqc_paper(modes: int) -> RandomUnitaryChannel:
    """Uniform mixture of the ``2M`` unitaries ``i pi c_l``."""
    if modes < 1:
        raise ValueError("modes must be positive")
    return uniform_channel([fpqc_unitary(ell, modes) for ell in range(1, 2 * modes + 1)], kind="fpqc_paper")


def fpqc_full(modes: int) -> RandomUnitaryChannel:
    """Uniform mixture over all ``4**M`` Hermitian monomials: an exact randomizer."""
    check_budget(modes, EXPANSION_BUDGET)
    monomials = [MajoranaMonomial.from_index(modes, i).hermitian() for i in range(4**modes)]
    return uniform_channel(monomials, kind="fpqc_full")


def fpqc_random_subset(modes: int, n: int, seed=None) -> RandomUnitaryChannel:
    """``n`` Hermitian monomials drawn uniformly with replacement from the monomial group."""
    if not 1 <= n <= 4**modes:
        raise ValueError(f"subset size must lie in 1..{4**modes}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    picks = rng.integers(0, 4**modes, size=n)
    monomials = [MajoranaMonomial.from_index(modes, int(i)).hermitian() for i in picks]
    return uniform_channel(monomials, kind="fpqc_random_subset")


def apply(ch: Union[RandomUnitaryChannel, AttenuationChannel], rho: np.ndarray) -> np.ndarray:
    """Channel output for an operator or a batch of operators."""
    if isinstance(ch, AttenuationChannel):
        return apply_attenuation(ch, rho)
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[-1] != 2**ch.modes or _modes_of(rho) != ch.modes:
        raise ValueError("dimension mismatch")
    u = ch.unitaries
    conj = u @ rho[..., None, :, :] @ u.conj().swapaxes(-1, -2)
    return np.einsum("l,...lab->...ab", ch.weights, conj)


@dataclass(frozen=True)
class ChoiReport:
    is_cp: bool
    is_tp: bool
    min_eigenvalue: float
    tp_residual: float


def choi_matrix(ch) -> np.ndarray:
    """``sum_ij |i><j| (x) ch(|i><j|)``, input factor first."""
    check_budget(ch.modes, CHOI_BUDGET)
    d = 2**ch.modes
    units = np.zeros((d, d, d, d), dtype=complex)
    units[np.arange(d)[:, None], np.arange(d)[None, :], np.arange(d)[:, None], np.arange(d)[None, :]] = 1.0
    images = apply(ch, units)  # images[i, j] = ch(|i><j|)
    return images.transpose(0, 2, 1, 3).reshape(d * d, d * d)


def choi_cp_check(ch, tol: float = 1e-10) -> ChoiReport:
    choi = choi_matrix(ch)
    d = 2**ch.modes
    min_eig = float(np.min(np.linalg.eigvalsh(0.5 * (choi + choi.conj().T))))
    partial = np.einsum("iaja->ij", choi.reshape(d, d, d, d))
    tp_res = float(np.max(np.abs(partial - np.eye(d))))
    return ChoiReport(min_eig >= -tol, tp_res <= tol, min_eig, tp_res)
