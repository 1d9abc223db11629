"""Even fermionic Gaussian states: normal forms, Gaussian unitaries, entropy.

A state is stored as its mode spectrum ``lam`` and an orthogonal frame ``O``.
Its density matrix is ``U_O rho_prod U_O^dag`` where ``rho_prod`` is the
product ``(x)_k diag((1+lam_k)/2, (1-lam_k)/2)`` and ``U_O`` is the Gaussian
unitary with ``U_O c_k U_O^dag = sum_m O[k, m] c_m``.

Correlation matrices follow ``G[m, n] = (i/2) Tr(rho [c_m, c_n])``. Under the
conventions of :mod:`fpqc.majorana` a product state has the mode block
``[[0, -lam], [lam, 0]]``, so ``|0><0|`` has ``G[0, 1] = -1``.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np
from scipy.linalg import expm, schur

from .majorana import DEFAULT_DENSE_BUDGET, check_budget, majorana, majorana_matrices

SeedLike = Union[None, int, np.random.SeedSequence, np.random.Generator]

SKEW_TOL = 1e-12
ORTHO_TOL = 1e-10


def _rng(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def check_skew(gamma: np.ndarray, tol: float = SKEW_TOL) -> np.ndarray:
    gamma = np.asarray(gamma, dtype=float)
    if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1] or gamma.shape[0] % 2:
        raise ValueError("expected a real 2M x 2M matrix")
    if np.max(np.abs(gamma + gamma.T), initial=0.0) > tol * max(1.0, np.max(np.abs(gamma), initial=0.0)):
        raise ValueError("matrix is not skew-symmetric")
    return gamma


def check_orthogonal(o: np.ndarray, tol: float = ORTHO_TOL) -> np.ndarray:
    o = np.asarray(o, dtype=float)
    if o.ndim != 2 or o.shape[0] != o.shape[1]:
        raise ValueError("frame must be square")
    if np.max(np.abs(o.T @ o - np.eye(len(o)))) > tol:
        raise ValueError("frame is not orthogonal")
    return o


def canonical_matrix(values: Sequence[float]) -> np.ndarray:
    """Block diagonal ``(+)_k [[0, v_k], [-v_k, 0]]``."""
    values = np.asarray(values, dtype=float)
    out = np.zeros((2 * len(values), 2 * len(values)))
    idx = 2 * np.arange(len(values))
    out[idx, idx + 1] = values
    out[idx + 1, idx] = -values
    return out


@dataclass(frozen=True)
class NormalForm:
    """``gamma = frame @ canonical_matrix(spectrum) @ frame.T`` with ``spectrum >= 0``.

    ``frame`` has determinant +1 whenever the block orientation allows it;
    a matrix with negative Pfaffian and no zero block needs determinant -1.
    """

    frame: np.ndarray
    spectrum: np.ndarray

    @property
    def modes(self) -> int:
        return len(self.spectrum)

    def reconstruct(self) -> np.ndarray:
        return self.frame @ canonical_matrix(self.spectrum) @ self.frame.T


def normal_form(gamma: np.ndarray, tol: float = 1e-10) -> NormalForm:
    """Block-diagonalize a real skew-symmetric matrix via its real Schur form.

    Blocks are oriented so every value is non-negative and sorted descending,
    ties broken by original block position.
    """
    gamma = check_skew(gamma)
    n = len(gamma)
    scale = max(1.0, np.max(np.abs(gamma), initial=0.0))
    t, z = schur(gamma, output="real")
    blocks = []  # (value, col_a, col_b)
    zeros = []
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > tol * scale:
            a = 0.5 * (t[i, i + 1] - t[i + 1, i])
            blocks.append([a, i, i + 1])
            i += 2
        else:
            zeros.append(i)
            i += 1
    for a, b in zip(zeros[::2], zeros[1::2]):
        blocks.append([0.0, a, b])
    oriented = []
    for pos, (a, ca, cb) in enumerate(blocks):
        if a < 0:
            a, ca, cb = -a, cb, ca
        oriented.append((a, pos, ca, cb))
    oriented.sort(key=lambda blk: (-blk[0], blk[1]))
    spectrum = np.array([blk[0] for blk in oriented])
    cols = [c for blk in oriented for c in blk[2:]]
    frame = z[:, cols]
    if np.linalg.det(frame) < 0:
        # a zero block can absorb the reflection for free
        for k in range(len(spectrum) - 1, -1, -1):
            if spectrum[k] <= tol * scale:
                frame[:, [2 * k, 2 * k + 1]] = frame[:, [2 * k + 1, 2 * k]]
                spectrum[k] = 0.0
                break
    nf = NormalForm(frame, spectrum)
    if np.max(np.abs(nf.reconstruct() - gamma), initial=0.0) > tol * scale:
        raise ArithmeticError("normal form reconstruction residual above tolerance")
    return nf


def so_generator(o: np.ndarray) -> np.ndarray:
    """Real skew-symmetric ``G`` with ``expm(G) == o`` for ``o`` in SO(2M)."""
    o = check_orthogonal(o)
    if np.linalg.det(o) < 0:
        raise ValueError("frame has determinant -1; no real logarithm")
    n = len(o)
    t, z = schur(o, output="real")
    g = np.zeros((n, n))
    minus = []
    i = 0
    while i < n:
        if i + 1 < n and abs(t[i + 1, i]) > 1e-14:
            theta = np.arctan2(0.5 * (t[i, i + 1] - t[i + 1, i]), 0.5 * (t[i, i] + t[i + 1, i + 1]))
            g[i, i + 1], g[i + 1, i] = theta, -theta
            i += 2
        else:
            if t[i, i] < 0:
                minus.append(i)
            i += 1
    for a, b in zip(minus[::2], minus[1::2]):
        g[a, b], g[b, a] = np.pi, -np.pi
    return z @ g @ z.T


def quadratic_hamiltonian(gamma: np.ndarray, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Dense ``(i/2) c^T gamma c``."""
    gamma = check_skew(gamma)
    modes = len(gamma) // 2
    check_budget(modes, budget)
    c = majorana_matrices(modes, budget)
    return 0.5j * np.einsum("kl,kab,lbc->ac", gamma, c, c)


def gaussian_unitary(gamma: np.ndarray, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Dense Gaussian unitary ``U`` with ``U c_k U^dag = sum_m expm(gamma)[k, m] c_m``.

    ``U = exp(i H)`` with ``H = (i/4) c^T gamma c``; the quarter (not half)
    is what makes the induced rotation ``expm(gamma)`` rather than ``expm(2 gamma)``.
    """
    return expm(0.5j * quadratic_hamiltonian(gamma, budget))


def frame_unitary(o: np.ndarray, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
    """Dense unitary ``U`` with ``U c_k U^dag = sum_m o[k, m] c_m`` for any orthogonal ``o``."""
    o = check_orthogonal(o)
    modes = len(o) // 2
    check_budget(modes, budget)
    if np.linalg.det(o) > 0:
        return gaussian_unitary(so_generator(o), budget)
    # c_1 realizes diag(1, -1, ..., -1); compose with the rotation D o
    d = np.ones(len(o))
    d[1:] = -1
    return gaussian_unitary(so_generator(d[:, None] * o), budget) @ majorana(1, modes).to_dense(budget)


def product_density(lam: Sequence[float]) -> np.ndarray:
    rho = np.ones((1, 1))
    for x in lam:
        rho = np.kron(rho, np.diag([(1 + x) / 2, (1 - x) / 2]))
    return rho.astype(complex)


@dataclass(frozen=True)
class FermionicGaussianState:
    """Even Gaussian state given by spectrum ``lam`` in [0, 1] and an orthogonal frame."""

    lam: np.ndarray
    frame: np.ndarray
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float).reshape(-1)
        if np.any(lam < 0) or np.any(lam > 1):
            raise ValueError("spectrum values must lie in [0, 1]")
        frame = check_orthogonal(self.frame)
        if frame.shape != (2 * len(lam), 2 * len(lam)):
            raise ValueError("frame must be 2M x 2M")
        lam.setflags(write=False)
        frame = frame.copy()
        frame.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "frame", frame)

    @property
    def modes(self) -> int:
        return len(self.lam)

    @property
    def is_pure(self) -> bool:
        return bool(np.all(self.lam == 1.0))

    def density(self, budget: int = DEFAULT_DENSE_BUDGET) -> np.ndarray:
        """Dense density matrix, computed once and then shared (read-only)."""
        with self._lock:
            rho = self._cache.get("density")
            if rho is None:
                check_budget(self.modes, budget)
                rho = product_density(self.lam)
                if not np.array_equal(self.frame, np.eye(2 * self.modes)):
                    u = frame_unitary(self.frame, budget)
                    rho = u @ rho @ u.conj().T
                    rho = 0.5 * (rho + rho.conj().T)
                rho.setflags(write=False)
                self._cache["density"] = rho
            return rho

    def covariance(self) -> np.ndarray:
        """Analytic correlation matrix ``O^T G_0 O`` with ``G_0 = -canonical_matrix(lam)``."""
        return self.frame.T @ -canonical_matrix(self.lam) @ self.frame

    def entropy(self) -> float:
        return entropy(self)

    def purity(self) -> float:
        return float(np.prod((1 + self.lam**2) / 2))

    def to_json(self) -> dict:
        return {"M": self.modes, "lambda": self.lam.tolist(), "frame": self.frame.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "FermionicGaussianState":
        state = cls(np.array(data["lambda"], dtype=float), np.array(data["frame"], dtype=float))
        if state.modes != int(data["M"]):
            raise ValueError("M does not match the spectrum length")
        return state


def state_from_spectrum(lam: Sequence[float], frame: Optional[np.ndarray] = None) -> FermionicGaussianState:
    lam = np.asarray(lam, dtype=float).reshape(-1)
    if frame is None:
        frame = np.eye(2 * len(lam))
    return FermionicGaussianState(lam, frame)


def state_from_covariance(gamma: np.ndarray, tol: float = 1e-10) -> FermionicGaussianState:
    """Gaussian state whose correlation matrix is ``gamma``."""
    nf = normal_form(gamma)
    lam = nf.spectrum
    if np.any(lam > 1 + tol):
        raise ValueError("spectrum exceeds 1; not a physical correlation matrix")
    lam = np.minimum(lam, 1.0)
    # with G = F A F^T and G = O^T (-A) O: O = R F^T, R = diag(1, -1, 1, -1, ...)
    r = np.tile([1.0, -1.0], len(lam))
    return FermionicGaussianState(lam, r[:, None] * nf.frame.T)


def state_from_generator(gamma: np.ndarray) -> FermionicGaussianState:
    """Thermal state ``exp(H)/Z`` of ``H = (i/2) c^T gamma c`` (inverse temperature 1).

    Built from the spectrum: the correlation matrix is ``F tanh(A) F^T`` for the
    normal form ``gamma = F A F^T``, so no large matrix exponential is formed.
    """
    nf = normal_form(gamma)
    cov = nf.frame @ canonical_matrix(np.tanh(nf.spectrum)) @ nf.frame.T
    return state_from_covariance(cov)


def covariance_of(rho: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """``G[m, n] = (i/2) Tr(rho [c_m, c_n])`` from a dense density matrix."""
    rho = np.asarray(rho)
    d = rho.shape[0]
    modes = d.bit_length() - 1
    if rho.shape != (d, d) or 2**modes != d:
        raise ValueError("density must be square with power-of-two dimension")
    if abs(np.trace(rho) - 1) > tol:
        raise ValueError("density is not normalized")
    c = majorana_matrices(modes)
    # Tr(rho c_m c_n) for all m, n
    rc = np.einsum("ab,mbc->mac", rho, c)
    prod = np.einsum("mab,nba->mn", rc, c)
    g = 0.5j * (prod - prod.T)
    if np.max(np.abs(g.imag), initial=0.0) > 1e-8:
        raise ArithmeticError("correlation matrix has an imaginary part; density not Hermitian?")
    g = g.real
    return 0.5 * (g - g.T)


def _binary_entropy_bits(p: np.ndarray) -> np.ndarray:
    p = np.clip(p, 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = -np.where(p > 0, p * np.log2(p), 0.0) - np.where(p < 1, (1 - p) * np.log2(1 - p), 0.0)
    return terms


def entropy(state: FermionicGaussianState) -> float:
    """Von Neumann entropy in bits: sum of per-mode binary entropies of ``(1 + lam)/2``."""
    return float(np.sum(_binary_entropy_bits((1 + state.lam) / 2)))


def random_orthogonal(n: int, seed: SeedLike = None) -> np.ndarray:
    """Haar-random ``n x n`` special orthogonal matrix (QR of a Gaussian matrix)."""
    rng = _rng(seed)
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_gaussian_state(modes: int, purity: str = "pure", seed: SeedLike = None) -> FermionicGaussianState:
    """Random state with a Haar frame; ``lam`` all ones (pure) or i.i.d. uniform (mixed)."""
    if modes < 1:
        raise ValueError("modes must be positive")
    if purity not in ("pure", "mixed"):
        raise ValueError("purity must be 'pure' or 'mixed'")
    rng = _rng(seed)
    frame = random_orthogonal(2 * modes, rng)
    lam = np.ones(modes) if purity == "pure" else rng.uniform(0.0, 1.0, modes)
    return FermionicGaussianState(lam, frame)
