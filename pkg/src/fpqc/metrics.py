"""Schatten norms, distance to the maximally mixed state, and the epsilon-PQC test."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

NEG_FLOOR = 1e-12


def _singular_values(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError("expected a square matrix")
    if np.allclose(a, np.conj(np.swapaxes(a, -1, -2)), rtol=0.0, atol=NEG_FLOOR):
        return np.abs(np.linalg.eigvalsh(a))
    return np.linalg.svd(a, compute_uv=False)


def schatten_norm(a: np.ndarray, p: float = 1) -> float | np.ndarray:
    """``(sum_i s_i**p)**(1/p)`` over singular values ``s``; ``p = inf`` gives the largest.

    Leading batch axes are reduced independently.
    """
    if not p >= 1:
        raise ValueError("Schatten order must satisfy p >= 1")
    s = _singular_values(a)
    if math.isinf(p):
        out = np.max(s, axis=-1)
    elif p == 1:
        out = np.sum(s, axis=-1)
    elif p == 2:
        out = np.sqrt(np.sum(s**2, axis=-1))
    else:
        top = np.max(s, axis=-1, keepdims=True)
        safe = np.where(top > 0, top, 1.0)
        out = np.squeeze(safe, -1) * np.sum((s / safe) ** p, axis=-1) ** (1.0 / p)
    return float(out) if np.ndim(out) == 0 else out


def maximally_mixed(modes: int) -> np.ndarray:
    d = 2**modes
    return np.eye(d, dtype=complex) / d


def distance_to_mms(rho: np.ndarray, p: float = 1, tol: float = 1e-10):
    """``schatten_norm(rho - 1/d, p)`` with ``d`` the Hilbert-space dimension."""
    rho = np.asarray(rho)
    d = rho.shape[-1]
    tr = np.trace(rho, axis1=-2, axis2=-1)
    if np.max(np.abs(tr - 1)) > tol:
        raise ValueError("density is not normalized")
    return schatten_norm(rho - np.eye(d) / d, p)


def pqc_threshold(epsilon: float, p: float, dim: int) -> float:
    """``epsilon / dim**((p-1)/p)``; exactly ``epsilon`` at ``p = 1``."""
    if p == 1:
        return float(epsilon)
    if math.isinf(p):
        return epsilon / dim
    return epsilon / dim ** ((p - 1) / p)


@dataclass(frozen=True)
class PqcVerdict:
    p: float
    epsilon: float
    threshold: float
    measured: float
    passes: bool

    def to_json(self) -> dict:
        out = asdict(self)
        if math.isinf(self.p):
            out["p"] = "inf"
        return out


def pqc_test(ch, states: Sequence[np.ndarray], epsilon: float, p: float = 1, dim: Optional[int] = None) -> PqcVerdict:
    """Worst distance to the maximally mixed state over ``states`` against the epsilon threshold.

    ``ch`` is a channel object accepted by :func:`fpqc.channels.apply`,
    or ``None`` for the identity map. ``dim`` defaults to ``2**M``.
    """
    from .channels import apply

    states = [np.asarray(getattr(s, "density", lambda: s)()) for s in states]
    if not states:
        raise ValueError("need at least one state")
    batch = np.array(states)
    out = batch if ch is None else apply(ch, batch)
    measured = float(np.max(distance_to_mms(out, p)))
    dim = batch.shape[-1] if dim is None else dim
    threshold = pqc_threshold(epsilon, p, dim)
    return PqcVerdict(p, float(epsilon), threshold, measured, measured <= threshold)
