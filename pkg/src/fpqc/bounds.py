"""Closed-form cardinality and tail bounds for approximate fermionic randomizers.

Everything is evaluated with natural logarithms and, where the raw quantity can
overflow, in log space. Dimension factors are kept literally as ``2M`` here
(not ``2**M``); these functions reproduce the closed forms as written, not the
physics of the simulator.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional, Sequence


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise ValueError("epsilon must be positive")


def _check_modes(modes: int) -> None:
    if modes < 1:
        raise ValueError("modes must be >= 1")


def net_log_cardinality(eps: float, modes: int) -> float:
    """``ln`` of the epsilon-net size bound ``(5/eps)**(4M)``; negative for ``eps > 5``."""
    _check_eps(eps)
    _check_modes(modes)
    return 4 * modes * math.log(5 / eps)


def proof_net_log_cardinality(eps: float, modes: int) -> float:
    """``ln`` of the net size used in the union bound, ``(20M/eps)**(4M)``."""
    _check_eps(eps)
    _check_modes(modes)
    return 4 * modes * math.log(20 * modes / eps)


def mcdiarmid_log_tail(t: float, differences: Sequence[float]) -> float:
    """``ln(2) - 2 t**2 / sum(c_k**2)`` (unclamped)."""
    if t < 0:
        raise ValueError("t must be non-negative")
    differences = list(differences)
    if not differences or any(c <= 0 for c in differences):
        raise ValueError("bounded differences must be positive")
    return math.log(2) - 2 * t * t / math.fsum(c * c for c in differences)


def mcdiarmid_tail(t: float, differences: Sequence[float]) -> float:
    """Two-sided McDiarmid bound ``2 exp(-2 t**2 / sum c_k**2)`` clamped to [0, 2]."""
    return min(2.0, math.exp(mcdiarmid_log_tail(t, differences)))


@dataclass(frozen=True)
class ConcentrationTail:
    bound: float
    log_bound: float
    centering: float
    centering_hilbert: float


def concentration_tail(t: float, modes: int, cardinality: int) -> ConcentrationTail:
    """One-sided tail ``exp(-|U| t**2 / 2)`` and its centering offset ``2M/|U| + 1/(2M)``.

    ``centering_hilbert`` is the same expression with ``2M`` replaced by ``2**M``,
    reported for comparison against simulations on the ``2**M``-dimensional space.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    _check_modes(modes)
    if cardinality < 1:
        raise ValueError("cardinality must be >= 1")
    log_bound = -cardinality * t * t / 2
    return ConcentrationTail(
        bound=math.exp(log_bound),
        log_bound=log_bound,
        centering=2 * modes / cardinality + 1 / (2 * modes),
        centering_hilbert=2**modes / cardinality + 1 / 2**modes,
    )


@dataclass(frozen=True)
class FinalBound:
    inner: float
    log_probability: float
    below_one: bool
    side_condition: bool


def final_log_probability(eps: float, modes: int, cardinality: int) -> FinalBound:
    """Union bound over the net: ``ln 2 + 4M ln(20M/eps) - |U| * inner**2``.

    ``inner = eps/(4M) - (2M)**(1/(2M))/|U| - 1/(2M)`` is squared as written,
    even when negative. ``side_condition`` reports ``2M < |U| < (2M)**2``.
    """
    _check_eps(eps)
    _check_modes(modes)
    if cardinality < 1:
        raise ValueError("cardinality must be >= 1")
    inner = eps / (4 * modes) - (2 * modes) ** (1 / (2 * modes)) / cardinality - 1 / (2 * modes)
    log_p = math.log(2) + proof_net_log_cardinality(eps, modes) - cardinality * inner * inner
    return FinalBound(inner, log_p, log_p < 0, 2 * modes < cardinality < (2 * modes) ** 2)


@dataclass(frozen=True)
class Prop2Threshold:
    threshold: float
    kappa: float


def prop2_threshold(eps: float, modes: int, c: float) -> Prop2Threshold:
    """``|U| >= 2 kappa M`` with ``kappa = ln(10/eps) / (c eps**2)``."""
    _check_eps(eps)
    _check_modes(modes)
    if not c > 0:
        raise ValueError("c must be positive")
    if eps >= 10:
        raise ValueError("epsilon >= 10 makes ln(10/epsilon) non-positive; threshold meaningless")
    kappa = math.log(10 / eps) / (c * eps * eps)
    return Prop2Threshold(2 * modes * kappa, kappa)


def prop1_threshold(eps: float, modes: int, p: float, kappa: float) -> float:
    """``2 kappa M ln(10 (2M)**((p-1)/p) / eps)``; ``p = inf`` uses exponent 1."""
    _check_eps(eps)
    _check_modes(modes)
    if not p >= 1:
        raise ValueError("p must be >= 1")
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    exponent = 1.0 if math.isinf(p) else (p - 1) / p
    return 2 * kappa * modes * (math.log(10 / eps) + exponent * math.log(2 * modes))


@dataclass(frozen=True)
class BoundQuery:
    epsilon: float = 0.1
    modes: int = 3
    p: float = 1
    cardinality: int = 16
    t: float = 0.1
    c: float = 1.0
    kappa: Optional[float] = None

    def __post_init__(self):
        _check_eps(self.epsilon)
        _check_modes(self.modes)
        if not self.p >= 1:
            raise ValueError("p must be >= 1")
        if self.cardinality < 1:
            raise ValueError("cardinality must be >= 1")
        if self.t < 0:
            raise ValueError("t must be non-negative")
        if not self.c > 0:
            raise ValueError("c must be positive")
        if self.kappa is not None and not self.kappa > 0:
            raise ValueError("kappa must be positive")


def evaluate_all(q: BoundQuery) -> dict:
    """Every evaluator for one query, as a JSON-ready dict.

    ``kappa`` defaults to the value implied by ``c`` through :func:`prop2_threshold`.
    Evaluators whose domain excludes the query report ``{"error": ...}``.
    """
    out: dict = {"query": {k: ("inf" if isinstance(v, float) and math.isinf(v) else v) for k, v in asdict(q).items()}}

    def record(name, fn):
        try:
            value = fn()
        except ValueError as exc:
            out[name] = {"error": str(exc)}
            return None
        out[name] = asdict(value) if hasattr(value, "__dataclass_fields__") else value
        return value

    record("net_log_cardinality", lambda: net_log_cardinality(q.epsilon, q.modes))
    record("proof_net_log_cardinality", lambda: proof_net_log_cardinality(q.epsilon, q.modes))
    diffs = [2 / q.cardinality] * q.cardinality
    record("mcdiarmid_tail", lambda: mcdiarmid_tail(q.t, diffs))
    record("concentration_tail", lambda: concentration_tail(q.t, q.modes, q.cardinality))
    record("final_log_probability", lambda: final_log_probability(q.epsilon, q.modes, q.cardinality))
    p2 = record("prop2_threshold", lambda: prop2_threshold(q.epsilon, q.modes, q.c))
    kappa = q.kappa if q.kappa is not None else (p2.kappa if p2 is not None else None)
    if kappa is None:
        out["prop1_threshold"] = {"error": "no kappa available"}
    else:
        record("prop1_threshold", lambda: prop1_threshold(q.epsilon, q.modes, q.p, kappa))
    return out


# Grid of (epsilon, M, |U|) points for the union-bound check: small epsilon, a
# range of mode counts, and |U| at both ends and the middle of (2M, (2M)**2),
# plus the two boundary values that violate the side condition.
GRID_EPSILONS = (0.05, 0.1, 0.2, 0.5)
GRID_MODES = (2, 3, 4, 8)


def union_bound_grid(epsilons: Iterable[float] = GRID_EPSILONS, modes: Iterable[int] = GRID_MODES) -> list:
    points = []
    for eps in epsilons:
        for m in modes:
            lo, hi = 2 * m, (2 * m) ** 2
            for n in sorted({lo, lo + 1, math.isqrt(lo * hi), hi - 1, hi}):
                points.append((eps, m, n))
    return points


@dataclass(frozen=True)
class GridReport:
    checked: list
    failures: list
    side_condition_violations: list

    @property
    def passes(self) -> bool:
        return bool(self.checked) and not self.failures


def union_bound_grid_check(points: Optional[Iterable[tuple]] = None) -> GridReport:
    """Check ``final_log_probability < 0`` on every grid point satisfying the side condition."""
    checked, failures, violations = [], [], []
    for eps, m, n in union_bound_grid() if points is None else points:
        fb = final_log_probability(eps, m, n)
        row = (eps, m, n, fb.log_probability)
        if not fb.side_condition:
            violations.append(row)
            continue
        checked.append(row)
        if not fb.below_one:
            failures.append(row)
    return GridReport(checked, failures, violations)
