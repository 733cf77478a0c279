"""Continuous-time Markov machinery: generators, transition matrices, evolution.

Conventions follow the column-vector form: a state vector ``phi`` is a column,
``T(t) = exp(t K)`` maps ``phi(0)`` to ``phi(t) = T(t) @ phi(0)``, and a
valid generator has nonnegative off-diagonal entries and zero column sums.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, InvalidGenerator, InvalidRate, NonFiniteEntry

STATE_SUM_TOLERANCE = 1e-9
COLUMN_SUM_TOLERANCE = 1e-12


class GeneratorMode(str, enum.Enum):
    """How the payoff-driven intensity matrices are read.

    ``AS_PRINTED`` keeps the published matrices verbatim, including diagonals
    that leave nonzero column sums when ``k_r != k_w``; evolved states are then
    renormalized. ``COLUMN_GENERATOR`` keeps the off-diagonal rates and sets
    each diagonal to minus its column's off-diagonal sum.
    """

    AS_PRINTED = "as-printed"
    COLUMN_GENERATOR = "column-generator"

    @classmethod
    def parse(cls, value: Union[str, "GeneratorMode"]) -> "GeneratorMode":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-")
        for mode in cls:
            if key in (mode.value, mode.name.lower().replace("_", "-")):
                return mode
        raise ValueError(f"unknown generator mode {value!r}")

    def __str__(self) -> str:
        return self.value


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Probability distribution over labelled Markov states.

    ``raw_total`` is the total mass before renormalization when the vector
    came out of an evolution under a non-conservative (as-printed) generator,
    and 1.0 otherwise.
    """

    labels: tuple[str, ...]
    probs: np.ndarray
    raw_total: float = 1.0

    def __init__(self, probs, labels: Optional[Sequence[str]] = None, raw_total: float = 1.0):
        probs = _readonly(probs)
        if probs.ndim != 1 or probs.size == 0:
            raise DimensionMismatch(f"state vector must be 1-D and nonempty, got shape {probs.shape}")
        if not np.all(np.isfinite(probs)):
            raise NonFiniteEntry("state vector has non-finite entries")
        if np.any(probs < -COLUMN_SUM_TOLERANCE):
            raise ValueError(f"negative probability in state vector {probs}")
        if abs(probs.sum() - 1.0) > STATE_SUM_TOLERANCE:
            raise ValueError(f"state vector sums to {probs.sum()!r}, expected 1")
        if labels is None:
            labels = tuple(str(i) for i in range(probs.size))
        labels = tuple(labels)
        if len(labels) != probs.size:
            raise DimensionMismatch(f"{len(labels)} labels for {probs.size} states")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "raw_total", float(raw_total))

    @property
    def dim(self) -> int:
        return self.probs.size

    def __getitem__(self, label: str) -> float:
        return float(self.probs[self.labels.index(label)])

    def __repr__(self) -> str:
        inner = ", ".join(f"{lab}={p:.4g}" for lab, p in zip(self.labels, self.probs))
        return f"StateVector({inner})"


@dataclass(frozen=True, eq=False)
class IntensityMatrix:
    entries: np.ndarray
    mode: GeneratorMode = GeneratorMode.COLUMN_GENERATOR

    def __init__(self, entries, mode: Union[str, GeneratorMode] = GeneratorMode.COLUMN_GENERATOR):
        entries = _readonly(entries)
        mode = GeneratorMode.parse(mode)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatch(f"intensity matrix must be square, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise NonFiniteEntry("intensity matrix has non-finite entries")
        off = entries - np.diag(np.diag(entries))
        if np.any(off < 0):
            raise InvalidGenerator("off-diagonal rates must be nonnegative")
        if mode is GeneratorMode.COLUMN_GENERATOR:
            drift = np.abs(entries.sum(axis=0)).max()
            if drift > COLUMN_SUM_TOLERANCE * max(1.0, np.abs(entries).max()):
                raise InvalidGenerator(f"columns must sum to zero (worst column off by {drift:.3g})")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "mode", mode)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def column_sums(self) -> np.ndarray:
        return self.entries.sum(axis=0)


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    entries: np.ndarray
    duration: float

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __matmul__(self, other):
        if isinstance(other, TransitionMatrix):
            return TransitionMatrix(_readonly(self.entries @ other.entries), self.duration + other.duration)
        return self.entries @ other


@dataclass(frozen=True)
class MeasurementSelector:
    """States picked out by a diagonal 0/1 measurement matrix."""

    selected_indices: frozenset

    def __init__(self, indices: Iterable[int]):
        object.__setattr__(self, "selected_indices", frozenset(int(i) for i in indices))

    def matrix(self, dim: int) -> np.ndarray:
        self.check(dim)
        diag = np.zeros(dim)
        diag[list(self.selected_indices)] = 1.0
        return np.diag(diag)

    def check(self, dim: int) -> None:
        bad = [i for i in self.selected_indices if not 0 <= i < dim]
        if bad:
            raise DimensionMismatch(f"selector indices {sorted(bad)} outside [0, {dim})")


# --- matrix exponential ----------------------------------------------------

_EPS = np.finfo(float).eps


def _taylor_degree(norm: float) -> int:
    # smallest q with norm**(q+1)/(q+1)! * exp(norm) below machine epsilon
    q, term = 0, 1.0
    while True:
        q += 1
        term *= norm / q
        if term * norm / (q + 1) * math.exp(norm) <= _EPS:
            return q


def expm(a: np.ndarray) -> np.ndarray:
    """Matrix exponential by scaling and squaring around a Taylor core.

    Metzler matrices (nonnegative off-diagonal, which includes every generator)
    are shifted by ``c I`` so that all series terms are nonnegative; the factor
    ``exp(-c)`` is folded back in before squaring. The scaled matrix has norm
    at most 1/2 and the series is cut where the remainder bound drops below
    machine precision, then evaluated in Horner form.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteEntry("matrix has non-finite entries")
    n = a.shape[0]
    ident = np.eye(n)
    diag = np.diag(a)
    shift = 0.0
    if np.all(a - np.diag(diag) >= 0):
        shift = max(0.0, -float(diag.min()))
    b = a + shift * ident
    norm = float(np.abs(b).sum(axis=0).max())
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    b = b / 2.0**squarings

    degree = _DEGREE_AT_HALF if norm > 0.5 else _taylor_degree(max(norm, 1e-300))
    total = ident
    for k in range(degree, 0, -1):
        total = ident + (b @ total) / k
    total = total * math.exp(-shift / 2.0**squarings)
    for _ in range(squarings):
        total = total @ total
    return total


_DEGREE_AT_HALF = _taylor_degree(0.5)


def _as_entries(k: Union[IntensityMatrix, np.ndarray]) -> np.ndarray:
    return k.entries if isinstance(k, IntensityMatrix) else np.asarray(k, dtype=float)


def matrix_exponential(k: Union[IntensityMatrix, np.ndarray], t: float) -> TransitionMatrix:
    """``T(t) = exp(t K)``."""
    if not math.isfinite(t) or t < 0:
        raise ValueError(f"time must be finite and nonnegative, got {t!r}")
    entries = _as_entries(k)
    if not np.all(np.isfinite(entries)):
        raise NonFiniteEntry("intensity matrix has non-finite entries")
    return TransitionMatrix(_readonly(expm(t * entries)), float(t))


def evolve(phi: StateVector, k: IntensityMatrix, t: float) -> StateVector:
    """Propagate a state vector through ``exp(t K)``.

    Under an as-printed generator the result is renormalized and the
    pre-normalization total is kept on ``raw_total``.
    """
    if phi.dim != k.dim:
        raise DimensionMismatch(f"state has {phi.dim} entries, generator is {k.dim}x{k.dim}")
    out = matrix_exponential(k, t).entries @ phi.probs
    out = np.where(out < 0.0, 0.0, out)  # round-off below zero
    if k.mode is GeneratorMode.AS_PRINTED:
        total = float(out.sum())
        return StateVector(out / total, phi.labels, raw_total=total)
    return StateVector(out, phi.labels)


def response_probability(
    phi0: StateVector,
    k: IntensityMatrix,
    t: float,
    selector: Union[MeasurementSelector, Iterable[int]],
) -> float:
    """Probability of observing one of the selected states after time ``t``.

    Equivalent to ``L @ M @ T(t) @ phi0`` with ``L`` the all-ones row.
    """
    if not isinstance(selector, MeasurementSelector):
        selector = MeasurementSelector(selector)
    selector.check(phi0.dim)
    phi = evolve(phi0, k, t)
    return float(math.fsum(phi.probs[i] for i in sorted(selector.selected_indices)))


# --- payoff generators for the categorization task -------------------------


def _check_rates(k_r: float, k_w: float) -> None:
    for name, v in (("k_r", k_r), ("k_w", k_w)):
        if not math.isfinite(v) or v < 0:
            raise InvalidRate(f"{name} must be finite and nonnegative, got {v!r}")
    if k_r == 0 and k_w == 0:
        raise InvalidRate("k_r and k_w cannot both be zero")


def _to_column_generator(entries: np.ndarray) -> np.ndarray:
    out = entries.copy()
    np.fill_diagonal(out, 0.0)
    np.fill_diagonal(out, -out.sum(axis=0))
    return out


def k_good_entries(k_r: float, k_w: float, mode=GeneratorMode.COLUMN_GENERATOR) -> np.ndarray:
    """Raw 3x3 good-category block over (attack, uncertain, withdraw); no rate checks."""
    half = (k_r + k_w) / 2
    printed = np.array(
        [
            [-(3 * k_r + k_w) / 2, k_r, k_r],
            [half, -(k_r + k_w), half],
            [k_w, k_w, -(k_r + 3 * k_w) / 2],
        ]
    )
    if GeneratorMode.parse(mode) is GeneratorMode.COLUMN_GENERATOR:
        return _to_column_generator(printed)
    return printed


def k_bad_entries(k_r: float, k_w: float, mode=GeneratorMode.COLUMN_GENERATOR) -> np.ndarray:
    half = (k_r + k_w) / 2
    printed = np.array(
        [
            [-(k_r + 3 * k_w) / 2, k_w, k_w],
            [half, -(k_r + k_w), half],
            [k_r, k_r, -(3 * k_r + k_w) / 2],
        ]
    )
    if GeneratorMode.parse(mode) is GeneratorMode.COLUMN_GENERATOR:
        return _to_column_generator(printed)
    return printed


def build_K_good(k_r: float, k_w: float, mode=GeneratorMode.COLUMN_GENERATOR) -> IntensityMatrix:
    """Intensity block applied after a face is categorized as good."""
    _check_rates(k_r, k_w)
    return IntensityMatrix(k_good_entries(k_r, k_w, mode), mode)


def build_K_bad(k_r: float, k_w: float, mode=GeneratorMode.COLUMN_GENERATOR) -> IntensityMatrix:
    """Intensity block applied after a face is categorized as bad."""
    _check_rates(k_r, k_w)
    return IntensityMatrix(k_bad_entries(k_r, k_w, mode), mode)


def reversal(n: int) -> np.ndarray:
    """Permutation matrix reversing the order of ``n`` states."""
    return np.eye(n)[::-1]


def assemble_block_K(k_good: IntensityMatrix, k_bad: IntensityMatrix) -> IntensityMatrix:
    """Block-diagonal 6x6 generator; the two categories never exchange mass."""
    if k_good.dim != 3 or k_bad.dim != 3:
        raise DimensionMismatch("both blocks must be 3x3")
    if k_good.mode is not k_bad.mode:
        raise ValueError("blocks must share a generator mode")
    h = np.zeros((6, 6))
    h[:3, :3] = k_good.entries
    h[3:, 3:] = k_bad.entries
    return IntensityMatrix(h, k_good.mode)


# --- two-state demonstration -------------------------------------------------


def two_state_generator(rate_plus_to_minus: float, rate_minus_to_plus: float) -> IntensityMatrix:
    a, b = float(rate_plus_to_minus), float(rate_minus_to_plus)
    if a < 0 or b < 0:
        raise InvalidRate("rates must be nonnegative")
    return IntensityMatrix([[-a, b], [a, -b]])


class TotalProbabilityDemo(NamedTuple):
    p_plus_given_plus: float
    p_plus_given_minus: float
    p_plus_unknown: float
    law_residual: float


PLUS = MeasurementSelector([0])


def total_probability_demo(k: IntensityMatrix, t: float, mix: Sequence[float]) -> TotalProbabilityDemo:
    """Show that the classical two-state chain obeys the law of total probability.

    Known-start conditionals are ``T[+,+](t)`` and ``T[+,-](t)``; the unknown
    start mixes them with weights ``mix``, and ``law_residual`` is the gap
    between the direct computation and the two-path sum.
    """
    if k.dim != 2:
        raise DimensionMismatch(f"the demonstration needs a 2x2 generator, got {k.dim}x{k.dim}")
    if len(mix) != 2:
        raise DimensionMismatch("mix must hold (phi_plus, phi_minus)")
    plus, minus = float(mix[0]), float(mix[1])
    labels = ("+", "-")
    given_plus = response_probability(StateVector([1.0, 0.0], labels), k, t, PLUS)
    given_minus = response_probability(StateVector([0.0, 1.0], labels), k, t, PLUS)
    unknown = response_probability(StateVector([plus, minus], labels), k, t, PLUS)
    residual = unknown - (plus * given_plus + minus * given_minus)
    return TotalProbabilityDemo(given_plus, given_minus, unknown, residual)
