"""Dempster-Shafer bodies of evidence over a finite frame of discernment.

Subsets of a frame are encoded as integer bit masks against the frame's label
order, so equality and inclusion tests are exact bit operations. Everything
here is an immutable value; the operations are plain functions.
"""

from __future__ import annotations

import enum
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Union

from .errors import (
    DuplicateFocalSet,
    EmptyFocalSet,
    InvalidMass,
    MassSumViolation,
    ParseError,
    UnknownLabel,
)

SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class FrameOfDiscernment:
    """Ordered set of mutually exclusive singleton outcomes."""

    labels: tuple[str, ...]
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __init__(self, labels: Iterable[str]):
        labels = tuple(str(label) for label in labels)
        if not labels:
            raise ValueError("a frame needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValueError(f"frame labels must be unique: {labels}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.labels)) - 1

    def encode(self, members: Iterable[str]) -> int:
        mask = 0
        for label in members:
            try:
                mask |= 1 << self._index[label]
            except KeyError:
                raise UnknownLabel(f"{label!r} is not in frame {self.labels}") from None
        return mask

    def decode(self, mask: int) -> tuple[str, ...]:
        return tuple(lab for i, lab in enumerate(self.labels) if mask >> i & 1)

    def subset(self, *members: str) -> FocalSet:
        return FocalSet(self, self.encode(members))

    def singleton(self, label: str) -> FocalSet:
        return self.subset(label)

    @property
    def full(self) -> FocalSet:
        return FocalSet(self, self.full_mask)


@dataclass(frozen=True)
class FocalSet:
    """A nonempty subset of a frame."""

    frame: FrameOfDiscernment
    mask: int

    def __post_init__(self):
        if self.mask == 0:
            raise EmptyFocalSet("focal sets must be nonempty")
        if self.mask & ~self.frame.full_mask:
            raise UnknownLabel(f"mask {self.mask:#b} reaches outside frame {self.frame.labels}")

    @property
    def members(self) -> tuple[str, ...]:
        return self.frame.decode(self.mask)

    @property
    def cardinality(self) -> int:
        return _popcount(self.mask)

    def issubset(self, other: FocalSet) -> bool:
        return self.mask & ~other.mask == 0

    def __str__(self) -> str:
        return "{" + ",".join(self.members) + "}"


SubsetLike = Union[FocalSet, str, Iterable[str]]


def _popcount(mask: int) -> int:
    return mask.bit_count()


def _to_mask(frame: FrameOfDiscernment, subset: SubsetLike) -> int:
    if isinstance(subset, FocalSet):
        if subset.frame.labels != frame.labels:
            # same labels in another order are still meaningful
            return frame.encode(subset.members)
        return subset.mask
    if isinstance(subset, str):
        subset = (subset,)
    mask = frame.encode(subset)
    if mask == 0:
        raise EmptyFocalSet("the empty set cannot carry mass")
    return mask


@dataclass(frozen=True)
class MassFunction:
    """A normalized basic probability assignment.

    Only focal elements (strictly positive masses) are stored, ordered by
    cardinality and then by mask. Build instances with :func:`make_mass`.
    """

    frame: FrameOfDiscernment
    masses: tuple[tuple[int, float], ...]

    def __len__(self) -> int:
        return len(self.masses)

    def __iter__(self):
        for mask, value in self.masses:
            yield FocalSet(self.frame, mask), value

    def mass(self, subset: SubsetLike) -> float:
        mask = _to_mask(self.frame, subset)
        for m, value in self.masses:
            if m == mask:
                return value
        return 0.0

    __getitem__ = mass

    @property
    def is_bayesian(self) -> bool:
        return all(_popcount(mask) == 1 for mask, _ in self.masses)

    def entries(self) -> list[tuple[tuple[str, ...], float]]:
        """Focal elements as ``(labels, mass)`` pairs, accepted back by :func:`make_mass`."""
        return [(self.frame.decode(mask), value) for mask, value in self.masses]


@dataclass(frozen=True)
class ProbabilityDistribution:
    frame: FrameOfDiscernment
    probs: tuple[float, ...]

    def __getitem__(self, label: str) -> float:
        return self.probs[self.frame.labels.index(label)]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.frame.labels, self.probs))


def make_mass(frame: FrameOfDiscernment, entries) -> MassFunction:
    """Validate ``(subset, mass)`` pairs into a :class:`MassFunction`.

    ``entries`` may also be a mapping. Zero masses are dropped. A total within
    1e-9 of one is accepted and rescaled to sum to one.
    """
    if isinstance(entries, Mapping):
        entries = entries.items()
    collected: dict[int, float] = {}
    for subset, value in entries:
        mask = _to_mask(frame, subset)
        if mask in collected:
            raise DuplicateFocalSet(f"{frame.decode(mask)} assigned twice")
        value = float(value)
        if not math.isfinite(value) or value < 0.0 or value > 1.0:
            raise InvalidMass(f"mass {value!r} for {frame.decode(mask)} is outside [0, 1]")
        collected[mask] = value
    total = math.fsum(collected.values())
    if abs(total - 1.0) > SUM_TOLERANCE:
        raise MassSumViolation(f"masses sum to {total!r}, expected 1")
    # already normalized to rounding: keep values bit-exact so reads round-trip
    scale = 1.0 if abs(total - 1.0) <= 4 * sys.float_info.epsilon else total
    masses = tuple(
        (mask, value / scale)
        for mask, value in sorted(collected.items(), key=lambda kv: (_popcount(kv[0]), kv[0]))
        if value > 0.0
    )
    return MassFunction(frame, masses)


def bayesian_mass(frame: FrameOfDiscernment, probs: Iterable[float]) -> MassFunction:
    """Mass function whose focal elements are the frame's singletons."""
    return make_mass(frame, [((label,), p) for label, p in zip(frame.labels, probs)])


def belief(m: MassFunction, subset: SubsetLike) -> float:
    """Total mass committed to subsets of ``subset``."""
    mask = _to_mask(m.frame, subset)
    if mask == m.frame.full_mask:
        return 1.0
    return math.fsum(v for b, v in m.masses if b & ~mask == 0)


def plausibility(m: MassFunction, subset: SubsetLike) -> float:
    """Total mass that does not contradict ``subset``."""
    mask = _to_mask(m.frame, subset)
    if mask == m.frame.full_mask:
        return 1.0
    return math.fsum(v for b, v in m.masses if b & mask)


def pignistic(m: MassFunction) -> ProbabilityDistribution:
    """Share each focal mass equally among its members."""
    n = len(m.frame)
    parts: list[list[float]] = [[] for _ in range(n)]
    for mask, value in m.masses:
        share = value / _popcount(mask)
        for i in range(n):
            if mask >> i & 1:
                parts[i].append(share)
    return ProbabilityDistribution(m.frame, tuple(math.fsum(p) for p in parts))


def shannon_entropy(probs: Iterable[float]) -> float:
    return -math.fsum(p * math.log2(p) for p in probs if p > 0.0)


def deng_entropy(m: MassFunction) -> float:
    """Deng's belief entropy, in bits.

    Each focal element contributes ``-m(A) log2(m(A) / (2**|A| - 1))``; on a
    Bayesian mass this is the Shannon entropy.
    """
    return -math.fsum(v * math.log2(v / ((1 << _popcount(a)) - 1)) for a, v in m.masses)


class EntropyMethod(str, enum.Enum):
    """Uncertainty measures available for the extra-uncertainty degree."""

    DENG = "deng"
    WEIGHTED_HARTLEY = "weighted-hartley"
    HOHLE_CONFUSION = "hohle-confusion"
    YAGER_DISSONANCE = "yager-dissonance"
    KLIR_RAMER_DISCORD = "klir-ramer-discord"
    KLIR_PARVIZ_STRIFE = "klir-parviz-strife"
    GEORGE_PAL_CONFLICT = "george-pal-conflict"

    @classmethod
    def parse(cls, name: Union[str, EntropyMethod]) -> EntropyMethod:
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower().replace("_", "-")
        for method in cls:
            if key in (method.value, method.name.lower().replace("_", "-"), method.value.split("-")[0]):
                return method
        raise ValueError(f"unknown entropy method {name!r}; choose from {[m.value for m in cls]}")

    def __str__(self) -> str:
        return self.value


ALL_METHODS = tuple(EntropyMethod)
ALTERNATIVE_METHODS = ALL_METHODS[1:]


def _log_term(weight: float, inner: float) -> float:
    # inner == 0 is taken as a zero contribution (limit of x log x)
    return weight * math.log2(inner) if inner > 0.0 else 0.0


def alt_entropy(m: MassFunction, method: Union[str, EntropyMethod], *, classic: bool = False) -> float:
    """Evaluate one of the six rival uncertainty measures.

    The formulas follow the printed comparison table verbatim:

    * weighted Hartley carries a leading minus, making it nonpositive;
      ``classic=True`` drops it (Dubois and Prade's original definition);
    * Klir-Ramer discord and Klir-Parviz strife share one formula,
      ``-sum m(A) log2 sum_B m(B) |A&B|/|B|``, and therefore agree;
    * George-Pal conflict has no leading minus.
    """
    method = EntropyMethod.parse(method)
    items = m.masses
    if method is EntropyMethod.DENG:
        return deng_entropy(m)
    if method is EntropyMethod.WEIGHTED_HARTLEY:
        total = math.fsum(v * math.log2(_popcount(a)) for a, v in items)
        return total if classic else -total
    if method is EntropyMethod.HOHLE_CONFUSION:
        return -math.fsum(_log_term(v, math.fsum(w for b, w in items if b & ~a == 0)) for a, v in items)
    if method is EntropyMethod.YAGER_DISSONANCE:
        return -math.fsum(_log_term(v, math.fsum(w for b, w in items if a & b)) for a, v in items)
    if method in (EntropyMethod.KLIR_RAMER_DISCORD, EntropyMethod.KLIR_PARVIZ_STRIFE):
        return -math.fsum(
            _log_term(v, math.fsum(w * _popcount(a & b) / _popcount(b) for b, w in items))
            for a, v in items
        )
    if method is EntropyMethod.GEORGE_PAL_CONFLICT:
        return math.fsum(
            _log_term(v, math.fsum(w * (1.0 - _popcount(a & b) / _popcount(a | b)) for b, w in items))
            for a, v in items
        )
    raise AssertionError(method)


def entropy(m: MassFunction, method: Union[str, EntropyMethod] = EntropyMethod.DENG, **kwargs) -> float:
    """Dispatch to Deng entropy or one of the alternative measures."""
    method = EntropyMethod.parse(method)
    if method is EntropyMethod.DENG:
        return deng_entropy(m)
    return alt_entropy(m, method, **kwargs)


# --- text format -----------------------------------------------------------
#
#   frame: R,B
#   # comment
#   R   : 0.4
#   R|B : 0.6


def parse_boe(text: str) -> MassFunction:
    frame = None
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if frame is None:
            key, sep, rest = line.partition(":")
            if not sep or key.strip().lower() != "frame":
                raise ParseError("first line must declare 'frame: a,b,...'", line=lineno)
            labels = [lab.strip() for lab in rest.split(",") if lab.strip()]
            try:
                frame = FrameOfDiscernment(labels)
            except ValueError as exc:
                raise ParseError(str(exc), line=lineno) from None
            continue
        subset, sep, value = line.rpartition(":")
        if not sep:
            raise ParseError("expected 'label1|label2 : mass'", line=lineno)
        members = [lab.strip() for lab in subset.split("|") if lab.strip()]
        if not members:
            raise ParseError("empty focal set", line=lineno)
        try:
            mass = float(value)
        except ValueError:
            raise ParseError(f"mass {value.strip()!r} is not a number", line=lineno) from None
        entries.append((members, mass, lineno))
    if frame is None:
        raise ParseError("no frame declaration found")
    for members, _, lineno in entries:
        try:
            _to_mask(frame, members)
        except UnknownLabel as exc:
            raise ParseError(str(exc), line=lineno) from None
    return make_mass(frame, [(members, mass) for members, mass, _ in entries])


def read_boe(path: Union[str, Path]) -> MassFunction:
    return parse_boe(Path(path).read_text(encoding="utf-8"))


def format_boe(m: MassFunction) -> str:
    lines = ["frame: " + ",".join(m.frame.labels)]
    lines += ["|".join(labels) + " : " + repr(value) for labels, value in m.entries()]
    return "\n".join(lines) + "\n"
