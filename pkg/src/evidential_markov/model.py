"""The evidential Markov model of the categorization-decision task.

Six states combine a categorization belief (good G / bad B) with an action
intention (attack A, uncertain U, withdraw W), ordered

    AG, UG, WG, AB, UB, WB

Over the four-element frame {AG, WG, AB, WB} the uncertain states are the
two-element sets UG = {AG, WG} and UB = {AB, WB}. Without a categorization the
decision-alone body of evidence uses AU = {AG, AB}, WU = {WG, WB} and the
whole frame UU.

A run goes: initial state -> conditioning on the category -> payoff-driven
evolution -> measured masses (C-D and D-alone) -> extra uncertainty degree
from the entropy gap -> attack probabilities and the disjunction effect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np

from .errors import OutOfRange, ProbabilityOverflow, ZeroBlockMass, ZeroDenominator
from .evidence import EntropyMethod, FrameOfDiscernment, MassFunction, entropy, make_mass
from .markov import (
    GeneratorMode,
    MeasurementSelector,
    StateVector,
    assemble_block_K,
    build_K_bad,
    build_K_good,
    evolve,
)

CD_FRAME = FrameOfDiscernment(["AG", "WG", "AB", "WB"])
CD_STATES = ("AG", "UG", "WG", "AB", "UB", "WB")
D_STATES = ("AU", "UU", "WU")

FOCAL = {
    "AG": ("AG",),
    "UG": ("AG", "WG"),
    "WG": ("WG",),
    "AB": ("AB",),
    "UB": ("AB", "WB"),
    "WB": ("WB",),
    "AU": ("AG", "AB"),
    "UU": ("AG", "WG", "AB", "WB"),
    "WU": ("WG", "WB"),
}

GOOD, BAD = "good", "bad"
_BLOCK = {GOOD: slice(0, 3), BAD: slice(3, 6)}
DEFAULT_TIME = 2.0


def focal_set(state: str):
    """The subset of the C-D frame a state label stands for."""
    return CD_FRAME.subset(*FOCAL[state])


def cardinality(state: str) -> int:
    return len(FOCAL[state])


@dataclass(frozen=True)
class EmParams:
    k_r: float
    k_w: float
    p_good: float
    t: float = DEFAULT_TIME
    entropy_method: EntropyMethod = EntropyMethod.DENG
    generator_mode: GeneratorMode = GeneratorMode.COLUMN_GENERATOR

    def __post_init__(self):
        if not (self.k_r >= 0 and self.k_w >= 0):
            raise OutOfRange(f"rates must be nonnegative, got k_r={self.k_r}, k_w={self.k_w}")
        if not self.t >= 0:
            raise OutOfRange(f"decision time must be nonnegative, got {self.t}")
        if not 0.0 <= self.p_good <= 1.0:
            raise OutOfRange(f"p_good must lie in [0, 1], got {self.p_good}")
        object.__setattr__(self, "entropy_method", EntropyMethod.parse(self.entropy_method))
        object.__setattr__(self, "generator_mode", GeneratorMode.parse(self.generator_mode))

    def with_(self, **changes) -> "EmParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class ModelResult:
    m_cd: MassFunction
    m_d: MassFunction
    e_cd: float
    e_d: float
    gamma: float
    p_good: float
    p_a_given_g: float
    p_a_given_b: float
    p_t: float
    p_cd_attack: float
    p_d_attack: float
    dis: float
    overflow: bool = False
    entropy_method: EntropyMethod = EntropyMethod.DENG

    def cd_masses(self) -> tuple[float, ...]:
        return cd_vector(self.m_cd)

    def d_masses(self) -> tuple[float, ...]:
        return d_vector(self.m_d)


def cd_vector(m_cd: MassFunction) -> tuple[float, ...]:
    """Masses of ``m_cd`` in (AG, UG, WG, AB, UB, WB) order."""
    return tuple(m_cd.mass(FOCAL[s]) for s in CD_STATES)


def d_vector(m_d: MassFunction) -> tuple[float, ...]:
    """Masses of ``m_d`` in (AU, UU, WU) order."""
    return tuple(m_d.mass(FOCAL[s]) for s in D_STATES)


def cd_mass(values) -> MassFunction:
    """Build the C-D body of evidence from six masses in state order."""
    return make_mass(CD_FRAME, [(FOCAL[s], max(0.0, float(v))) for s, v in zip(CD_STATES, values)])


def d_mass(values) -> MassFunction:
    """Build the D-alone body of evidence from (AU, UU, WU) masses."""
    return make_mass(CD_FRAME, [(FOCAL[s], max(0.0, float(v))) for s, v in zip(D_STATES, values)])


# --- steps -----------------------------------------------------------------


def initial_state(p_good: float) -> StateVector:
    """All initial mass on the hesitant states, split by the categorization odds."""
    if not 0.0 <= p_good <= 1.0:
        raise OutOfRange(f"p_good must lie in [0, 1], got {p_good}")
    return StateVector([0.0, p_good, 0.0, 0.0, 1.0 - p_good, 0.0], CD_STATES)


def condition_on_category(phi: StateVector, category: str) -> StateVector:
    """Zero the other category's block and renormalize the chosen one."""
    if category not in _BLOCK:
        raise ValueError(f"category must be {GOOD!r} or {BAD!r}, got {category!r}")
    block = _BLOCK[category]
    mass = phi.probs[block].sum()
    if mass <= 0.0:
        raise ZeroBlockMass(f"cannot condition on {category}: block has zero probability")
    out = np.zeros(6)
    out[block] = phi.probs[block] / mass
    return StateVector(out, phi.labels)


def category_generator(params: EmParams):
    return assemble_block_K(
        build_K_good(params.k_r, params.k_w, params.generator_mode),
        build_K_bad(params.k_r, params.k_w, params.generator_mode),
    )


def measure_bpa_cd(params: EmParams) -> MassFunction:
    """Masses of the six C-D states after deliberating for ``params.t``.

    Each category is conditioned on, evolved under the block generator and
    weighted back by its prior; a state's mass is then read off with the
    single-state selector ``L M exp(tK) phi``.
    """
    phi0 = initial_state(params.p_good)
    k = category_generator(params)
    weights = {GOOD: params.p_good, BAD: 1.0 - params.p_good}
    masses = np.zeros(6)
    for category, weight in weights.items():
        if weight <= 0.0:
            continue
        evolved = evolve(condition_on_category(phi0, category), k, params.t)
        for i in range(6):
            masses[i] += weight * float(evolved.probs @ MeasurementSelector([i]).matrix(6).diagonal())
    return cd_mass(masses)


def measure_bpa_d(m_cd: MassFunction) -> MassFunction:
    """Marginalize the C-D evidence over the unknown category."""
    ag, ug, wg, ab, ub, wb = cd_vector(m_cd)
    return d_mass([ag + ab, ug + ub, wg + wb])


def eud_gamma(m_cd: MassFunction, m_d: MassFunction, method=EntropyMethod.DENG) -> float:
    """Extra uncertainty degree, ``|(E_D - E_CD) / (E_D + E_CD)|``."""
    e_cd = entropy(m_cd, method)
    e_d = entropy(m_d, method)
    return _gamma(e_cd, e_d)


def _gamma(e_cd: float, e_d: float) -> float:
    denom = e_d + e_cd
    if denom == 0.0:
        raise ZeroDenominator("entropies of both bodies of evidence sum to zero")
    return abs((e_d - e_cd) / denom)


def predict(
    m_cd: MassFunction,
    m_d: MassFunction,
    gamma: float,
    *,
    method: Union[str, EntropyMethod] = EntropyMethod.DENG,
    strict: bool = True,
    entropies: Optional[tuple[float, float]] = None,
) -> ModelResult:
    """Attack probabilities in both conditions and the disjunction effect.

    The C-D side splits the hesitant mass evenly (pignistic); the D-alone side
    gives the hesitant mass ``1/2 + gamma`` to attacking. With ``strict`` a
    D-alone probability above one raises :class:`ProbabilityOverflow`;
    otherwise the result carries ``overflow=True`` unclamped.
    """
    if not gamma >= 0:
        raise OutOfRange(f"gamma must be nonnegative, got {gamma}")
    method = EntropyMethod.parse(method)
    ag, ug, wg, ab, ub, wb = cd_vector(m_cd)
    au, uu, wu = d_vector(m_d)
    p_good = ag + ug + wg
    p_bad = ab + ub + wb
    attack_g = ag + ug / 2
    attack_b = ab + ub / 2
    p_a_given_g = attack_g / p_good if p_good > 0 else math.nan
    p_a_given_b = attack_b / p_bad if p_bad > 0 else math.nan
    p_cd = attack_g + attack_b
    p_d = au + (0.5 + gamma) * uu
    if entropies is None:
        entropies = (entropy(m_cd, method), entropy(m_d, method))
    result = ModelResult(
        m_cd=m_cd,
        m_d=m_d,
        e_cd=entropies[0],
        e_d=entropies[1],
        gamma=gamma,
        p_good=p_good,
        p_a_given_g=p_a_given_g,
        p_a_given_b=p_a_given_b,
        p_t=p_cd,
        p_cd_attack=p_cd,
        p_d_attack=p_d,
        dis=p_d - p_cd,
        overflow=p_d > 1.0,
        entropy_method=method,
    )
    if strict and result.overflow:
        raise ProbabilityOverflow(f"D-alone attack probability {p_d:.6f} exceeds 1", result)
    return result


def run_model(params: EmParams, *, gamma_override: Optional[float] = None, strict: bool = True) -> ModelResult:
    """Compose every step for one parameter set.

    ``gamma_override=0`` gives the classical baseline, where the hesitant
    mass is split evenly in both conditions.
    """
    m_cd = measure_bpa_cd(params)
    m_d = measure_bpa_d(m_cd)
    return evaluate(m_cd, m_d, params.entropy_method, gamma_override=gamma_override, strict=strict)


def evaluate(
    m_cd: MassFunction,
    m_d: MassFunction,
    method=EntropyMethod.DENG,
    *,
    gamma_override: Optional[float] = None,
    strict: bool = True,
) -> ModelResult:
    """Entropy gap, gamma and prediction for a pair of bodies of evidence."""
    method = EntropyMethod.parse(method)
    e_cd, e_d = entropy(m_cd, method), entropy(m_d, method)
    gamma = _gamma(e_cd, e_d) if gamma_override is None else float(gamma_override)
    return predict(m_cd, m_d, gamma, method=method, strict=strict, entropies=(e_cd, e_d))


def masses_from_conditional(p_good: float, conditional) -> MassFunction:
    """C-D evidence implied by a good-block action distribution.

    Under the column-generator reading the bad block is the good block with
    attack and withdraw swapped, so one (attack, uncertain, withdraw) vector
    fixes all six masses.
    """
    a, u, w = (float(x) for x in conditional)
    return cd_mass([p_good * a, p_good * u, p_good * w, (1 - p_good) * w, (1 - p_good) * u, (1 - p_good) * a])
