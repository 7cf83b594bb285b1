"""Sequential observer chains: averaged channels, thresholds, greedy runs.

Each observer pair measures one of three orthogonal spin directions with
equal probability, so the state handed to the next pair is the setting- and
outcome-averaged Lueders map.  A stage "detects" when the modulated witness
expectation on its incoming state is negative, which happens exactly when
the stage's sharpness product exceeds a threshold; the greedy procedures
saturate each stage just above its threshold to disturb the state as little
as possible and count how many stages stay below product 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import measurement, states, witness
from .qcore import DensityMatrix, expectation, tensor

_DIRECTIONS = (measurement.X_AXIS, measurement.Y_AXIS, measurement.Z_AXIS)
_OUTCOMES = (+1, -1)
_I2 = np.eye(2, dtype=complex)

# Float guard when snapping a threshold onto the 0.01 grid.
_GRID_EPS = 1e-9


def average_shrink(lam: float) -> float:
    """Single-wing attenuation of every Bloch component under the
    setting-averaged unsharp measurement: (1 + 2 sqrt(1 - lam^2)) / 3."""
    return (1.0 + 2.0 * math.sqrt(1.0 - lam * lam)) / 3.0


def average_two_sided(rho, xi: float, lam: float) -> DensityMatrix:
    """Average post-measurement state after both wings measure.

    The 36-term sum over 3 directions and 2 outcomes per wing of
    (sqrt(E) x sqrt(E)) rho (sqrt(E) x sqrt(E)).
    """
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    acc = np.zeros((4, 4), dtype=complex)
    for n_dir in _DIRECTIONS:
        obs_a = measurement.UnsharpObservable(n_dir, xi)
        roots_a = [measurement.sqrt_effect(obs_a, o) for o in _OUTCOMES]
        for m_dir in _DIRECTIONS:
            obs_b = measurement.UnsharpObservable(m_dir, lam)
            roots_b = [measurement.sqrt_effect(obs_b, o) for o in _OUTCOMES]
            for ra in roots_a:
                for rb in roots_b:
                    k = tensor(ra, rb)
                    acc += k @ m @ k
    return DensityMatrix(acc / 9.0)


def average_one_sided(rho, lam: float) -> DensityMatrix:
    """Average post-measurement state when only the second wing measures."""
    m = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    acc = np.zeros((4, 4), dtype=complex)
    for m_dir in _DIRECTIONS:
        obs_b = measurement.UnsharpObservable(m_dir, lam)
        for o in _OUTCOMES:
            k = tensor(_I2, measurement.sqrt_effect(obs_b, o))
            acc += k @ m @ k
    return DensityMatrix(acc / 3.0)


def violation_threshold(w: witness.WitnessOperator, rho, one_sided: bool = False) -> float:
    """Minimal sharpness product at which the witness expectation hits zero.

    Detection requires strictly exceeding the returned value.  ``one_sided``
    means the product is the single sharpness lam (xi pinned at 1); the
    boundary itself is the same affine root either way.  Values above 1 are
    returned as-is and mean detection is impossible.
    """
    if w.modulation is not None:
        raise ValueError("threshold is defined for the unmodulated witness")
    full = expectation(w.matrix(), rho)
    ident = w.identity_weight()
    slope = full - ident  # coefficient of the sharpness product
    if slope >= -1e-15:
        return math.inf
    return ident / (ident - full)


@dataclass(frozen=True)
class EpsilonPolicy:
    """Slack added above each stage threshold, plus the rounding mode.

    In paper-rounding mode every stage constraint is snapped up to the next
    point of the 0.01 grid and the chosen sharpness is kept on that grid;
    the grid step then plays the role of the slack and the two slack fields
    are ignored.
    """

    first_stage_slack: float = 1e-2
    later_stage_slack: float = 1e-2
    paper_rounding: bool = False

    def __post_init__(self):
        for s in (self.first_stage_slack, self.later_stage_slack):
            if not 0.0 <= s < 0.1:
                raise ValueError("stage slack must lie in [0, 0.1)")

    @classmethod
    def asymmetric_default(cls, paper_rounding: bool = False) -> "EpsilonPolicy":
        """Asymmetric runs saturate later stages exactly at the threshold."""
        return cls(first_stage_slack=1e-2, later_stage_slack=0.0,
                   paper_rounding=paper_rounding)

    def slack_for_stage(self, stage: int) -> float:
        return self.first_stage_slack if stage == 1 else self.later_stage_slack


@dataclass(frozen=True)
class SharpnessSchedule:
    """Ordered per-stage (xi, lam) values of the detecting stages."""

    stages: tuple[tuple[float, float], ...]

    def __post_init__(self):
        for xi, lam in self.stages:
            if not (0.0 < xi <= 1.0 and 0.0 < lam <= 1.0):
                raise ValueError("schedule entries must lie in (0, 1]")

    def __len__(self) -> int:
        return len(self.stages)

    def bob_sharpnesses(self) -> tuple[float, ...]:
        return tuple(lam for _, lam in self.stages)


@dataclass(frozen=True)
class ScenarioKind:
    """How many sequential observers sit on each wing, and the input state."""

    alices: int
    bobs: int
    family: states.StateFamily

    def __post_init__(self):
        if self.alices < 1 or self.bobs < 1:
            raise ValueError("need at least one observer per wing")


@dataclass(frozen=True)
class ChainReport:
    """Outcome of a greedy chain run.

    ``thresholds`` holds the raw violation threshold seen by every stage
    that was examined; when the chain ended because a stage was infeasible
    the list is one longer than the number of detecting stages and its last
    entry exceeds 1.  ``states`` holds the averaged state entering each
    detecting stage.
    """

    family: states.StateFamily
    detected_stages: int
    schedule: SharpnessSchedule
    thresholds: tuple[float, ...]
    states: tuple[DensityMatrix, ...] = field(repr=False)


def _grid_ceil(x: float) -> float:
    """Smallest 0.01-grid value strictly above x (capped at 1)."""
    k = math.floor(x * 100.0 + _GRID_EPS) + 1
    return min(k, 100) / 100.0


def _grid_ceil_sqrt(x: float) -> float:
    """Smallest 0.01-grid value whose square strictly exceeds x (capped at 1)."""
    k = math.floor(math.sqrt(x) * 100.0 + _GRID_EPS)
    while (k / 100.0) ** 2 <= x and k < 100:
        k += 1
    return k / 100.0


def _stage_sharpness(threshold: float, slack: float, policy: EpsilonPolicy,
                     two_sided: bool) -> float:
    if policy.paper_rounding:
        return _grid_ceil_sqrt(threshold) if two_sided else _grid_ceil(threshold)
    value = min(threshold + slack, 1.0)
    return math.sqrt(value) if two_sided else value


def _verify_symmetric_maximizer(product: float) -> None:
    """Grid-check that xi = lam = sqrt(product) maximizes the state survival
    factor (1 + 2 sqrt(1 - xi^2))(1 + 2 sqrt(1 - lam^2)) on the constraint
    curve xi * lam = product."""
    sym = 9.0 * average_shrink(math.sqrt(product)) ** 2
    best = 0.0
    for xi in np.linspace(product, 1.0, 201):
        lam = product / xi
        if lam > 1.0:
            continue
        best = max(best, 9.0 * average_shrink(xi) * average_shrink(lam))
    if best > sym + 1e-6:
        raise AssertionError("symmetric stage solution is not the constrained maximizer")


def _run_greedy(family: states.StateFamily, policy: EpsilonPolicy,
                two_sided_stages: int | None, max_stages: int | None) -> ChainReport:
    """Shared greedy loop.

    ``two_sided_stages`` limits how many leading stages measure on both
    wings; ``None`` means every stage does (the symmetric scenario).  Once
    the limit is reached the remaining wing-one observer is projective and
    stages modulate the witness on the second wing only.
    """
    w = witness.family_witness(family.kind)
    rho = states.build(family)
    stages: list[tuple[float, float]] = []
    thresholds: list[float] = []
    incoming: list[DensityMatrix] = []

    stage = 1
    while max_stages is None or len(stages) < max_stages:
        two_sided = two_sided_stages is None or stage <= two_sided_stages
        t = violation_threshold(w, rho, one_sided=not two_sided)
        thresholds.append(t)
        if not t < 1.0:
            break
        s = _stage_sharpness(t, policy.slack_for_stage(stage), policy, two_sided)
        if two_sided:
            if not policy.paper_rounding:
                _verify_symmetric_maximizer(min(t + policy.slack_for_stage(stage), 1.0))
            stages.append((s, s))
            incoming.append(rho)
            rho = average_two_sided(rho, s, s)
        else:
            stages.append((1.0, s))
            incoming.append(rho)
            rho = average_one_sided(rho, s)
        stage += 1

    return ChainReport(family=family, detected_stages=len(stages),
                       schedule=SharpnessSchedule(tuple(stages)),
                       thresholds=tuple(thresholds), states=tuple(incoming))


def greedy_symmetric(family: states.StateFamily, policy: EpsilonPolicy | None = None,
                     max_stages: int | None = None) -> ChainReport:
    """Greedy chain with equally many observers on both wings.

    Each stage takes the symmetric sharpness just above its threshold,
    disturbing the state as little as the detection constraint allows, and
    the chain stops at the first stage whose threshold reaches 1.
    """
    return _run_greedy(family, policy or EpsilonPolicy(), None, max_stages)


def greedy_asymmetric(alices: int, family: states.StateFamily,
                      policy: EpsilonPolicy | None = None,
                      max_bobs: int | None = None) -> ChainReport:
    """Greedy chain with ``alices`` observers on the first wing.

    The first ``alices - 1`` stages are symmetric two-sided stages; after
    that the last observer on the first wing measures projectively and each
    further Bob adds a one-sided stage.  Returns the total count of
    detecting Bobs.
    """
    if alices < 1:
        raise ValueError("need at least one observer on the first wing")
    return _run_greedy(family, policy or EpsilonPolicy.asymmetric_default(),
                       alices - 1, max_bobs)


def run_symmetric_schedule(family: states.StateFamily,
                           lambdas: tuple[float, ...]) -> ChainReport:
    """Evolve the symmetric chain at a fixed per-stage sharpness schedule.

    No feasibility decision is taken; thresholds and incoming states are
    recorded so the caller can evaluate stage-wise witness expectations.
    """
    w = witness.family_witness(family.kind)
    rho = states.build(family)
    stages = []
    thresholds = []
    incoming = []
    for lam in lambdas:
        thresholds.append(violation_threshold(w, rho, one_sided=False))
        stages.append((lam, lam))
        incoming.append(rho)
        rho = average_two_sided(rho, lam, lam)
    return ChainReport(family=family, detected_stages=len(stages),
                       schedule=SharpnessSchedule(tuple(stages)),
                       thresholds=tuple(thresholds), states=tuple(incoming))


def classify_pair_count(family: states.StateFamily) -> int:
    """Number of symmetric pairs that can detect entanglement (0 to 3).

    A possibility statement, so the chain runs in the zero-slack limit where
    every stage saturates its threshold exactly.
    """
    if family.kind not in (states.WERNER, states.PURE):
        raise ValueError("pair-count classification applies to werner and pure families")
    report = greedy_symmetric(family, EpsilonPolicy(0.0, 0.0, paper_rounding=False))
    return report.detected_stages
