"""Entropies, Holevo information, and the classical capacity.

The closed-form capacity is exact for this channel family (it is
entanglement breaking, so the one-shot Holevo maximum is the capacity).
A deterministic brute-force ensemble optimizer serves as an independent
oracle: it must approach the closed form from below, never exceed it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import channel as _channel
from .channel import ChannelParams, QubitState
from .errors import ConsistencyError

LN2 = math.log(2.0)
M_MAX = 4
CLOSED_FORM_SLACK = 1e-9

#: Unassisted quantum capacity of every channel in this family.  The
#: channels are entanglement breaking (see the Choi PPT certification in
#: the tests), and entanglement-breaking channels carry no quantum
#: information without assistance.
UNASSISTED_QUANTUM_CAPACITY = 0.0


# ---------------------------------------------------------------------------
# entropies
# ---------------------------------------------------------------------------

def binary_entropy(x: float) -> float:
    """Binary Shannon entropy in bits, with 0 log 0 = 0."""
    if not -1e-12 <= x <= 1.0 + 1e-12:
        raise ValueError(f"binary_entropy argument {x!r} outside [0, 1]")
    x = min(max(x, 0.0), 1.0)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -(x * math.log(x) + (1.0 - x) * math.log1p(-x)) / LN2


def von_neumann_entropy(rho: np.ndarray) -> float:
    """Entropy in bits of a 2x2 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    if abs(np.trace(rho) - 1.0) > 1e-8 or np.max(np.abs(rho - rho.conj().T)) > 1e-8:
        raise ValueError("not a density matrix: trace or Hermiticity off")
    evals = np.linalg.eigvalsh(rho)
    if evals[0] < -1e-9:
        raise ValueError(f"not a density matrix: eigenvalue {evals[0]!r} < 0")
    return binary_entropy(min(max(float(evals[1]), 0.0), 1.0))


# ---------------------------------------------------------------------------
# ensembles and results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Ensemble:
    """A finite input ensemble {(p_m, state_m)} with at most M_MAX members."""

    members: tuple[tuple[float, QubitState], ...]

    def __post_init__(self):
        if not 1 <= len(self.members) <= M_MAX:
            raise ValueError(f"ensemble size must be in [1, {M_MAX}], got {len(self.members)}")
        total = 0.0
        for p, _ in self.members:
            if not (math.isfinite(p) and p >= 0.0):
                raise ValueError(f"probability {p!r} invalid")
            total += p
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"probabilities sum to {total!r}, not 1")

    def average_state(self) -> QubitState:
        x = sum(p * s.x for p, s in self.members)
        y = sum(p * s.y for p, s in self.members)
        z = sum(p * s.z for p, s in self.members)
        return QubitState(x, y, z)


@dataclass(frozen=True)
class OptimizerConfig:
    """Deterministic search budget for the brute-force oracle."""

    m_max: int = M_MAX
    n_polar: int = 24
    n_azimuth: int = 48
    prob_denominator: int = 16
    refine_rounds: int = 3

    def __post_init__(self):
        if not 1 <= self.m_max <= M_MAX:
            raise ValueError(f"m_max must be in [1, {M_MAX}]")
        for name in ("n_polar", "n_azimuth", "prob_denominator"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.refine_rounds < 0:
            raise ValueError("refine_rounds must be >= 0")


@dataclass(frozen=True)
class CapacityResult:
    """Closed-form capacity next to its brute-force estimate.

    q_ea_lower is the entanglement-assisted lower bound, exactly half the
    closed form.  iterations counts Holevo evaluations spent by the search.
    """

    c_closed: float
    c_bruteforce: float
    best_ensemble: Ensemble
    q_ea_lower: float
    nu_eff: float
    iterations: int
    gap: float

    def __post_init__(self):
        if not 0.0 <= self.c_closed <= 1.0:
            raise ConsistencyError(f"c_closed = {self.c_closed!r} outside [0, 1]")
        if self.c_bruteforce > self.c_closed + CLOSED_FORM_SLACK:
            raise ConsistencyError(
                f"brute force {self.c_bruteforce!r} exceeds the closed form "
                f"{self.c_closed!r}: the closed form is proven optimal"
            )
        if self.q_ea_lower != self.c_closed / 2.0:
            raise ConsistencyError("q_ea_lower must equal c_closed / 2 exactly")


# ---------------------------------------------------------------------------
# Holevo information and the closed form
# ---------------------------------------------------------------------------

def holevo_chi(params: ChannelParams, ens: Ensemble) -> float:
    """Holevo information of the ensemble through the channel, in bits."""
    avg_out = _channel.apply(params, ens.average_state())
    mean_member_entropy = sum(
        p * von_neumann_entropy(_channel.apply(params, s).matrix)
        for p, s in ens.members
        if p > 0.0
    )
    return von_neumann_entropy(avg_out.matrix) - mean_member_entropy


def capacity_closed_form(nu_b: float, r_b: float, delta_ab: float) -> float:
    """Classical capacity in bits.

    C = H(1/2 + w |cos 2 delta| / 2) - H(1/2 + w / 2) with w = nu_b * r_b.
    nu_b = 0 is admitted as the underflow image of very strong coupling.
    """
    if not -1e-12 <= nu_b <= 1.0 + 1e-12:
        raise ValueError(f"nu_b = {nu_b!r} outside [0, 1]")
    if not -1e-12 <= r_b <= 1.0 + 1e-12:
        raise ValueError(f"r_b = {r_b!r} outside [0, 1]")
    if not math.isfinite(delta_ab):
        raise ValueError("delta_ab must be finite")
    w = min(max(nu_b, 0.0), 1.0) * min(max(r_b, 0.0), 1.0)
    c = binary_entropy(0.5 + 0.5 * w * abs(math.cos(2.0 * delta_ab))) - binary_entropy(
        0.5 + 0.5 * w
    )
    if c < -1e-12:
        raise ConsistencyError(f"closed-form capacity came out negative: {c!r}")
    return max(c, 0.0)


def tune_bob_phase(bob: QubitState) -> float:
    """A switch phase for Bob that zeroes the channel-invariant component.

    Solves cos(alpha) = -y/h, sin(alpha) = x/h with h = sqrt(x^2 + y^2) and
    returns pi - alpha (the n = 1 branch of phase + alpha = n pi).  With the
    equatorial component gone, the tuned capacity closed form nu_b -> nu_b r_b
    applies.  A state with x = y = 0 has nothing to tune; returns 0.0.
    """
    if bob.x == 0.0 and bob.y == 0.0:
        return 0.0
    alpha = math.atan2(bob.x, -bob.y)
    phase = math.pi - alpha
    p_inv = bob.x * math.cos(phase) - bob.y * math.sin(phase)
    if abs(p_inv) >= 1e-12:
        raise ConsistencyError(f"tuned phase left invariant component {p_inv!r}")
    return phase


# ---------------------------------------------------------------------------
# brute-force ensemble search
# ---------------------------------------------------------------------------

def _entropy_arg(base: np.ndarray, slope: np.ndarray, th: float) -> float:
    v = base + th * slope
    r = math.sqrt(float(v @ v))
    return 0.5 + 0.5 * min(r, 1.0)


def _chi_fast(base, slope, probs, thetas) -> float:
    """Holevo information via the affine theta decomposition; equals
    holevo_chi on pure-member ensembles up to roundoff."""
    avg_theta = 0.0
    mean_entropy = 0.0
    for p, th in zip(probs, thetas):
        if p == 0.0:
            continue
        mean_entropy += p * binary_entropy(_entropy_arg(base, slope, th))
        avg_theta += p * th
    return binary_entropy(_entropy_arg(base, slope, avg_theta)) - mean_entropy


def _compositions(total: int, parts: int):
    """Ordered compositions of `total` into `parts` nonnegative integers,
    lexicographically.  Fixed order makes first-found tie-breaking stable."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def capacity_bruteforce(
    params: ChannelParams, budget: OptimizerConfig = OptimizerConfig()
) -> CapacityResult:
    """Maximize Holevo information over small pure-state ensembles.

    Coordinate descent over pinned coarse grids (polar x azimuth angles per
    member, probability compositions), then refine_rounds rounds of local
    steps with halved step sizes.  Improvements must be strict and ties keep
    the incumbent, so the result is deterministic for a given budget
    regardless of evaluation order.
    """
    m = budget.m_max
    base, slope = _channel.output_bloch_affine(params)
    phase_a = params.phase_a

    def theta_of(polar: float, azimuth: float) -> float:
        return math.sin(polar) * math.cos(azimuth - phase_a)

    # symmetric neutral start: equatorial members at the cardinal azimuths
    polars = [0.5 * math.pi] * m
    azimuths = [i * 2.0 * math.pi / max(m, 1) for i in range(m)]
    probs = tuple(1.0 / m for _ in range(m))
    thetas = [theta_of(p, a) for p, a in zip(polars, azimuths)]

    best = _chi_fast(base, slope, probs, thetas)
    evaluations = 1

    prob_grid = [
        tuple(c / budget.prob_denominator for c in comp)
        for comp in _compositions(budget.prob_denominator, m)
    ]

    # coarse phase: full grid scans, one coordinate at a time
    improved = True
    while improved:
        improved = False
        for i in range(m):
            best_angle = None
            for ip in range(budget.n_polar):
                polar = ip * math.pi / budget.n_polar
                sin_polar = math.sin(polar)
                for ia in range(budget.n_azimuth):
                    azimuth = ia * 2.0 * math.pi / budget.n_azimuth
                    trial = thetas.copy()
                    trial[i] = sin_polar * math.cos(azimuth - phase_a)
                    val = _chi_fast(base, slope, probs, trial)
                    evaluations += 1
                    if val > best:
                        best = val
                        best_angle = (polar, azimuth)
            if best_angle is not None:
                polars[i], azimuths[i] = best_angle
                thetas[i] = theta_of(polars[i], azimuths[i])
                improved = True
        best_probs = None
        for cand in prob_grid:
            val = _chi_fast(base, slope, cand, thetas)
            evaluations += 1
            if val > best:
                best = val
                best_probs = cand
        if best_probs is not None:
            probs = best_probs
            improved = True

    # refinement phase: halved local steps around the incumbent
    polar_step = math.pi / budget.n_polar
    azimuth_step = 2.0 * math.pi / budget.n_azimuth
    prob_step = 1.0 / budget.prob_denominator
    for _ in range(budget.refine_rounds):
        polar_step *= 0.5
        azimuth_step *= 0.5
        prob_step *= 0.5
        improved = True
        while improved:
            improved = False
            for i in range(m):
                for d_polar, d_azimuth in (
                    (polar_step, 0.0),
                    (-polar_step, 0.0),
                    (0.0, azimuth_step),
                    (0.0, -azimuth_step),
                ):
                    polar = min(max(polars[i] + d_polar, 0.0), math.pi)
                    azimuth = azimuths[i] + d_azimuth
                    trial = thetas.copy()
                    trial[i] = theta_of(polar, azimuth)
                    val = _chi_fast(base, slope, probs, trial)
                    evaluations += 1
                    if val > best:
                        best = val
                        polars[i], azimuths[i] = polar, azimuth
                        thetas[i] = trial[i]
                        improved = True
            for i in range(m):
                if probs[i] < prob_step - 1e-15:
                    continue
                for j in range(m):
                    if j == i:
                        continue
                    cand = list(probs)
                    cand[i] -= prob_step
                    cand[j] += prob_step
                    val = _chi_fast(base, slope, tuple(cand), thetas)
                    evaluations += 1
                    if val > best:
                        best = val
                        probs = tuple(cand)
                        improved = True

    members = tuple(
        (p, QubitState.pure(polar, azimuth))
        for p, polar, azimuth in zip(probs, polars, azimuths)
    )
    ensemble = Ensemble(members)
    # report the honest route through channel.apply, not the fast path
    c_bruteforce = holevo_chi(params, ensemble)
    evaluations += 1

    stats = params.stats
    c_closed = capacity_closed_form(stats.nu_b, params.bob_initial.r, stats.delta_ab)
    return CapacityResult(
        c_closed=c_closed,
        c_bruteforce=c_bruteforce,
        best_ensemble=ensemble,
        q_ea_lower=c_closed / 2.0,
        nu_eff=stats.nu_b * params.bob_initial.r,
        iterations=evaluations,
        gap=abs(c_closed - c_bruteforce),
    )
