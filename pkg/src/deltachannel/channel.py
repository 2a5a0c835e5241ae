"""The qubit-to-qubit channel induced by one delta-switched detector pair.

The channel output is assembled from the explicit closed-form matrix
elements (the keep/flip/commutator reduction of the detector dynamics);
eigenvalues come from an independent closed form and are cross-checked
against direct diagonalization on demand.  The operator-composition route
lives in the test suite as an oracle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError
from .field import FieldStatistics
from .weyl import GammaSet, gammas_from_statistics

BLOCH_TOL = 1e-12
EIGEN_MATCH_TOL = 1e-12


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QubitState:
    """A qubit state as a Bloch vector (x, y, z), |r| <= 1."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.x, self.y, self.z)):
            raise ValueError("Bloch components must be finite")
        if self.norm_sq > 1.0 + BLOCH_TOL:
            raise ValueError(f"Bloch vector ({self.x}, {self.y}, {self.z}) leaves the unit ball")

    @property
    def bloch(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    @property
    def norm_sq(self) -> float:
        return self.x * self.x + self.y * self.y + self.z * self.z

    @property
    def r(self) -> float:
        """Bloch vector length, clipped into [0, 1]."""
        return min(math.sqrt(self.norm_sq), 1.0)

    @classmethod
    def pure(cls, polar: float, azimuth: float) -> "QubitState":
        st = math.sin(polar)
        return cls(st * math.cos(azimuth), st * math.sin(azimuth), math.cos(polar))

    def density_matrix(self) -> np.ndarray:
        return np.array(
            [
                [0.5 * (1.0 + self.z), 0.5 * complex(self.x, -self.y)],
                [0.5 * complex(self.x, self.y), 0.5 * (1.0 - self.z)],
            ],
            dtype=complex,
        )


@dataclass(frozen=True)
class ChannelParams:
    """Everything the channel depends on: field statistics, the two switch
    phases Omega_j * tau_j0, and Bob's prepared state."""

    stats: FieldStatistics
    phase_a: float
    phase_b: float
    bob_initial: QubitState

    def __post_init__(self):
        if not (math.isfinite(self.phase_a) and math.isfinite(self.phase_b)):
            raise ValueError("phases must be finite")


@dataclass(frozen=True)
class ChannelOutput:
    """Bob's post-channel state, Hermitian by construction.

    r11 and r22 are stored real and r12 complex, so a Hermiticity defect
    cannot hide behind symmetrization.  eigenvalues = (p_plus, p_minus)
    from the closed form.
    """

    r11: float
    r12: complex
    r22: float
    eigenvalues: tuple[float, float]

    def __post_init__(self):
        p_plus, p_minus = self.eigenvalues
        if abs(self.r11 + self.r22 - 1.0) > BLOCH_TOL:
            raise ConsistencyError(f"output trace {self.r11 + self.r22!r} != 1")
        if abs(p_plus + p_minus - 1.0) > BLOCH_TOL:
            raise ConsistencyError(f"eigenvalues {self.eigenvalues!r} do not sum to 1")
        if p_minus < -BLOCH_TOL or p_plus < p_minus:
            raise ConsistencyError(f"eigenvalues {self.eigenvalues!r} not PSD-ordered")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.r11, self.r12], [self.r12.conjugate(), self.r22]], dtype=complex
        )

    @property
    def bloch(self) -> tuple[float, float, float]:
        return (2.0 * self.r12.real, -2.0 * self.r12.imag, self.r11 - self.r22)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def theta(state: QubitState, phase_a: float) -> float:
    """Alice-side signal amplitude: x cos(phase) + y sin(phase), in [-1, 1]."""
    return state.x * math.cos(phase_a) + state.y * math.sin(phase_a)


def _output_from_theta(params: ChannelParams, gammas: GammaSet, th: float) -> ChannelOutput:
    """Matrix elements and eigenvalues for a given signal amplitude theta.

    keep_minus_flip = nu_b cos(2 delta) and comm_strength = nu_b sin(2 delta)
    are read off the combined coefficients, so this consumes the GammaSet
    rather than re-deriving trigonometry from the raw statistics.
    """
    a = gammas.c_keep - gammas.c_flip
    b = -2.0 * gammas.c_comm.imag
    xb, yb, zb = params.bob_initial.bloch
    pb = params.phase_b
    cos_pb, sin_pb = math.cos(pb), math.sin(pb)
    g = yb * cos_pb + xb * sin_pb

    r11 = 0.5 * (1.0 + zb * a + th * b * g)
    r22 = 0.5 * (1.0 - zb * a - th * b * g)
    r12 = 0.25 * (
        cmath.exp(2j * pb) * complex(xb, yb) * (1.0 - a)
        + complex(xb, -yb) * (1.0 + a)
        + 2j * cmath.exp(1j * pb) * zb * th * b
    )

    # closed-form eigenvalues: the invariant component P passes through the
    # channel unchanged, the orthogonal (g, z) block contracts by nu_b
    p_inv = xb * cos_pb - yb * sin_pb
    r_sq = params.bob_initial.norm_sq
    radius_sq = p_inv * p_inv + (a * a + th * th * b * b) * max(r_sq - p_inv * p_inv, 0.0)
    half_gap = 0.5 * math.sqrt(min(radius_sq, 1.0))
    return ChannelOutput(
        r11=r11, r12=r12, r22=r22, eigenvalues=(0.5 + half_gap, 0.5 - half_gap)
    )


def apply(params: ChannelParams, alice_in: QubitState) -> ChannelOutput:
    """Send alice_in through the channel defined by params."""
    gammas = gammas_from_statistics(params.stats)
    return _output_from_theta(params, gammas, theta(alice_in, params.phase_a))


def eigenvalues_analytic(params: ChannelParams, alice_in: QubitState) -> tuple[float, float]:
    """Closed-form output eigenvalues, cross-checked against diagonalization."""
    out = apply(params, alice_in)
    numeric = np.linalg.eigvalsh(out.matrix)
    p_plus, p_minus = out.eigenvalues
    mismatch = max(abs(p_plus - numeric[1]), abs(p_minus - numeric[0]))
    if mismatch > EIGEN_MATCH_TOL:
        raise ConsistencyError(
            f"analytic eigenvalues {out.eigenvalues!r} disagree with "
            f"diagonalization {tuple(numeric)!r} by {mismatch:.3e}"
        )
    return out.eigenvalues


def output_bloch_affine(params: ChannelParams) -> tuple[np.ndarray, np.ndarray]:
    """Affine decomposition of the channel in the signal amplitude.

    Returns Bloch vectors (base, slope) such that the output of any input
    with theta(input, phase_a) = t has Bloch vector base + t * slope.
    This is what makes ensemble searches cheap: members only matter
    through their theta values.
    """
    gammas = gammas_from_statistics(params.stats)
    base = np.array(_output_from_theta(params, gammas, 0.0).bloch)
    at_one = np.array(_output_from_theta(params, gammas, 1.0).bloch)
    return base, at_one - base


def choi_matrix(params: ChannelParams) -> np.ndarray:
    """Choi matrix of the channel on the canonical maximally entangled state.

    The channel is affine in theta, so its action on a general operator X
    is tr(X) T0 + theta(X) T1 with T0 the theta = 0 output and T1 the
    theta-slope; theta extends complex-linearly to off-diagonal units.
    """
    gammas = gammas_from_statistics(params.stats)
    t0 = _output_from_theta(params, gammas, 0.0).matrix
    t1 = _output_from_theta(params, gammas, 1.0).matrix - t0
    e01 = np.array([[0, 1], [0, 0]], dtype=complex)
    e10 = e01.T.copy()
    phase = cmath.exp(1j * params.phase_a)
    choi = 0.5 * (
        np.kron(t0, np.eye(2, dtype=complex))
        + np.kron(t1, phase * e01 + phase.conjugate() * e10)
    )
    return choi
