"""Field-side scalars for a pair of delta-switched Gaussian detectors.

Closed forms for the massless scalar vacuum, an independent radial
quadrature oracle, and a thermal (KMS) variant of the same oracle.
Everything is dimensionless in units of the Gaussian smearing width sigma:
couplings are lambda_tilde/sigma, distances L/sigma, delays dtau/sigma,
inverse temperatures beta/sigma.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum

import mpmath
from scipy.integrate import quad

from .errors import QuadratureError

FOUR_PI_SQ = 4.0 * math.pi**2
SQRT_HALF_PI = math.sqrt(math.pi / 2.0)

# Radial quadrature window.  The integrand carries exp(-k^2/2), so the tail
# beyond k = 40 is below 1e-300 and the fixed cutoff is exact in doubles.
K_MAX = 40.0
QUAD_ABS_TOL = 1e-10
QUAD_REL_TOL = 1e-8
# A component this small relative to the integrand scale is dominated by
# float64 cancellation noise (~1e-16 of scale) and is recomputed in high
# precision.  Components at or above the threshold carry relative error
# <= ~1e-8 from the roundoff floor alone, so the split is gapless.
ESCALATION_RATIO = 1e-8
MP_DPS = 50

# mpmath's working precision is process-global state; concurrent sweep
# threads must not race on it.
_MP_LOCK = threading.Lock()


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmearingSpec:
    """One detector's delta-switched Gaussian smearing.

    Parameters
    ----------
    coupling : float
        Effective dimensionless coupling lambda_tilde/sigma, >= 0.
    width : float
        Gaussian width sigma.  It is the unit of length and time and must
        be 1.0; the field is kept so callers state the convention.
    position : tuple of float
        Detector centre in units of sigma.
    switch_time : float
        Proper time tau_0 of the delta switching, in units of sigma.
    gap : float
        Energy gap Omega in units of 1/sigma.
    """

    coupling: float
    width: float = 1.0
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)
    switch_time: float = 0.0
    gap: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.coupling) and self.coupling >= 0.0):
            raise ValueError(f"coupling must be finite and >= 0, got {self.coupling!r}")
        if self.width != 1.0:
            raise ValueError("width is the unit of length/time and must be 1.0")
        if len(self.position) != 3 or not all(math.isfinite(c) for c in self.position):
            raise ValueError(f"position must be a finite 3-vector, got {self.position!r}")
        for name in ("switch_time", "gap"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def phase(self) -> float:
        """Detector phase Omega * tau_0 accumulated at the switching instant."""
        return self.gap * self.switch_time


@dataclass(frozen=True)
class PairGeometry:
    """Relative geometry of the two switching events.

    separation is L = |x_A - x_B| >= 0 and delay is dtau = tau_B0 - tau_A0,
    both in units of sigma.
    """

    separation: float
    delay: float

    def __post_init__(self):
        if not (math.isfinite(self.separation) and self.separation >= 0.0):
            raise ValueError(f"separation must be finite and >= 0, got {self.separation!r}")
        if not math.isfinite(self.delay):
            raise ValueError("delay must be finite")

    @classmethod
    def from_specs(cls, f_a: SmearingSpec, f_b: SmearingSpec) -> "PairGeometry":
        sep = math.dist(f_a.position, f_b.position)
        return cls(separation=sep, delay=f_b.switch_time - f_a.switch_time)


@dataclass(frozen=True)
class FieldStatistics:
    """The five field-side scalars that fully determine the channel.

    nu values live in [0, 1]: the open interval (0, 1] of the exact theory,
    closed below because exp(-2||Ef||^2) underflows to 0.0 for couplings
    around 1e3 and the sweep grids legitimately reach them.
    """

    nu_a: float
    nu_b: float
    nu_ab_plus: float
    nu_ab_minus: float
    delta_ab: float

    def __post_init__(self):
        for name in ("nu_a", "nu_b", "nu_ab_plus", "nu_ab_minus"):
            v = getattr(self, name)
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {v!r}")
        if not math.isfinite(self.delta_ab):
            raise ValueError("delta_ab must be finite")


class FieldStateKind(Enum):
    MINKOWSKI_VACUUM = "vacuum"
    MINKOWSKI_THERMAL = "thermal"


@dataclass(frozen=True)
class FieldStateSpec:
    """Field state: the vacuum, or a thermal KMS state at inverse temperature beta."""

    kind: FieldStateKind = FieldStateKind.MINKOWSKI_VACUUM
    beta: float | None = None

    def __post_init__(self):
        if self.kind is FieldStateKind.MINKOWSKI_THERMAL:
            if self.beta is None or not (math.isfinite(self.beta) and self.beta > 0.0):
                raise ValueError(f"thermal state requires beta > 0, got {self.beta!r}")
        elif self.beta is not None:
            raise ValueError("vacuum state takes no beta")

    @property
    def is_thermal(self) -> bool:
        return self.kind is FieldStateKind.MINKOWSKI_THERMAL


VACUUM = FieldStateSpec()


def thermal(beta: float) -> FieldStateSpec:
    return FieldStateSpec(FieldStateKind.MINKOWSKI_THERMAL, beta)


# ---------------------------------------------------------------------------
# closed forms (vacuum)
# ---------------------------------------------------------------------------

def norm_sq_closed(f: SmearingSpec) -> float:
    """||Ef||^2 in the vacuum: coupling^2 / (4 pi^2)."""
    return f.coupling**2 / FOUR_PI_SQ


def commutator_closed(f_a: SmearingSpec, f_b: SmearingSpec, geom: PairGeometry) -> float:
    """Smeared commutator Delta(f_A, f_B), exact for Gaussian smearings.

    Antisymmetric in the delay bit-for-bit: negating dtau swaps the two
    exponentials, and IEEE subtraction negates exactly.  L = 0 evaluates
    the analytic limit of the bracket divided by L rather than dividing
    nearly equal exponentials.
    """
    L, dt = geom.separation, geom.delay
    pref = f_a.coupling * f_b.coupling / FOUR_PI_SQ
    if L == 0.0:
        return pref * SQRT_HALF_PI * 2.0 * dt * math.exp(-0.5 * dt * dt)
    e_near = math.exp(-0.5 * (dt - L) ** 2)
    e_far = math.exp(-0.5 * (dt + L) ** 2)
    return (pref / L) * SQRT_HALF_PI * (e_near - e_far)


# ---------------------------------------------------------------------------
# radial quadrature oracle
# ---------------------------------------------------------------------------

def _geom_factor(k: float, L: float) -> float:
    # sin(kL)/L, with its k-linear L -> 0 limit
    return math.sin(k * L) / L if L > 0.0 else k


def _coth_half(k: float, beta: float) -> float:
    # coth(beta k / 2); series below 1e-8 where tanh underflows relative accuracy
    x = 0.5 * beta * k
    if x < 1e-8:
        return 1.0 / x + x / 3.0
    return 1.0 / math.tanh(x)


def _mpmath_integral(L: float, dtau: float, beta: float | None) -> tuple[complex, float]:
    """High-precision evaluation of the radial integral, for the cancellation regime."""
    with _MP_LOCK, mpmath.workdps(MP_DPS):
        Lm, dt = mpmath.mpf(L), mpmath.mpf(dtau)

        def envelope(k):
            g = k if L == 0.0 else mpmath.sin(k * Lm) / Lm
            return mpmath.e ** (-k * k / 2) * g

        def re_kern(k):
            th = mpmath.coth(beta * k / 2) if beta is not None else 1
            return envelope(k) * th * mpmath.cos(k * dt)

        def im_kern(k):
            return -envelope(k) * mpmath.sin(k * dt)

        re, re_err = mpmath.quad(re_kern, [0, K_MAX], error=True)
        if dtau == 0.0:
            im, im_err = mpmath.mpf(0), mpmath.mpf(0)
        else:
            im, im_err = mpmath.quad(im_kern, [0, K_MAX], error=True)
        return complex(re, im), float(max(re_err, im_err))


def _radial_integral(L: float, dtau: float, beta: float | None) -> tuple[complex, float]:
    """Dimensionless radial integral J with error estimate.

    J = int_0^K_MAX dk exp(-k^2/2) * sin(kL)/L * [coth(beta k/2)]_re * exp(-ik dtau)

    The thermal coth kernel multiplies the real (symmetric) component only;
    the imaginary component is the commutator part and is temperature
    independent.  Returns (J, error_estimate); raises QuadratureError when
    the estimate misses both the absolute and relative targets.
    """

    def re_kern(k: float) -> float:
        v = math.exp(-0.5 * k * k) * _geom_factor(k, L)
        if beta is not None:
            v *= _coth_half(k, beta)
        return v * math.cos(k * dtau)

    def im_kern(k: float) -> float:
        return -math.exp(-0.5 * k * k) * _geom_factor(k, L) * math.sin(k * dtau)

    re, re_err, _ = quad(re_kern, 0.0, K_MAX, epsabs=1e-13, epsrel=1e-11,
                         limit=400, full_output=1)
    if dtau == 0.0:
        # the imaginary integrand is identically zero, not a cancellation
        im, im_err = 0.0, 0.0
    else:
        im, im_err, _ = quad(im_kern, 0.0, K_MAX, epsabs=1e-13, epsrel=1e-11,
                             limit=400, full_output=1)

    re_scale = 1.0 if beta is None else 1.0 + 2.0 * SQRT_HALF_PI / beta
    tiny_re = abs(re) < ESCALATION_RATIO * re_scale
    tiny_im = dtau != 0.0 and abs(im) < ESCALATION_RATIO
    err = max(re_err, im_err)
    if tiny_re or tiny_im or err > max(QUAD_ABS_TOL, QUAD_REL_TOL * max(abs(re), abs(im))):
        val, err = _mpmath_integral(L, dtau, beta)
        re, im = val.real, val.imag

    if err > max(QUAD_ABS_TOL, QUAD_REL_TOL * max(abs(re), abs(im))):
        raise QuadratureError(
            f"radial quadrature did not converge: error estimate {err:.3e} "
            f"for value {complex(re, im)!r} (L={L}, dtau={dtau}, beta={beta})",
            estimate=err,
        )
    return complex(re, im), err


def wightman_cross_quadrature(
    f_a: SmearingSpec,
    f_b: SmearingSpec,
    geom: PairGeometry,
    state: FieldStateSpec = VACUUM,
) -> complex:
    """Smeared two-point value W(f_A, f_B) by radial quadrature.

    Im W(f_A, f_B) = -Delta(f_A, f_B)/2 holds for every state: the thermal
    kernel enhances only the real (symmetric) part.
    """
    beta = state.beta if state.is_thermal else None
    j, _ = _radial_integral(geom.separation, geom.delay, beta)
    return (f_a.coupling * f_b.coupling / FOUR_PI_SQ) * j


def norm_sq_quadrature(f: SmearingSpec, state: FieldStateSpec = VACUUM) -> float:
    """||Ef||^2 by quadrature; the degenerate (L=0, dtau=0) cross value."""
    w = wightman_cross_quadrature(f, f, PairGeometry(0.0, 0.0), state)
    return w.real


def assemble_statistics(
    f_a: SmearingSpec,
    f_b: SmearingSpec,
    geom: PairGeometry,
    state: FieldStateSpec = VACUUM,
) -> FieldStatistics:
    """All five channel-determining scalars for one detector pair.

    nu_j = exp(-2 ||Ef_j||^2) and nu_ab_pm = exp(-2 ||E(f_A +- f_B)||^2)
    with the cross norm expanded through Re W(f_A, f_B).  The commutator
    is state independent, so delta_ab always comes from the closed form;
    a thermal state changes only the norms (computed by quadrature, there
    being no thermal closed form).
    """
    if state.is_thermal:
        n_a = norm_sq_quadrature(f_a, state)
        n_b = norm_sq_quadrature(f_b, state)
    else:
        n_a = norm_sq_closed(f_a)
        n_b = norm_sq_closed(f_b)
    if f_a.coupling == 0.0 or f_b.coupling == 0.0:
        re_w = 0.0
    else:
        re_w = wightman_cross_quadrature(f_a, f_b, geom, state).real
    delta = commutator_closed(f_a, f_b, geom)
    return FieldStatistics(
        nu_a=math.exp(-2.0 * n_a),
        nu_b=math.exp(-2.0 * n_b),
        nu_ab_plus=math.exp(-2.0 * (n_a + n_b + 2.0 * re_w)),
        nu_ab_minus=math.exp(-2.0 * (n_a + n_b - 2.0 * re_w)),
        delta_ab=delta,
    )
